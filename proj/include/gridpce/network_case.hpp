#ifndef GRIDPCE_NETWORK_CASE_HPP
#define GRIDPCE_NETWORK_CASE_HPP

#include <string>
#include <vector>

namespace gridpce {

enum class BusType { Load, Generator, Slack };

struct Bus {
  int id = 0;  // external bus number
  BusType type = BusType::Load;
  double demand_mw = 0.0;
};

struct Branch {
  int id = 0;  // 1-based position in the branch table
  int from_bus = 0;
  int to_bus = 0;
  double reactance_pu = 0.0;
  double rating_mw = 0.0;  // 0 = unlimited
  bool in_service = true;
};

struct Generator {
  int id = 0;  // 1-based position in the generator table
  int bus = 0;
  double p_max_mw = 0.0;
  double p_min_mw = 0.0;
  bool in_service = true;
};

// Bus/branch/generator tables of a transmission network.
struct NetworkCase {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  double base_mva = 100.0;

  int bus_index(int bus_id) const;  // -1 when absent
  double total_demand_mw() const;

  // Branch ids whose both endpoints lie in the given bus-id set.
  std::vector<int> branches_among(const std::vector<int>& bus_ids) const;
};

// Parses a MATPOWER-style case file (mpc.baseMVA, mpc.bus, mpc.gen,
// mpc.branch matrices).  Unknown fields and extra columns are ignored.
// Throws ParseError with the offending line number on malformed rows,
// missing tables, or branches referencing nonexistent buses.
NetworkCase parse_case(const std::string& text);

NetworkCase load_case_file(const std::string& path);

}  // namespace gridpce

#endif  // GRIDPCE_NETWORK_CASE_HPP
