#include "gridpce/network_case.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gridpce/errors.hpp"

namespace gridpce {

int NetworkCase::bus_index(int bus_id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return static_cast<int>(i);
  return -1;
}

double NetworkCase::total_demand_mw() const {
  double total = 0.0;
  for (const auto& b : buses) total += b.demand_mw;
  return total;
}

std::vector<int> NetworkCase::branches_among(const std::vector<int>& bus_ids) const {
  const std::unordered_set<int> set(bus_ids.begin(), bus_ids.end());
  std::vector<int> out;
  for (const auto& br : branches)
    if (set.count(br.from_bus) && set.count(br.to_bus)) out.push_back(br.id);
  return out;
}

namespace {

struct Row {
  std::vector<double> values;
  int line = 0;
};

// Collects the numeric rows of `mpc.<name> = [ ... ];`.  Rows may span
// one line each; `;` separates rows, `];` closes the table.
std::vector<Row> extract_table(const std::vector<std::string>& lines, const std::string& name,
                               int min_cols) {
  const std::string opener = "mpc." + name;
  int start = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto pos = lines[i].find(opener);
    if (pos == std::string::npos) continue;
    const auto after = lines[i].find_first_not_of(" \t", pos + opener.size());
    if (after != std::string::npos && lines[i][after] == '=') {
      start = static_cast<int>(i);
      break;
    }
  }
  if (start < 0) throw ParseError("missing table mpc." + name, 0);

  std::vector<Row> rows;
  bool closed = false;
  for (std::size_t i = static_cast<std::size_t>(start); i < lines.size(); ++i) {
    std::string line = lines[i];
    if (const auto c = line.find('%'); c != std::string::npos) line.erase(c);
    if (i == static_cast<std::size_t>(start)) {
      const auto b = line.find('[');
      if (b == std::string::npos) throw ParseError("expected '[' opening mpc." + name, start + 1);
      line.erase(0, b + 1);
    }
    if (const auto e = line.find(']'); e != std::string::npos) {
      line.erase(e);
      closed = true;
    }

    std::stringstream ss(line);
    std::string row_text;
    while (std::getline(ss, row_text, ';')) {
      std::istringstream rs(row_text);
      Row row;
      row.line = static_cast<int>(i) + 1;
      std::string tok;
      while (rs >> tok) {
        try {
          std::size_t used = 0;
          row.values.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ParseError("malformed value '" + tok + "' in mpc." + name, row.line);
        }
      }
      if (!row.values.empty()) {
        if (static_cast<int>(row.values.size()) < min_cols)
          throw ParseError("row in mpc." + name + " has " + std::to_string(row.values.size()) +
                               " columns, expected at least " + std::to_string(min_cols),
                           row.line);
        rows.push_back(std::move(row));
      }
    }
    if (closed) break;
  }
  if (!closed) throw ParseError("unterminated table mpc." + name, start + 1);
  if (rows.empty()) throw ParseError("empty table mpc." + name, start + 1);
  return rows;
}

double extract_base_mva(const std::vector<std::string>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto pos = lines[i].find("mpc.baseMVA");
    if (pos == std::string::npos) continue;
    const auto eq = lines[i].find('=', pos);
    if (eq == std::string::npos) throw ParseError("malformed mpc.baseMVA", static_cast<int>(i) + 1);
    try {
      return std::stod(lines[i].substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("malformed mpc.baseMVA value", static_cast<int>(i) + 1);
    }
  }
  throw ParseError("missing mpc.baseMVA", 0);
}

}  // namespace

NetworkCase parse_case(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
  }

  NetworkCase net;
  net.base_mva = extract_base_mva(lines);
  if (!(net.base_mva > 0.0)) throw ParseError("baseMVA must be positive", 0);

  std::unordered_map<int, int> seen_bus;  // id -> defining line
  for (const auto& row : extract_table(lines, "bus", 3)) {
    Bus bus;
    bus.id = static_cast<int>(row.values[0]);
    const int type = static_cast<int>(row.values[1]);
    switch (type) {
      case 1: bus.type = BusType::Load; break;
      case 2: bus.type = BusType::Generator; break;
      case 3: bus.type = BusType::Slack; break;
      default:
        throw ParseError("bus " + std::to_string(bus.id) + " has unsupported type " +
                             std::to_string(type),
                         row.line);
    }
    bus.demand_mw = row.values[2];
    if (seen_bus.count(bus.id))
      throw ParseError("duplicate bus id " + std::to_string(bus.id), row.line);
    seen_bus[bus.id] = row.line;
    net.buses.push_back(bus);
  }

  for (const auto& row : extract_table(lines, "gen", 10)) {
    Generator gen;
    gen.id = static_cast<int>(net.generators.size()) + 1;
    gen.bus = static_cast<int>(row.values[0]);
    gen.in_service = row.values[7] > 0.0;
    gen.p_max_mw = row.values[8];
    gen.p_min_mw = row.values[9];
    if (!seen_bus.count(gen.bus))
      throw ParseError("generator references nonexistent bus " + std::to_string(gen.bus),
                       row.line);
    if (gen.p_max_mw < 0.0)
      throw ParseError("generator at bus " + std::to_string(gen.bus) + " has negative Pmax",
                       row.line);
    net.generators.push_back(gen);
  }

  for (const auto& row : extract_table(lines, "branch", 11)) {
    Branch br;
    br.id = static_cast<int>(net.branches.size()) + 1;
    br.from_bus = static_cast<int>(row.values[0]);
    br.to_bus = static_cast<int>(row.values[1]);
    br.reactance_pu = row.values[3];
    br.rating_mw = row.values[5];
    br.in_service = row.values[10] > 0.0;
    if (!seen_bus.count(br.from_bus))
      throw ParseError("branch references nonexistent bus " + std::to_string(br.from_bus),
                       row.line);
    if (!seen_bus.count(br.to_bus))
      throw ParseError("branch references nonexistent bus " + std::to_string(br.to_bus),
                       row.line);
    if (!(br.reactance_pu > 0.0))
      throw ParseError("branch " + std::to_string(br.from_bus) + "-" +
                           std::to_string(br.to_bus) + " requires positive reactance",
                       row.line);
    if (br.rating_mw < 0.0)
      throw ParseError("branch " + std::to_string(br.from_bus) + "-" +
                           std::to_string(br.to_bus) + " has negative rating",
                       row.line);
    net.branches.push_back(br);
  }

  return net;
}

NetworkCase load_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open case file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str());
}

}  // namespace gridpce
