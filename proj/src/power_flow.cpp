#include "gridpce/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <Eigen/Dense>

#include "gridpce/errors.hpp"

namespace gridpce {

namespace {

// Union-find over bus indices.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  }
};

std::unordered_map<int, int> bus_map(const NetworkCase& net) {
  std::unordered_map<int, int> map;
  map.reserve(net.buses.size());
  for (std::size_t i = 0; i < net.buses.size(); ++i) map[net.buses[i].id] = static_cast<int>(i);
  return map;
}

int mapped(const std::unordered_map<int, int>& map, int bus_id) {
  const auto it = map.find(bus_id);
  if (it == map.end()) throw DomainError("branch endpoint missing from bus table");
  return it->second;
}

std::vector<Island> find_islands_mapped(const NetworkCase& net,
                                        const std::unordered_map<int, int>& map) {
  const int nb = static_cast<int>(net.buses.size());
  DisjointSet ds(nb);
  for (const auto& br : net.branches) {
    if (!br.in_service) continue;
    ds.unite(mapped(map, br.from_bus), mapped(map, br.to_bus));
  }

  std::vector<int> root_to_island(static_cast<std::size_t>(nb), -1);
  std::vector<Island> islands;
  for (int i = 0; i < nb; ++i) {
    const int root = ds.find(i);
    if (root_to_island[static_cast<std::size_t>(root)] < 0) {
      root_to_island[static_cast<std::size_t>(root)] = static_cast<int>(islands.size());
      islands.emplace_back();
    }
    islands[static_cast<std::size_t>(root_to_island[static_cast<std::size_t>(root)])]
        .bus_indices.push_back(i);
  }

  // Per-bus in-service generation capacity, for slack designation.
  std::vector<double> bus_cap(static_cast<std::size_t>(nb), 0.0);
  for (const auto& gen : net.generators)
    if (gen.in_service) bus_cap[static_cast<std::size_t>(mapped(map, gen.bus))] += gen.p_max_mw;

  // Slack choice: the designated slack bus when present in the island,
  // otherwise the bus holding the largest in-service generation capacity.
  for (auto& island : islands) {
    double best_cap = 0.0;
    int best_bus = -1;
    for (int bi : island.bus_indices) {
      if (net.buses[static_cast<std::size_t>(bi)].type == BusType::Slack)
        island.slack_bus_index = bi;
      if (bus_cap[static_cast<std::size_t>(bi)] > best_cap) {
        best_cap = bus_cap[static_cast<std::size_t>(bi)];
        best_bus = bi;
      }
    }
    if (island.slack_bus_index < 0) island.slack_bus_index = best_bus;
  }
  return islands;
}

}  // namespace

std::vector<Island> find_islands(const NetworkCase& net) {
  return find_islands_mapped(net, bus_map(net));
}

PowerFlowResult dc_power_flow(const NetworkCase& net) {
  const int nb = static_cast<int>(net.buses.size());
  const auto map = bus_map(net);

  PowerFlowResult result;
  result.islands = find_islands_mapped(net, map);
  result.branch_flow_mw.assign(net.branches.size(), 0.0);
  result.served_load_mw.assign(static_cast<std::size_t>(nb), 0.0);
  result.generation_mw.assign(net.generators.size(), 0.0);

  std::vector<int> island_of(static_cast<std::size_t>(nb), -1);
  for (std::size_t k = 0; k < result.islands.size(); ++k)
    for (int bi : result.islands[k].bus_indices)
      island_of[static_cast<std::size_t>(bi)] = static_cast<int>(k);

  std::vector<int> gen_bus_index(net.generators.size());
  for (std::size_t g = 0; g < net.generators.size(); ++g)
    gen_bus_index[g] = mapped(map, net.generators[g].bus);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(nb);

  for (std::size_t k = 0; k < result.islands.size(); ++k) {
    const auto& island = result.islands[k];

    double demand = 0.0;
    for (int bi : island.bus_indices) demand += net.buses[static_cast<std::size_t>(bi)].demand_mw;

    double cap_max = 0.0, cap_min = 0.0;
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
      if (!net.generators[g].in_service) continue;
      if (island_of[static_cast<std::size_t>(gen_bus_index[g])] != static_cast<int>(k)) continue;
      cap_max += net.generators[g].p_max_mw;
      cap_min += net.generators[g].p_min_mw;
    }

    // Islands without generation serve nothing and carry no flow.
    if (cap_max <= 0.0) continue;

    const double served = std::min(demand, cap_max);
    const double shed_scale = demand > 0.0 ? served / demand : 0.0;
    for (int bi : island.bus_indices)
      result.served_load_mw[static_cast<std::size_t>(bi)] =
          net.buses[static_cast<std::size_t>(bi)].demand_mw * shed_scale;

    // Dispatch proportionally to headroom between the p_min and p_max
    // profiles; balances served load exactly.  Tripping generators when
    // served < cap_min is the cascade loop's job.
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
      const auto& gen = net.generators[g];
      if (!gen.in_service) continue;
      if (island_of[static_cast<std::size_t>(gen_bus_index[g])] != static_cast<int>(k)) continue;
      double p;
      if (served >= cap_max) {
        p = gen.p_max_mw;
      } else if (cap_max > cap_min) {
        p = gen.p_min_mw + (served - cap_min) * (gen.p_max_mw - gen.p_min_mw) / (cap_max - cap_min);
      } else {
        p = gen.p_min_mw;
      }
      result.generation_mw[g] = p;
    }

    if (island.bus_indices.size() < 2) continue;  // single bus: no angles to solve

    // Reduced B*theta = P with the slack row/column removed.
    std::vector<int> pos(static_cast<std::size_t>(nb), -1);
    int idx = 0;
    for (int bi : island.bus_indices) {
      if (bi == island.slack_bus_index) continue;
      pos[static_cast<std::size_t>(bi)] = idx++;
    }
    Eigen::MatrixXd b_red = Eigen::MatrixXd::Zero(idx, idx);
    Eigen::VectorXd p_red = Eigen::VectorXd::Zero(idx);

    for (const auto& br : net.branches) {
      if (!br.in_service) continue;
      const int fi = mapped(map, br.from_bus);
      if (island_of[static_cast<std::size_t>(fi)] != static_cast<int>(k)) continue;
      const int ti = mapped(map, br.to_bus);
      const double b = 1.0 / br.reactance_pu;
      const int fp = pos[static_cast<std::size_t>(fi)];
      const int tp = pos[static_cast<std::size_t>(ti)];
      if (fp >= 0) b_red(fp, fp) += b;
      if (tp >= 0) b_red(tp, tp) += b;
      if (fp >= 0 && tp >= 0) {
        b_red(fp, tp) -= b;
        b_red(tp, fp) -= b;
      }
    }

    for (std::size_t g = 0; g < net.generators.size(); ++g) {
      if (!net.generators[g].in_service) continue;
      const int bi = gen_bus_index[g];
      const int p_idx = pos[static_cast<std::size_t>(bi)];
      if (island_of[static_cast<std::size_t>(bi)] == static_cast<int>(k) && p_idx >= 0)
        p_red[p_idx] += result.generation_mw[g] / net.base_mva;
    }
    for (int bi : island.bus_indices) {
      const int p_idx = pos[static_cast<std::size_t>(bi)];
      if (p_idx >= 0) p_red[p_idx] -= result.served_load_mw[static_cast<std::size_t>(bi)] / net.base_mva;
    }

    Eigen::LDLT<Eigen::MatrixXd> solver(b_red);
    Eigen::VectorXd theta_red;
    bool ok = solver.info() == Eigen::Success;
    if (ok) {
      theta_red = solver.solve(p_red);
      ok = theta_red.allFinite() &&
           (b_red * theta_red - p_red).lpNorm<Eigen::Infinity>() <=
               1e-8 * std::max(1.0, p_red.lpNorm<Eigen::Infinity>());
    }
    if (!ok)
      throw NumericalError(
          "singular susceptance system in island containing bus " +
          std::to_string(net.buses[static_cast<std::size_t>(island.bus_indices.front())].id));

    for (int bi : island.bus_indices) {
      const int p_idx = pos[static_cast<std::size_t>(bi)];
      theta[bi] = p_idx >= 0 ? theta_red[p_idx] : 0.0;
    }
  }

  for (std::size_t b = 0; b < net.branches.size(); ++b) {
    const auto& br = net.branches[b];
    if (!br.in_service) continue;
    const int fi = mapped(map, br.from_bus);
    const int ti = mapped(map, br.to_bus);
    result.branch_flow_mw[b] = (theta[fi] - theta[ti]) / br.reactance_pu * net.base_mva;
  }

  result.total_served_mw =
      std::accumulate(result.served_load_mw.begin(), result.served_load_mw.end(), 0.0);
  return result;
}

}  // namespace gridpce
