#include "gridpce/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "gridpce/errors.hpp"

namespace gridpce {

namespace {

Branch* branch_by_id(NetworkCase& net, int id) {
  for (auto& br : net.branches)
    if (br.id == id) return &br;
  return nullptr;
}

// Trips generators in islands whose demand cannot absorb the p_min
// profile: ascending capacity order, ties by generator id.  Returns the
// tripped generator ids.
std::vector<int> trip_overgeneration(NetworkCase& net, const PowerFlowResult& flow) {
  std::vector<int> tripped;
  for (const auto& island : flow.islands) {
    double demand = 0.0;
    for (int bi : island.bus_indices) demand += net.buses[static_cast<std::size_t>(bi)].demand_mw;

    std::vector<Generator*> gens;
    double cap_min = 0.0, cap_max = 0.0;
    for (auto& gen : net.generators) {
      if (!gen.in_service) continue;
      const int bi = net.bus_index(gen.bus);
      if (std::find(island.bus_indices.begin(), island.bus_indices.end(), bi) ==
          island.bus_indices.end())
        continue;
      gens.push_back(&gen);
      cap_min += gen.p_min_mw;
      cap_max += gen.p_max_mw;
    }
    if (gens.empty()) continue;

    const double served = std::min(demand, cap_max);
    if (cap_min <= served) continue;

    std::sort(gens.begin(), gens.end(), [](const Generator* a, const Generator* b) {
      return a->p_max_mw != b->p_max_mw ? a->p_max_mw < b->p_max_mw : a->id < b->id;
    });
    for (Generator* gen : gens) {
      if (cap_min <= served) break;
      gen->in_service = false;
      cap_min -= gen->p_min_mw;
      tripped.push_back(gen->id);
    }
  }
  return tripped;
}

}  // namespace

CascadeResult cascade_step(const NetworkCase& net, const std::vector<int>& branch_contingencies,
                           int iteration_cap) {
  CascadeResult result;
  result.network = net;

  for (int id : branch_contingencies) {
    Branch* br = branch_by_id(result.network, id);
    if (br == nullptr)
      throw DomainError("contingency references unknown branch id " + std::to_string(id));
    if (!br->in_service)
      throw DomainError("contingency references out-of-service branch id " + std::to_string(id));
    br->in_service = false;
    result.tripped.branches.push_back(id);
  }

  // Protection loop: solve, trip overloads and stranded generation,
  // repeat until the state is steady.
  while (true) {
    if (result.iterations++ >= iteration_cap)
      throw NumericalError("cascade did not reach steady state within " +
                           std::to_string(iteration_cap) + " iterations");

    result.steady_state = dc_power_flow(result.network);

    bool changed = false;
    for (std::size_t b = 0; b < result.network.branches.size(); ++b) {
      auto& br = result.network.branches[b];
      if (!br.in_service || br.rating_mw <= 0.0) continue;  // rating 0 = unlimited
      if (std::abs(result.steady_state.branch_flow_mw[b]) > br.rating_mw * (1.0 + 1e-9)) {
        br.in_service = false;
        result.tripped.branches.push_back(br.id);
        changed = true;
      }
    }

    const auto tripped_gens = trip_overgeneration(result.network, result.steady_state);
    if (!tripped_gens.empty()) {
      result.tripped.generators.insert(result.tripped.generators.end(), tripped_gens.begin(),
                                       tripped_gens.end());
      changed = true;
    }

    if (!changed) break;
  }
  return result;
}

CascadeOutcome simulate_event(const NetworkCase& net, const Eigen::VectorXd& tau,
                              const WeatherEvent& weather) {
  const auto& exposed = weather.exposed_branches;
  if (tau.size() != static_cast<Eigen::Index>(exposed.size()))
    throw DomainError("tau dimension " + std::to_string(tau.size()) +
                      " does not match exposed branch count " + std::to_string(exposed.size()));

  const int horizon = weather.horizon_hours;
  CascadeOutcome outcome;
  outcome.load_served_mw.reserve(static_cast<std::size_t>(horizon) + 1);
  outcome.tripped_by_hour.resize(static_cast<std::size_t>(horizon));

  // Failure hour per component: nearest hour, clamped up to hour 1;
  // anything beyond the horizon never fails.
  std::vector<int> fail_hour(exposed.size());
  for (std::size_t k = 0; k < exposed.size(); ++k) {
    const auto h = static_cast<long long>(std::llround(tau[static_cast<Eigen::Index>(k)]));
    fail_hour[k] = h > horizon ? horizon + 1 : static_cast<int>(std::max<long long>(h, 1));
  }

  NetworkCase state = net;
  outcome.load_served_mw.push_back(dc_power_flow(state).total_served_mw);

  double last_served = outcome.load_served_mw.front();
  for (int t = 1; t <= horizon; ++t) {
    std::vector<int> contingencies;
    for (std::size_t k = 0; k < exposed.size(); ++k) {
      if (fail_hour[k] != t) continue;
      Branch* br = branch_by_id(state, exposed[k]);
      if (br == nullptr)
        throw DomainError("exposed branch id " + std::to_string(exposed[k]) +
                          " not present in the case");
      if (br->in_service) contingencies.push_back(exposed[k]);  // already-dead: no-op
    }

    if (!contingencies.empty()) {
      CascadeResult step = cascade_step(state, contingencies);
      state = std::move(step.network);
      outcome.tripped_by_hour[static_cast<std::size_t>(t) - 1] = std::move(step.tripped);
      last_served = step.steady_state.total_served_mw;
    }
    outcome.load_served_mw.push_back(last_served);
  }

  outcome.phi_ls = phi_ls(outcome.load_served_mw, 0, horizon);
  return outcome;
}

double phi_ls(const std::vector<double>& load_served_trace, int t0, int t_end) {
  if (t_end <= t0) throw DomainError("phi_ls requires t_end > t0");
  if (t0 < 0 || static_cast<std::size_t>(t_end) >= load_served_trace.size())
    throw DomainError("phi_ls endpoints outside the trace");
  return (load_served_trace[static_cast<std::size_t>(t_end)] -
          load_served_trace[static_cast<std::size_t>(t0)]) /
         static_cast<double>(t_end - t0);
}

}  // namespace gridpce
