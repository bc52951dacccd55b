#ifndef GRIDPCE_CASCADE_HPP
#define GRIDPCE_CASCADE_HPP

#include <vector>

#include <Eigen/Dense>

#include "gridpce/fragility.hpp"
#include "gridpce/network_case.hpp"
#include "gridpce/power_flow.hpp"

namespace gridpce {

// Components disconnected by protection during one cascade.
struct TrippedSet {
  std::vector<int> branches;    // branch ids
  std::vector<int> generators;  // generator ids

  bool empty() const { return branches.empty() && generators.empty(); }
};

struct CascadeResult {
  NetworkCase network;         // post-cascade state
  TrippedSet tripped;          // everything disconnected, contingencies included
  PowerFlowResult steady_state;
  int iterations = 0;
};

// Removes the initial contingencies, then alternates DC power flow /
// proportional shedding with protection trips (branch overloads; island
// over-generation beyond p_min trips generators in ascending capacity
// order) until no further component disconnects.  Throws NumericalError
// when the iteration cap is exceeded.
CascadeResult cascade_step(const NetworkCase& net, const std::vector<int>& branch_contingencies,
                           int iteration_cap = 1000);

// Per-hour load-served trace of one resilience event plus the scalar
// phi_ls metric.  load_served_mw has length horizon+1; entry 0 is the
// pre-event state.
struct CascadeOutcome {
  std::vector<double> load_served_mw;
  std::vector<TrippedSet> tripped_by_hour;  // length horizon, hour t at index t-1
  double phi_ls = 0.0;                      // MW/hour, <= 0
};

// Runs the hourly event: components whose failure time rounds to hour t
// (and are still in service) form that hour's initial contingencies.
// tau must align with weather.exposed_branches; values beyond the
// horizon never fail.
CascadeOutcome simulate_event(const NetworkCase& net, const Eigen::VectorXd& tau,
                              const WeatherEvent& weather);

// Rate of change of load served between two hours of a trace.
double phi_ls(const std::vector<double>& load_served_trace, int t0, int t_end);

}  // namespace gridpce

#endif  // GRIDPCE_CASCADE_HPP
