#ifndef GRIDPCE_POWER_FLOW_HPP
#define GRIDPCE_POWER_FLOW_HPP

#include <vector>

#include "gridpce/network_case.hpp"

namespace gridpce {

// A connected component of the in-service network.
struct Island {
  std::vector<int> bus_indices;  // indices into NetworkCase::buses
  int slack_bus_index = -1;      // chosen reference bus, -1 when no generation
};

// Steady-state snapshot after dispatch, shedding and the linear solve.
struct PowerFlowResult {
  std::vector<Island> islands;
  std::vector<double> branch_flow_mw;    // by branch table position, 0 for out-of-service
  std::vector<double> served_load_mw;    // per bus
  std::vector<double> generation_mw;     // per generator
  double total_served_mw = 0.0;
};

// Connected components over in-service branches.
std::vector<Island> find_islands(const NetworkCase& net);

// Solves the linearized B*theta = P system per island.  Loads are shed
// proportionally in islands whose demand exceeds the in-service
// generation capacity; islands without generation serve nothing.
// Generators dispatch between p_min and p_max proportionally to their
// headroom.  Throws NumericalError naming the island when its reduced
// susceptance system is singular.
PowerFlowResult dc_power_flow(const NetworkCase& net);

}  // namespace gridpce

#endif  // GRIDPCE_POWER_FLOW_HPP
