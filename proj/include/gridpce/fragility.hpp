#ifndef GRIDPCE_FRAGILITY_HPP
#define GRIDPCE_FRAGILITY_HPP

#include <string>
#include <vector>

#include "gridpce/marginal.hpp"

namespace gridpce {

// Hourly failure probability as a piecewise-linear function of wind
// speed, clamped outside the breakpoint range.
class FragilityCurve {
 public:
  FragilityCurve(std::vector<double> wind_speeds, std::vector<double> probabilities);

  // Failure probability per hour of exposure at the given wind speed.
  double operator()(double wind_speed) const;

  nlohmann::ordered_json to_json() const;
  static FragilityCurve from_json(const nlohmann::json& j);
  static FragilityCurve load_file(const std::string& path);

 private:
  std::vector<double> speeds_;
  std::vector<double> probs_;
};

// One weather event: hourly wind series over the horizon and the branch
// ids exposed to it.
struct WeatherEvent {
  int horizon_hours = 24;
  std::vector<double> wind_speed;  // length horizon_hours
  std::vector<int> exposed_branches;

  nlohmann::ordered_json to_json() const;
  static WeatherEvent from_json(const nlohmann::json& j);
  static WeatherEvent load_file(const std::string& path);
};

// Failure-time marginal of one exposed branch: DiscreteHourly over hours
// 1..T with P(fail at t) = h_t * prod_{s<t}(1 - h_s), h_t = f(wind_t),
// plus the no-failure atom at sentinel hour T+1.
Marginal failure_time_distribution(const FragilityCurve& fragility, const WeatherEvent& weather,
                                   int branch_id);

// Joint input over all exposed branches, in exposed_branches order.
JointInput failure_time_joint(const FragilityCurve& fragility, const WeatherEvent& weather);

}  // namespace gridpce

#endif  // GRIDPCE_FRAGILITY_HPP
