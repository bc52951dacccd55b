#include "gridpce/fragility.hpp"

#include <algorithm>
#include <fstream>

#include "gridpce/errors.hpp"

namespace gridpce {

FragilityCurve::FragilityCurve(std::vector<double> wind_speeds,
                               std::vector<double> probabilities)
    : speeds_(std::move(wind_speeds)), probs_(std::move(probabilities)) {
  if (speeds_.empty() || speeds_.size() != probs_.size())
    throw DomainError("fragility curve requires matching non-empty breakpoint lists");
  for (std::size_t i = 0; i < speeds_.size(); ++i) {
    if (i > 0 && speeds_[i] <= speeds_[i - 1])
      throw DomainError("fragility wind speeds must be strictly increasing");
    if (!(probs_[i] >= 0.0 && probs_[i] <= 1.0))
      throw DomainError("fragility probabilities must lie in [0, 1]");
    if (i > 0 && probs_[i] < probs_[i - 1])
      throw DomainError("fragility probabilities must be non-decreasing in wind speed");
  }
}

double FragilityCurve::operator()(double wind_speed) const {
  if (wind_speed <= speeds_.front()) return probs_.front();
  if (wind_speed >= speeds_.back()) return probs_.back();
  const auto it = std::upper_bound(speeds_.begin(), speeds_.end(), wind_speed);
  const auto hi = static_cast<std::size_t>(it - speeds_.begin());
  const auto lo = hi - 1;
  const double t = (wind_speed - speeds_[lo]) / (speeds_[hi] - speeds_[lo]);
  return probs_[lo] + t * (probs_[hi] - probs_[lo]);
}

nlohmann::ordered_json FragilityCurve::to_json() const {
  return {{"wind_speeds", speeds_}, {"probabilities", probs_}};
}

FragilityCurve FragilityCurve::from_json(const nlohmann::json& j) {
  return FragilityCurve(j.at("wind_speeds").get<std::vector<double>>(),
                        j.at("probabilities").get<std::vector<double>>());
}

FragilityCurve FragilityCurve::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fragility file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid fragility JSON in '" + path + "': " + e.what());
  }
}

nlohmann::ordered_json WeatherEvent::to_json() const {
  return {{"horizon_hours", horizon_hours},
          {"wind_speed", wind_speed},
          {"exposed_branches", exposed_branches}};
}

WeatherEvent WeatherEvent::from_json(const nlohmann::json& j) {
  WeatherEvent w;
  w.horizon_hours = j.at("horizon_hours").get<int>();
  w.wind_speed = j.at("wind_speed").get<std::vector<double>>();
  w.exposed_branches = j.at("exposed_branches").get<std::vector<int>>();
  if (w.horizon_hours < 1) throw DomainError("weather horizon must be at least 1 hour");
  if (static_cast<int>(w.wind_speed.size()) != w.horizon_hours)
    throw DomainError("wind series length " + std::to_string(w.wind_speed.size()) +
                      " does not match horizon " + std::to_string(w.horizon_hours));
  return w;
}

WeatherEvent WeatherEvent::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open weather file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid weather JSON in '" + path + "': " + e.what());
  }
}

Marginal failure_time_distribution(const FragilityCurve& fragility, const WeatherEvent& weather,
                                   int branch_id) {
  const auto& exposed = weather.exposed_branches;
  if (std::find(exposed.begin(), exposed.end(), branch_id) == exposed.end())
    throw DomainError("branch " + std::to_string(branch_id) + " is not in the exposed set");

  const int horizon = weather.horizon_hours;
  std::vector<double> hours(static_cast<std::size_t>(horizon) + 1);
  std::vector<double> mass(static_cast<std::size_t>(horizon) + 1);
  double survival = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    const double h = fragility(weather.wind_speed[static_cast<std::size_t>(t) - 1]);
    hours[static_cast<std::size_t>(t) - 1] = t;
    mass[static_cast<std::size_t>(t) - 1] = survival * h;
    survival *= 1.0 - h;
  }
  hours.back() = horizon + 1;  // no-failure sentinel
  mass.back() = survival;
  return Marginal::discrete_hourly(std::move(hours), std::move(mass));
}

JointInput failure_time_joint(const FragilityCurve& fragility, const WeatherEvent& weather) {
  JointInput joint;
  for (int id : weather.exposed_branches)
    joint.marginals.push_back(failure_time_distribution(fragility, weather, id));
  return joint;
}

}  // namespace gridpce
