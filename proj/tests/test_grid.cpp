#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gridpce/cascade.hpp"
#include "gridpce/csv.hpp"
#include "gridpce/errors.hpp"
#include "gridpce/models.hpp"
#include "gridpce/network_case.hpp"
#include "gridpce/rng.hpp"

using namespace gridpce;

namespace {

const std::string kMinimalCase = R"(function mpc = mini
mpc.baseMVA = 100;
mpc.bus = [
	1	3	0	0	0	0	1	1	0	345	1	1.06	0.94;
	2	1	100	0	0	0	1	1	0	345	1	1.06	0.94;
];
mpc.gen = [
	1	100	0	0	0	1	100	1	200	0;
];
mpc.branch = [
	1	2	0.001	0.05	0	0	0	0	0	0	1	-360	360;
];
)";

NetworkCase two_parallel_case() {
  NetworkCase net;
  net.buses = {{1, BusType::Slack, 0.0}, {2, BusType::Load, 100.0}};
  net.generators = {{1, 1, 200.0, 0.0, true}};
  net.branches = {{1, 1, 2, 0.1, 60.0, true}, {2, 1, 2, 0.1, 60.0, true}};
  return net;
}

// Counts the data rows of one mpc table straight from the file text,
// independently of the parser.
int count_table_rows(const std::string& text, const std::string& name) {
  std::stringstream ss(text);
  std::string line;
  bool inside = false;
  int rows = 0;
  while (std::getline(ss, line)) {
    if (line.find("mpc." + name) != std::string::npos && line.find('[') != std::string::npos) {
      inside = true;
      continue;
    }
    if (!inside) continue;
    if (line.find("];") != std::string::npos) break;
    if (line.find(';') != std::string::npos) ++rows;
  }
  return rows;
}

WeatherEvent flat_weather(int horizon, double wind, std::vector<int> exposed) {
  WeatherEvent w;
  w.horizon_hours = horizon;
  w.wind_speed.assign(static_cast<std::size_t>(horizon), wind);
  w.exposed_branches = std::move(exposed);
  return w;
}

}  // namespace

TEST_CASE("minimal case parses as written") {
  const auto net = parse_case(kMinimalCase);
  CHECK(net.buses.size() == 2);
  CHECK(net.branches.size() == 1);
  CHECK(net.generators.size() == 1);
  CHECK(net.base_mva == doctest::Approx(100.0));
  CHECK(net.buses[1].demand_mw == doctest::Approx(100.0));
  CHECK(net.branches[0].rating_mw == 0.0);
  CHECK(net.branches[0].reactance_pu == doctest::Approx(0.05));
  CHECK(net.generators[0].p_max_mw == doctest::Approx(200.0));
}

TEST_CASE("bundled 39-bus case matches an independent row count") {
  const std::string text = read_text_file(std::string(GRIDPCE_DATA_DIR) + "/case39.m");
  const auto net = parse_case(text);
  CHECK(net.buses.size() == 39);
  CHECK(net.branches.size() == 46);
  CHECK(net.generators.size() == 10);
  CHECK(count_table_rows(text, "bus") == 39);
  CHECK(count_table_rows(text, "branch") == 46);
  CHECK(count_table_rows(text, "gen") == 10);
  // branches among the windstorm-affected buses
  const auto exposed = net.branches_among({12, 13, 14, 15, 16, 17, 20});
  CHECK(exposed == std::vector<int>{22, 23, 24, 25, 26});
}

TEST_CASE("parse errors carry line numbers") {
  // dangling branch endpoint
  std::string dangling = kMinimalCase;
  const auto pos = dangling.find("\t1\t2\t0.001");
  dangling.replace(pos, std::string("\t1\t2").size(), "\t1\t9");
  CHECK_THROWS_AS(parse_case(dangling), ParseError);
  try {
    parse_case(dangling);
  } catch (const ParseError& e) {
    CHECK(e.line() == 11);  // the branch row
  }

  // malformed numeric token
  std::string garbled = kMinimalCase;
  garbled.replace(garbled.find("0.05"), 4, "zap!");
  try {
    parse_case(garbled);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 11);
  }

  // missing generator table
  std::string no_gen = kMinimalCase;
  no_gen.replace(no_gen.find("mpc.gen"), 7, "mpc.zen");
  try {
    parse_case(no_gen);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 0);
  }
}

TEST_CASE("failure time distribution from fragility and weather") {
  // certain immediate failure
  const FragilityCurve certain({0.0, 50.0}, {1.0, 1.0});
  const auto w = flat_weather(3, 20.0, {1});
  const auto m1 = failure_time_distribution(certain, w, 1);
  CHECK(m1.atom_weights()[0] == doctest::Approx(1.0));
  CHECK(m1.atom_weights()[3] == doctest::Approx(0.0));

  // no failure ever
  const FragilityCurve never({0.0, 50.0}, {0.0, 0.0});
  const auto m0 = failure_time_distribution(never, w, 1);
  CHECK(m0.atom_weights().back() == doctest::Approx(1.0));
  CHECK(m0.atom_values().back() == doctest::Approx(4.0));  // sentinel T+1

  // constant hazard 0.5 over T=2: {1: 0.5, 2: 0.25, no-fail: 0.25}
  const FragilityCurve half({0.0, 50.0}, {0.5, 0.5});
  const auto w2 = flat_weather(2, 10.0, {1});
  const auto mh = failure_time_distribution(half, w2, 1);
  CHECK(mh.atom_values() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(mh.atom_weights()[0] == doctest::Approx(0.5));
  CHECK(mh.atom_weights()[1] == doctest::Approx(0.25));
  CHECK(mh.atom_weights()[2] == doctest::Approx(0.25));

  double total = 0.0;
  for (double v : mh.atom_weights()) total += v;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  CHECK_THROWS_AS(failure_time_distribution(half, w2, 7), DomainError);
}

TEST_CASE("fragility curve interpolation and clamping") {
  const FragilityCurve f({10.0, 20.0, 30.0}, {0.0, 0.1, 0.5});
  CHECK(f(5.0) == doctest::Approx(0.0));
  CHECK(f(15.0) == doctest::Approx(0.05));
  CHECK(f(25.0) == doctest::Approx(0.3));
  CHECK(f(99.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(FragilityCurve({10.0, 20.0}, {0.5, 0.1}), DomainError);
  CHECK_THROWS_AS(FragilityCurve({10.0, 20.0}, {0.0, 1.5}), DomainError);
}

TEST_CASE("dc power flow on a two-bus line") {
  const auto net = parse_case(kMinimalCase);
  const auto flow = dc_power_flow(net);
  CHECK(flow.islands.size() == 1);
  CHECK(flow.branch_flow_mw[0] == doctest::Approx(100.0));
  CHECK(flow.total_served_mw == doctest::Approx(100.0));
  CHECK(flow.generation_mw[0] == doctest::Approx(100.0));
}

TEST_CASE("dc power flow on a symmetric three-bus ring") {
  NetworkCase net;
  net.buses = {{1, BusType::Slack, 0.0}, {2, BusType::Load, 45.0}, {3, BusType::Load, 45.0}};
  net.generators = {{1, 1, 90.0, 0.0, true}};
  net.branches = {{1, 1, 2, 0.1, 0.0, true}, {2, 1, 3, 0.1, 0.0, true}, {3, 2, 3, 0.1, 0.0, true}};
  const auto flow = dc_power_flow(net);
  // hand solve of the reduced 2x2 system: flows 45/45 on the feeders, 0 across
  CHECK(flow.branch_flow_mw[0] == doctest::Approx(45.0).epsilon(1e-9));
  CHECK(flow.branch_flow_mw[1] == doctest::Approx(45.0).epsilon(1e-9));
  CHECK(flow.branch_flow_mw[2] == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-9));
}

TEST_CASE("islanded load without generation serves zero") {
  NetworkCase net;
  net.buses = {{1, BusType::Slack, 0.0}, {2, BusType::Load, 100.0}, {3, BusType::Load, 55.0}};
  net.generators = {{1, 1, 200.0, 0.0, true}};
  net.branches = {{1, 1, 2, 0.1, 0.0, true}, {2, 2, 3, 0.1, 0.0, false}};
  const auto flow = dc_power_flow(net);
  CHECK(flow.islands.size() == 2);
  CHECK(flow.served_load_mw[1] == doctest::Approx(100.0));
  CHECK(flow.served_load_mw[2] == 0.0);
  CHECK(flow.total_served_mw == doctest::Approx(100.0));
}

TEST_CASE("proportional shedding balances deficient islands") {
  NetworkCase net;
  net.buses = {{1, BusType::Slack, 30.0}, {2, BusType::Load, 90.0}};
  net.generators = {{1, 1, 80.0, 0.0, true}};
  net.branches = {{1, 1, 2, 0.1, 0.0, true}};
  const auto flow = dc_power_flow(net);
  // 80 of 120 demanded: each load served at 2/3
  CHECK(flow.served_load_mw[0] == doctest::Approx(20.0));
  CHECK(flow.served_load_mw[1] == doctest::Approx(60.0));
  CHECK(flow.generation_mw[0] == doctest::Approx(80.0));
}

TEST_CASE("cascade trips the surviving parallel branch") {
  const auto net = two_parallel_case();

  // sanity: 50/50 split before the contingency
  const auto base = dc_power_flow(net);
  CHECK(base.branch_flow_mw[0] == doctest::Approx(50.0));
  CHECK(base.branch_flow_mw[1] == doctest::Approx(50.0));

  const auto result = cascade_step(net, {1});
  CHECK(result.tripped.branches == std::vector<int>{1, 2});
  CHECK(result.steady_state.total_served_mw == 0.0);
}

TEST_CASE("cascade with no overloads trips only the contingency") {
  auto net = two_parallel_case();
  net.branches[0].rating_mw = 200.0;
  net.branches[1].rating_mw = 200.0;
  const auto result = cascade_step(net, {1});
  CHECK(result.tripped.branches == std::vector<int>{1});
  CHECK(result.steady_state.total_served_mw == doctest::Approx(100.0));
}

TEST_CASE("empty contingency set leaves the case unchanged") {
  const auto net = two_parallel_case();
  const auto result = cascade_step(net, {});
  CHECK(result.tripped.empty());
  for (std::size_t b = 0; b < net.branches.size(); ++b)
    CHECK(result.network.branches[b].in_service == net.branches[b].in_service);
}

TEST_CASE("cascade rejects unknown or dead contingencies") {
  const auto net = two_parallel_case();
  CHECK_THROWS_AS(cascade_step(net, {9}), DomainError);
  auto dead = net;
  dead.branches[0].in_service = false;
  CHECK_THROWS_AS(cascade_step(dead, {1}), DomainError);
}

TEST_CASE("simulate_event fixture sheds 60 MW at hour 12") {
  const auto net = load_case_file(std::string(GRIDPCE_FIXTURE_DIR) + "/case3_shed.m");
  const auto weather = flat_weather(24, 20.0, {2});

  Eigen::VectorXd tau(1);
  tau << 12.0;
  const auto outcome = simulate_event(net, tau, weather);
  CHECK(outcome.load_served_mw.size() == 25);
  CHECK(outcome.load_served_mw.front() == doctest::Approx(6000.0));
  CHECK(outcome.load_served_mw[11] == doctest::Approx(6000.0));
  CHECK(outcome.load_served_mw[12] == doctest::Approx(5940.0));
  CHECK(outcome.load_served_mw.back() == doctest::Approx(5940.0));
  CHECK(outcome.phi_ls == doctest::Approx(-2.5));
  CHECK(outcome.tripped_by_hour[11].branches == std::vector<int>{2});

  // no failure within the horizon: flat trace, phi 0
  tau << 25.0;
  const auto calm = simulate_event(net, tau, weather);
  CHECK(calm.phi_ls == 0.0);
  for (double v : calm.load_served_mw) CHECK(v == doctest::Approx(6000.0));

  CHECK_THROWS_AS(simulate_event(net, Eigen::VectorXd::Zero(3), weather), DomainError);
}

TEST_CASE("phi is zero exactly when nothing fails on the radial fixture") {
  const auto net = load_case_file(std::string(GRIDPCE_FIXTURE_DIR) + "/case3_shed.m");
  const auto weather = flat_weather(24, 20.0, {1, 2});
  for (int t1 = 1; t1 <= 25; t1 += 6) {
    for (int t2 = 1; t2 <= 25; t2 += 6) {
      Eigen::VectorXd tau(2);
      tau << double(t1), double(t2);
      const auto outcome = simulate_event(net, tau, weather);
      const bool any_failure = t1 <= 24 || t2 <= 24;
      CHECK(outcome.phi_ls <= 0.0);
      CHECK((outcome.phi_ls < 0.0) == any_failure);
    }
  }
}

TEST_CASE("power balance and monotone damage across random events") {
  const auto net = load_case_file(std::string(GRIDPCE_DATA_DIR) + "/case39.m");
  const auto fragility =
      FragilityCurve::load_file(std::string(GRIDPCE_DATA_DIR) + "/fragility_default.json");
  const auto weather =
      WeatherEvent::load_file(std::string(GRIDPCE_DATA_DIR) + "/weather_default.json");
  const GridStudyModel model(net, fragility, weather);

  Rng rng(117);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd tau(model.dim());
    for (int j = 0; j < model.dim(); ++j)
      tau[j] = model.joint().marginals[static_cast<std::size_t>(j)].quantile(rng.uniform_open01());

    // replay hour by hour, checking balance and monotonicity
    NetworkCase state = net;
    auto in_service_count = [](const NetworkCase& n) {
      int count = 0;
      for (const auto& br : n.branches) count += br.in_service ? 1 : 0;
      for (const auto& gen : n.generators) count += gen.in_service ? 1 : 0;
      return count;
    };
    int prev_alive = in_service_count(state);
    double prev_served = dc_power_flow(state).total_served_mw;

    const auto outcome = model.simulate(tau);
    CHECK(outcome.phi_ls <= 0.0);
    for (std::size_t h = 0; h < outcome.tripped_by_hour.size(); ++h) {
      std::vector<int> contingencies;
      for (int id : outcome.tripped_by_hour[h].branches) {
        // replay only the initiating contingencies: branches failing by tau
        for (std::size_t k = 0; k < weather.exposed_branches.size(); ++k)
          if (weather.exposed_branches[k] == id &&
              std::llround(tau[static_cast<Eigen::Index>(k)]) == static_cast<long long>(h) + 1)
            contingencies.push_back(id);
      }
      if (contingencies.empty()) continue;
      const auto step = cascade_step(state, contingencies);
      state = step.network;

      // per-island balance: dispatched generation equals served load
      const auto& flow = step.steady_state;
      for (const auto& island : flow.islands) {
        double gen_total = 0.0, load_total = 0.0;
        for (std::size_t g = 0; g < state.generators.size(); ++g)
          if (state.generators[g].in_service &&
              std::find(island.bus_indices.begin(), island.bus_indices.end(),
                        state.bus_index(state.generators[g].bus)) != island.bus_indices.end())
            gen_total += flow.generation_mw[g];
        for (int bi : island.bus_indices) load_total += flow.served_load_mw[static_cast<std::size_t>(bi)];
        CHECK(std::abs(gen_total - load_total) <= 1e-6);
      }

      const int alive = in_service_count(state);
      CHECK(alive <= prev_alive);
      prev_alive = alive;
      CHECK(flow.total_served_mw <= prev_served + 1e-9);
      prev_served = flow.total_served_mw;
    }

    // determinism of the full event
    const auto outcome2 = model.simulate(tau);
    CHECK(outcome.phi_ls == outcome2.phi_ls);
    CHECK(outcome.load_served_mw == outcome2.load_served_mw);
  }
}

TEST_CASE("phi_ls arithmetic and domain errors") {
  std::vector<double> trace(13, 100.0);
  for (std::size_t i = 1; i < trace.size(); ++i) trace[i] = 100.0 - 5.0 * static_cast<double>(i);
  CHECK(phi_ls(trace, 0, 12) == doctest::Approx(-5.0));

  const std::vector<double> flat(25, 300.0);
  CHECK(phi_ls(flat, 0, 24) == 0.0);
  CHECK_THROWS_AS(phi_ls(flat, 5, 5), DomainError);
  CHECK_THROWS_AS(phi_ls(flat, 5, 2), DomainError);
  CHECK_THROWS_AS(phi_ls(flat, 0, 99), DomainError);
}

TEST_CASE("cascade iteration cap raises a non-convergence error") {
  const auto net = two_parallel_case();
  CHECK_THROWS_AS(cascade_step(net, {1}, 1), NumericalError);
  CHECK_NOTHROW(cascade_step(net, {1}, 10));
}

TEST_CASE("every island designates exactly one reference bus") {
  auto net = load_case_file(std::string(GRIDPCE_DATA_DIR) + "/case39.m");
  // carve the corridor out to force several islands
  for (int id : {22, 23, 24, 25, 26, 13, 18})
    net.branches[static_cast<std::size_t>(id - 1)].in_service = false;
  const auto islands = find_islands(net);
  CHECK(islands.size() >= 2);
  for (const auto& island : islands) {
    double cap = 0.0;
    for (const auto& gen : net.generators)
      if (gen.in_service &&
          std::find(island.bus_indices.begin(), island.bus_indices.end(),
                    net.bus_index(gen.bus)) != island.bus_indices.end())
        cap += gen.p_max_mw;
    if (cap > 0.0) {
      REQUIRE(island.slack_bus_index >= 0);
      CHECK(std::find(island.bus_indices.begin(), island.bus_indices.end(),
                      island.slack_bus_index) != island.bus_indices.end());
    }
  }
}

TEST_CASE("failure times below one hour clamp to the first hour") {
  const auto net = load_case_file(std::string(GRIDPCE_FIXTURE_DIR) + "/case3_shed.m");
  const auto weather = flat_weather(24, 20.0, {2});
  Eigen::VectorXd tau(1);
  tau << 0.3;  // rounds to 0, scheduled at hour 1
  const auto outcome = simulate_event(net, tau, weather);
  CHECK(outcome.load_served_mw[1] == doctest::Approx(5940.0));
  CHECK(outcome.tripped_by_hour[0].branches == std::vector<int>{2});

  tau << 24.4;  // rounds to 24: still inside the horizon
  const auto late = simulate_event(net, tau, weather);
  CHECK(late.load_served_mw[24] == doctest::Approx(5940.0));
  CHECK(late.phi_ls < 0.0);

  tau << 24.6;  // rounds past the horizon: no failure
  const auto never = simulate_event(net, tau, weather);
  CHECK(never.phi_ls == 0.0);
}
