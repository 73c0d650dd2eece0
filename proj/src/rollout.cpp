// Copyright 2026 The cosafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cosafe/rollout.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace cosafe {

Policy instrument(Policy policy, PolicyStats* stats) {
  return [policy = std::move(policy), stats](const StateVec& x, double t) {
    const auto start = std::chrono::steady_clock::now();
    ControlVec u = policy(x, t);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    ++stats->calls;
    stats->call_seconds.push_back(elapsed.count());
    return u;
  };
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

Trajectory rollout(const SystemModel& system, const ProblemSpec& spec, const Policy& policy,
                   const StateVec& x0, double horizon, double dt, double kappa) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw ConfigError("rollout: need dt > 0, T >= 0");
  const double steps_real = std::round(horizon / dt);
  if (std::abs(steps_real * dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw ConfigError("rollout: dt must divide the horizon");
  }
  const auto steps = static_cast<std::size_t>(steps_real);

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.controls.reserve(steps);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  traj.min_constraint = spec.constraint(x0);

  StateVec x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    ControlVec u;
    try {
      u = policy(x, t);
      if (!system.control_set.contains(u, 1e-9)) {
        throw ContractViolation("policy returned a control outside the control set");
      }
    } catch (const std::exception& e) {
      traj.aborted = true;
      traj.error = e.what();
      break;
    }
    const StateVec k1 = system.flow_unchecked(x, u);
    const StateVec k2 = system.flow_unchecked(x + 0.5 * dt * k1, u);
    const StateVec k3 = system.flow_unchecked(x + 0.5 * dt * k2, u);
    const StateVec k4 = system.flow_unchecked(x + dt * k3, u);
    const StateVec next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    traj.running_cost_integral +=
        0.5 * dt * (spec.running_cost(x, u) + spec.running_cost(next, u));
    traj.controls.push_back(u);
    traj.times.push_back(static_cast<double>(k + 1) * dt);
    traj.states.push_back(next);
    traj.min_constraint = std::min(traj.min_constraint, spec.constraint(next));
    x = next;
  }
  traj.success = !traj.aborted && traj.min_constraint >= -kappa;
  return traj;
}

std::vector<StateVec> sample_initial_states(const ValueField& vs, const std::vector<double>& lo,
                                            const std::vector<double>& hi, std::size_t count,
                                            std::uint64_t seed, double margin) {
  if (!(margin >= 0.0)) throw ConfigError("sample_initial_states: margin must be >= 0");
  const int d = vs.grid.dims();
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d) {
    throw ConfigError("sample_initial_states: sampling box has the wrong dimension");
  }
  const auto& initial = vs.initial();
  if (margin > *std::max_element(initial.begin(), initial.end())) {
    throw ConfigError("sample_initial_states: margin exceeds the largest safety value");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> axis;
  for (int i = 0; i < d; ++i) axis.emplace_back(lo[i], hi[i]);

  constexpr std::size_t kProbeDraws = 1'000'000;
  std::vector<StateVec> out;
  out.reserve(count);
  std::size_t draws = 0;
  while (out.size() < count) {
    StateVec x(d);
    for (int i = 0; i < d; ++i) x[i] = axis[i](rng);
    ++draws;
    if (interpolate(vs.grid, initial, x).value >= margin) out.push_back(x);
    if (draws == kProbeDraws && out.size() * 100 < draws) {
      throw ConfigError("sample_initial_states: acceptance rate below 1%");
    }
  }
  return out;
}

double MethodResult::success_rate() const {
  if (outcomes.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& o : outcomes) ok += o.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(outcomes.size());
}

nlohmann::json to_json(const MethodResult& result) {
  nlohmann::json j;
  j["method"] = result.method;
  j["config_hash"] = result.config_hash;
  j["kappa"] = result.kappa;
  j["success_rate"] = result.success_rate();
  j["offline_seconds"] = result.offline_seconds;
  j["online_seconds_median"] = result.online_seconds_median;
  j["policy_calls"] = result.policy_calls;
  j["fallback_activations"] = result.fallback_activations;
  auto& seeds = j["outcomes"] = nlohmann::json::array();
  for (const auto& o : result.outcomes) {
    seeds.push_back({{"x0", std::vector<double>(o.x0.data(), o.x0.data() + o.x0.size())},
                     {"cost", o.cost},
                     {"min_constraint", o.min_constraint},
                     {"success", o.success}});
  }
  return j;
}

MethodResult method_result_from_json(const nlohmann::json& j) {
  try {
    MethodResult r;
    r.method = j.at("method").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.kappa = j.at("kappa").get<double>();
    r.offline_seconds = j.value("offline_seconds", 0.0);
    r.online_seconds_median = j.value("online_seconds_median", 0.0);
    r.policy_calls = j.value("policy_calls", std::size_t{0});
    r.fallback_activations = j.value("fallback_activations", std::size_t{0});
    for (const auto& o : j.at("outcomes")) {
      SeedOutcome s;
      const auto x0 = o.at("x0").get<std::vector<double>>();
      s.x0 = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
      s.cost = o.at("cost").get<double>();
      s.min_constraint = o.at("min_constraint").get<double>();
      s.success = o.at("success").get<bool>();
      r.outcomes.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("rollout result: ") + e.what());
  }
}

RolloutMetrics compare(const std::vector<MethodResult>& results, const std::string& reference) {
  const auto ref = std::find_if(results.begin(), results.end(),
                                [&](const MethodResult& r) { return r.method == reference; });
  if (ref == results.end()) throw ConfigError("compare: reference method '" + reference + "' missing");
  for (const auto& r : results) {
    if (r.config_hash != ref->config_hash) {
      throw ConfigError("compare: '" + r.method + "' was produced under a different config");
    }
    if (r.outcomes.size() != ref->outcomes.size()) {
      throw ConfigError("compare: '" + r.method + "' has a different seed list");
    }
    for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
      if (r.outcomes[i].x0 != ref->outcomes[i].x0) {
        throw ConfigError("compare: '" + r.method + "' started from different initial states");
      }
    }
  }

  RolloutMetrics m;
  m.reference = reference;
  m.config_hash = ref->config_hash;
  m.kappa = ref->kappa;
  for (const auto& r : results) {
    MethodComparison c;
    c.method = r.method;
    c.success_rate = r.success_rate();
    c.offline_seconds = r.offline_seconds;
    c.online_seconds_median = r.online_seconds_median;
    if (r.method != reference) {
      std::size_t higher = 0;
      double excess = 0.0;
      for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
        const auto& ours = ref->outcomes[i];
        const auto& theirs = r.outcomes[i];
        if (!(ours.success && theirs.success)) continue;
        ++c.common_success;
        if (theirs.cost > ours.cost + 1e-9) ++higher;
        excess += (theirs.cost - ours.cost) / ours.cost;
      }
      if (c.common_success > 0) {
        c.fraction_higher_cost = static_cast<double>(higher) / c.common_success;
        c.mean_relative_excess = excess / c.common_success;
      }
    } else {
      for (const auto& o : r.outcomes) c.common_success += o.success ? 1 : 0;
    }
    m.methods.push_back(std::move(c));
  }
  return m;
}

nlohmann::json to_json(const RolloutMetrics& metrics) {
  nlohmann::json j;
  j["reference"] = metrics.reference;
  j["config_hash"] = metrics.config_hash;
  j["kappa"] = metrics.kappa;
  auto& rows = j["methods"] = nlohmann::json::array();
  for (const auto& c : metrics.methods) {
    nlohmann::json row;
    row["method"] = c.method;
    row["rollout_success_rate"] = c.success_rate;
    row["common_success_seeds"] = c.common_success;
    row["pct_trajectories_higher_cost"] =
        c.fraction_higher_cost ? nlohmann::json(100.0 * *c.fraction_higher_cost) : nlohmann::json(nullptr);
    row["mean_pct_higher_cost"] =
        c.mean_relative_excess ? nlohmann::json(100.0 * *c.mean_relative_excess) : nlohmann::json(nullptr);
    row["offline_seconds"] = c.offline_seconds;
    row["online_seconds_median"] = c.online_seconds_median;
    rows.push_back(std::move(row));
  }
  return j;
}

std::string format_table(const RolloutMetrics& metrics) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "method" << std::right << std::setw(12) << "success";
  const bool pairwise = metrics.methods.size() > 1;
  if (pairwise) out << std::setw(14) << "% higher" << std::setw(14) << "mean % more";
  out << std::setw(14) << "offline [s]" << std::setw(14) << "online [ms]" << '\n';
  out << std::fixed;
  for (const auto& c : metrics.methods) {
    out << std::left << std::setw(16) << c.method << std::right << std::setw(11)
        << std::setprecision(1) << 100.0 * c.success_rate << '%';
    if (pairwise) {
      if (c.fraction_higher_cost) {
        out << std::setw(13) << std::setprecision(2) << 100.0 * *c.fraction_higher_cost << '%'
            << std::setw(13) << 100.0 * *c.mean_relative_excess << '%';
      } else {
        out << std::setw(14) << "-" << std::setw(14) << "-";
      }
    }
    out << std::setw(14) << std::setprecision(2) << c.offline_seconds << std::setw(14)
        << std::setprecision(4) << 1e3 * c.online_seconds_median << '\n';
  }
  return out.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ProblemSpec& spec,
                          const ValueField* vs, const ValueField* v) {
  out << "t,x1,x2,u1,u2,l,V_s,V\n";
  out << std::setprecision(17);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const StateVec& x = traj.states[k];
    const double t = traj.times[k];
    const bool has_u = k < traj.controls.size();
    out << t << ',' << x[0] << ',' << x[1] << ',' << (has_u ? traj.controls[k][0] : nan) << ','
        << (has_u ? traj.controls[k][1] : nan) << ',' << spec.constraint(x) << ','
        << (vs ? value_at(*vs, x, t).value : nan) << ',' << (v ? value_at(*v, x, t).value : nan)
        << '\n';
  }
}

std::vector<Segment> zero_level_segments(const GridSpec& grid, const std::vector<double>& slice) {
  if (grid.dims() != 2) throw ConfigError("zero_level_segments: needs a 2D grid");
  std::vector<Segment> segs;
  const int nx = grid.n()[0];
  const int ny = grid.n()[1];
  auto val = [&](int i, int j) { return slice[static_cast<std::size_t>(i) * ny + j]; };
  auto cross = [&](int i0, int j0, int i1, int j1) {
    const double a = val(i0, j0), b = val(i1, j1);
    const double s = a / (a - b);
    return std::pair<double, double>{
        grid.coordinate(0, i0) + s * (grid.coordinate(0, i1) - grid.coordinate(0, i0)),
        grid.coordinate(1, j0) + s * (grid.coordinate(1, j1) - grid.coordinate(1, j0))};
  };
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      // Corners counter-clockwise from (i, j).
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      std::vector<std::pair<double, double>> pts;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        const bool ia = val(ci[a], cj[a]) >= 0.0;
        const bool ib = val(ci[b], cj[b]) >= 0.0;
        if (ia != ib) pts.push_back(cross(ci[a], cj[a], ci[b], cj[b]));
      }
      if (pts.size() == 2) {
        segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
      } else if (pts.size() == 4) {
        // Saddle: pair edges by the sign of the cell centre.
        const double centre = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
        const bool corner0_in = val(i, j) >= 0.0;
        // Centre on corner 0's side: corners 1 and 3 are cut off.
        if ((centre >= 0.0) == corner0_in) {
          segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
          segs.push_back({pts[2].first, pts[2].second, pts[3].first, pts[3].second});
        } else {
          segs.push_back({pts[0].first, pts[0].second, pts[3].first, pts[3].second});
          segs.push_back({pts[1].first, pts[1].second, pts[2].first, pts[2].second});
        }
      }
    }
  }
  return segs;
}

}  // namespace cosafe
