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

#include "cosafe/controller.hpp"

namespace cosafe {

ControlVec minimize_over_safe_set(const SafeControlSet& set, const Vec& c,
                                  const std::function<double(const ControlVec&)>& cost,
                                  int iterations, double step_tol) {
  ControlVec u = min_linear_over_safe_set(set, c);
  if (set.kind == SafeControlSet::Kind::kFallback) return u;
  auto objective = [&](const ControlVec& w) { return c.dot(w) + cost(w); };
  constexpr double kFd = 1e-6;
  double f = objective(u);
  for (int it = 0; it < iterations; ++it) {
    Vec g = c;
    for (int i = 0; i < u.size(); ++i) {
      ControlVec up = u, dn = u;
      up[i] += kFd;
      dn[i] -= kFd;
      g[i] += (cost(up) - cost(dn)) / (2.0 * kFd);
    }
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      const ControlVec trial = project_onto_safe_set(set, u - step * g);
      const double ft = objective(trial);
      if (ft <= f - 1e-4 * g.dot(u - trial)) {
        moved = (trial - u).norm() > step_tol;
        u = trial;
        f = ft;
        break;
      }
    }
    if (!moved) break;
  }
  return u;
}

ControlDecision synthesize(const ValueField& v, const ValueField& vs, const SystemModel& system,
                           const ProblemSpec& spec, const StateVec& x, double t,
                           const SafeControlOptions& options) {
  const SafeControlSet safe = query_safe_controls(vs, system, x, t, options);
  const Vec grad = gradient_at(v, x, t).gradient;
  const StateVec f1 = system.drift(x);
  const Mat f2 = system.control_jacobian(x);
  const Vec c = f2.transpose() * grad;

  ControlDecision out;
  if (spec.cost_depends_on_control) {
    out.u = minimize_over_safe_set(
        safe, c, [&](const ControlVec& w) { return spec.running_cost(x, w); });
  } else {
    out.u = min_linear_over_safe_set(safe, c);
  }
  switch (safe.kind) {
    case SafeControlSet::Kind::kFull:
      out.active_constraint = ControlDecision::Active::kNone;
      break;
    case SafeControlSet::Kind::kBand:
      out.active_constraint = ControlDecision::Active::kBand;
      break;
    case SafeControlSet::Kind::kFallback:
      out.active_constraint = ControlDecision::Active::kFallback;
      break;
  }
  out.objective = grad.dot(f1 + f2 * out.u) + spec.running_cost(x, out.u);
  return out;
}

Policy make_controller_policy(const ValueField& v, const ValueField& vs,
                              const SystemModel& system, const ProblemSpec& spec,
                              const SafeControlOptions& options, PolicyStats* stats) {
  return [&v, &vs, &system, &spec, options, stats](const StateVec& x, double t) {
    ControlDecision d = synthesize(v, vs, system, spec, x, t, options);
    if (stats != nullptr && d.active_constraint == ControlDecision::Active::kFallback) {
      ++stats->fallbacks;
    }
    return d.u;
  };
}

}  // namespace cosafe
