// Copyright 2026 The robopt Authors
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

// Two-period inventory model with ball-shaped demand and a closed-form
// hindsight oracle.

#ifndef ROBOPT_TESTS_INVENTORY_FIXTURE_HPP_
#define ROBOPT_TESTS_INVENTORY_FIXTURE_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "robopt/model.hpp"
#include "robopt/uncertainty.hpp"

namespace robopt {
namespace testing {

inline constexpr double kStock = 5.0;
inline constexpr double kHold = 1.0;
inline constexpr double kBack = 2.0;
inline constexpr double kCap2 = 3.0;

// Variables: q1, q2, c1, c2. Demand d = zeta in Ball((5, 5), 5).
// c_t >= h I_t and c_t >= -b I_t with I_t = x0 + sum_{i <= t} (q_i - d_i).
inline UncertainLP InventoryModel(bool adjustable_second_order = false) {
  UncertainLP m;
  const int q1 = m.AddVariable("q1", 0.0, kInfinity);
  const int q2 = m.AddVariable("q2", 0.0, kCap2);
  const int c1 = m.AddVariable("c1", -kInfinity, kInfinity);
  const int c2 = m.AddVariable("c2", -kInfinity, kInfinity);
  if (adjustable_second_order) {
    AdjustableRule r;
    r.set = "D";
    r.set_indices = {0};
    m.variables[q2].adjustable = r;
  }
  m.objective.sense = ObjectiveSense::kMinimize;
  m.objective.c = {{c1, 1.0}, {c2, 1.0}};
  m.sets["D"] = MakeBall({5.0, 5.0}, 5.0);
  for (int t = 0; t < 2; ++t) {
    const int c = t == 0 ? c1 : c2;
    for (double slope : {kHold, -kBack}) {
      // c - slope * (q1 + .. + qt) >= slope * (x0 - d1 - .. - dt).
      UncertainConstraint row;
      row.name = std::string(slope > 0 ? "holding" : "backlog") + std::to_string(t + 1);
      row.sense = RowSense::kGreaterEqual;
      row.set = "D";
      row.a[c] = 1.0;
      row.a[q1] = -slope;
      if (t == 1) row.a[q2] = -slope;
      row.rhs = slope * kStock;
      for (int k = 0; k <= t; ++k) row.rhs_factor[k] = -slope;
      m.constraints.push_back(row);
    }
  }
  m.stages = {Stage{{q1}, {}}, Stage{{q2}, {0}}};
  return m;
}

inline double PeriodCost(double inventory) {
  return std::max(kHold * inventory, -kBack * inventory);
}

inline double InventoryCost(double q1, double q2, const Vector& d) {
  const double i1 = kStock + q1 - d[0];
  return PeriodCost(i1) + PeriodCost(i1 + q2 - d[1]);
}

// Cost of the best q2 once q1 and d are known.
inline double CostGivenFirst(double q1, const Vector& d) {
  const double i1 = kStock + q1 - d[0];
  const double q2 = std::clamp(d[1] - i1, 0.0, kCap2);
  return InventoryCost(q1, q2, d);
}

// Hindsight optimum: the cost is piecewise linear in q1 with kinks where an
// inventory level crosses zero or q2 hits a bound.
inline double HindsightCost(const Vector& d) {
  double best = CostGivenFirst(0.0, d);
  for (double q1 : {d[0] - kStock, d[0] + d[1] - kStock, d[0] + d[1] - kStock - kCap2}) {
    if (q1 >= 0.0) best = std::min(best, CostGivenFirst(q1, d));
  }
  return best;
}

}  // namespace testing
}  // namespace robopt

#endif  // ROBOPT_TESTS_INVENTORY_FIXTURE_HPP_
