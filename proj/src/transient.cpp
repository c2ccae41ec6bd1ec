// Copyright 2026 The hazchain authors
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

#include "hazchain/transient.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "hazchain/errors.hpp"

namespace hazchain {

TimeGrid::TimeGrid(std::vector<double> pts) : points(std::move(pts)) {
  if (points.empty()) throw std::invalid_argument("time grid must not be empty");
  double prev = 0.0;
  for (double t : points) {
    if (!(t > prev) || !std::isfinite(t))
      throw std::invalid_argument(
          "time grid must be strictly increasing and > 0 (offending point " +
          std::to_string(t) + ")");
    prev = t;
  }
}

TimeGrid TimeGrid::regular(double end_hours, double step_hours) {
  if (!(end_hours > 0.0) || !(step_hours > 0.0))
    throw std::invalid_argument("grid end and step must be > 0");
  std::vector<double> pts;
  for (double t = step_hours; t < end_hours; t += step_hours) pts.push_back(t);
  if (pts.empty() || pts.back() < end_hours) pts.push_back(end_hours);
  return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::single(double t_hours) { return TimeGrid({t_hours}); }

namespace {

// log of the Poisson pmf, written to stay accurate near the mode where
// k*log(lambda) and lgamma(k+1) would cancel catastrophically for large
// lambda. Uses the Stirling series for k >= 16.
double poisson_log_pmf(int64_t k, double lambda) {
  const double kd = static_cast<double>(k);
  if (k < 16) return kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0);
  // log pmf = k*log(lambda/k) + (k - lambda) - log(k!) with Stirling's
  // series for log(k!); the first two terms fold into k*(log1p(u) - u)
  // with u = (lambda - k)/k, which stays accurate when k is near lambda.
  const double u = (lambda - kd) / kd;
  const double k2 = kd * kd;
  const double stirling_tail =
      (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * k2)) / k2) / kd;
  return kd * (std::log1p(u) - u) - 0.5 * std::log(2.0 * M_PI * kd) -
         stirling_tail;
}

struct PoissonWindow {
  int64_t left = 0;
  int64_t right = 0;
  double weight_at_left = 1.0;  // pmf(left; lambda)
};

// Truncation window [left, right] whose discarded tails are certified below
// eps/2 each by geometric domination of the pmf ratio.
PoissonWindow poisson_window(double lambda, double eps) {
  PoissonWindow w;
  if (lambda <= 0.0) return w;
  const int64_t mode = static_cast<int64_t>(std::floor(lambda));
  const double half = eps / 2.0;

  double pmf = std::exp(poisson_log_pmf(mode, lambda));

  // Right edge.
  int64_t k = mode;
  double wk = pmf;
  while (true) {
    const double next = wk * (lambda / static_cast<double>(k + 1));
    if (static_cast<double>(k + 2) > lambda) {
      const double q = lambda / static_cast<double>(k + 2);
      if (next / (1.0 - q) <= half) {
        w.right = k;
        break;
      }
    }
    wk = next;
    ++k;
  }

  // Left edge.
  k = mode;
  wk = pmf;
  while (k > 0) {
    const double prev = wk * (static_cast<double>(k) / lambda);
    const double q = static_cast<double>(k - 1) / lambda;
    if (prev / (1.0 - q) <= half) break;
    wk = prev;
    --k;
  }
  w.left = k;
  w.weight_at_left = wk;
  return w;
}

// v_out = v_in * P, with P stored transposed (PT[j*n+i] = P[i][j]).
template <int N>
void matvec_fixed(const double* __restrict pt, const double* __restrict v,
                  double* __restrict out) {
  for (int j = 0; j < N; ++j) {
    const double* __restrict row = pt + j * N;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += row[i] * v[i];
    out[j] = acc;
  }
}

void matvec(const double* __restrict pt, const double* __restrict v,
            double* __restrict out, int n) {
  if (n == 18) {
    matvec_fixed<18>(pt, v, out);
    return;
  }
  for (int j = 0; j < n; ++j) {
    const double* __restrict row = pt + j * n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += row[i] * v[i];
    out[j] = acc;
  }
}

}  // namespace

TransientResult uniformize(const Ctmc& chain, const TimeGrid& grid,
                           const SolverOptions& opts) {
  if (!(opts.truncation_epsilon > 0.0) || !(opts.truncation_epsilon < 1e-3))
    throw std::invalid_argument("truncation_epsilon must be in (0, 1e-3)");
  if (grid.points.empty()) throw std::invalid_argument("empty time grid");

  const int n = chain.num_states();
  const size_t ns = static_cast<size_t>(n);
  const size_t npts = grid.size();

  TransientResult result;
  result.grid = grid;
  result.occupancy.assign(npts, std::vector<double>(ns, 0.0));

  const std::vector<double> exit = chain.exit_rates();
  const double max_exit = exit.empty() ? 0.0 : *std::max_element(exit.begin(), exit.end());

  if (max_exit <= 0.0) {
    for (auto& row : result.occupancy) row = chain.initial;
  } else {
    const double lambda_rate = 1.02 * max_exit;

    // Uniformized kernel, transposed. Diagonal set to the exact complement of
    // the stored off-diagonal mass so each row sums to 1 in floating point.
    std::vector<double> pt(ns * ns, 0.0);
    for (const auto& t : chain.transitions)
      pt[static_cast<size_t>(t.to) * ns + static_cast<size_t>(t.from)] +=
          t.rate / lambda_rate;
    for (size_t i = 0; i < ns; ++i) {
      double off = 0.0;
      for (size_t j = 0; j < ns; ++j)
        if (j != i) off += pt[j * ns + i];
      pt[i * ns + i] = 1.0 - off;
    }

    std::vector<PoissonWindow> windows(npts);
    int64_t k_max = 0;
    for (size_t j = 0; j < npts; ++j) {
      windows[j] = poisson_window(lambda_rate * grid.points[j], opts.truncation_epsilon);
      k_max = std::max(k_max, windows[j].right);
    }
    if (k_max > opts.max_uniformization_steps) {
      int worst = static_cast<int>(std::max_element(exit.begin(), exit.end()) -
                                   exit.begin());
      throw SolverError(
          "uniformization needs " + std::to_string(k_max) + " steps (cap " +
          std::to_string(opts.max_uniformization_steps) + "); Lambda = " +
          std::to_string(lambda_rate) + " 1/h driven by state " +
          chain.states[static_cast<size_t>(worst)].name() + " with exit rate " +
          std::to_string(max_exit) + " 1/h");
    }

    std::vector<double> v = chain.initial;
    std::vector<double> vnext(ns, 0.0);
    std::vector<double> weight(npts, 0.0);
    size_t lo = 0, hi = 0;  // active window band: grid points lo..hi-1

    for (int64_t k = 0;; ++k) {
      while (hi < npts && windows[hi].left <= k) {
        weight[hi] = windows[hi].weight_at_left;
        ++hi;
      }
      while (lo < hi && windows[lo].right < k) ++lo;
      for (size_t j = lo; j < hi; ++j) {
        const double w = weight[j];
        double* acc = result.occupancy[j].data();
        for (size_t s = 0; s < ns; ++s) acc[s] += w * v[s];
        weight[j] = w * (lambda_rate * grid.points[j] / static_cast<double>(k + 1));
      }
      if (k == k_max) break;
      matvec(pt.data(), v.data(), vnext.data(), n);
      v.swap(vnext);
      if (((k + 1) & 1023) == 0) {
        // The kernel is stochastic, so the vector mass is 1 in exact
        // arithmetic; rescale to stop rounding drift from compounding.
        double mass = std::accumulate(v.begin(), v.end(), 0.0);
        if (mass > 0.0) {
          const double inv = 1.0 / mass;
          for (double& x : v) x *= inv;
        }
      }
    }
  }

  const int serious = chain.accident_index(AccidentClass::Serious);
  const int minor = chain.accident_index(AccidentClass::Minor);
  result.p_serious.resize(npts);
  result.p_minor.resize(npts);
  result.p_success.resize(npts);
  for (size_t j = 0; j < npts; ++j) {
    result.p_serious[j] =
        serious >= 0 ? result.occupancy[j][static_cast<size_t>(serious)] : 0.0;
    result.p_minor[j] =
        minor >= 0 ? result.occupancy[j][static_cast<size_t>(minor)] : 0.0;
    result.p_success[j] = 1.0 - result.p_serious[j] - result.p_minor[j];
  }
  return result;
}

OutcomeProbs mission_outcome_probs(const Ctmc& chain, double mission_hours,
                                   const SolverOptions& opts) {
  if (!(mission_hours > 0.0))
    throw std::invalid_argument("mission_hours must be > 0");
  TransientResult r = uniformize(chain, TimeGrid::single(mission_hours), opts);
  return {r.p_serious[0], r.p_minor[0], r.p_success[0]};
}

}  // namespace hazchain
