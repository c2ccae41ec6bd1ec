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

#include "hazchain/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <thread>

#include "hazchain/errors.hpp"
#include "hazchain/rng.hpp"

namespace hazchain {

namespace {

// Expected-jump bound above which Auto switches from direct event-by-event
// simulation to the thinning sampler.
constexpr double kDirectJumpBudget = 50000.0;

// Base ladder step: 2^-25 h (~0.1 ms), far below any sojourn of interest.
constexpr double kLadderStep = 0x1.0p-25;
constexpr double kInvLadderStep = 0x1.0p25;

// Outgoing-arc tables in CSR form with cumulative rates for categorical
// destination draws.
struct ArcTable {
  std::vector<int> offset;   // n + 1
  std::vector<double> cum;   // cumulative rates within each row
  std::vector<int> dest;
  std::vector<double> exit;  // total rate per state

  void build(const Ctmc& chain, bool benign_only) {
    const int n = chain.num_states();
    offset.assign(static_cast<size_t>(n) + 1, 0);
    exit.assign(static_cast<size_t>(n), 0.0);
    for (const auto& t : chain.transitions) {
      if (benign_only && chain.is_absorbing(t.to)) continue;
      ++offset[static_cast<size_t>(t.from) + 1];
    }
    for (int i = 0; i < n; ++i) offset[static_cast<size_t>(i) + 1] += offset[static_cast<size_t>(i)];
    cum.assign(static_cast<size_t>(offset.back()), 0.0);
    dest.assign(static_cast<size_t>(offset.back()), 0);
    std::vector<int> fill(static_cast<size_t>(n), 0);
    for (const auto& t : chain.transitions) {
      if (benign_only && chain.is_absorbing(t.to)) continue;
      const size_t f = static_cast<size_t>(t.from);
      const size_t pos = static_cast<size_t>(offset[f] + fill[f]);
      exit[f] += t.rate;
      cum[pos] = exit[f];
      dest[pos] = t.to;
      ++fill[f];
    }
  }

  int sample_dest(Rng& rng, int state) const {
    const int b = offset[static_cast<size_t>(state)];
    const int e = offset[static_cast<size_t>(state) + 1];
    const double u = rng.uniform01() * cum[static_cast<size_t>(e) - 1];
    int i = b;
    while (i < e - 1 && cum[static_cast<size_t>(i)] <= u) ++i;
    return dest[static_cast<size_t>(i)];
  }
};

struct McTables {
  int n = 0;
  double mission_hours = 0.0;

  std::vector<double> init_cum;
  int init_atom = -1;  // all initial mass on one state

  ArcTable full;    // direct engine
  ArcTable benign;  // thinning engine: accident arcs removed

  std::vector<uint8_t> absorbing;
  std::vector<uint8_t> serious;     // absorbing state of the serious class
  std::vector<double> kappa_ser;    // accident rate toward Serious per state
  std::vector<double> kappa_tot;    // total accident rate per state
  double kappa_max = 0.0;

  // ladder[l] holds cumulative rows of the benign transition matrix over a
  // gap of kLadderStep * 2^l hours.
  std::vector<std::vector<double>> ladder;
};

int sample_initial(const McTables& t, Rng& rng) {
  if (t.init_atom >= 0) return t.init_atom;
  const double u = rng.uniform01();
  int i = 0;
  const int n = t.n;
  while (i < n - 1 && t.init_cum[static_cast<size_t>(i)] <= u) ++i;
  return i;
}

int sample_row(const std::vector<double>& cum_matrix, int n, int state, Rng& rng) {
  const double* row = cum_matrix.data() + static_cast<size_t>(state) * static_cast<size_t>(n);
  const double u = rng.uniform01();
  int j = 0;
  while (j < n - 1 && row[j] <= u) ++j;
  return j;
}

// Benign transition matrix over the base step by a truncated Taylor series
// of exp(Q*dt); the truncation remainder at these step sizes is far below
// double precision.
std::vector<double> base_step_matrix(const McTables& t, const Ctmc& chain) {
  const size_t n = static_cast<size_t>(t.n);
  std::vector<double> q(n * n, 0.0);
  for (const auto& tr : chain.transitions) {
    if (chain.is_absorbing(tr.to)) continue;
    q[static_cast<size_t>(tr.from) * n + static_cast<size_t>(tr.to)] += tr.rate * kLadderStep;
    q[static_cast<size_t>(tr.from) * n + static_cast<size_t>(tr.from)] -= tr.rate * kLadderStep;
  }
  // Horner form of sum_{k<=8} A^k / k!
  std::vector<double> p(n * n, 0.0), tmp(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) p[i * n + i] = 1.0;
  for (int k = 8; k >= 1; --k) {
    // tmp = q * p / k + I
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (size_t m = 0; m < n; ++m) acc += q[i * n + m] * p[m * n + j];
        tmp[i * n + j] = acc / static_cast<double>(k) + (i == j ? 1.0 : 0.0);
      }
    }
    p.swap(tmp);
  }
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (p[i * n + j] < 0.0) p[i * n + j] = 0.0;
      sum += p[i * n + j];
    }
    for (size_t j = 0; j < n; ++j) p[i * n + j] /= sum;
  }
  return p;
}

void build_ladder(McTables& t, const Ctmc& chain) {
  const size_t n = static_cast<size_t>(t.n);
  const uint64_t max_steps =
      static_cast<uint64_t>(std::floor(t.mission_hours * kInvLadderStep));
  const int levels = max_steps == 0 ? 0 : std::bit_width(max_steps);
  t.ladder.clear();
  if (levels == 0) return;

  std::vector<double> cur = base_step_matrix(t, chain);
  std::vector<double> next(n * n, 0.0);
  t.ladder.reserve(static_cast<size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    std::vector<double> cum(n * n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) {
        acc += cur[i * n + j];
        cum[i * n + j] = acc;
      }
    }
    t.ladder.push_back(std::move(cum));
    if (l + 1 == levels) break;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (size_t m = 0; m < n; ++m) acc += cur[i * n + m] * cur[m * n + j];
        next[i * n + j] = acc;
      }
    }
    cur.swap(next);
    for (size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (size_t j = 0; j < n; ++j) sum += cur[i * n + j];
      for (size_t j = 0; j < n; ++j) cur[i * n + j] /= sum;
    }
  }
}

McTables build_tables(const Ctmc& chain, double mission_hours, bool thinning) {
  McTables t;
  t.n = chain.num_states();
  t.mission_hours = mission_hours;
  const size_t n = static_cast<size_t>(t.n);

  t.init_cum.resize(n);
  double acc = 0.0;
  t.init_atom = -1;
  for (size_t i = 0; i < n; ++i) {
    if (chain.initial[i] == 1.0 && acc == 0.0) t.init_atom = static_cast<int>(i);
    acc += chain.initial[i];
    t.init_cum[i] = acc;
  }
  if (acc > 0.0 && t.init_atom < 0)
    for (size_t i = 0; i < n; ++i) t.init_cum[i] /= acc;

  t.absorbing.assign(n, 0);
  t.serious.assign(n, 0);
  for (int a : chain.absorbing) {
    t.absorbing[static_cast<size_t>(a)] = 1;
    const auto& s = chain.states[static_cast<size_t>(a)];
    if (s.kind == FlatState::Kind::Accident && s.accident == AccidentClass::Serious)
      t.serious[static_cast<size_t>(a)] = 1;
  }

  t.full.build(chain, /*benign_only=*/false);

  if (thinning) {
    t.benign.build(chain, /*benign_only=*/true);
    t.kappa_ser.assign(n, 0.0);
    t.kappa_tot.assign(n, 0.0);
    for (const auto& tr : chain.transitions) {
      if (!chain.is_absorbing(tr.to)) continue;
      t.kappa_tot[static_cast<size_t>(tr.from)] += tr.rate;
      if (t.serious[static_cast<size_t>(tr.to)])
        t.kappa_ser[static_cast<size_t>(tr.from)] += tr.rate;
    }
    t.kappa_max = *std::max_element(t.kappa_tot.begin(), t.kappa_tot.end());
    if (t.kappa_max > 0.0) build_ladder(t, chain);
  }
  return t;
}

MissionOutcome run_direct(const McTables& t, const Ctmc& chain, Rng& rng,
                          std::vector<TrajectoryEvent>* trajectory,
                          size_t max_trajectory_events) {
  int state = sample_initial(t, rng);
  if (t.absorbing[static_cast<size_t>(state)])
    throw ValidationError("initial state is absorbing");
  double now = 0.0;
  if (trajectory && trajectory->size() < max_trajectory_events)
    trajectory->push_back({0.0, state});
  while (true) {
    const double q = t.full.exit[static_cast<size_t>(state)];
    if (q <= 0.0)
      throw ValidationError("non-absorbing state with no outgoing transitions: " +
                            chain.states[static_cast<size_t>(state)].name());
    now += rng.exponential(q);
    if (now > t.mission_hours) return {MissionOutcome::Kind::Success, {}};
    state = t.full.sample_dest(rng, state);
    if (trajectory && trajectory->size() < max_trajectory_events)
      trajectory->push_back({now, state});
    if (t.absorbing[static_cast<size_t>(state)]) {
      return {t.serious[static_cast<size_t>(state)]
                  ? MissionOutcome::Kind::SeriousAccident
                  : MissionOutcome::Kind::MinorAccident,
              now};
    }
  }
}

// Advances the benign chain over `gap` hours: dyadic ladder steps for the
// bulk, direct jumps for the sub-step remainder.
int advance_benign(const McTables& t, Rng& rng, int state, double gap) {
  uint64_t steps = static_cast<uint64_t>(std::floor(gap * kInvLadderStep));
  if (steps > 0) {
    for (int l = std::bit_width(steps) - 1; l >= 0; --l) {
      if (steps & (uint64_t{1} << l))
        state = sample_row(t.ladder[static_cast<size_t>(l)], t.n, state, rng);
    }
  }
  double remaining = gap - static_cast<double>(steps) * kLadderStep;
  while (true) {
    const double q = t.benign.exit[static_cast<size_t>(state)];
    if (q <= 0.0) return state;
    const double dt = rng.exponential(q);
    if (dt > remaining) return state;
    remaining -= dt;
    state = t.benign.sample_dest(rng, state);
  }
}

// Exact long-horizon mission: accident clocks across all states are dominated
// by a Poisson(kappa_max) candidate process; at each candidate the chain state
// is sampled from the benign dynamics and the candidate fires with probability
// kappa(state)/kappa_max, choosing the class by the per-class rate split.
MissionOutcome run_thinning(const McTables& t, Rng& rng) {
  int state = sample_initial(t, rng);
  if (t.kappa_max <= 0.0) return {MissionOutcome::Kind::Success, {}};
  double now = 0.0;
  while (true) {
    const double gap = rng.exponential(t.kappa_max);
    if (now + gap > t.mission_hours) return {MissionOutcome::Kind::Success, {}};
    state = advance_benign(t, rng, state, gap);
    now += gap;
    const double u = rng.uniform01() * t.kappa_max;
    if (u < t.kappa_tot[static_cast<size_t>(state)]) {
      return {u < t.kappa_ser[static_cast<size_t>(state)]
                  ? MissionOutcome::Kind::SeriousAccident
                  : MissionOutcome::Kind::MinorAccident,
              now};
    }
  }
}

}  // namespace

McEngine resolve_engine(const Ctmc& chain, double mission_hours, McEngine requested) {
  if (requested != McEngine::Auto) return requested;
  double max_exit = 0.0;
  for (double q : chain.exit_rates()) max_exit = std::max(max_exit, q);
  return max_exit * mission_hours <= kDirectJumpBudget ? McEngine::Direct
                                                       : McEngine::Thinning;
}

MissionOutcome simulate_mission(const Ctmc& chain, double mission_hours,
                                uint64_t seed,
                                std::vector<TrajectoryEvent>* trajectory,
                                size_t max_trajectory_events) {
  if (!(mission_hours > 0.0))
    throw std::invalid_argument("mission_hours must be > 0");
  McTables t = build_tables(chain, mission_hours, /*thinning=*/false);
  Rng rng(seed, 0);
  return run_direct(t, chain, rng, trajectory, max_trajectory_events);
}

SimEstimate estimate(const Ctmc& chain, double mission_hours, uint64_t n,
                     uint64_t seed, int threads, McEngine engine,
                     std::vector<MissionOutcome>* outcomes) {
  if (!(mission_hours > 0.0))
    throw std::invalid_argument("mission_hours must be > 0");
  if (n < 1) throw std::invalid_argument("replication count must be >= 1");

  const McEngine chosen = resolve_engine(chain, mission_hours, engine);

  // Reachable dead ends break the mission semantics for either engine.
  {
    CtmcDiagnostics d = validate(chain);
    for (const auto& dead : d.zero_exit_nonabsorbing) {
      bool unreachable = false;
      for (const auto& u : d.unreachable_states) unreachable |= (u == dead);
      if (!unreachable)
        throw ValidationError("non-absorbing state with no outgoing transitions: " + dead);
    }
  }

  const McTables tables =
      build_tables(chain, mission_hours, chosen == McEngine::Thinning);

  if (outcomes) outcomes->assign(n, MissionOutcome{});

  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(
      std::min<uint64_t>(static_cast<uint64_t>(workers), n));

  struct Counts {
    uint64_t serious = 0, minor = 0, success = 0;
  };
  auto run_range = [&](uint64_t begin, uint64_t end) {
    Counts c;
    for (uint64_t i = begin; i < end; ++i) {
      Rng rng(seed, i);
      MissionOutcome out = chosen == McEngine::Thinning
                               ? run_thinning(tables, rng)
                               : run_direct(tables, chain, rng, nullptr, 0);
      switch (out.kind) {
        case MissionOutcome::Kind::SeriousAccident: ++c.serious; break;
        case MissionOutcome::Kind::MinorAccident: ++c.minor; break;
        case MissionOutcome::Kind::Success: ++c.success; break;
      }
      if (outcomes) (*outcomes)[i] = out;
    }
    return c;
  };

  Counts total;
  if (workers == 1) {
    total = run_range(0, n);
  } else {
    std::vector<std::future<Counts>> jobs;
    jobs.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const uint64_t begin = n * static_cast<uint64_t>(w) / static_cast<uint64_t>(workers);
      const uint64_t end = n * (static_cast<uint64_t>(w) + 1) / static_cast<uint64_t>(workers);
      jobs.push_back(std::async(std::launch::async, run_range, begin, end));
    }
    for (auto& j : jobs) {
      Counts c = j.get();
      total.serious += c.serious;
      total.minor += c.minor;
      total.success += c.success;
    }
  }

  SimEstimate est;
  est.n = n;
  est.n_serious = total.serious;
  est.n_minor = total.minor;
  est.n_success = total.success;
  est.seed = seed;
  est.mission_hours = mission_hours;
  const double dn = static_cast<double>(n);
  est.p_serious = static_cast<double>(total.serious) / dn;
  est.p_minor = static_cast<double>(total.minor) / dn;
  est.p_success = 1.0 - est.p_serious - est.p_minor;
  auto se = [dn](double p) { return std::sqrt(p * (1.0 - p) / dn); };
  est.se_serious = se(est.p_serious);
  est.se_minor = se(est.p_minor);
  est.se_success = se(est.p_success);
  return est;
}

}  // namespace hazchain
