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

#include "hazchain/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "hazchain/errors.hpp"

namespace hazchain {

HazardParams& ModelConfig::hazard_for(HighLevelState s) {
  int slot = braking_slot(s);
  if (slot < 0)
    throw ValidationError("state " + s.name() + " is not hazardous");
  return hazard[static_cast<size_t>(slot)];
}

const HazardParams& ModelConfig::hazard_for(HighLevelState s) const {
  return const_cast<ModelConfig*>(this)->hazard_for(s);
}

bool Ctmc::is_absorbing(int state_index) const {
  return std::binary_search(absorbing.begin(), absorbing.end(), state_index);
}

int Ctmc::index_of(const FlatState& s) const {
  for (int i = 0; i < num_states(); ++i)
    if (states[static_cast<size_t>(i)] == s) return i;
  return -1;
}

int Ctmc::accident_index(AccidentClass c) const {
  return index_of(FlatState::make_accident(c));
}

std::vector<double> Ctmc::exit_rates() const {
  std::vector<double> out(states.size(), 0.0);
  for (const auto& t : transitions) out[static_cast<size_t>(t.from)] += t.rate;
  return out;
}

std::vector<FlatState> enumerate_states(const ModelConfig&) {
  std::vector<FlatState> out;
  out.reserve(18);
  for (auto s : non_braking_states()) out.push_back(FlatState::non_braking(s));
  for (auto s : braking_states()) {
    out.push_back(FlatState::detected(s));
    out.push_back(FlatState::overlooked(s));
    out.push_back(FlatState::late_detected(s));
  }
  out.push_back(FlatState::make_accident(AccidentClass::Serious));
  out.push_back(FlatState::make_accident(AccidentClass::Minor));
  return out;
}

namespace {

void check_config(const ModelConfig& config) {
  std::vector<std::string> violations;
  for (auto& [from, to] : RateTable::all_pairs()) {
    double r = config.rates.get(from, to);
    if (!std::isfinite(r) || r < 0.0)
      violations.push_back(rate_key(from, to) + " = " + std::to_string(r));
  }
  auto brk = braking_states();
  for (int i = 0; i < kBrakingStateCount; ++i) {
    const HazardParams& h = config.hazard[static_cast<size_t>(i)];
    const std::string where = "hazard." + brk[static_cast<size_t>(i)].name();
    if (!(h.p_overlook >= 0.0 && h.p_overlook <= 1.0))
      violations.push_back(where + ".p_overlook = " + std::to_string(h.p_overlook) +
                           " outside [0,1]");
    for (auto [value, field] : {std::pair{h.rate_overlook_exit, ".rate_overlook_exit"},
                                {h.rate_accident_during_overlook, ".rate_accident_during_overlook"},
                                {h.rate_policy_fail_timely, ".rate_policy_fail_timely"},
                                {h.rate_policy_fail_late, ".rate_policy_fail_late"}}) {
      if (!std::isfinite(value) || value < 0.0)
        violations.push_back(where + field + " = " + std::to_string(value));
    }
  }
  if (!violations.empty()) {
    std::string msg = "invalid model config:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
}

// Stationary distribution of the embedded jump chain restricted to
// non-absorbing states, with accident arcs dropped. Power iteration;
// the chain is tiny, so no sparse machinery is warranted.
std::vector<double> quasi_stationary_initial(const std::vector<FlatState>& states,
                                             const std::vector<Transition>& transitions) {
  const size_t n = states.size();
  std::vector<double> exit(n, 0.0);
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  for (const auto& t : transitions) {
    if (states[static_cast<size_t>(t.to)].is_absorbing()) continue;
    exit[static_cast<size_t>(t.from)] += t.rate;
    p[static_cast<size_t>(t.from)][static_cast<size_t>(t.to)] += t.rate;
  }
  size_t live = 0;
  for (size_t i = 0; i < n; ++i) {
    if (states[i].is_absorbing()) continue;
    if (exit[i] > 0.0) {
      for (double& v : p[i]) v /= exit[i];
      ++live;
    } else {
      p[i][i] = 1.0;  // dead end: the jump chain stays put
    }
  }
  if (live == 0)
    throw ValidationError(
        "quasi-stationary initial state requires a transient state with an exit");
  std::vector<double> pi(n, 0.0), next(n, 0.0);
  double mass = 0.0;
  for (size_t i = 0; i < n; ++i)
    if (!states[i].is_absorbing()) mass += 1.0;
  for (size_t i = 0; i < n; ++i)
    if (!states[i].is_absorbing()) pi[i] = 1.0 / mass;
  for (int iter = 0; iter < 200000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (pi[i] == 0.0) continue;
      for (size_t j = 0; j < n; ++j)
        if (p[i][j] > 0.0) next[j] += pi[i] * p[i][j];
    }
    double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= total;
    double delta = 0.0;
    for (size_t i = 0; i < n; ++i) delta += std::abs(next[i] - pi[i]);
    pi.swap(next);
    if (delta < 1e-15) break;
  }
  return pi;
}

}  // namespace

Ctmc build_ctmc(const ModelConfig& config) {
  check_config(config);

  Ctmc chain;
  chain.states = enumerate_states(config);
  const int n = chain.num_states();

  auto idx = [&](const FlatState& s) {
    int i = chain.index_of(s);
    if (i < 0) throw ValidationError("state not in flat space: " + s.name());
    return i;
  };

  // Accumulate merged rates keyed by (from, to); keys iterate in canonical
  // order so the transition list is deterministic.
  std::map<std::pair<int, int>, double> arcs;
  auto add = [&](int from, int to, double rate) {
    if (rate > 0.0) arcs[{from, to}] += rate;
  };

  // Entry split: rate r entering Y goes r*p to Overlooked(Y) and the exact
  // remainder r - r*p to Detected(Y), so the two parts always sum to r.
  auto add_entry = [&](int from, HighLevelState to, double r) {
    if (to.is_hazardous()) {
      const double p = config.hazard_for(to).p_overlook;
      const double into_overlooked = r * p;
      add(from, idx(FlatState::overlooked(to)), into_overlooked);
      add(from, idx(FlatState::detected(to)), r - into_overlooked);
    } else {
      add(from, idx(FlatState::non_braking(to)), r);
    }
  };

  for (auto from_state : all_high_level_states()) {
    std::vector<int> sources;
    if (from_state.is_hazardous()) {
      sources.push_back(idx(FlatState::detected(from_state)));
      sources.push_back(idx(FlatState::late_detected(from_state)));
      if (config.hazard_for(from_state).overlooked_self_resolve)
        sources.push_back(idx(FlatState::overlooked(from_state)));
    } else {
      sources.push_back(idx(FlatState::non_braking(from_state)));
    }
    for (auto to_state : all_high_level_states()) {
      if (from_state == to_state) continue;
      const double r = config.rates.get(from_state, to_state);
      if (r <= 0.0) continue;
      for (int src : sources) add_entry(src, to_state, r);
    }
  }

  for (auto s : braking_states()) {
    const HazardParams& h = config.hazard_for(s);
    const int acc = idx(FlatState::make_accident(s.accident_class()));
    add(idx(FlatState::detected(s)), acc, h.rate_policy_fail_timely);
    add(idx(FlatState::overlooked(s)), idx(FlatState::late_detected(s)),
        h.rate_overlook_exit);
    add(idx(FlatState::overlooked(s)), acc, h.rate_accident_during_overlook);
    add(idx(FlatState::late_detected(s)), acc, h.rate_policy_fail_late);
  }

  chain.transitions.reserve(arcs.size());
  for (const auto& [key, rate] : arcs)
    chain.transitions.push_back({key.first, key.second, rate});

  chain.absorbing = {idx(FlatState::make_accident(AccidentClass::Serious)),
                     idx(FlatState::make_accident(AccidentClass::Minor))};
  std::sort(chain.absorbing.begin(), chain.absorbing.end());

  chain.initial.assign(static_cast<size_t>(n), 0.0);
  if (config.initial_state == kQuasiStationaryInitial) {
    chain.initial = quasi_stationary_initial(chain.states, chain.transitions);
  } else {
    FlatState start = parse_flat_state(config.initial_state);
    if (start.is_absorbing())
      throw ValidationError("initial state must not be absorbing: " + start.name());
    chain.initial[static_cast<size_t>(idx(start))] = 1.0;
  }
  return chain;
}

CtmcDiagnostics validate(const Ctmc& chain) {
  CtmcDiagnostics d;
  const int n = chain.num_states();
  std::vector<double> exit(static_cast<size_t>(n), 0.0);
  for (const auto& t : chain.transitions) {
    const auto& from = chain.states[static_cast<size_t>(t.from)];
    const auto& to = chain.states[static_cast<size_t>(t.to)];
    if (!(t.rate > 0.0) || !std::isfinite(t.rate))
      d.negative_rate_arcs.push_back(from.name() + " -> " + to.name() + " rate " +
                                     std::to_string(t.rate));
    if (chain.is_absorbing(t.from))
      d.absorbing_violations.push_back(from.name() + " -> " + to.name());
    exit[static_cast<size_t>(t.from)] += t.rate;
  }
  d.max_exit_rate = exit.empty() ? 0.0 : *std::max_element(exit.begin(), exit.end());

  for (int i = 0; i < n; ++i)
    if (!chain.is_absorbing(i) && exit[static_cast<size_t>(i)] == 0.0)
      d.zero_exit_nonabsorbing.push_back(chain.states[static_cast<size_t>(i)].name());

  // Reachability from the initial distribution over positive-rate arcs.
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<int> stack;
  for (int i = 0; i < n; ++i)
    if (chain.initial[static_cast<size_t>(i)] > 0.0) {
      seen[static_cast<size_t>(i)] = true;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (const auto& t : chain.transitions)
      if (t.from == cur && !seen[static_cast<size_t>(t.to)]) {
        seen[static_cast<size_t>(t.to)] = true;
        stack.push_back(t.to);
      }
  }
  for (int i = 0; i < n; ++i) {
    const auto& s = chain.states[static_cast<size_t>(i)];
    if (!seen[static_cast<size_t>(i)]) d.unreachable_states.push_back(s.name());
    if (seen[static_cast<size_t>(i)] && s.kind == FlatState::Kind::Accident) {
      if (s.accident == AccidentClass::Serious) d.serious_reachable = true;
      if (s.accident == AccidentClass::Minor) d.minor_reachable = true;
    }
  }
  return d;
}

std::string CtmcDiagnostics::summary() const {
  std::ostringstream out;
  out << "negative-rate arcs: " << negative_rate_arcs.size() << "\n";
  for (const auto& v : negative_rate_arcs) out << "  " << v << "\n";
  out << "arcs leaving absorbing states: " << absorbing_violations.size() << "\n";
  for (const auto& v : absorbing_violations) out << "  " << v << "\n";
  out << "zero-exit non-absorbing states: " << zero_exit_nonabsorbing.size() << "\n";
  for (const auto& v : zero_exit_nonabsorbing) out << "  " << v << "\n";
  out << "unreachable from initial: " << unreachable_states.size() << "\n";
  for (const auto& v : unreachable_states) out << "  " << v << "\n";
  out << "serious accident reachable: " << (serious_reachable ? "yes" : "no") << "\n";
  out << "minor accident reachable: " << (minor_reachable ? "yes" : "no") << "\n";
  out << "max total exit rate: " << max_exit_rate << " 1/h\n";
  return out.str();
}

}  // namespace hazchain
