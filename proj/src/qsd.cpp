#include "recomb/qsd.hpp"

#include <algorithm>
#include <string>

#include "recomb/errors.hpp"

namespace recomb {

namespace {

Rat self_loop(const ChainModel& model, int s) {
  for (const auto& [j, w] : model.rows[static_cast<std::size_t>(s)]) {
    if (j == s) return w;
  }
  return Rat(0);
}

// lim eta^{-n} P_s(standing on a target after n steps). Targets must hold
// their scaled mass at rate exactly eta (self-loop eta, no other transient
// exits); everything else is solved backwards along the refinement order.
std::vector<Rat> scaled_mass_share(const ChainModel& model, const Rat& eta,
                                   const std::vector<bool>& is_target) {
  std::vector<Rat> u(model.states.size(), Rat(0));
  std::vector<int> order = topological_order(model);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t i = static_cast<std::size_t>(*it);
    if (is_target[i]) {
      u[i] = 1;
      continue;
    }
    Rat self(0), inflow(0);
    for (const auto& [j, w] : model.rows[i]) {
      if (j == *it) {
        self = w;
      } else {
        inflow += w * u[static_cast<std::size_t>(j)];
      }
    }
    if (inflow == 0) continue;
    if (self >= eta) {
      throw invariant_violation("a state feeding the top-rate states has self-loop >= eta");
    }
    u[i] = inflow / (eta - self);
  }
  return u;
}

Rat survival_from(const ChainModel& model, int start, int n) {
  return survival_profile(model, n, start).survival.back();
}

}  // namespace

DecayAnalysis analyze_decay(const ChainModel& model) {
  const CoefficientTable& table = model.table;
  if (model.states.size() == 1) {
    throw not_applicable_error(
        "identity transformation; quasi-stationary analysis not applicable "
        "(the chain starts absorbed and there is no decay to measure)");
  }
  DecayAnalysis a;
  a.eta = Rat(0);
  for (Mask k : table.closure_sets) {
    if (table.is_atom(k)) continue;
    Rat s = table.stay(k);
    if (s > a.eta) {
      a.eta = s;
      a.e_sets = {k};
    } else if (s == a.eta) {
      a.e_sets.push_back(k);
    }
  }
  if (a.e_sets.empty()) {
    throw not_applicable_error(
        "every closure set is an atom; the chain is absorbed after one step "
        "and survival vanishes");
  }
  std::sort(a.e_sets.begin(), a.e_sets.end(), SubsetLess{});

  Mask full = table.rho.sites.full();
  for (Mask k : a.e_sets) {
    std::vector<Mask> blocks{k};
    for (Mask atom : table.atom_partition.blocks) {
      if (!(atom & k)) blocks.push_back(atom);
    }
    Partition p = make_partition(std::move(blocks), full);
    auto it = model.index.find(p);
    if (it == model.index.end()) {
      throw invariant_violation("top-rate state " + format_partition(p) +
                                " was never discovered");
    }
    a.e_states.push_back(it->second);
  }

  std::vector<bool> is_e(model.states.size(), false);
  for (int e : a.e_states) is_e[static_cast<std::size_t>(e)] = true;
  a.beta0 = Rat(0);
  for (std::size_t s = 0; s < model.states.size(); ++s) {
    if (static_cast<int>(s) == model.absorbing || is_e[s]) continue;
    Rat d = self_loop(model, static_cast<int>(s));
    if (d > a.beta0) a.beta0 = d;
  }
  a.beta_shortcut = Rat(0);
  for (const auto& [k, row] : table.entries) {
    if (table.is_atom(k)) continue;
    Rat s = table.stay(k);
    if (s < a.eta && s > a.beta_shortcut) a.beta_shortcut = s;
  }

  a.phi = scaled_mass_share(model, a.eta, is_e);
  a.p_hit_e = hit_probability(model, a.e_states)[static_cast<std::size_t>(model.initial)];
  a.limit_constant = a.phi[static_cast<std::size_t>(model.initial)];
  if (a.limit_constant == 0) {
    throw invariant_violation("the top-rate states are unreachable from the start");
  }
  Rat total(0);
  for (int e : a.e_states) {
    std::vector<bool> single(model.states.size(), false);
    single[static_cast<std::size_t>(e)] = true;
    Rat share = scaled_mass_share(model, a.eta, single)[static_cast<std::size_t>(model.initial)];
    a.quasi_limit[e] = share / a.limit_constant;
    total += a.quasi_limit[e];
  }
  if (total != 1) {
    throw invariant_violation("the limiting conditional law does not sum to 1");
  }
  a.depth = dag_depth(model);
  return a;
}

std::vector<Rat> ratio_limits(const ChainModel&, const DecayAnalysis& a) {
  std::vector<Rat> out(a.phi.size());
  for (std::size_t s = 0; s < a.phi.size(); ++s) out[s] = a.phi[s] / a.limit_constant;
  return out;
}

CheckReport check_harmonic_scaling(const ChainModel& model, const DecayAnalysis& a) {
  CheckReport rep;
  if (a.phi[static_cast<std::size_t>(model.absorbing)] != 0) {
    rep.fail("phi must vanish on the absorbing state");
  }
  for (int e : a.e_states) {
    if (a.phi[static_cast<std::size_t>(e)] != 1) {
      rep.fail("phi must equal 1 on the top-rate states");
    }
  }
  std::vector<Rat> reach = hit_probability(model, a.e_states);
  for (std::size_t s = 0; s < model.states.size(); ++s) {
    if ((a.phi[s] > 0) != (reach[s] > 0)) {
      rep.fail("phi must be positive exactly on states that can reach a top-rate state");
    }
  }
  for (std::size_t s = 0; s < model.states.size(); ++s) {
    Rat lhs(0);
    for (const auto& [j, w] : model.rows[s]) {
      if (j != model.absorbing) lhs += w * a.phi[static_cast<std::size_t>(j)];
    }
    if (lhs != a.eta * a.phi[s]) {
      rep.fail("phi fails the eigen identity at state " + std::to_string(s));
    }
  }
  return rep;
}

GeometricLimitReport geometric_limit_check(const ChainModel& model,
                                           const DecayAnalysis& a, int horizon) {
  if (horizon < 0) throw validation_error("horizon must be nonnegative");
  GeometricLimitReport rep;
  AbsorptionProfile prof = survival_profile(model, horizon);
  Rat power(1);  // eta^n
  for (int n = 0; n <= horizon; ++n) {
    std::size_t sn = static_cast<std::size_t>(n);
    if (prof.survival[sn] == 0) {
      throw invariant_violation("survival vanished although a decay rate exists");
    }
    Rat scaled = prof.survival[sn] / power;
    rep.scaled.push_back(scaled);
    rep.deviation.push_back(rat_abs(scaled - a.limit_constant));
    Rat on_e(0);
    for (int e : a.e_states) on_e += prof.occupancy[sn][static_cast<std::size_t>(e)];
    rep.e_share.push_back(on_e / prof.survival[sn]);
    power *= a.eta;
  }
  if (a.beta0 == 0) {
    for (int n = a.depth; n <= horizon; ++n) {
      std::size_t sn = static_cast<std::size_t>(n);
      if (rep.deviation[sn] != 0) {
        rep.failures.push_back("with no secondary rates the scaled survival must hit the "
                               "limit exactly from step " + std::to_string(a.depth));
        rep.ok = false;
        break;
      }
      if (rep.e_share[sn] != 1) {
        rep.failures.push_back("with no secondary rates all surviving mass must sit on "
                               "top-rate states from step " + std::to_string(a.depth));
        rep.ok = false;
        break;
      }
    }
  }
  return rep;
}

QProcess q_process(const ChainModel& model, const DecayAnalysis& a) {
  QProcess qp;
  for (std::size_t s = 0; s < model.states.size(); ++s) {
    if (a.phi[s] > 0) {
      qp.row_of[static_cast<int>(s)] = static_cast<int>(qp.domain.size());
      qp.domain.push_back(static_cast<int>(s));
    }
  }
  for (int s : qp.domain) {
    std::size_t ss = static_cast<std::size_t>(s);
    std::vector<std::pair<int, Rat>> row;
    Rat total(0);
    for (const auto& [j, w] : model.rows[ss]) {
      std::size_t sj = static_cast<std::size_t>(j);
      if (a.phi[sj] == 0) continue;
      Rat q = w * a.phi[sj] / (a.eta * a.phi[ss]);
      total += q;
      row.emplace_back(j, q);
    }
    if (total != 1) {
      throw invariant_violation("conditioned transition rows must be stochastic");
    }
    qp.rows.push_back(std::move(row));
  }
  return qp;
}

Rat q_path_probability(const QProcess& qp, const std::vector<int>& path) {
  if (path.empty()) throw validation_error("path must contain at least one state");
  for (int s : path) {
    if (!qp.row_of.count(s)) {
      throw validation_error("state " + std::to_string(s) +
                             " is outside the conditioned chain");
    }
  }
  Rat prob(1);
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const auto& row = qp.rows[static_cast<std::size_t>(qp.row_of.at(path[t]))];
    Rat edge(0);
    for (const auto& [j, w] : row) {
      if (j == path[t + 1]) edge = w;
    }
    if (edge == 0) return Rat(0);
    prob *= edge;
  }
  return prob;
}

Rat conditioned_path_probability(const ChainModel& model, const std::vector<int>& path,
                                 int n) {
  if (path.empty()) throw validation_error("path must contain at least one state");
  int k = static_cast<int>(path.size()) - 1;
  if (k > n) throw validation_error("path is longer than the conditioning horizon");
  for (int s : path) {
    if (s < 0 || s >= static_cast<int>(model.states.size())) {
      throw validation_error("path state " + std::to_string(s) + " is out of range");
    }
  }
  if (path[0] == model.absorbing) {
    throw validation_error("cannot condition on survival from the absorbed state");
  }
  Rat denom = survival_from(model, path[0], n);
  if (denom == 0) {
    throw validation_error("the conditioning event has probability zero");
  }
  Rat prob(1);
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    if (path[t + 1] == model.absorbing) return Rat(0);  // incompatible with survival
    Rat edge(0);
    for (const auto& [j, w] : model.rows[static_cast<std::size_t>(path[t])]) {
      if (j == path[t + 1]) edge = w;
    }
    if (edge == 0) return Rat(0);
    prob *= edge;
  }
  return prob * survival_from(model, path.back(), n - k) / denom;
}

std::map<Rat, std::vector<Mask>> admissible_levels(const ChainModel& model) {
  const CoefficientTable& table = model.table;
  std::map<Rat, std::vector<Mask>> out;
  for (Mask k : table.closure_sets) {
    if (table.is_atom(k)) continue;
    bool atomic_splits = true;
    for (const auto& [key, w] : dyadic_kernel(table, k)) {
      if (key == k) continue;
      if (!table.is_atom(key) || !table.is_atom(k & ~key)) {
        atomic_splits = false;
        break;
      }
    }
    if (atomic_splits) out[table.stay(k)].push_back(k);
  }
  for (auto& [level, sets] : out) std::sort(sets.begin(), sets.end(), SubsetLess{});
  return out;
}

CheckReport check_quasi_stationary(const ChainModel& model,
                                   const std::map<int, Rat>& nu, const Rat& level,
                                   int steps) {
  if (steps < 1) throw validation_error("need at least one conditioning step");
  if (level <= 0 || level >= 1) {
    throw validation_error("a survival rate must lie strictly between 0 and 1");
  }
  Rat total(0);
  std::vector<Rat> v(model.states.size(), Rat(0));
  for (const auto& [s, m] : nu) {
    if (s < 0 || s >= static_cast<int>(model.states.size())) {
      throw validation_error("state " + std::to_string(s) + " is out of range");
    }
    if (m < 0) throw validation_error("the law must be nonnegative");
    if (m == 0) continue;
    // The support must carry the level: self-loop exactly `level` and every
    // other exit leads straight to absorption.
    Rat self(0);
    for (const auto& [j, w] : model.rows[static_cast<std::size_t>(s)]) {
      if (j == s) {
        self = w;
      } else if (j != model.absorbing) {
        throw validation_error("state " + format_partition(model.states[static_cast<std::size_t>(s)]) +
                               " can refine without being absorbed; it carries no "
                               "quasi-stationary law");
      }
    }
    if (self != level) {
      throw validation_error("state " + format_partition(model.states[static_cast<std::size_t>(s)]) +
                             " survives at rate " + format_fraction(self) + ", not " +
                             format_fraction(level));
    }
    total += m;
    v[static_cast<std::size_t>(s)] = m;
  }
  if (total != 1) throw validation_error("the law must sum to 1");

  CheckReport rep;
  // One-step balance: nu P = level * nu on the transient states.
  std::vector<Rat> w = step(model, v);
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (static_cast<int>(j) == model.absorbing) continue;
    if (w[j] != level * v[j]) {
      rep.fail("one step does not scale the law by the survival rate");
      break;
    }
  }
  // Conditional stationarity along the horizon.
  Rat expected_survival(1);
  std::vector<Rat> cur = v;
  for (int t = 1; t <= steps; ++t) {
    cur = step(model, cur);
    expected_survival *= level;
    Rat survival = Rat(1) - cur[static_cast<std::size_t>(model.absorbing)];
    if (survival != expected_survival) {
      rep.fail("survival after " + std::to_string(t) + " steps is not rate^t");
      continue;
    }
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (static_cast<int>(j) == model.absorbing) continue;
      if (cur[j] != survival * v[j]) {
        rep.fail("the conditional law moved away from nu at step " + std::to_string(t));
        break;
      }
    }
  }
  return rep;
}

}  // namespace recomb
