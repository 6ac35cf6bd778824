#pragma once

// Choreography automata: projection onto machines and the decision
// procedures for CUI and branch-awareness.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcl/cfsm.hpp"
#include "fcl/fsa.hpp"
#include "fcl/langset.hpp"

namespace fcl {

class DeterminismViolation : public std::invalid_argument {
 public:
  DeterminismViolation(const std::string& state, const Interaction& label)
      : std::invalid_argument("state " + state + " has two " + to_string(label) + " transitions"),
        state_(state),
        label_(label) {}
  const std::string& state() const { return state_; }
  const Interaction& label() const { return label_; }

 private:
  std::string state_;
  Interaction label_;
};

class ChorAutomaton {
 public:
  ChorAutomaton(std::string name, Fsa<Interaction> fsa) : name_(std::move(name)), fsa_(std::move(fsa)) {
    for (StateId s = 0; s < fsa_.num_states(); ++s) {
      const auto& out = fsa_.out(s);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& tr = fsa_.transition(out[i]);
        if (!tr.label) throw std::invalid_argument("ε-transition in a choreography automaton");
        if (i && fsa_.transition(out[i - 1]).label == tr.label) throw DeterminismViolation(fsa_.name(s), *tr.label);
      }
    }
  }

  const std::string& name() const { return name_; }
  const Fsa<Interaction>& fsa() const { return fsa_; }

  // Participants of transitions reachable from the initial state.
  std::set<Participant> participants() const {
    auto reach = reachable(fsa_, fsa_.initial());
    std::set<Participant> out;
    for (const auto& t : fsa_.transitions())
      if (reach[t.from]) out.insert(t.label->sender()), out.insert(t.label->receiver());
    return out;
  }

 private:
  std::string name_;
  Fsa<Interaction> fsa_;
};

// Relabels every transition by its projection on x (ε where x is absent).
inline Fsa<Action> intermediate_automaton(const ChorAutomaton& a, const Participant& x) {
  const auto& f = a.fsa();
  Fsa<Action> out(f.name(0));
  for (StateId s = 1; s < f.num_states(); ++s) out.add_state(f.name(s));
  out.set_initial(f.initial());
  for (const auto& t : f.transitions()) out.add_transition(t.from, project_symbol(*t.label, x), t.to);
  return out;
}

inline Fsa<Action> projection_machine(const ChorAutomaton& a, const Participant& x) {
  return determinise(intermediate_automaton(a, x));
}

inline CfsmSystem project_chaut(const ChorAutomaton& a) {
  std::map<Participant, Cfsm> machines;
  for (const auto& x : a.participants()) {
    auto d = projection_machine(a, x);
    if (d.transitions().empty()) throw DegenerateParticipant(x);
    machines.emplace(x, Cfsm(x, std::move(d)));
  }
  return CfsmSystem(std::move(machines));
}

struct ChautCuiWitness {
  CuiWitness words;
  std::string state, sender_view, receiver_view;  // the violating triple
};

// Search over triples (q, Q_X, Q_Y) where Q_X, Q_Y are subset-states of the
// determinised projections on the sender X and receiver Y.  Every violating
// (triple, alpha) is reported in search order, with w the shortest word
// reaching the triple; `limit` caps the number collected.
inline std::vector<ChautCuiWitness> cui_violations(const ChorAutomaton& a, std::size_t limit = SIZE_MAX) {
  std::vector<ChautCuiWitness> found;
  const auto& f = a.fsa();
  const auto labels = f.labels();
  std::map<Participant, Fsa<Action>> views;
  for (const auto& x : a.participants()) views.emplace(x, projection_machine(a, x));
  std::set<std::pair<Participant, Participant>> pairs;
  for (const auto& l : labels) pairs.emplace(l.sender(), l.receiver());
  for (const auto& [x, y] : pairs) {
    if (!views.count(x) || !views.count(y)) continue;
    const auto& dx = views.at(x);
    const auto& dy = views.at(y);
    using Triple = std::tuple<StateId, StateId, StateId>;
    std::vector<Triple> triples{{f.initial(), dx.initial(), dy.initial()}};
    std::vector<std::pair<long, std::size_t>> parent{{-1, 0}};
    std::map<Triple, std::size_t> seen{{triples[0], 0}};
    for (std::size_t k = 0; k < triples.size(); ++k) {
      auto [q, qx, qy] = triples[k];
      for (const auto& alpha : labels) {
        if (alpha.sender() != x || alpha.receiver() != y || f.step(q, alpha)) continue;
        auto with_alpha = [&](const Fsa<Action>& d, StateId big) -> std::optional<StateId> {
          for (StateId m : d.members(big))
            if (f.step(m, alpha)) return m;
          return std::nullopt;
        };
        auto q1 = with_alpha(dx, qx), q2 = with_alpha(dy, qy);
        if (!q1 || !q2) continue;
        std::vector<Interaction> w;
        for (long c = static_cast<long>(k); parent[c].first >= 0; c = parent[c].first)
          w.push_back(*f.transition(parent[c].second).label);
        std::reverse(w.begin(), w.end());
        auto ww = Word<Interaction>::finite(w);
        auto reach = [&](StateId target, const Participant& p) {
          auto v = project_word(ww, p).prefix();
          auto proj = [&](const Interaction& b) { return project_symbol(b, p); };
          return Word<Interaction>::finite(*path_with_projection(f, f.initial(), target, v, proj));
        };
        found.push_back(ChautCuiWitness{CuiWitness{reach(*q1, x), reach(*q2, y), ww, alpha}, f.name(q),
                                        dx.name(qx), dy.name(qy)});
        if (found.size() >= limit) return found;
      }
      for (std::size_t t : f.out(q)) {
        const auto& b = *f.transition(t).label;
        StateId nx = qx, ny = qy;
        if (auto act = project_symbol(b, x)) nx = *dx.step(qx, *act);
        if (auto act = project_symbol(b, y)) ny = *dy.step(qy, *act);
        Triple next{f.transition(t).to, nx, ny};
        if (seen.emplace(next, triples.size()).second) {
          triples.push_back(next);
          parent.emplace_back(static_cast<long>(k), t);
        }
      }
    }
  }
  return found;
}

inline std::optional<ChautCuiWitness> decide_cui(const ChorAutomaton& a) {
  auto v = cui_violations(a, 1);
  if (v.empty()) return std::nullopt;
  return v.front();
}

struct ChautBaWitness {
  BaWitness words;
  std::string p, q;
  bool diagonal_only = false;  // every violation found has p = q
};

namespace detail {
// Product of a with itself: X-involving interactions move both copies,
// others move either copy alone.
inline Fsa<Interaction> twin_product(const Fsa<Interaction>& f, const Participant& x) {
  return product<Interaction>(f, f, [&](const Interaction& b) {
    return b.involves(x) ? unsigned(kBoth) : unsigned(kLeft | kRight);
  });
}

// Reachable twin states sorted by (p, q).
inline std::vector<std::pair<std::pair<StateId, StateId>, StateId>> twin_pairs(const Fsa<Interaction>& twin) {
  std::vector<std::pair<std::pair<StateId, StateId>, StateId>> out;
  for (StateId s = 0; s < twin.num_states(); ++s) out.push_back({{twin.members(s)[0], twin.members(s)[1]}, s});
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

// Branch-awareness for one participant: a pair (p, q), possibly p = q,
// reachable by words with equal X-projection, where p has a maximal
// continuation avoiding X and q can still reach an X transition.
inline std::optional<ChautBaWitness> decide_ba_for(const ChorAutomaton& a, const Participant& x) {
  const auto& f = a.fsa();
  auto free_max = detail::x_free_maximal(f, x);
  auto can_x = detail::reaches_x(f, x);
  const auto twin = detail::twin_product(f, x);
  for (auto [pq, s] : detail::twin_pairs(twin)) {
    auto [p, q] = pq;
    if (!free_max[p] || !can_x[q]) continue;
    auto route = bfs_path<Interaction>(twin, twin.initial(), [&](StateId z) { return z == s; },
                                       [](const auto&) { return true; });
    std::vector<Interaction> v;
    for (const auto& l : path_labels(twin, route->first))
      if (l.involves(x)) v.push_back(l);
    auto proj = [&](const Interaction& b) { return detail::keep_if_involves(b, x); };
    auto u1 = path_with_projection(f, f.initial(), p, v, proj);
    auto u2 = path_with_projection(f, f.initial(), q, v, proj);
    EdgeFilter<Interaction> free = [&](const auto& t) { return !t.label->involves(x); };
    auto w1 = Word<Interaction>::finite(*u1).concat(*maximal_continuation<Interaction>(f, p, free));
    auto w2 = detail::through_x_to_maximal(f, *u2, q, x);
    return ChautBaWitness{BaWitness{x, w1, w2}, f.name(p), f.name(q), false};
  }
  return std::nullopt;
}

inline std::optional<ChautBaWitness> decide_ba(const ChorAutomaton& a) {
  std::optional<ChautBaWitness> first;
  bool off_diagonal = false;
  for (const auto& x : a.participants()) {
    const auto& f = a.fsa();
    auto free_max = detail::x_free_maximal(f, x);
    auto can_x = detail::reaches_x(f, x);
    bool violated = false;
    for (auto [pq, s] : detail::twin_pairs(detail::twin_product(f, x)))
      if (auto [p, q] = pq; free_max[p] && can_x[q]) {
        violated = true;
        off_diagonal = off_diagonal || p != q;
      }
    if (violated && !first) first = decide_ba_for(a, x);
  }
  if (first) first->diagonal_only = !off_diagonal;
  return first;
}

struct RealisationReport {
  bool complete = true;
  std::optional<Word<Interaction>> counterexample;
  std::size_t words_compared = 0;
  bool correct() const { return !counterexample.has_value(); }
};

// Compares L(a) with the language of its projected system.  Completeness is
// checked on the bounded enumeration; correctness by an exact search of the
// pair product, reporting the shortest rejected word extended until the
// sender of its last interaction has no further moves (within max_len).
inline RealisationReport check_realisation(const ChorAutomaton& a, std::size_t max_len,
                                           std::size_t budget = kDefaultBudget) {
  RealisationReport r;
  const auto& f = a.fsa();
  const auto sys = project_chaut(a);
  const auto g = sync_product(sys, budget);
  const auto& p = g.fsa;
  auto ours = enumerate(f, max_len, 1000);
  for (const auto& w : ours.finite) r.complete = r.complete && accepts(p, w);
  for (const auto& w : ours.lassos) r.complete = r.complete && accepts(p, w);
  auto theirs = enumerate(p, max_len, 1000);
  r.words_compared = ours.finite.size() + ours.lassos.size() + theirs.finite.size() + theirs.lassos.size();

  using Pair = std::pair<StateId, StateId>;
  std::vector<Pair> nodes{{p.initial(), f.initial()}};
  std::vector<std::pair<long, std::size_t>> parent{{-1, 0}};
  std::map<Pair, std::size_t> seen{{nodes[0], 0}};
  for (std::size_t k = 0; k < nodes.size() && !r.counterexample; ++k) {
    auto [ps, fs] = nodes[k];
    for (std::size_t t : p.out(ps)) {
      const auto& alpha = *p.transition(t).label;
      auto fn = f.step(fs, alpha);
      if (!fn) {
        std::vector<Interaction> w{alpha};
        for (long c = static_cast<long>(k); parent[c].first >= 0; c = parent[c].first)
          w.push_back(*p.transition(parent[c].second).label);
        std::reverse(w.begin(), w.end());
        const auto& x = alpha.sender();
        std::size_t xi = std::lower_bound(g.participants.begin(), g.participants.end(), x) - g.participants.begin();
        const auto& mx = sys.machines().at(x).automaton();
        auto ext = bfs_path<Interaction>(p, p.transition(t).to,
                                         [&](StateId s) { return mx.dead(g.local[s][xi]); },
                                         [](const auto&) { return true; });
        if (ext && w.size() + ext->first.size() <= max_len)
          for (const auto& l : path_labels(p, ext->first)) w.push_back(l);
        r.counterexample = Word<Interaction>::finite(w);
        break;
      }
      Pair next{p.transition(t).to, *fn};
      if (seen.emplace(next, nodes.size()).second) {
        nodes.push_back(next);
        parent.emplace_back(static_cast<long>(k), t);
      }
    }
  }
  return r;
}

}  // namespace fcl
