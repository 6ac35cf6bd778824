#pragma once

// Explicit languages given by an antichain of maximal generators, systems of
// local languages, their synchronous semantics, and the checks for closure
// under unknown information, branch-awareness and communication properties.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fcl/core.hpp"
#include "fcl/fsa.hpp"

namespace fcl {

class NonAntichain : public std::invalid_argument {
 public:
  NonAntichain(std::size_t first, std::size_t second)
      : std::invalid_argument("generator " + std::to_string(first) + " is a prefix of generator " +
                              std::to_string(second)),
        first_(first),
        second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_, second_;
};

class DegenerateParticipant : public std::runtime_error {
 public:
  explicit DegenerateParticipant(const Participant& p)
      : std::runtime_error("participant " + p.name() + " has only the empty behaviour"), part_(p) {}
  const Participant& participant() const { return part_; }

 private:
  Participant part_;
};

template <class S>
class ExplicitLanguage {
 public:
  ExplicitLanguage() : gens_{Word<S>()} {}

  // Keeps the maximal words of `ws`; the empty set yields pref{ε}.
  static ExplicitLanguage from_words(std::vector<Word<S>> ws) {
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    ExplicitLanguage l;
    l.gens_.clear();
    for (std::size_t i = 0; i < ws.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < ws.size() && !dominated; ++j) {
        if (i == j) continue;
        Order o = upw_compare(ws[i], ws[j]);
        dominated = o == Order::StrictPrefixOfSecond || (o == Order::Equal && j < i);
      }
      if (!dominated) l.gens_.push_back(ws[i]);
    }
    if (l.gens_.empty()) l.gens_.push_back(Word<S>());
    return l;
  }

  // Rejects comparable generators, reporting their positions in `ws`.
  static ExplicitLanguage from_antichain(const std::vector<Word<S>>& ws) {
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (std::size_t j = i + 1; j < ws.size(); ++j) {
        Order o = upw_compare(ws[i], ws[j]);
        if (o == Order::Equal || o == Order::StrictPrefixOfSecond) throw NonAntichain(i, j);
        if (o == Order::StrictPrefixOfFirst) throw NonAntichain(j, i);
      }
    return from_words(ws);
  }

  const std::vector<Word<S>>& generators() const { return gens_; }

  bool member(const Word<S>& w) const {
    return std::any_of(gens_.begin(), gens_.end(), [&](const Word<S>& g) { return is_prefix(w, g); });
  }

  std::set<Participant> participants() const { return participants_of(gens_); }

  bool operator==(const ExplicitLanguage&) const = default;

  // Residual-state graph: a state is the set of generator positions
  // compatible with the word read so far.  Deterministic, all accepting.
  Fsa<S> automaton(std::size_t budget = kDefaultBudget) const {
    using Pos = std::pair<std::size_t, std::size_t>;
    auto next = [&](const Pos& p) -> std::optional<Pos> {
      const auto& g = gens_[p.first];
      if (g.is_finite()) {
        if (p.second >= g.size()) return std::nullopt;
        return Pos{p.first, p.second + 1};
      }
      std::size_t o = p.second + 1;
      if (o == g.size()) o = g.prefix().size();
      return Pos{p.first, o};
    };
    std::vector<std::vector<Pos>> states{{}};
    for (std::size_t i = 0; i < gens_.size(); ++i) states[0].push_back({i, 0});
    std::map<std::vector<Pos>, StateId> seen{{states[0], 0}};
    Fsa<S> f("r0");
    for (StateId s = 0; s < states.size(); ++s) {
      std::map<S, std::vector<Pos>> succ;
      for (const Pos& p : states[s]) {
        auto n = next(p);
        if (n) succ[gens_[p.first].at(p.second)].push_back(*n);
      }
      for (auto& [sym, ps] : succ) {
        std::sort(ps.begin(), ps.end());
        auto [it, fresh] = seen.emplace(ps, states.size());
        if (fresh) {
          if (states.size() >= budget) throw StateBudgetExceeded(budget);
          f.add_state("r" + std::to_string(states.size()));
          states.push_back(ps);
        }
        f.add_transition(s, sym, it->second);
      }
    }
    return f;
  }

 private:
  std::vector<Word<S>> gens_;
};

using GLanguage = ExplicitLanguage<Interaction>;
using LLanguage = ExplicitLanguage<Action>;
using SystemAutomata = std::map<Participant, Fsa<Action>>;

class ExplicitSystem {
 public:
  ExplicitSystem() = default;
  explicit ExplicitSystem(std::map<Participant, LLanguage> parts) : parts_(std::move(parts)) {
    for (const auto& [a, l] : parts_) {
      bool nonempty = false;
      for (const auto& g : l.generators()) {
        nonempty = nonempty || !g.empty();
        auto check = [&](const Action& act) {
          if (act.subject() != a)
            throw std::invalid_argument("action " + to_string(act) + " is not local to " + a.name());
          if (!parts_.count(act.peer()))
            throw std::invalid_argument("participant " + act.peer().name() + " has no local language");
        };
        for (const auto& act : g.prefix()) check(act);
        for (const auto& act : g.cycle()) check(act);
      }
      if (!nonempty) throw DegenerateParticipant(a);
    }
  }

  const std::map<Participant, LLanguage>& parts() const { return parts_; }
  const LLanguage& at(const Participant& p) const { return parts_.at(p); }

  SystemAutomata automata(std::size_t budget = kDefaultBudget) const {
    SystemAutomata out;
    for (const auto& [a, l] : parts_) out.emplace(a, l.automaton(budget));
    return out;
  }

  bool operator==(const ExplicitSystem&) const = default;

 private:
  std::map<Participant, LLanguage> parts_;
};

struct CuiWitness {
  Word<Interaction> w1, w2, w;
  Interaction alpha;
};

struct BaWitness {
  Participant x;
  Word<Interaction> w1, w2;
};

enum class Property { HA, DF, LF, SF, SLF };

inline std::string to_string(Property p) {
  switch (p) {
    case Property::HA: return "HA";
    case Property::DF: return "DF";
    case Property::LF: return "LF";
    case Property::SF: return "SF";
    case Property::SLF: return "SLF";
  }
  return "?";
}

inline constexpr Property kAllProperties[] = {Property::HA, Property::DF, Property::LF, Property::SF,
                                              Property::SLF};

struct PropWitness {
  Property property;
  Participant part;
  Word<Interaction> w;
  std::string note;
};

template <class S>
bool member(const ExplicitLanguage<S>& l, const Word<S>& w) {
  return l.member(w);
}

template <class S>
std::vector<Word<S>> maximal_words(const ExplicitLanguage<S>& l) {
  return l.generators();
}

inline ExplicitSystem project_language(const GLanguage& l) {
  std::map<Participant, LLanguage> parts;
  for (const auto& a : l.participants()) {
    std::vector<Word<Action>> ws;
    for (const auto& g : l.generators()) ws.push_back(project_word(g, a));
    auto part = LLanguage::from_words(std::move(ws));
    if (part.generators().size() == 1 && part.generators()[0].empty()) throw DegenerateParticipant(a);
    parts.emplace(a, std::move(part));
  }
  return ExplicitSystem(std::move(parts));
}

inline bool sem_member(const ExplicitSystem& s, const Word<Interaction>& w) {
  for (const auto& p : participants_of(w))
    if (!s.parts().count(p)) return false;
  for (const auto& [a, l] : s.parts())
    if (!l.member(project_word(w, a))) return false;
  return true;
}

// Interactions whose send occurs in the sender's language and whose receive
// occurs in the receiver's.
inline std::vector<Interaction> system_alphabet(const ExplicitSystem& s) {
  std::set<Action> acts;
  for (const auto& [a, l] : s.parts())
    for (const auto& g : l.generators()) {
      acts.insert(g.prefix().begin(), g.prefix().end());
      acts.insert(g.cycle().begin(), g.cycle().end());
    }
  std::vector<Interaction> out;
  for (const auto& act : acts)
    if (act.is_send() && acts.count(Action(act.sender(), act.receiver(), act.msg(), Direction::Receive)))
      out.emplace_back(act.sender(), act.receiver(), act.msg());
  return out;
}

inline std::set<Word<Interaction>> sem_enumerate(const ExplicitSystem& s, std::size_t max_len) {
  const auto alphabet = system_alphabet(s);
  std::set<Word<Interaction>> out{Word<Interaction>()};
  std::vector<Word<Interaction>> layer{Word<Interaction>()};
  for (std::size_t len = 0; len < max_len && !layer.empty(); ++len) {
    std::vector<Word<Interaction>> next;
    for (const auto& w : layer)
      for (const auto& a : alphabet) {
        auto ext = w.append(a);
        if (sem_member(s, ext)) {
          out.insert(ext);
          next.push_back(std::move(ext));
        }
      }
    layer = std::move(next);
  }
  return out;
}

// The synchronous product of deterministic local automata.  States are
// tuples of local states, kept in `local` in BFS discovery order.
struct SemanticsGraph {
  Fsa<Interaction> fsa;
  std::vector<Participant> participants;
  std::vector<std::vector<StateId>> local;
};

inline SemanticsGraph semantics_graph(const SystemAutomata& sys, std::size_t budget = kDefaultBudget) {
  std::vector<Participant> parts;
  std::vector<const Fsa<Action>*> autos;
  for (const auto& [p, f] : sys) parts.push_back(p), autos.push_back(&f);
  auto index_of = [&](const Participant& p) -> std::optional<std::size_t> {
    auto it = std::lower_bound(parts.begin(), parts.end(), p);
    if (it == parts.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - parts.begin());
  };
  auto name = [&](const std::vector<StateId>& t) {
    std::string n;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) n += ",";
      n += parts[i].name() + ":" + autos[i]->name(t[i]);
    }
    return n;
  };
  std::vector<StateId> init;
  for (auto* a : autos) init.push_back(a->initial());
  SemanticsGraph g{Fsa<Interaction>(name(init)), parts, {init}};
  std::map<std::vector<StateId>, StateId> seen{{init, 0}};
  for (StateId s = 0; s < g.local.size(); ++s) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (std::size_t t : autos[i]->out(g.local[s][i])) {
        const auto& tr = autos[i]->transition(t);
        if (!tr.label || !tr.label->is_send()) continue;
        auto j = index_of(tr.label->receiver());
        if (!j) continue;
        Action recv(tr.label->sender(), tr.label->receiver(), tr.label->msg(), Direction::Receive);
        auto rj = autos[*j]->step(g.local[s][*j], recv);
        if (!rj) continue;
        auto next = g.local[s];
        next[i] = tr.to;
        next[*j] = *rj;
        auto [it, fresh] = seen.emplace(next, g.local.size());
        if (fresh) {
          if (g.local.size() >= budget) throw StateBudgetExceeded(budget);
          g.fsa.add_state(name(next));
          g.local.push_back(next);
        }
        g.fsa.add_transition(s, Interaction(tr.label->sender(), tr.label->receiver(), tr.label->msg()),
                             it->second);
      }
    }
  }
  return g;
}

inline Fsa<Interaction> sem_automaton(const ExplicitSystem& s, std::size_t budget = kDefaultBudget) {
  return semantics_graph(s.automata(budget), budget).fsa;
}

inline MaximalWords<Interaction> sem_maximal(const ExplicitSystem& s, std::size_t budget = kDefaultBudget) {
  return simple_maximal_words(sem_automaton(s, budget), budget);
}

inline bool concurrency_equiv(const Word<Interaction>& w1, const Word<Interaction>& w2) {
  auto ps = participants_of(w1);
  ps.merge(participants_of(w2));
  return std::all_of(ps.begin(), ps.end(),
                     [&](const Participant& p) { return project_word(w1, p) == project_word(w2, p); });
}

namespace detail {
inline bool shorter_then_lex(const Word<Interaction>& a, const Word<Interaction>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}
}  // namespace detail

inline std::optional<std::pair<Word<Interaction>, Word<Interaction>>> is_concurrency_closed_bounded(
    const GLanguage& l, std::size_t max_len) {
  auto words = enumerate(l.automaton(), max_len, 0).finite;
  std::vector<Word<Interaction>> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end(), detail::shorter_then_lex);
  for (const auto& w : sorted) {
    const auto& seq = w.prefix();
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (!independent(seq[i], seq[i + 1])) continue;
      auto swapped = seq;
      std::swap(swapped[i], swapped[i + 1]);
      auto out = Word<Interaction>::finite(swapped);
      if (!l.member(out)) return std::pair{w, out};
    }
  }
  return std::nullopt;
}

inline bool cui_hub_sufficient(const GLanguage& l) {
  std::optional<std::set<Participant>> common;
  auto visit = [&](const Interaction& a) {
    std::set<Participant> ps{a.sender(), a.receiver()};
    if (!common) {
      common = ps;
      return;
    }
    std::set<Participant> keep;
    std::set_intersection(common->begin(), common->end(), ps.begin(), ps.end(),
                          std::inserter(keep, keep.end()));
    *common = std::move(keep);
  };
  for (const auto& g : l.generators()) {
    for (const auto& a : g.prefix()) visit(a);
    for (const auto& a : g.cycle()) visit(a);
  }
  return !common || !common->empty();
}

// Closure under unknown information on a deterministic interaction
// automaton.  The search runs over triples (d, d1, d2) of states reached by
// words w, w1, w2 with proj(w,X)=proj(w1,X) and proj(w,Y)=proj(w2,Y), for
// each sender/receiver pair (X, Y).
inline std::optional<CuiWitness> check_cui_automaton(const Fsa<Interaction>& f) {
  const auto labels = f.labels();
  std::set<std::pair<Participant, Participant>> pairs;
  for (const auto& a : labels) pairs.emplace(a.sender(), a.receiver());
  const std::size_t n = f.num_states();
  for (const auto& [x, y] : pairs) {
    std::vector<Interaction> alphas;
    for (const auto& a : labels)
      if (a.sender() == x && a.receiver() == y) alphas.push_back(a);
    enum Mover : int { kW, kW1, kW2 };
    struct Parent {
      long prev = -2;
      Mover mover = kW;
      std::size_t trans = 0;
    };
    auto key = [&](StateId d, StateId d1, StateId d2) { return (d * n + d1) * n + d2; };
    std::vector<Parent> parent(n * n * n);
    std::deque<std::size_t> queue{key(f.initial(), f.initial(), f.initial())};
    parent[queue.front()].prev = -1;
    auto push = [&](std::size_t from, std::size_t to, Mover m, std::size_t t) {
      if (parent[to].prev != -2) return;
      parent[to] = {static_cast<long>(from), m, t};
      queue.push_back(to);
    };
    while (!queue.empty()) {
      std::size_t k = queue.front();
      queue.pop_front();
      StateId d = k / (n * n), d1 = (k / n) % n, d2 = k % n;
      for (const auto& alpha : alphas) {
        if (f.step(d, alpha) || !f.step(d1, alpha) || !f.step(d2, alpha)) continue;
        std::vector<Interaction> w, w1, w2;
        for (std::size_t c = k; parent[c].prev >= 0; c = static_cast<std::size_t>(parent[c].prev)) {
          const auto& lab = *f.transition(parent[c].trans).label;
          if (parent[c].mover == kW1) {
            w1.push_back(lab);
            continue;
          }
          if (parent[c].mover == kW2) {
            w2.push_back(lab);
            continue;
          }
          w.push_back(lab);
          if (lab.involves(x)) w1.push_back(lab);
          if (lab.involves(y)) w2.push_back(lab);
        }
        std::reverse(w.begin(), w.end());
        std::reverse(w1.begin(), w1.end());
        std::reverse(w2.begin(), w2.end());
        return CuiWitness{Word<Interaction>::finite(w1), Word<Interaction>::finite(w2),
                          Word<Interaction>::finite(w), alpha};
      }
      for (std::size_t t : f.out(d)) {
        const auto& b = *f.transition(t).label;
        std::optional<StateId> n1 = d1, n2 = d2;
        if (b.involves(x)) n1 = f.step(d1, b);
        if (b.involves(y)) n2 = f.step(d2, b);
        if (n1 && n2) push(k, key(f.transition(t).to, *n1, *n2), kW, t);
      }
      for (std::size_t t : f.out(d1))
        if (!f.transition(t).label->involves(x)) push(k, key(d, f.transition(t).to, d2), kW1, t);
      for (std::size_t t : f.out(d2))
        if (!f.transition(t).label->involves(y)) push(k, key(d, d1, f.transition(t).to), kW2, t);
    }
  }
  return std::nullopt;
}

inline std::optional<CuiWitness> check_cui(const GLanguage& l, std::size_t budget = kDefaultBudget) {
  return check_cui_automaton(l.automaton(budget));
}

// Pairwise comparison of the projected generators.
inline std::optional<BaWitness> check_ba(const GLanguage& l) {
  const auto& gens = l.generators();
  for (const auto& x : l.participants()) {
    std::vector<Word<Action>> proj;
    for (const auto& g : gens) proj.push_back(project_word(g, x));
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (i != j && upw_compare(proj[i], proj[j]) == Order::StrictPrefixOfSecond)
          return BaWitness{x, gens[i], gens[j]};
  }
  return std::nullopt;
}

namespace detail {
inline std::optional<Interaction> keep_if_involves(const Interaction& a, const Participant& x) {
  if (a.involves(x)) return a;
  return std::nullopt;
}

// States from which some state in `targets` is reachable via `ok` edges.
template <class L>
std::vector<bool> backward_closure(const Fsa<L>& f, std::vector<bool> targets, const EdgeFilter<L>& ok) {
  std::vector<std::vector<StateId>> preds(f.num_states());
  for (const auto& t : f.transitions())
    if (ok(t)) preds[t.to].push_back(t.from);
  std::vector<StateId> todo;
  for (StateId s = 0; s < f.num_states(); ++s)
    if (targets[s]) todo.push_back(s);
  while (!todo.empty()) {
    StateId s = todo.back();
    todo.pop_back();
    for (StateId p : preds[s])
      if (!targets[p]) targets[p] = true, todo.push_back(p);
  }
  return targets;
}

// States with a maximal continuation avoiding `x`.
inline std::vector<bool> x_free_maximal(const Fsa<Interaction>& f, const Participant& x) {
  EdgeFilter<Interaction> free = [&](const auto& t) { return !t.label->involves(x); };
  auto targets = cyclic_states<Interaction>(f, free);
  for (StateId s = 0; s < f.num_states(); ++s)
    if (f.dead(s)) targets[s] = true;
  return backward_closure<Interaction>(f, targets, free);
}

// States from which an x-involving transition is reachable.
inline std::vector<bool> reaches_x(const Fsa<Interaction>& f, const Participant& x) {
  std::vector<bool> targets(f.num_states(), false);
  for (const auto& t : f.transitions())
    if (t.label->involves(x)) targets[t.from] = true;
  return backward_closure<Interaction>(f, targets, [](const auto&) { return true; });
}

// Extends the word reaching q through an x-involving transition and then to
// some maximal word.
inline Word<Interaction> through_x_to_maximal(const Fsa<Interaction>& f, std::vector<Interaction> stem,
                                              StateId q, const Participant& x) {
  auto route = bfs_path<Interaction>(
      f, q,
      [&](StateId s) {
        return std::any_of(f.out(s).begin(), f.out(s).end(),
                           [&](std::size_t t) { return f.transition(t).label->involves(x); });
      },
      [](const auto&) { return true; });
  for (std::size_t t : route->first) stem.push_back(*f.transition(t).label);
  StateId s = route->second;
  for (std::size_t t : f.out(s))
    if (f.transition(t).label->involves(x)) {
      stem.push_back(*f.transition(t).label);
      s = f.transition(t).to;
      break;
    }
  auto rest = maximal_continuation<Interaction>(f, s, [](const auto&) { return true; });
  return Word<Interaction>::finite(stem).concat(*rest);
}
}  // namespace detail

// Branch-awareness on a deterministic interaction automaton, via the subset
// construction of each participant's view: a violation is a subset-state
// holding p, q where p can end without involving X and q can still involve X.
inline std::optional<BaWitness> check_ba_automaton(const Fsa<Interaction>& f) {
  std::set<Participant> parts;
  for (const auto& a : f.labels()) parts.insert(a.sender()), parts.insert(a.receiver());
  for (const auto& x : parts) {
    Fsa<Interaction> view(f.name(0));
    for (StateId s = 1; s < f.num_states(); ++s) view.add_state(f.name(s));
    view.set_initial(f.initial());
    for (const auto& t : f.transitions()) view.add_transition(t.from, detail::keep_if_involves(*t.label, x), t.to);
    auto det = determinise(view);
    auto free_max = detail::x_free_maximal(f, x);
    auto can_x = detail::reaches_x(f, x);
    for (StateId big = 0; big < det.num_states(); ++big) {
      std::optional<StateId> p, q;
      for (StateId m : det.members(big)) {
        if (!p && free_max[m]) p = m;
        if (!q && can_x[m]) q = m;
      }
      if (!p || !q) continue;
      auto route = bfs_path<Interaction>(det, det.initial(), [&](StateId s) { return s == big; },
                                         [](const auto&) { return true; });
      auto v = path_labels(det, route->first);
      auto proj = [&](const Interaction& a) { return detail::keep_if_involves(a, x); };
      auto u1 = path_with_projection(f, f.initial(), *p, v, proj);
      auto u2 = path_with_projection(f, f.initial(), *q, v, proj);
      EdgeFilter<Interaction> free = [&](const auto& t) { return !t.label->involves(x); };
      auto tail = maximal_continuation<Interaction>(f, *p, free);
      auto w1 = Word<Interaction>::finite(*u1).concat(*tail);
      auto w2 = detail::through_x_to_maximal(f, *u2, *q, x);
      return BaWitness{x, w1, w2};
    }
  }
  return std::nullopt;
}

namespace detail {
inline std::string not_maximal_note(const Word<Interaction>& w, const Participant& a) {
  return "projection " + display(project_word(w, a)) + " not maximal";
}

inline std::optional<PropWitness> check_harmonicity(const SystemAutomata& sys, const SemanticsGraph& g) {
  const auto& p = g.fsa;
  for (std::size_t i = 0; i < g.participants.size(); ++i) {
    const Participant& a = g.participants[i];
    const Fsa<Action>& local = sys.at(a);
    auto closure = [&](std::set<StateId> q) {
      std::vector<StateId> todo(q.begin(), q.end());
      while (!todo.empty()) {
        StateId s = todo.back();
        todo.pop_back();
        for (std::size_t t : p.out(s)) {
          const auto& tr = p.transition(t);
          if (!tr.label->involves(a) && q.insert(tr.to).second) todo.push_back(tr.to);
        }
      }
      return q;
    };
    using Node = std::pair<StateId, std::set<StateId>>;
    std::vector<Node> nodes{{local.initial(), closure({p.initial()})}};
    std::vector<std::pair<long, Action>> parent;
    parent.emplace_back(-1, Action("A", "B", "m", Direction::Send));
    std::map<Node, std::size_t> seen{{nodes[0], 0}};
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      for (std::size_t t : local.out(nodes[k].first)) {
        const auto& tr = local.transition(t);
        std::set<StateId> next;
        for (StateId s : nodes[k].second)
          for (std::size_t u : p.out(s)) {
            const auto& pt = p.transition(u);
            if (project_symbol(*pt.label, a) == tr.label) next.insert(pt.to);
          }
        if (next.empty()) {
          std::vector<Action> v{*tr.label};
          for (long c = static_cast<long>(k); parent[c].first >= 0; c = parent[c].first)
            v.push_back(parent[c].second);
          std::reverse(v.begin(), v.end());
          std::vector<Action> realised(v.begin(), v.end() - 1);
          std::optional<std::vector<Interaction>> w;
          for (StateId s : nodes[k].second)
            if ((w = path_with_projection(p, p.initial(), s, realised,
                                          [&](const Interaction& b) { return project_symbol(b, a); })))
              break;
          return PropWitness{Property::HA, a, Word<Interaction>::finite(*w),
                             "local word " + render(v) + " is not the projection of any semantics word"};
        }
        Node n{tr.to, closure(std::move(next))};
        auto [it, fresh] = seen.emplace(n, nodes.size());
        if (fresh) {
          nodes.push_back(std::move(n));
          parent.emplace_back(static_cast<long>(k), *tr.label);
        }
      }
    }
  }
  return std::nullopt;
}
}  // namespace detail

inline std::optional<PropWitness> check_property(const SystemAutomata& sys, Property prop,
                                                 std::size_t budget = kDefaultBudget) {
  const SemanticsGraph g = semantics_graph(sys, budget);
  const auto& f = g.fsa;
  if (prop == Property::HA) return detail::check_harmonicity(sys, g);
  auto enabled = [&](StateId s, std::size_t i) { return !sys.at(g.participants[i]).dead(g.local[s][i]); };
  auto word_to = [&](StateId s) {
    auto route = bfs_path<Interaction>(f, f.initial(), [&](StateId x) { return x == s; },
                                       [](const auto&) { return true; });
    return Word<Interaction>::finite(path_labels(f, route->first));
  };
  auto deadlock = [&]() -> std::optional<PropWitness> {
    for (StateId s = 0; s < f.num_states(); ++s) {
      if (!f.dead(s)) continue;
      for (std::size_t i = 0; i < g.participants.size(); ++i)
        if (enabled(s, i)) {
          auto w = word_to(s);
          return PropWitness{Property::DF, g.participants[i], w, detail::not_maximal_note(w, g.participants[i])};
        }
    }
    return std::nullopt;
  };
  auto starvation = [&]() -> std::optional<PropWitness> {
    std::vector<std::vector<bool>> escape;
    for (const auto& a : g.participants) {
      EdgeFilter<Interaction> free = [&](const auto& t) { return !t.label->involves(a); };
      escape.push_back(detail::backward_closure<Interaction>(f, cyclic_states<Interaction>(f, free), free));
    }
    for (StateId s = 0; s < f.num_states(); ++s)
      for (std::size_t i = 0; i < g.participants.size(); ++i)
        if (enabled(s, i) && escape[i][s]) {
          auto w = word_to(s);
          return PropWitness{Property::SF, g.participants[i], w,
                             detail::not_maximal_note(w, g.participants[i]) +
                                 "; an infinite continuation never involves " + g.participants[i].name()};
        }
    return std::nullopt;
  };
  switch (prop) {
    case Property::DF: return deadlock();
    case Property::SF: return starvation();
    case Property::LF: {
      std::vector<std::vector<bool>> live;
      for (const auto& a : g.participants) live.push_back(detail::reaches_x(f, a));
      for (StateId s = 0; s < f.num_states(); ++s)
        for (std::size_t i = 0; i < g.participants.size(); ++i)
          if (enabled(s, i) && !live[i][s]) {
            auto w = word_to(s);
            return PropWitness{Property::LF, g.participants[i], w,
                               detail::not_maximal_note(w, g.participants[i]) + "; no continuation involves " +
                                   g.participants[i].name()};
          }
      return std::nullopt;
    }
    case Property::SLF: {
      auto v = deadlock();
      if (!v) v = starvation();
      if (v) v->property = Property::SLF;
      return v;
    }
    case Property::HA: break;
  }
  return std::nullopt;
}

inline std::optional<PropWitness> check_property(const ExplicitSystem& s, Property prop,
                                                 std::size_t budget = kDefaultBudget) {
  return check_property(s.automata(budget), prop, budget);
}

using Membership = std::function<bool(const Word<Interaction>&)>;

// Checks a CUI witness against the definition: w1·α, w2·α, w in the
// language, w·α outside it, and the projection equalities.
inline bool validate_cui_witness(const CuiWitness& c, const Membership& in) {
  const auto& x = c.alpha.sender();
  const auto& y = c.alpha.receiver();
  return c.w1.is_finite() && c.w2.is_finite() && c.w.is_finite() && in(c.w1.append(c.alpha)) &&
         in(c.w2.append(c.alpha)) && in(c.w) && !in(c.w.append(c.alpha)) &&
         project_word(c.w, x) == project_word(c.w1, x) && project_word(c.w, y) == project_word(c.w2, y);
}

// Checks a branch-awareness witness: both words maximal members and the
// first projection a strict prefix of the second.
inline bool validate_ba_witness(const BaWitness& b, const Membership& maximal) {
  return maximal(b.w1) && maximal(b.w2) &&
         upw_compare(project_word(b.w1, b.x), project_word(b.w2, b.x)) == Order::StrictPrefixOfSecond;
}

// Maximality in the language of a deterministic automaton.
inline bool is_maximal_in(const Fsa<Interaction>& f, const Word<Interaction>& w) {
  if (!accepts(f, w)) return false;
  if (w.is_lasso()) return true;
  StateId s = f.initial();
  for (const auto& a : w.prefix()) s = *f.step(s, a);
  return f.dead(s);
}

}  // namespace fcl
