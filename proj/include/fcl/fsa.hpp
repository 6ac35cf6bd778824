#pragma once

// Finite-state automata with every state accepting.  Infinite words are
// read Büchi-style, which under that convention means run existence.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fcl/core.hpp"

namespace fcl {

using StateId = std::size_t;

template <class Label>
class Fsa {
 public:
  struct Transition {
    StateId from;
    std::optional<Label> label;  // nullopt is ε
    StateId to;
  };

  explicit Fsa(std::string initial_name = "q0", std::vector<StateId> members = {}) {
    initial_ = add_state(std::move(initial_name), std::move(members));
  }

  StateId add_state(std::string name, std::vector<StateId> members = {}) {
    if (index_.count(name)) throw std::invalid_argument("duplicate state " + name);
    StateId id = names_.size();
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    members_.push_back(std::move(members));
    out_.emplace_back();
    return id;
  }

  StateId ensure_state(const std::string& name) {
    if (auto s = find(name)) return *s;
    return add_state(name);
  }

  void set_initial(StateId s) { initial_ = s; }

  // Adds a transition unless an identical one exists; false on duplicates.
  bool add_transition(StateId from, std::optional<Label> label, StateId to) {
    auto& out = out_.at(from);
    auto less = [&](std::size_t t, const std::pair<const std::optional<Label>&, StateId>& k) {
      return std::tie(trans_[t].label, trans_[t].to) < std::tie(k.first, k.second);
    };
    std::pair<const std::optional<Label>&, StateId> key{label, to};
    auto pos = std::lower_bound(out.begin(), out.end(), key, less);
    if (pos != out.end() && trans_[*pos].label == label && trans_[*pos].to == to) return false;
    std::size_t idx = trans_.size();
    trans_.push_back({from, std::move(label), to});
    out.insert(pos, idx);
    return true;
  }

  std::size_t num_states() const { return names_.size(); }
  StateId initial() const { return initial_; }
  const std::string& name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<Transition>& transitions() const { return trans_; }
  const Transition& transition(std::size_t t) const { return trans_.at(t); }
  // Indices of transitions leaving s, ordered by (label, target).
  const std::vector<std::size_t>& out(StateId s) const { return out_.at(s); }
  bool dead(StateId s) const { return out_.at(s).empty(); }
  // Member states for determinised automata, the component pair for
  // products, empty otherwise.
  const std::vector<StateId>& members(StateId s) const { return members_.at(s); }

  bool deterministic() const {
    for (const auto& out : out_) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (!trans_[out[i]].label) return false;
        if (i && trans_[out[i - 1]].label == trans_[out[i]].label) return false;
      }
    }
    return true;
  }

  std::optional<StateId> step(StateId s, const Label& a) const {
    for (std::size_t t : out_.at(s))
      if (trans_[t].label && *trans_[t].label == a) return trans_[t].to;
    return std::nullopt;
  }

  std::vector<Label> labels() const {
    std::set<Label> ls;
    for (const auto& t : trans_)
      if (t.label) ls.insert(*t.label);
    return {ls.begin(), ls.end()};
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, StateId> index_;
  std::vector<std::vector<StateId>> members_;
  std::vector<Transition> trans_;
  std::vector<std::vector<std::size_t>> out_;
  StateId initial_ = 0;
};

template <class L>
std::set<StateId> epsilon_closure(const Fsa<L>& f, std::set<StateId> states) {
  std::vector<StateId> todo(states.begin(), states.end());
  while (!todo.empty()) {
    StateId s = todo.back();
    todo.pop_back();
    for (std::size_t t : f.out(s)) {
      const auto& tr = f.transition(t);
      if (!tr.label && states.insert(tr.to).second) todo.push_back(tr.to);
    }
  }
  return states;
}

template <class L>
std::string subset_name(const Fsa<L>& f, const std::set<StateId>& subset) {
  std::string out = "{";
  for (StateId s : subset) {
    if (out.size() > 1) out += ",";
    out += f.name(s);
  }
  return out + "}";
}

template <class L>
Fsa<L> determinise(const Fsa<L>& f) {
  std::vector<std::set<StateId>> sets{epsilon_closure(f, {f.initial()})};
  std::map<std::set<StateId>, StateId> seen{{sets[0], 0}};
  Fsa<L> d(subset_name(f, sets[0]), {sets[0].begin(), sets[0].end()});
  for (StateId i = 0; i < sets.size(); ++i) {
    std::map<L, std::set<StateId>> succ;
    for (StateId s : sets[i])
      for (std::size_t t : f.out(s)) {
        const auto& tr = f.transition(t);
        if (tr.label) succ[*tr.label].insert(tr.to);
      }
    for (auto& [label, targets] : succ) {
      auto closed = epsilon_closure(f, std::move(targets));
      auto [it, fresh] = seen.emplace(closed, sets.size());
      if (fresh) {
        d.add_state(subset_name(f, closed), {closed.begin(), closed.end()});
        sets.push_back(closed);
      }
      d.add_transition(i, label, it->second);
    }
  }
  return d;
}

namespace detail {
template <class L>
std::optional<StateId> run_det(const Fsa<L>& d, StateId s, const std::vector<L>& seq) {
  for (const auto& a : seq) {
    auto n = d.step(s, a);
    if (!n) return std::nullopt;
    s = *n;
  }
  return s;
}

template <class L>
bool accepts_det(const Fsa<L>& d, const Word<L>& w) {
  auto s = run_det(d, d.initial(), w.prefix());
  if (!s) return false;
  if (w.is_finite()) return true;
  std::set<StateId> boundaries{*s};
  for (;;) {
    s = run_det(d, *s, w.cycle());
    if (!s) return false;
    if (!boundaries.insert(*s).second) return true;
  }
}
}  // namespace detail

template <class L>
bool accepts(const Fsa<L>& f, const Word<L>& w) {
  if (f.deterministic()) return detail::accepts_det(f, w);
  return detail::accepts_det(determinise(f), w);
}

enum SyncMove : unsigned { kBoth = 1u, kLeft = 2u, kRight = 4u };

// Reachable synchronous product.  For each label, sync says whether both
// components move together, or one moves while the other stays put.  States
// are named `(p,q)` and members() holds the component pair.
template <class L>
Fsa<L> product(const Fsa<L>& f, const Fsa<L>& g, const std::function<unsigned(const L&)>& sync) {
  auto pname = [&](StateId p, StateId q) { return "(" + f.name(p) + "," + g.name(q) + ")"; };
  std::map<std::pair<StateId, StateId>, StateId> seen;
  std::vector<std::pair<StateId, StateId>> pairs{{f.initial(), g.initial()}};
  seen.emplace(pairs[0], 0);
  Fsa<L> r(pname(f.initial(), g.initial()), {f.initial(), g.initial()});
  auto visit = [&](StateId from, std::optional<L> label, StateId p, StateId q) {
    auto [it, fresh] = seen.emplace(std::pair{p, q}, pairs.size());
    if (fresh) {
      r.add_state(pname(p, q), {p, q});
      pairs.emplace_back(p, q);
    }
    r.add_transition(from, std::move(label), it->second);
  };
  for (StateId i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (std::size_t t : f.out(p)) {
      const auto& tf = f.transition(t);
      unsigned mode = tf.label ? sync(*tf.label) : kLeft;
      if (mode & kLeft) visit(i, tf.label, tf.to, q);
      if ((mode & kBoth) && tf.label)
        for (std::size_t u : g.out(q)) {
          const auto& tg = g.transition(u);
          if (tg.label == tf.label) visit(i, tf.label, tf.to, tg.to);
        }
    }
    for (std::size_t u : g.out(q)) {
      const auto& tg = g.transition(u);
      unsigned mode = tg.label ? sync(*tg.label) : kRight;
      if (mode & kRight) visit(i, tg.label, p, tg.to);
    }
  }
  return r;
}

template <class L>
Fsa<L> intersect(const Fsa<L>& f, const Fsa<L>& g) {
  return product<L>(f, g, [](const L&) { return unsigned(kBoth); });
}

template <class L>
std::vector<bool> reachable(const Fsa<L>& f, StateId from) {
  std::vector<bool> seen(f.num_states(), false);
  std::vector<StateId> todo{from};
  seen[from] = true;
  while (!todo.empty()) {
    StateId s = todo.back();
    todo.pop_back();
    for (std::size_t t : f.out(s))
      if (!seen[f.transition(t).to]) seen[f.transition(t).to] = true, todo.push_back(f.transition(t).to);
  }
  return seen;
}

template <class L>
using EdgeFilter = std::function<bool(const typename Fsa<L>::Transition&)>;

// States lying on a cycle made of edges accepted by `ok` (iterative Tarjan).
template <class L>
std::vector<bool> cyclic_states(const Fsa<L>& f, const EdgeFilter<L>& ok) {
  const std::size_t n = f.num_states();
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false), cyclic(n, false);
  std::vector<StateId> stack;
  long counter = 0;
  for (StateId root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<StateId, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& out = f.out(v);
      if (pos < out.size()) {
        const auto& tr = f.transition(out[pos++]);
        if (!ok(tr)) continue;
        StateId w = tr.to;
        if (w == v) cyclic[v] = true;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<StateId> comp;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        if (comp.size() > 1)
          for (StateId c : comp) cyclic[c] = true;
      }
      StateId done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  return cyclic;
}

// Shortest path (in transitions) from `from` to a state satisfying `goal`,
// using only edges accepted by `ok`; ties broken by transition order.
template <class L>
std::optional<std::pair<std::vector<std::size_t>, StateId>> bfs_path(
    const Fsa<L>& f, StateId from, const std::function<bool(StateId)>& goal, const EdgeFilter<L>& ok) {
  std::vector<long> parent(f.num_states(), -2);
  std::deque<StateId> queue{from};
  parent[from] = -1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (goal(s)) {
      std::vector<std::size_t> path;
      for (StateId c = s; parent[c] >= 0; c = f.transition(parent[c]).from) path.push_back(parent[c]);
      std::reverse(path.begin(), path.end());
      return std::pair{path, s};
    }
    for (std::size_t t : f.out(s)) {
      const auto& tr = f.transition(t);
      if (!ok(tr) || parent[tr.to] != -2) continue;
      parent[tr.to] = static_cast<long>(t);
      queue.push_back(tr.to);
    }
  }
  return std::nullopt;
}

template <class L>
std::vector<L> path_labels(const Fsa<L>& f, const std::vector<std::size_t>& path) {
  std::vector<L> out;
  for (std::size_t t : path)
    if (f.transition(t).label) out.push_back(*f.transition(t).label);
  return out;
}

// A maximal continuation from s using only `ok` edges: the nearest route to
// a state without any outgoing transition, otherwise a route into an
// `ok`-cycle closed into a lasso.
template <class L>
std::optional<Word<L>> maximal_continuation(const Fsa<L>& f, StateId s, const EdgeFilter<L>& ok) {
  auto to_dead = bfs_path<L>(f, s, [&](StateId x) { return f.dead(x); }, ok);
  if (to_dead) return Word<L>::finite(path_labels(f, to_dead->first));
  auto cyc = cyclic_states<L>(f, ok);
  auto to_cycle = bfs_path<L>(f, s, [&](StateId x) { return static_cast<bool>(cyc[x]); }, ok);
  if (!to_cycle) return std::nullopt;
  StateId c = to_cycle->second;
  // Shortest cycle through c: BFS from each ok-successor back to c.
  std::optional<std::vector<std::size_t>> best;
  for (std::size_t t : f.out(c)) {
    const auto& tr = f.transition(t);
    if (!ok(tr)) continue;
    auto back = bfs_path<L>(f, tr.to, [&](StateId x) { return x == c; }, ok);
    if (!back) continue;
    std::vector<std::size_t> loop{t};
    loop.insert(loop.end(), back->first.begin(), back->first.end());
    if (!best || loop.size() < best->size()) best = loop;
  }
  auto loop = path_labels(f, *best);
  if (loop.empty()) return std::nullopt;
  return Word<L>::lasso(path_labels(f, to_cycle->first), loop);
}

// A word leading from `from` to `target` whose projection (through `proj`,
// which maps a label to an optional image) is exactly `v`.
template <class L, class Img, class Proj>
std::optional<std::vector<L>> path_with_projection(const Fsa<L>& f, StateId from, StateId target,
                                                   const std::vector<Img>& v, Proj proj) {
  const std::size_t n = f.num_states(), k = v.size() + 1;
  std::vector<std::pair<long, std::size_t>> parent(n * k, {-2, 0});
  std::deque<std::pair<StateId, std::size_t>> queue{{from, 0}};
  parent[from * k] = {-1, 0};
  while (!queue.empty()) {
    auto [s, i] = queue.front();
    queue.pop_front();
    if (s == target && i == v.size()) {
      std::vector<L> word;
      for (auto cur = std::pair{s, i}; parent[cur.first * k + cur.second].first >= 0;) {
        auto [t, pi] = parent[cur.first * k + cur.second];
        if (f.transition(t).label) word.push_back(*f.transition(t).label);
        cur = {f.transition(t).from, pi};
      }
      std::reverse(word.begin(), word.end());
      return word;
    }
    for (std::size_t t : f.out(s)) {
      const auto& tr = f.transition(t);
      std::size_t j = i;
      if (tr.label) {
        auto img = proj(*tr.label);
        if (img) {
          if (i >= v.size() || !(*img == v[i])) continue;
          j = i + 1;
        }
      }
      auto& slot = parent[tr.to * k + j];
      if (slot.first != -2) continue;
      slot = {static_cast<long>(t), i};
      queue.emplace_back(tr.to, j);
    }
  }
  return std::nullopt;
}

template <class L>
struct Enumeration {
  std::set<Word<L>> finite;
  std::set<Word<L>> lassos;
};

// Accepted finite words up to max_len, plus up to max_lassos accepted
// lassos u·v^ω with |u|+|v| ≤ max_len (smallest first).
template <class L>
Enumeration<L> enumerate(const Fsa<L>& f, std::size_t max_len, std::size_t max_lassos) {
  const Fsa<L> d = f.deterministic() ? f : determinise(f);
  Enumeration<L> out;
  std::vector<std::pair<std::vector<L>, StateId>> layer{{{}, d.initial()}};
  for (std::size_t len = 0;; ++len) {
    std::vector<std::pair<std::vector<L>, StateId>> next;
    for (auto& [w, s] : layer) {
      out.finite.insert(Word<L>::finite(w));
      if (len == max_len) continue;
      for (std::size_t t : d.out(s)) {
        auto nw = w;
        nw.push_back(*d.transition(t).label);
        next.emplace_back(std::move(nw), d.transition(t).to);
      }
    }
    if (next.empty() || len == max_len) break;
    layer = std::move(next);
  }
  if (max_lassos == 0) return out;
  std::vector<Word<L>> lassos;
  std::set<Word<L>> seen;
  for (const auto& w : out.finite) {
    const auto& seq = w.prefix();
    for (std::size_t cut = 0; cut < seq.size(); ++cut) {
      auto l = Word<L>::lasso({seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(cut)},
                              {seq.begin() + static_cast<std::ptrdiff_t>(cut), seq.end()});
      if (seen.insert(l).second && detail::accepts_det(d, l)) lassos.push_back(l);
    }
  }
  std::stable_sort(lassos.begin(), lassos.end(),
                   [](const Word<L>& a, const Word<L>& b) { return a.size() < b.size(); });
  for (std::size_t i = 0; i < lassos.size() && i < max_lassos; ++i) out.lassos.insert(lassos[i]);
  return out;
}

template <class L>
struct MaximalWords {
  std::vector<Word<L>> words;
  bool exact;  // false when some maximal words were not enumerated
};

// Maximal words read along simple paths: a path stops at a state without
// outgoing transitions (finite word) or at the first revisit of a state on
// the path (lasso).  The result is exactly the set of maximal words when
// every reachable state on a cycle has a single outgoing transition.
template <class L>
MaximalWords<L> simple_maximal_words(const Fsa<L>& f, std::size_t budget = kDefaultBudget) {
  const Fsa<L> d = f.deterministic() ? f : determinise(f);
  auto cyc = cyclic_states<L>(d, [](const auto&) { return true; });
  auto reach = reachable(d, d.initial());
  bool exact = true;
  for (StateId s = 0; s < d.num_states(); ++s)
    if (reach[s] && cyc[s] && d.out(s).size() != 1) exact = false;
  std::set<Word<L>> words;
  std::vector<StateId> path_states{d.initial()};
  std::vector<L> labels;
  std::function<void()> dfs = [&] {
    StateId s = path_states.back();
    auto at = std::find(path_states.begin(), path_states.end() - 1, s);
    if (at != path_states.end() - 1) {
      auto cut = at - path_states.begin();
      words.insert(Word<L>::lasso({labels.begin(), labels.begin() + cut}, {labels.begin() + cut, labels.end()}));
    } else if (d.dead(s)) {
      words.insert(Word<L>::finite(labels));
    } else {
      for (std::size_t t : d.out(s)) {
        labels.push_back(*d.transition(t).label);
        path_states.push_back(d.transition(t).to);
        dfs();
        labels.pop_back();
        path_states.pop_back();
      }
    }
    if (words.size() > budget) throw StateBudgetExceeded(budget);
  };
  dfs();
  return {{words.begin(), words.end()}, exact};
}

// The maximal words of L(f) when they form a finite set; nullopt otherwise.
template <class L>
std::optional<std::vector<Word<L>>> maximal_words(const Fsa<L>& f, std::size_t budget = kDefaultBudget) {
  auto m = simple_maximal_words(f, budget);
  if (!m.exact) return std::nullopt;
  return std::move(m.words);
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

template <class L>
std::string to_dot(const Fsa<L>& f, const std::string& graph_name = "fsa") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(graph_name) << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  __start [shape=point];\n";
  for (StateId s = 0; s < f.num_states(); ++s)
    os << "  n" << s << " [label=\"" << detail::dot_escape(f.name(s)) << "\"];\n";
  os << "  __start -> n" << f.initial() << ";\n";
  for (StateId s = 0; s < f.num_states(); ++s)
    for (std::size_t t : f.out(s)) {
      const auto& tr = f.transition(t);
      std::string label = tr.label ? to_string(*tr.label) : std::string("ε");
      os << "  n" << s << " -> n" << tr.to << " [label=\"" << detail::dot_escape(label) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace fcl
