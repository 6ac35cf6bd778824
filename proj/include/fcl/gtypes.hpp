#pragma once

// Multiparty global types with explicit recursion, their semantics,
// projection onto processes, and sessions.

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fcl/chaut.hpp"
#include "fcl/core.hpp"
#include "fcl/fsa.hpp"
#include "fcl/langset.hpp"

namespace fcl {

class UnguardedRecursion : public std::invalid_argument {
 public:
  explicit UnguardedRecursion(const std::string& var)
      : std::invalid_argument("recursion variable " + var + " is not guarded"), var_(var) {}
  const std::string& var() const { return var_; }

 private:
  std::string var_;
};

class UnboundVariable : public std::invalid_argument {
 public:
  explicit UnboundVariable(const std::string& var)
      : std::invalid_argument("recursion variable " + var + " is not bound"), var_(var) {}
  const std::string& var() const { return var_; }

 private:
  std::string var_;
};

class DuplicateLabel : public std::invalid_argument {
 public:
  explicit DuplicateLabel(const Message& m) : std::invalid_argument("duplicate branch label " + m.name()), label_(m) {}
  const Message& label() const { return label_; }

 private:
  Message label_;
};

struct GlobalNode;
using GlobalType = std::shared_ptr<const GlobalNode>;

struct GEnd {};
struct GComm {
  Participant sender, receiver;
  std::map<Message, GlobalType> branches;
};
struct GRec {
  std::string var;
  GlobalType body;
};
struct GVar {
  std::string var;
};

struct GlobalNode {
  std::variant<GEnd, GComm, GRec, GVar> node;
};

inline GlobalType gt_end() { return std::make_shared<const GlobalNode>(GlobalNode{GEnd{}}); }

inline GlobalType gt_comm(Participant s, Participant r, std::vector<std::pair<Message, GlobalType>> branches) {
  if (s == r) throw std::invalid_argument("self-communication of " + s.name());
  if (branches.empty()) throw std::invalid_argument("choice without branches");
  GComm c{std::move(s), std::move(r), {}};
  for (auto& [m, g] : branches)
    if (!c.branches.emplace(m, std::move(g)).second) throw DuplicateLabel(m);
  return std::make_shared<const GlobalNode>(GlobalNode{std::move(c)});
}

inline GlobalType gt_msg(std::string_view s, std::string_view r, std::string_view m, GlobalType cont) {
  return gt_comm(Participant(std::string(s)), Participant(std::string(r)), {{Message(std::string(m)), cont}});
}

inline GlobalType gt_rec(std::string var, GlobalType body) {
  if (!is_identifier(var)) throw std::invalid_argument("not an identifier: '" + var + "'");
  return std::make_shared<const GlobalNode>(GlobalNode{GRec{std::move(var), std::move(body)}});
}

inline GlobalType gt_var(std::string var) {
  if (!is_identifier(var)) throw std::invalid_argument("not an identifier: '" + var + "'");
  return std::make_shared<const GlobalNode>(GlobalNode{GVar{std::move(var)}});
}

inline std::string to_string(const GlobalType& g) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, GEnd>) {
          return "end";
        } else if constexpr (std::is_same_v<T, GVar>) {
          return n.var;
        } else if constexpr (std::is_same_v<T, GRec>) {
          return "rec " + n.var + " . " + to_string(n.body);
        } else {
          std::string head = n.sender.name() + "->" + n.receiver.name() + ":";
          if (n.branches.size() == 1)
            return head + n.branches.begin()->first.name() + " . " + to_string(n.branches.begin()->second);
          std::string out = head + "{ ";
          bool first = true;
          for (const auto& [m, c] : n.branches) {
            if (!first) out += ", ";
            first = false;
            out += m.name() + " . " + to_string(c);
          }
          return out + " }";
        }
      },
      g->node);
}

inline bool structurally_equal(const GlobalType& a, const GlobalType& b) { return to_string(a) == to_string(b); }

// Throws UnboundVariable / UnguardedRecursion.
inline void validate(const GlobalType& g) {
  // unguarded: variables bound by a Rec not yet separated from here by a Comm
  std::function<void(const GlobalType&, std::vector<std::string>&, std::set<std::string>&)> go =
      [&](const GlobalType& t, std::vector<std::string>& bound, std::set<std::string>& unguarded) {
        std::visit(
            [&](const auto& n) {
              using T = std::decay_t<decltype(n)>;
              if constexpr (std::is_same_v<T, GVar>) {
                if (std::find(bound.begin(), bound.end(), n.var) == bound.end()) throw UnboundVariable(n.var);
                if (unguarded.count(n.var)) throw UnguardedRecursion(n.var);
              } else if constexpr (std::is_same_v<T, GRec>) {
                bound.push_back(n.var);
                auto u = unguarded;
                u.insert(n.var);
                go(n.body, bound, u);
                bound.pop_back();
              } else if constexpr (std::is_same_v<T, GComm>) {
                for (const auto& [m, c] : n.branches) {
                  std::set<std::string> none;
                  go(c, bound, none);
                }
              }
            },
            t->node);
      };
  std::vector<std::string> bound;
  std::set<std::string> unguarded;
  go(g, bound, unguarded);
}

// g[var := r]; r is closed so capture cannot occur.
inline GlobalType substitute(const GlobalType& g, const std::string& var, const GlobalType& r) {
  return std::visit(
      [&](const auto& n) -> GlobalType {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, GEnd>) {
          return g;
        } else if constexpr (std::is_same_v<T, GVar>) {
          return n.var == var ? r : g;
        } else if constexpr (std::is_same_v<T, GRec>) {
          if (n.var == var) return g;
          return gt_rec(n.var, substitute(n.body, var, r));
        } else {
          GComm c{n.sender, n.receiver, {}};
          for (const auto& [m, b] : n.branches) c.branches.emplace(m, substitute(b, var, r));
          return std::make_shared<const GlobalNode>(GlobalNode{std::move(c)});
        }
      },
      g->node);
}

// Unfolds top-level Rec binders until an End or Comm appears.
inline GlobalType unfold(GlobalType g) {
  while (const auto* r = std::get_if<GRec>(&g->node)) g = substitute(r->body, r->var, g);
  if (std::holds_alternative<GVar>(g->node)) throw UnboundVariable(std::get<GVar>(g->node).var);
  return g;
}

inline std::string gt_key(const GlobalType& g) { return to_string(unfold(g)); }

inline std::set<Interaction> gt_interactions(const GlobalType& g) {
  std::set<Interaction> out;
  std::function<void(const GlobalType&)> go = [&](const GlobalType& t) {
    if (const auto* c = std::get_if<GComm>(&t->node)) {
      for (const auto& [m, b] : c->branches) {
        out.insert(Interaction(c->sender, c->receiver, m));
        go(b);
      }
    } else if (const auto* r = std::get_if<GRec>(&t->node)) {
      go(r->body);
    }
  };
  go(g);
  return out;
}

inline std::set<Participant> gt_participants(const GlobalType& g) {
  std::set<Participant> out;
  for (const auto& a : gt_interactions(g)) out.insert(a.sender()), out.insert(a.receiver());
  return out;
}

namespace detail {
struct GtStepper {
  std::map<std::pair<std::string, Interaction>, std::optional<GlobalType>> memo;
  std::set<std::pair<std::string, Interaction>> in_progress;

  std::optional<GlobalType> step(const GlobalType& g, const Interaction& a) {
    GlobalType n = unfold(g);
    const auto* c = std::get_if<GComm>(&n->node);
    if (!c) return std::nullopt;
    if (a.sender() == c->sender && a.receiver() == c->receiver) {
      auto it = c->branches.find(a.msg());
      if (it == c->branches.end()) return std::nullopt;
      return unfold(it->second);
    }
    if (a.involves(c->sender) || a.involves(c->receiver)) return std::nullopt;
    std::pair key{to_string(n), a};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (!in_progress.insert(key).second) return std::nullopt;
    GComm next{c->sender, c->receiver, {}};
    std::optional<GlobalType> result;
    bool all = true;
    for (const auto& [m, b] : c->branches) {
      auto s = step(b, a);
      if (!s) {
        all = false;
        break;
      }
      next.branches.emplace(m, *s);
    }
    if (all) result = std::make_shared<const GlobalNode>(GlobalNode{std::move(next)});
    in_progress.erase(key);
    memo.emplace(key, result);
    return result;
  }
};
}  // namespace detail

// Transitions of g: direct choices at the top, plus interactions independent
// of the top pair that every branch can perform.  Successors are unfolded.
inline std::vector<std::pair<Interaction, GlobalType>> gt_step(const GlobalType& g) {
  std::vector<std::pair<Interaction, GlobalType>> out;
  detail::GtStepper st;
  for (const auto& a : gt_interactions(g))
    if (auto s = st.step(g, a)) out.emplace_back(a, *s);
  return out;
}

// All traces of length at most max_len.
inline std::set<Word<Interaction>> gt_traces(const GlobalType& g, std::size_t max_len) {
  std::set<Word<Interaction>> out;
  std::vector<std::pair<std::vector<Interaction>, GlobalType>> layer{{{}, unfold(g)}};
  for (std::size_t len = 0; !layer.empty(); ++len) {
    std::vector<std::pair<std::vector<Interaction>, GlobalType>> next;
    for (auto& [w, t] : layer) {
      out.insert(Word<Interaction>::finite(w));
      if (len == max_len) continue;
      for (auto& [a, s] : gt_step(t)) {
        auto nw = w;
        nw.push_back(a);
        next.emplace_back(std::move(nw), s);
      }
    }
    layer = std::move(next);
  }
  return out;
}

// The traces up to max_len, kept as the antichain of the maximal ones.
inline GLanguage gt_language(const GlobalType& g, std::size_t max_len) {
  auto ts = gt_traces(g, max_len);
  return GLanguage::from_words(std::vector<Word<Interaction>>(ts.begin(), ts.end()));
}

// Deterministic c-automaton on the reachable (unfolded) terms.
inline ChorAutomaton gt_to_chaut(const GlobalType& g, std::size_t budget = kDefaultBudget) {
  Fsa<Interaction> f("q0");
  std::map<std::string, StateId> ids;
  std::vector<GlobalType> terms{unfold(g)};
  ids.emplace(to_string(terms[0]), 0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (auto& [a, s] : gt_step(terms[k])) {
      auto key = to_string(s);
      auto it = ids.find(key);
      if (it == ids.end()) {
        if (terms.size() >= budget) throw StateBudgetExceeded(budget);
        it = ids.emplace(key, f.add_state("q" + std::to_string(terms.size()))).first;
        terms.push_back(s);
      }
      f.add_transition(k, a, it->second);
    }
  }
  return ChorAutomaton("gt", std::move(f));
}

// Membership of a finite word in the concurrency and prefix closure of the
// choice paths of g: w is a trace prefix of some path prefix u exactly when
// every participant's subsequence of w is a prefix of its subsequence of u.
inline bool gt_language_member(const GlobalType& g, const Word<Interaction>& w) {
  if (w.is_lasso()) throw std::invalid_argument("gt_language_member expects a finite word");
  auto parts = participants_of(w);
  std::vector<Participant> ps(parts.begin(), parts.end());
  std::vector<std::vector<Interaction>> local(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (const auto& a : w.prefix())
      if (a.involves(ps[i])) local[i].push_back(a);
  auto index = [&](const Participant& p) -> long {
    auto it = std::lower_bound(ps.begin(), ps.end(), p);
    return it != ps.end() && *it == p ? it - ps.begin() : -1;
  };
  using Node = std::pair<std::string, std::vector<std::size_t>>;
  std::set<Node> seen;
  std::deque<std::pair<GlobalType, std::vector<std::size_t>>> queue{{unfold(g), std::vector<std::size_t>(ps.size())}};
  while (!queue.empty()) {
    auto [t, prog] = queue.front();
    queue.pop_front();
    bool done = true;
    for (std::size_t i = 0; i < ps.size(); ++i) done = done && prog[i] == local[i].size();
    if (done) return true;
    if (!seen.emplace(to_string(t), prog).second) continue;
    const auto* c = std::get_if<GComm>(&t->node);
    if (!c) continue;
    for (const auto& [m, b] : c->branches) {
      Interaction a(c->sender, c->receiver, m);
      auto next = prog;
      bool ok = true;
      for (const auto& p : a.participants()) {
        long i = index(p);
        if (i < 0) continue;
        if (next[i] == local[i].size() || !(local[i][next[i]] == a)) {
          ok = false;
          break;
        }
        ++next[i];
      }
      if (ok) queue.emplace_back(unfold(b), std::move(next));
    }
  }
  return false;
}

// Processes.

struct ProcessNode;
using Process = std::shared_ptr<const ProcessNode>;

struct PNil {};
struct PComm {
  Direction dir;  // Send: peer!{...}; Receive: peer?{...}
  Participant peer;
  std::map<Message, Process> branches;
};
struct PRec {
  std::string var;
  Process body;
};
struct PVar {
  std::string var;
};
struct ProcessNode {
  std::variant<PNil, PComm, PRec, PVar> node;
};

inline Process p_nil() { return std::make_shared<const ProcessNode>(ProcessNode{PNil{}}); }
inline Process p_comm(Direction d, Participant peer, std::map<Message, Process> branches) {
  return std::make_shared<const ProcessNode>(ProcessNode{PComm{d, std::move(peer), std::move(branches)}});
}
inline Process p_rec(std::string var, Process body) {
  return std::make_shared<const ProcessNode>(ProcessNode{PRec{std::move(var), std::move(body)}});
}
inline Process p_var(std::string var) { return std::make_shared<const ProcessNode>(ProcessNode{PVar{std::move(var)}}); }

inline std::string to_string(const Process& p) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          return "0";
        } else if constexpr (std::is_same_v<T, PVar>) {
          return n.var;
        } else if constexpr (std::is_same_v<T, PRec>) {
          return "rec " + n.var + " . " + to_string(n.body);
        } else {
          std::string out = n.peer.name() + (n.dir == Direction::Send ? "!{" : "?{");
          bool first = true;
          for (const auto& [m, c] : n.branches) {
            if (!first) out += ", ";
            first = false;
            out += m.name() + "." + to_string(c);
          }
          return out + "}";
        }
      },
      p->node);
}

inline Process substitute(const Process& p, const std::string& var, const Process& r) {
  return std::visit(
      [&](const auto& n) -> Process {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          return p;
        } else if constexpr (std::is_same_v<T, PVar>) {
          return n.var == var ? r : p;
        } else if constexpr (std::is_same_v<T, PRec>) {
          return n.var == var ? p : p_rec(n.var, substitute(n.body, var, r));
        } else {
          std::map<Message, Process> bs;
          for (const auto& [m, c] : n.branches) bs.emplace(m, substitute(c, var, r));
          return p_comm(n.dir, n.peer, std::move(bs));
        }
      },
      p->node);
}

inline Process unfold(Process p) {
  while (const auto* r = std::get_if<PRec>(&p->node)) p = substitute(r->body, r->var, p);
  if (std::holds_alternative<PVar>(p->node)) throw UnboundVariable(std::get<PVar>(p->node).var);
  return p;
}

enum class ProjectionMode { Standard, Generalised };
enum class UndefinedReason { MergeClash, MixedDirections, UnboundedDepth };

inline std::string to_string(UndefinedReason r) {
  switch (r) {
    case UndefinedReason::MergeClash: return "MergeClash";
    case UndefinedReason::MixedDirections: return "MixedDirections";
    case UndefinedReason::UnboundedDepth: return "UnboundedDepth";
  }
  return "?";
}

struct Undefined {
  UndefinedReason reason;
  Participant participant;
  std::string at;  // the subterm where projection failed
};

using Projection = std::variant<Process, Undefined>;

namespace detail {
struct UndefinedError {
  UndefinedReason reason;
  std::string at;
};

// Choice terms reachable from g, keyed by their unfolded rendering, with
// their continuations.
struct TermGraph {
  std::vector<GlobalType> nodes;
  std::vector<std::vector<std::size_t>> succ;
  std::map<std::string, std::size_t> ids;

  explicit TermGraph(const GlobalType& g) {
    add(unfold(g));
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (const auto* c = std::get_if<GComm>(&nodes[k]->node))
        for (const auto& [m, b] : c->branches) {
          std::size_t id = add(unfold(b));
          succ[k].push_back(id);
        }
  }

  std::size_t add(GlobalType t) {
    auto key = to_string(t);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    nodes.push_back(std::move(t));
    succ.emplace_back();
    return ids.emplace(key, nodes.size() - 1).first->second;
  }

  bool involves(std::size_t k, const Participant& x) const {
    const auto* c = std::get_if<GComm>(&nodes[k]->node);
    return c && (c->sender == x || c->receiver == x);
  }
};

// An x-free cycle from which an x interaction is reachable.
inline std::optional<std::size_t> unbounded_depth(const TermGraph& tg, const Participant& x) {
  const std::size_t n = tg.nodes.size();
  Fsa<int> f("0");
  for (std::size_t k = 1; k < n; ++k) f.add_state(std::to_string(k));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t s : tg.succ[k]) f.add_transition(k, tg.involves(k, x) ? 1 : 0, s);
  auto cyc = cyclic_states<int>(f, [](const auto& t) { return *t.label == 0; });
  std::vector<bool> hit(n);
  for (std::size_t k = 0; k < n; ++k) hit[k] = tg.involves(k, x);
  auto reach_x = backward_closure<int>(f, hit, [](const auto&) { return true; });
  for (std::size_t k = 0; k < n; ++k)
    if (cyc[k] && reach_x[k]) return k;
  return std::nullopt;
}

struct Projector {
  const TermGraph& tg;
  Participant x;
  ProjectionMode mode;
  std::vector<bool> has_x;  // x occurs at or below the node
  std::map<std::size_t, std::string> in_progress;
  std::set<std::string> used;
  std::size_t fresh = 0;

  Projector(const TermGraph& g, Participant p, ProjectionMode m) : tg(g), x(std::move(p)), mode(m) {
    std::vector<bool> hit(tg.nodes.size());
    Fsa<int> f("0");
    for (std::size_t k = 1; k < tg.nodes.size(); ++k) f.add_state(std::to_string(k));
    for (std::size_t k = 0; k < tg.nodes.size(); ++k) {
      hit[k] = tg.involves(k, x);
      for (std::size_t s : tg.succ[k]) f.add_transition(k, 0, s);
    }
    has_x = backward_closure<int>(f, hit, [](const auto&) { return true; });
  }

  Process proj(std::size_t k) {
    if (auto it = in_progress.find(k); it != in_progress.end()) {
      used.insert(it->second);
      return p_var(it->second);
    }
    std::string v = "t" + std::to_string(fresh++);
    in_progress.emplace(k, v);
    Process body = node(k);
    in_progress.erase(k);
    return used.count(v) ? p_rec(v, body) : body;
  }

  // The projection at k.  With `expose`, single-branch pass-through is
  // followed too, so the result is never a variable (merges need the top).
  Process node(std::size_t k, bool expose = false) {
    if (!has_x[k]) return p_nil();
    const auto& c = std::get<GComm>(tg.nodes[k]->node);
    std::vector<std::size_t> kids = tg.succ[k];
    if (c.sender == x || c.receiver == x) {
      std::map<Message, Process> bs;
      std::size_t i = 0;
      for (const auto& [m, b] : c.branches) bs.emplace(m, proj(kids[i++]));
      return p_comm(c.sender == x ? Direction::Send : Direction::Receive, c.sender == x ? c.receiver : c.sender,
                    std::move(bs));
    }
    if (kids.size() == 1) return expose ? node(kids[0], true) : proj(kids[0]);
    std::vector<Process> ps;
    for (std::size_t s : kids) ps.push_back(node(s, true));
    const auto* first = std::get_if<PComm>(&ps[0]->node);
    bool uniform = first != nullptr;
    for (const auto& p : ps) {
      const auto* pc = std::get_if<PComm>(&p->node);
      uniform = uniform && pc && pc->dir == first->dir && pc->peer == first->peer;
    }
    if (!uniform || (first->dir == Direction::Send && mode == ProjectionMode::Standard))
      throw UndefinedError{UndefinedReason::MixedDirections, to_string(tg.nodes[k])};
    std::map<Message, Process> merged;
    for (const auto& p : ps)
      for (const auto& [m, b] : std::get<PComm>(p->node).branches)
        if (!merged.emplace(m, b).second) throw UndefinedError{UndefinedReason::MergeClash, to_string(tg.nodes[k])};
    return p_comm(first->dir, first->peer, std::move(merged));
  }
};
}  // namespace detail

inline Projection proj_gt(const GlobalType& g, const Participant& x, ProjectionMode mode = ProjectionMode::Standard) {
  detail::TermGraph tg(g);
  if (auto k = detail::unbounded_depth(tg, x)) return Undefined{UndefinedReason::UnboundedDepth, x, to_string(tg.nodes[*k])};
  detail::Projector pr(tg, x, mode);
  try {
    return pr.proj(0);
  } catch (const detail::UndefinedError& e) {
    return Undefined{e.reason, x, e.at};
  }
}

// A multiparty session: one process per participant.
class Mps {
 public:
  Mps() = default;
  explicit Mps(std::map<Participant, Process> parts) : parts_(std::move(parts)) {
    for (const auto& [p, proc] : parts_) {
      std::function<void(const Process&)> go = [&](const Process& q) {
        if (const auto* c = std::get_if<PComm>(&q->node)) {
          if (c->peer == p) throw std::invalid_argument("participant " + p.name() + " occurs in its own process");
          for (const auto& [m, b] : c->branches) go(b);
        } else if (const auto* r = std::get_if<PRec>(&q->node)) {
          go(r->body);
        }
      };
      go(proc);
    }
  }
  const std::map<Participant, Process>& parts() const { return parts_; }

 private:
  std::map<Participant, Process> parts_;
};

using MpsResult = std::variant<Mps, Undefined>;

inline MpsResult mps_of(const GlobalType& g, ProjectionMode mode = ProjectionMode::Standard) {
  std::map<Participant, Process> parts;
  for (const auto& x : gt_participants(g)) {
    auto p = proj_gt(g, x, mode);
    if (auto* u = std::get_if<Undefined>(&p)) return *u;
    parts.emplace(x, std::get<Process>(p));
  }
  return Mps(std::move(parts));
}

inline bool projectable(const GlobalType& g, ProjectionMode mode = ProjectionMode::Standard) {
  return std::holds_alternative<Mps>(mps_of(g, mode));
}

// A->B:l fires when A offers B!l and B accepts A?l.
inline std::vector<std::pair<Interaction, Mps>> mps_step(const Mps& m) {
  std::vector<std::pair<Interaction, Mps>> out;
  std::map<Participant, Process> unf;
  for (const auto& [p, proc] : m.parts()) unf.emplace(p, unfold(proc));
  for (const auto& [a, pa] : unf) {
    const auto* out_a = std::get_if<PComm>(&pa->node);
    if (!out_a || out_a->dir != Direction::Send) continue;
    auto it = unf.find(out_a->peer);
    if (it == unf.end()) continue;
    const auto* in_b = std::get_if<PComm>(&it->second->node);
    if (!in_b || in_b->dir != Direction::Receive || in_b->peer != a) continue;
    for (const auto& [l, cont] : out_a->branches) {
      auto rcv = in_b->branches.find(l);
      if (rcv == in_b->branches.end()) continue;
      auto next = m.parts();
      next[a] = cont;
      next[out_a->peer] = rcv->second;
      out.emplace_back(Interaction(a, out_a->peer, l), Mps(std::move(next)));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

inline std::set<Word<Interaction>> mps_traces(const Mps& m, std::size_t max_len) {
  std::set<Word<Interaction>> out;
  std::vector<std::pair<std::vector<Interaction>, Mps>> layer{{{}, m}};
  for (std::size_t len = 0; !layer.empty(); ++len) {
    std::vector<std::pair<std::vector<Interaction>, Mps>> next;
    for (auto& [w, s] : layer) {
      out.insert(Word<Interaction>::finite(w));
      if (len == max_len) continue;
      for (auto& [a, t] : mps_step(s)) {
        auto nw = w;
        nw.push_back(a);
        next.emplace_back(std::move(nw), std::move(t));
      }
    }
    layer = std::move(next);
  }
  return out;
}

// The local automaton of a process: states are unfolded process terms.
inline Fsa<Action> process_automaton(const Participant& owner, const Process& p, std::size_t budget = kDefaultBudget) {
  Fsa<Action> f("p0");
  std::map<std::string, StateId> ids;
  std::vector<Process> terms{unfold(p)};
  ids.emplace(to_string(terms[0]), 0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto* c = std::get_if<PComm>(&terms[k]->node);
    if (!c) continue;
    for (const auto& [m, b] : c->branches) {
      auto t = unfold(b);
      auto key = to_string(t);
      auto it = ids.find(key);
      if (it == ids.end()) {
        if (terms.size() >= budget) throw StateBudgetExceeded(budget);
        it = ids.emplace(key, f.add_state("p" + std::to_string(terms.size()))).first;
        terms.push_back(t);
      }
      Action a = c->dir == Direction::Send ? Action(owner, c->peer, m, Direction::Send)
                                           : Action(c->peer, owner, m, Direction::Receive);
      f.add_transition(k, a, it->second);
    }
  }
  return f;
}

inline SystemAutomata mps_automata(const Mps& m, std::size_t budget = kDefaultBudget) {
  SystemAutomata out;
  for (const auto& [p, proc] : m.parts()) out.emplace(p, process_automaton(p, proc, budget));
  return out;
}

// The explicit system of a session; requires finitely many maximal words.
inline ExplicitSystem mps_explicit(const Mps& m, std::size_t budget = kDefaultBudget) {
  std::map<Participant, LLanguage> parts;
  for (const auto& [p, f] : mps_automata(m, budget)) {
    auto ws = maximal_words(f, budget);
    if (!ws) throw NotFinitelyGenerated(p);
    parts.emplace(p, LLanguage::from_words(std::move(*ws)));
  }
  return ExplicitSystem(std::move(parts));
}

struct GtCorrectness {
  std::optional<Word<Interaction>> counterexample;  // least by (length, lex)
  std::size_t traces_checked = 0;
  bool correct() const { return !counterexample; }
};

// Compares session traces up to max_len with the language of g.
inline GtCorrectness gt_correctness(const GlobalType& g, const Mps& m, std::size_t max_len) {
  GtCorrectness r;
  auto ts = mps_traces(m, max_len);
  std::vector<Word<Interaction>> sorted(ts.begin(), ts.end());
  std::stable_sort(sorted.begin(), sorted.end(), detail::shorter_then_lex);
  for (const auto& w : sorted) {
    ++r.traces_checked;
    if (!gt_language_member(g, w)) {
      r.counterexample = w;
      break;
    }
  }
  return r;
}

}  // namespace fcl
