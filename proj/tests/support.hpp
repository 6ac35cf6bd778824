#pragma once

// Fixture loading, seeded random generators and brute-force oracles shared by
// the unit tests and the acceptance binary.  The oracles work from the
// definitions over bounded word sets and use none of the library's searches.

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fcl/cfsm.hpp"
#include "fcl/chaut.hpp"
#include "fcl/frontend.hpp"
#include "fcl/gtypes.hpp"
#include "fcl/langset.hpp"

namespace fcl::testing {

using IWord = Word<Interaction>;
using AWord = Word<Action>;

inline std::string data_path(const std::string& name) { return std::string(FCL_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_data(const std::string& name) { return read_file(data_path(name)); }

inline Interaction I(std::string_view s, std::string_view r, std::string_view m) { return Interaction(s, r, m); }
inline Action snd(std::string_view s, std::string_view r, std::string_view m) {
  return Action(s, r, m, Direction::Send);
}
inline Action rcv(std::string_view s, std::string_view r, std::string_view m) {
  return Action(s, r, m, Direction::Receive);
}

inline IWord W(std::vector<Interaction> v) { return IWord::finite(std::move(v)); }
inline AWord AW(std::vector<Action> v) { return AWord::finite(std::move(v)); }

// All finite prefixes of the given finite words.
template <class S>
std::set<Word<S>> prefix_closure(const std::vector<Word<S>>& ws) {
  std::set<Word<S>> out;
  for (const auto& w : ws)
    for (std::size_t n = 0; n <= w.size(); ++n) out.insert(w.take(n));
  return out;
}

// ---------------------------------------------------------------- random

using Rng = std::mt19937;

inline const std::vector<Interaction>& small_alphabet() {
  static const std::vector<Interaction> a = [] {
    std::vector<Interaction> out;
    for (const char* s : {"A", "B", "C"})
      for (const char* r : {"A", "B", "C"})
        if (std::string(s) != r)
          for (const char* m : {"m", "n"}) out.emplace_back(s, r, m);
    return out;
  }();
  return a;
}

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// A deterministic c-automaton with ≤6 states over A, B, C and messages m, n.
// With `acyclic` every edge goes to a state of larger index.
inline ChorAutomaton random_chaut(Rng& rng, bool acyclic) {
  const std::size_t n = 2 + pick(rng, 5);
  Fsa<Interaction> f("q0");
  for (std::size_t i = 1; i < n; ++i) f.add_state("q" + std::to_string(i));
  // Subset of labels actually used keeps languages small and overlapping.
  std::vector<Interaction> labels = small_alphabet();
  std::shuffle(labels.begin(), labels.end(), rng);
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(3 + pick(rng, 3)), labels.end());
  for (StateId s = 0; s < n; ++s) {
    if (acyclic && s + 1 == n) break;
    std::size_t k = pick(rng, 3) + (s == 0 ? 1 : 0);
    for (std::size_t j = 0; j < k; ++j) {
      const auto& a = labels[pick(rng, labels.size())];
      StateId to = acyclic ? s + 1 + pick(rng, n - s - 1) : pick(rng, n);
      if (!f.step(s, a)) f.add_transition(s, a, to);
    }
  }
  return ChorAutomaton("rand", std::move(f));
}

// Random explicit g-language: 1..4 generators of length 1..4, sometimes
// with a lasso generator.
inline GLanguage random_glang(Rng& rng, bool allow_lassos = true) {
  std::vector<Interaction> labels = small_alphabet();
  std::shuffle(labels.begin(), labels.end(), rng);
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(3 + pick(rng, 3)), labels.end());
  std::vector<IWord> gens;
  const std::size_t k = 1 + pick(rng, 4);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Interaction> w;
    const std::size_t len = 1 + pick(rng, 4);
    for (std::size_t j = 0; j < len; ++j) w.push_back(labels[pick(rng, labels.size())]);
    if (allow_lassos && pick(rng, 6) == 0) {
      std::size_t cut = pick(rng, w.size());
      gens.push_back(IWord::lasso({w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cut)},
                                  {w.begin() + static_cast<std::ptrdiff_t>(cut), w.end()}));
    } else {
      gens.push_back(IWord::finite(w));
    }
  }
  return GLanguage::from_words(gens);
}

// Random deterministic CFSM system: 2 or 3 participants, ≤4 states each.
// With `acyclic` every edge goes to a state of larger index.
inline CfsmSystem random_cfsm_system(Rng& rng, bool acyclic = false) {
  std::vector<std::string> parts{"A", "B"};
  if (pick(rng, 2)) parts.push_back("C");
  std::map<Participant, Cfsm> machines;
  for (const auto& p : parts) {
    const std::size_t n = acyclic ? 2 + pick(rng, 3) : 1 + pick(rng, 4);
    Fsa<Action> f("q0");
    for (std::size_t i = 1; i < n; ++i) f.add_state("q" + std::to_string(i));
    for (StateId s = 0; s < n; ++s) {
      std::size_t k = pick(rng, 3) + (s == 0 ? 1 : 0);
      for (std::size_t j = 0; j < k; ++j) {
        std::string peer;
        do peer = parts[pick(rng, parts.size())];
        while (peer == p);
        const char* msg = pick(rng, 2) ? "m" : "n";
        Action a = pick(rng, 2) ? Action(p, peer, msg, Direction::Send) : Action(peer, p, msg, Direction::Receive);
        if (acyclic && s + 1 == n) break;
        StateId to = acyclic ? s + 1 + pick(rng, n - s - 1) : pick(rng, n);
        if (!f.step(s, a)) f.add_transition(s, a, to);
      }
    }
    machines.emplace(Participant(p), Cfsm(Participant(p), std::move(f)));
  }
  return CfsmSystem(std::move(machines));
}

// Machines of a random c-automaton's projection; these synchronise far more
// often than independently drawn machines.
inline CfsmSystem projected_cfsm_system(Rng& rng) {
  for (;;) {
    auto a = random_chaut(rng, pick(rng, 2) == 0);
    if (a.participants().size() >= 2) return project_chaut(a);
  }
}

// ---------------------------------------------------------------- oracles

// Finite words of L(f) up to max_len, by plain path unfolding of a
// (possibly non-deterministic, ε-free) automaton.
template <class L>
std::set<Word<L>> words_upto(const Fsa<L>& f, std::size_t max_len) {
  std::set<Word<L>> out;
  std::vector<std::pair<std::vector<L>, StateId>> layer{{{}, f.initial()}};
  for (std::size_t len = 0; !layer.empty(); ++len) {
    std::vector<std::pair<std::vector<L>, StateId>> next;
    for (auto& [w, s] : layer) {
      out.insert(Word<L>::finite(w));
      if (len == max_len) continue;
      for (std::size_t t : f.out(s)) {
        auto nw = w;
        nw.push_back(*f.transition(t).label);
        next.emplace_back(std::move(nw), f.transition(t).to);
      }
    }
    layer = std::move(next);
  }
  return out;
}

// Lasso membership by running the stem and then the cycle until a boundary
// state repeats; valid for deterministic automata.
template <class L>
bool det_accepts(const Fsa<L>& f, const Word<L>& w) {
  auto run = [&](StateId s, const std::vector<L>& seq) -> std::optional<StateId> {
    for (const auto& a : seq) {
      auto n = f.step(s, a);
      if (!n) return std::nullopt;
      s = *n;
    }
    return s;
  };
  auto s = run(f.initial(), w.prefix());
  if (!s || w.is_finite()) return s.has_value();
  std::set<StateId> seen;
  while (seen.insert(*s).second) {
    s = run(*s, w.cycle());
    if (!s) return false;
  }
  return true;
}

// CUI by definition over `members`, the finite words of the language up to
// length max_len.  Returns a witness (w1, w2, w, alpha) within the bound.
inline std::optional<CuiWitness> brute_cui(const std::set<IWord>& members, std::size_t max_len) {
  std::set<Interaction> alphabet;
  for (const auto& w : members)
    for (const auto& a : w.prefix()) alphabet.insert(a);
  for (const auto& alpha : alphabet) {
    std::map<AWord, IWord> by_x, by_y;
    for (const auto& w : members) {
      if (w.empty() || !(w.prefix().back() == alpha)) continue;
      IWord pre = w.take(w.size() - 1);
      by_x.emplace(project_word(pre, alpha.sender()), pre);
      by_y.emplace(project_word(pre, alpha.receiver()), pre);
    }
    for (const auto& w : members) {
      if (w.size() >= max_len || members.count(w.append(alpha))) continue;
      auto i = by_x.find(project_word(w, alpha.sender()));
      auto j = by_y.find(project_word(w, alpha.receiver()));
      if (i != by_x.end() && j != by_y.end()) return CuiWitness{i->second, j->second, w, alpha};
    }
  }
  return std::nullopt;
}

// Maximal words of a deterministic automaton within a bound: finite words
// ending in a dead state plus accepted lassos with |stem|+|cycle| ≤ max_len.
inline std::vector<IWord> bounded_maximal(const Fsa<Interaction>& f, std::size_t max_len) {
  std::vector<IWord> out;
  std::set<IWord> lassos;
  for (const auto& w : words_upto(f, max_len)) {
    StateId s = f.initial();
    for (const auto& a : w.prefix()) s = *f.step(s, a);
    if (f.dead(s)) out.push_back(w);
    const auto& seq = w.prefix();
    for (std::size_t cut = 0; cut < seq.size(); ++cut) {
      auto l = IWord::lasso({seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(cut)},
                            {seq.begin() + static_cast<std::ptrdiff_t>(cut), seq.end()});
      if (det_accepts(f, l)) lassos.insert(l);
    }
  }
  out.insert(out.end(), lassos.begin(), lassos.end());
  return out;
}

// Branch-awareness by definition over a set of maximal words.
inline std::optional<BaWitness> brute_ba(const std::vector<IWord>& maximal) {
  std::set<Participant> parts;
  for (const auto& w : maximal) parts.merge(participants_of(w));
  for (const auto& x : parts)
    for (const auto& u : maximal)
      for (const auto& v : maximal)
        if (upw_compare(project_word(u, x), project_word(v, x)) == Order::StrictPrefixOfSecond)
          return BaWitness{x, u, v};
  return std::nullopt;
}

// Synchronous semantics by definition: every projection is accepted by the
// owner's automaton and no foreign participant occurs.
inline bool oracle_sem_member(const SystemAutomata& sys, const IWord& w) {
  for (const auto& p : participants_of(w))
    if (!sys.count(p)) return false;
  for (const auto& [p, f] : sys)
    if (!accepts(f, project_word(w, p))) return false;
  return true;
}

// Members of the semantics up to max_len, grown letter by letter.
inline std::set<IWord> oracle_sem_words(const SystemAutomata& sys, std::size_t max_len) {
  std::set<Interaction> alphabet;
  for (const auto& [p, f] : sys)
    for (const auto& a : f.labels())
      if (a.is_send()) alphabet.emplace(a.sender(), a.receiver(), a.msg());
  std::set<IWord> out{IWord()};
  std::vector<IWord> layer{IWord()};
  for (std::size_t len = 0; len < max_len; ++len) {
    std::vector<IWord> next;
    for (const auto& w : layer)
      for (const auto& a : alphabet) {
        auto e = w.append(a);
        if (oracle_sem_member(sys, e)) out.insert(e), next.push_back(e);
      }
    layer = std::move(next);
  }
  return out;
}

// All words reachable from w by adjacent swaps of independent interactions.
inline std::set<IWord> swap_closure(const IWord& w) {
  std::set<IWord> seen{w};
  std::vector<IWord> todo{w};
  while (!todo.empty()) {
    auto u = todo.back();
    todo.pop_back();
    auto seq = u.prefix();
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (!independent(seq[i], seq[i + 1])) continue;
      auto s = seq;
      std::swap(s[i], s[i + 1]);
      auto v = IWord::finite(s);
      if (seen.insert(v).second) todo.push_back(v);
    }
  }
  return seen;
}

// ---------------------------------------------------------------- fixtures

// Task-dispatching protocol with nesting bounded by `depth`: the maximal
// words of D_depth·S→D:s·S→H:s where
//   D_0 = {ε},  D_k = {ε} ∪ S→D:a·D→S:t·S→H:t·D_{k-1}·S→H:r·H→S:r·S→D:d·D_{k-1}
//                     ∪ S→D:a·D→S:t·S→D:d·D_{k-1}.
inline GLanguage task_dispatching(std::size_t depth) {
  using Seq = std::vector<Interaction>;
  std::vector<Seq> d{{}};
  for (std::size_t k = 1; k <= depth; ++k) {
    std::vector<Seq> next{{}};
    for (const auto& x : d)
      for (const auto& y : d) {
        Seq w{I("S", "D", "a"), I("D", "S", "t"), I("S", "H", "t")};
        w.insert(w.end(), x.begin(), x.end());
        for (auto a : {I("S", "H", "r"), I("H", "S", "r"), I("S", "D", "d")}) w.push_back(a);
        w.insert(w.end(), y.begin(), y.end());
        next.push_back(std::move(w));
      }
    for (const auto& y : d) {
      Seq w{I("S", "D", "a"), I("D", "S", "t"), I("S", "D", "d")};
      w.insert(w.end(), y.begin(), y.end());
      next.push_back(std::move(w));
    }
    d = std::move(next);
  }
  std::vector<IWord> gens;
  for (auto w : d) {
    w.push_back(I("S", "D", "s"));
    w.push_back(I("S", "H", "s"));
    gens.push_back(IWord::finite(std::move(w)));
  }
  return GLanguage::from_antichain(gens);
}

inline GLanguage load_glang(const std::string& name) { return parse_glang(read_data(name), name); }
inline ChorAutomaton load_ca(const std::string& name) { return parse_ca(read_data(name), name); }
inline GlobalType load_gt(const std::string& name) { return parse_gt(read_data(name), name); }

inline std::vector<std::string> gt_corpus() {
  return {"gt/01_end.gt",    "gt/02_choice.gt",    "gt/03_loop.gt",      "gt/04_parallel.gt", "gt/05_merge.gt",
          "gt/06_mixed.gt",  "gt/07_worker.gt",    "gt/08_two_buyer.gt", "gt/09_ring.gt",     "gt/10_clash.gt",
          "gt/11_unbounded.gt", "gt/12_relay.gt", "gt/13_ack_loop.gt"};
}

}  // namespace fcl::testing
