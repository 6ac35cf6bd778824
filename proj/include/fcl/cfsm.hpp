#pragma once

// Communicating finite-state machines under synchronous semantics.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcl/fsa.hpp"
#include "fcl/langset.hpp"

namespace fcl {

class NonDeterministicMachine : public std::invalid_argument {
 public:
  NonDeterministicMachine(const Participant& owner, const std::string& state)
      : std::invalid_argument("machine " + owner.name() + " is not deterministic at state " + state),
        owner_(owner),
        state_(state) {}
  const Participant& owner() const { return owner_; }
  const std::string& state() const { return state_; }

 private:
  Participant owner_;
  std::string state_;
};

class NonLocalAction : public std::invalid_argument {
 public:
  NonLocalAction(const Participant& owner, const Action& a)
      : std::invalid_argument("action " + to_string(a) + " is not local to " + owner.name()), owner_(owner) {}
  const Participant& owner() const { return owner_; }

 private:
  Participant owner_;
};

class NotFinitelyGenerated : public std::runtime_error {
 public:
  explicit NotFinitelyGenerated(const Participant& p)
      : std::runtime_error("language of machine " + p.name() + " has infinitely many maximal words") {}
};

class Cfsm {
 public:
  Cfsm(Participant owner, Fsa<Action> automaton) : owner_(std::move(owner)), fsa_(std::move(automaton)) {
    for (StateId s = 0; s < fsa_.num_states(); ++s) {
      const auto& out = fsa_.out(s);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& tr = fsa_.transition(out[i]);
        if (!tr.label || (i && fsa_.transition(out[i - 1]).label == tr.label))
          throw NonDeterministicMachine(owner_, fsa_.name(s));
        if (tr.label->subject() != owner_) throw NonLocalAction(owner_, *tr.label);
      }
    }
  }

  const Participant& owner() const { return owner_; }
  const Fsa<Action>& automaton() const { return fsa_; }

 private:
  Participant owner_;
  Fsa<Action> fsa_;
};

class CfsmSystem {
 public:
  CfsmSystem() = default;
  explicit CfsmSystem(std::map<Participant, Cfsm> machines) : machines_(std::move(machines)) {
    for (const auto& [p, m] : machines_) {
      if (m.owner() != p) throw std::invalid_argument("machine for " + p.name() + " is owned by " + m.owner().name());
      for (const auto& t : m.automaton().transitions())
        if (!machines_.count(t.label->peer()))
          throw std::invalid_argument("participant " + t.label->peer().name() + " has no machine");
    }
  }

  const std::map<Participant, Cfsm>& machines() const { return machines_; }

  SystemAutomata automata() const {
    SystemAutomata out;
    for (const auto& [p, m] : machines_) out.emplace(p, m.automaton());
    return out;
  }

 private:
  std::map<Participant, Cfsm> machines_;
};

// States are reachable configurations named `A:q0,B:p1`; `local` holds the
// per-participant states in participant order.
inline SemanticsGraph sync_product(const CfsmSystem& s, std::size_t budget = kDefaultBudget) {
  return semantics_graph(s.automata(), budget);
}

enum class CfsmProperty { Liveness, LockFreedom, DeadlockFreedom };

inline std::string to_string(CfsmProperty p) {
  switch (p) {
    case CfsmProperty::Liveness: return "Liveness";
    case CfsmProperty::LockFreedom: return "LockFreedom";
    case CfsmProperty::DeadlockFreedom: return "DeadlockFreedom";
  }
  return "?";
}

inline constexpr CfsmProperty kAllCfsmProperties[] = {CfsmProperty::Liveness, CfsmProperty::LockFreedom,
                                                      CfsmProperty::DeadlockFreedom};

struct CfsmViolation {
  std::string configuration;
  Participant participant;
  Word<Interaction> trace;
};

inline std::optional<CfsmViolation> check_cfsm_property(const CfsmSystem& sys, CfsmProperty prop,
                                                        std::size_t budget = kDefaultBudget) {
  const SemanticsGraph g = sync_product(sys, budget);
  const auto& f = g.fsa;
  const auto& parts = g.participants;
  auto enabled = [&](StateId s, std::size_t i) {
    return !sys.machines().at(parts[i]).automaton().dead(g.local[s][i]);
  };
  // bad[i][s]: configuration s violates the property for participant i.
  std::vector<std::vector<bool>> bad;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Participant& a = parts[i];
    EdgeFilter<Interaction> free = [&](const auto& t) { return !t.label->involves(a); };
    std::vector<bool> b(f.num_states(), false);
    switch (prop) {
      case CfsmProperty::DeadlockFreedom:
        for (StateId s = 0; s < f.num_states(); ++s) b[s] = f.dead(s);
        break;
      case CfsmProperty::Liveness: {
        b = detail::reaches_x(f, a);
        b.flip();
        break;
      }
      case CfsmProperty::LockFreedom: {
        auto ends = cyclic_states<Interaction>(f, free);
        for (StateId s = 0; s < f.num_states(); ++s)
          if (f.dead(s)) ends[s] = true;
        b = detail::backward_closure<Interaction>(f, ends, free);
        break;
      }
    }
    bad.push_back(std::move(b));
  }
  for (StateId s = 0; s < f.num_states(); ++s)
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (enabled(s, i) && bad[i][s]) {
        auto route = bfs_path<Interaction>(f, f.initial(), [&](StateId x) { return x == s; },
                                           [](const auto&) { return true; });
        return CfsmViolation{f.name(s), parts[i], Word<Interaction>::finite(path_labels(f, route->first))};
      }
  return std::nullopt;
}

inline ExplicitSystem to_explicit(const CfsmSystem& sys, std::size_t budget = kDefaultBudget) {
  std::map<Participant, LLanguage> parts;
  for (const auto& [p, m] : sys.machines()) {
    auto ws = maximal_words(m.automaton(), budget);
    if (!ws) throw NotFinitelyGenerated(p);
    parts.emplace(p, LLanguage::from_words(std::move(*ws)));
  }
  return ExplicitSystem(std::move(parts));
}

}  // namespace fcl
