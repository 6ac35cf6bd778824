#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace fcl;
using namespace fcl::testing;

namespace {

const Participant A("A"), B("B"), C("C");

// Definition check: w1, w2, w in L, projections agree on sender and
// receiver, w1.alpha and w2.alpha in L, w.alpha not in L.
bool valid_cui(const Fsa<Interaction>& f, const CuiWitness& c) {
  auto x = c.alpha.sender(), y = c.alpha.receiver();
  return det_accepts(f, c.w1) && det_accepts(f, c.w2) && det_accepts(f, c.w) &&
         project_word(c.w1, x) == project_word(c.w, x) && project_word(c.w2, y) == project_word(c.w, y) &&
         det_accepts(f, c.w1.append(c.alpha)) && det_accepts(f, c.w2.append(c.alpha)) &&
         !det_accepts(f, c.w.append(c.alpha));
}

// Some path of f from the initial state projects exactly onto v on x.
bool projects_onto(const Fsa<Interaction>& f, const Participant& x, const AWord& v) {
  std::set<std::pair<StateId, std::size_t>> seen{{f.initial(), 0}};
  std::vector<std::pair<StateId, std::size_t>> todo{{f.initial(), 0}};
  while (!todo.empty()) {
    auto [q, i] = todo.back();
    todo.pop_back();
    if (i == v.size()) return true;
    for (const auto& t : f.transitions()) {
      if (t.from != q) continue;
      std::size_t j = i;
      if (t.label->involves(x)) {
        if (!(project_symbol(*t.label, x) == v.at(i))) continue;
        ++j;
      }
      if (seen.insert({t.to, j}).second) todo.push_back({t.to, j});
    }
  }
  return false;
}

}  // namespace

TEST_CASE("ill-formed automata are rejected") {
  Fsa<Interaction> two("q0");
  two.add_state("q1");
  two.add_state("q2");
  two.add_transition(0, I("A", "B", "m"), 1);
  two.add_transition(0, I("A", "B", "m"), 2);
  CHECK_THROWS_AS(ChorAutomaton("t", two), DeterminismViolation);
  Fsa<Interaction> eps("q0");
  eps.add_state("q1");
  eps.add_transition(0, std::nullopt, 1);
  CHECK_THROWS_AS(ChorAutomaton("t", eps), std::invalid_argument);
}

TEST_CASE("projection of the four-party automaton on C") {
  auto sys = project_chaut(load_ca("bad.ca"));
  const auto& m = sys.machines().at(C).automaton();
  CHECK(m.name(m.initial()) == "{q0,q1}");
  std::set<Action> offered;
  for (std::size_t t : m.out(m.initial())) offered.insert(*m.transition(t).label);
  CHECK(offered == std::set<Action>{snd("C", "D", "n"), snd("C", "B", "r")});
}

TEST_CASE("projection of a single edge is a handshake") {
  auto sys = project_chaut(load_ca("handshake.ca"));
  REQUIRE(sys.machines().size() == 2);
  CHECK(to_explicit(sys).at(A).generators() == std::vector<AWord>{AW({snd("A", "B", "m")})});
  CHECK(to_explicit(sys).at(B).generators() == std::vector<AWord>{AW({rcv("A", "B", "m")})});
}

TEST_CASE("projected machines of the L0 automaton have the local languages") {
  auto e = to_explicit(project_chaut(load_ca("l0.ca")));
  auto p = project_language(load_glang("l0.gl"));
  for (const auto& x : {A, B, C}) CHECK(e.at(x) == p.at(x));
}

TEST_CASE("participants that never act are degenerate") {
  Fsa<Interaction> f("q0");
  f.add_state("q1");
  f.add_state("q2");
  f.add_transition(0, I("A", "B", "m"), 1);
  f.add_transition(2, I("C", "D", "n"), 0);
  auto a = ChorAutomaton("t", f);
  // q2 is unreachable, so C and D take no part.
  CHECK(a.participants() == std::set<Participant>{A, B});
  CHECK_NOTHROW(project_chaut(a));
}

TEST_CASE("CUI on the four-party automaton") {
  auto a = load_ca("bad.ca");
  auto w = decide_cui(a);
  REQUIRE(w);
  CHECK(w->words.w == IWord());
  CHECK(w->words.alpha == I("C", "B", "r"));
  CHECK(valid_cui(a.fsa(), w->words));
  CHECK(w->state == "q0");
  // The pair of ε-closed views from which both sides can see r.
  bool listed = false;
  for (const auto& v : cui_violations(a)) {
    CHECK(valid_cui(a.fsa(), v.words));
    listed = listed || (v.words.w1 == W({I("A", "B", "m")}) && v.words.w2 == W({I("C", "D", "n")}) &&
                        v.words.alpha == I("C", "B", "r"));
  }
  CHECK(listed);
}

TEST_CASE("CUI on small automata") {
  CHECK_FALSE(decide_cui(load_ca("handshake.ca")));
  auto w = decide_cui(load_ca("l0.ca"));
  REQUIRE(w);
  CHECK(w->words.alpha == I("A", "B", "g"));
  CHECK(valid_cui(load_ca("l0.ca").fsa(), w->words));
  CHECK_FALSE(decide_cui(load_ca("closnodl.ca")));
}

TEST_CASE("branch-awareness on the deadlocking automaton") {
  auto w = decide_ba(load_ca("closnodl.ca"));
  REQUIRE(w);
  CHECK(w->words.x == B);
  CHECK(w->p == "q2");
  CHECK(w->q == "q5");
  CHECK(w->words.w1 == W({I("A", "C", "l"), I("A", "B", "m"), I("A", "C", "m")}));
  CHECK(w->words.w2 == W({I("A", "C", "r"), I("A", "B", "m"), I("B", "C", "m")}));
  CHECK_FALSE(w->diagonal_only);
  CHECK_FALSE(decide_ba(load_ca("handshake.ca")));
}

TEST_CASE("branch-awareness needs the diagonal pairs") {
  auto a = load_ca("selfloop.ca");
  auto w = decide_ba_for(a, C);
  REQUIRE(w);
  CHECK(w->p == "q0");
  CHECK(w->q == "q0");
  CHECK(w->words.w1 == IWord::lasso({}, {I("A", "B", "m")}));
  CHECK(project_word(w->words.w1, C).empty());
  CHECK(project_word(w->words.w2, C) == AW({rcv("A", "C", "n")}));
  // B also fails off the diagonal: A->C:n against A->B:m.
  auto all = decide_ba(a);
  REQUIRE(all);
  CHECK_FALSE(all->diagonal_only);
  Fsa<Interaction> loop("q0");
  loop.add_state("q1");
  loop.add_transition(0, I("A", "B", "m"), 0);
  loop.add_transition(0, I("A", "C", "n"), 1);
  loop.add_transition(1, I("A", "B", "m"), 1);
  auto only = decide_ba(ChorAutomaton("loop", loop));
  REQUIRE(only);
  CHECK(only->words.x == C);
  CHECK(only->diagonal_only);
  // No off-diagonal pair exists for C.
  auto twin = fcl::detail::twin_product(a.fsa(), C);
  auto free_max = fcl::detail::x_free_maximal(a.fsa(), C);
  auto can_c = fcl::detail::reaches_x(a.fsa(), C);
  for (auto [pq, s] : fcl::detail::twin_pairs(twin))
    if (pq.first != pq.second) CHECK_FALSE((free_max[pq.first] && can_c[pq.second]));
}

TEST_CASE("realisation reports") {
  auto bad = check_realisation(load_ca("bad.ca"), 3);
  CHECK(bad.complete);
  REQUIRE(bad.counterexample);
  CHECK(*bad.counterexample == W({I("C", "B", "r"), I("C", "D", "n")}));
  auto one = check_realisation(load_ca("handshake.ca"), 4);
  CHECK(one.complete);
  CHECK(one.correct());
  auto l0 = check_realisation(load_ca("l0.ca"), 3);
  CHECK(l0.complete);
  REQUIRE(l0.counterexample);
  CHECK_FALSE(det_accepts(load_ca("l0.ca").fsa(), *l0.counterexample));
}

TEST_CASE("decision procedures agree with the language-level checks") {
  Rng rng(41);
  for (int k = 0; k < 150; ++k) {
    bool acyclic = k % 3 == 0;
    auto a = random_chaut(rng, acyclic);
    auto cw = decide_cui(a);
    auto bw = decide_ba(a);
    if (cw) CHECK(valid_cui(a.fsa(), cw->words));
    if (acyclic) {
      auto mw = maximal_words(a.fsa());
      REQUIRE(mw);
      auto l = GLanguage::from_words(*mw);
      CHECK(cw.has_value() == check_cui(l).has_value());
      CHECK(bw.has_value() == check_ba(l).has_value());
    }
    auto r = check_realisation(a, 5);
    CHECK(r.complete);
    CHECK(r.correct() == !cw.has_value());
  }
}

TEST_CASE("projected machines accept the projections of the automaton") {
  Rng rng(42);
  for (int k = 0; k < 80; ++k) {
    auto a = random_chaut(rng, false);
    CfsmSystem sys;
    try {
      sys = project_chaut(a);
    } catch (const DegenerateParticipant&) {
      continue;
    }
    auto words = words_upto(a.fsa(), 6);
    for (const auto& [x, m] : sys.machines()) {
      std::set<AWord> ours, theirs;
      for (const auto& w : words) ours.insert(project_word(w, x));
      for (const auto& v : words_upto(m.automaton(), 6)) theirs.insert(v);
      // Projections of words up to length 6 have length at most 6.
      for (const auto& v : ours) CHECK(theirs.count(v));
      for (const auto& v : theirs) CHECK(projects_onto(a.fsa(), x, v));
    }
  }
}

TEST_CASE("CUI and branch-awareness make projected machines well behaved") {
  Rng rng(43);
  int good = 0;
  for (int k = 0; k < 200; ++k) {
    auto a = random_chaut(rng, k % 2 == 0);
    if (decide_cui(a) || decide_ba(a)) continue;
    CfsmSystem sys;
    try {
      sys = project_chaut(a);
    } catch (const DegenerateParticipant&) {
      continue;
    }
    ++good;
    for (auto p : kAllCfsmProperties) CHECK_FALSE(check_cfsm_property(sys, p));
  }
  CHECK(good > 10);
}
