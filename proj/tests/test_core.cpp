#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace fcl;
using namespace fcl::testing;

TEST_CASE("identifiers") {
  CHECK(is_identifier("A"));
  CHECK(is_identifier("buyer_2"));
  CHECK_FALSE(is_identifier("2B"));
  CHECK_FALSE(is_identifier(""));
  CHECK_FALSE(is_identifier("a-b"));
  CHECK_THROWS_AS(Participant("x y"), std::invalid_argument);
}

TEST_CASE("self-communication is rejected") {
  CHECK_THROWS_AS(Interaction("A", "A", "m"), std::invalid_argument);
  CHECK_THROWS_AS(Action("A", "A", "m", Direction::Send), std::invalid_argument);
}

TEST_CASE("action subject and peer") {
  auto s = snd("A", "B", "m");
  auto r = rcv("A", "B", "m");
  CHECK(s.subject() == Participant("A"));
  CHECK(s.peer() == Participant("B"));
  CHECK(r.subject() == Participant("B"));
  CHECK(r.peer() == Participant("A"));
  CHECK(to_string(s) == "AB!m");
  CHECK(to_string(r) == "AB?m");
}

TEST_CASE("symbol projection") {
  auto a = I("A", "B", "m");
  CHECK(project_symbol(a, Participant("A")) == snd("A", "B", "m"));
  CHECK(project_symbol(a, Participant("B")) == rcv("A", "B", "m"));
  CHECK_FALSE(project_symbol(a, Participant("C")).has_value());
}

TEST_CASE("word projection") {
  auto w = W({I("C", "A", "w"), I("A", "B", "g")});
  CHECK(project_word(w, Participant("A")) == AW({rcv("C", "A", "w"), snd("A", "B", "g")}));
  CHECK(project_word(IWord(), Participant("A")).empty());
  auto l = IWord::lasso({}, {I("A", "B", "m"), I("C", "D", "n")});
  auto p = project_word(l, Participant("A"));
  CHECK(p == AWord::lasso({}, {snd("A", "B", "m")}));
  // Four unrollings project to four unrollings of the result.
  CHECK(project_word(l.unroll(4), Participant("A")) == p.unroll(4));
  // A cycle avoiding the participant projects to a finite word.
  CHECK(project_word(IWord::lasso({I("A", "B", "m")}, {I("C", "D", "n")}), Participant("A")) ==
        AW({snd("A", "B", "m")}));
}

TEST_CASE("independence") {
  CHECK(independent(I("A", "B", "m"), I("C", "D", "n")));
  CHECK_FALSE(independent(I("A", "B", "m"), I("B", "C", "n")));
  CHECK_FALSE(independent(I("A", "B", "m"), I("A", "B", "n")));
}

TEST_CASE("prefix comparison") {
  CHECK(upw_compare(AW({rcv("A", "B", "m")}), AW({rcv("A", "B", "m"), snd("B", "C", "m")})) ==
        Order::StrictPrefixOfSecond);
  auto m = I("A", "B", "m");
  CHECK(upw_compare(IWord::lasso({}, {m}), IWord::lasso({m}, {m, m})) == Order::Equal);
  CHECK(upw_compare(W({m}), W({I("C", "D", "n")})) == Order::Incomparable);
  CHECK(upw_compare(W({m, m}), IWord::lasso({}, {m})) == Order::StrictPrefixOfSecond);
  CHECK(upw_compare(IWord::lasso({}, {m}), W({m})) == Order::StrictPrefixOfFirst);
}

TEST_CASE("lasso canonical form") {
  auto a = I("A", "B", "a");
  auto b = I("A", "B", "b");
  // Rotation absorbed into the prefix, cycle reduced to its primitive root.
  auto l = IWord::lasso({a, b}, {a, b, a, b});
  CHECK(l.prefix().empty());
  CHECK(l.cycle() == std::vector<Interaction>{a, b});
  auto r = IWord::lasso({b}, {a, b});
  CHECK(r.prefix().empty());
  CHECK(r.cycle() == std::vector<Interaction>{b, a});
  CHECK(IWord::lasso({a}, {b, a}) == IWord::lasso({}, {a, b}));
  CHECK_THROWS(IWord::lasso({a}, {}));
  CHECK(render(IWord::lasso({a}, {b})) == "A->B:a ( A->B:b )^w");
  CHECK(display(IWord()) == "ε");
}

TEST_CASE("participants") {
  CHECK(participants_of(I("A", "B", "m")) == std::set<Participant>{Participant("A"), Participant("B")});
  CHECK(participants_of(IWord()).empty());
  CHECK(participants_of(std::vector<IWord>{W({I("C", "A", "w"), I("A", "B", "g")})}).size() == 3);
}

namespace {
std::vector<IWord> all_words(const std::vector<Interaction>& alpha, std::size_t max_len) {
  std::vector<IWord> out{IWord()};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < max_len)
      for (const auto& a : alpha) out.push_back(out[i].append(a));
  return out;
}

IWord random_word(Rng& rng, const std::vector<Interaction>& alpha) {
  std::vector<Interaction> u, v;
  for (std::size_t i = pick(rng, 3); i > 0; --i) u.push_back(alpha[pick(rng, alpha.size())]);
  for (std::size_t i = pick(rng, 4); i > 0; --i) v.push_back(alpha[pick(rng, alpha.size())]);
  if (v.empty()) return IWord::finite(u);
  return IWord::lasso(u, v);
}
}  // namespace

TEST_CASE("projection is a homomorphism on finite words") {
  const std::vector<Interaction> alpha{I("A", "B", "m"), I("B", "C", "n"), I("C", "A", "m")};
  auto ws = all_words(alpha, 3);
  for (const auto& u : ws)
    for (const auto& v : ws)
      for (const char* p : {"A", "B", "C"}) {
        Participant x(p);
        CHECK(project_word(u.concat(v), x) == project_word(u, x).concat(project_word(v, x)));
      }
}

TEST_CASE("prefix order is a partial order on random words") {
  const std::vector<Interaction> alpha{I("A", "B", "m"), I("A", "B", "n")};
  Rng rng(7);
  for (int k = 0; k < 2000; ++k) {
    auto u = random_word(rng, alpha), v = random_word(rng, alpha), w = random_word(rng, alpha);
    CHECK(upw_compare(u, u) == Order::Equal);
    if (is_prefix(u, v) && is_prefix(v, u)) CHECK(u == v);
    if (is_prefix(u, v) && is_prefix(v, w)) CHECK(is_prefix(u, w));
    // Equality of ω-words coincides with equality of canonical forms.
    CHECK((upw_compare(u, v) == Order::Equal) == (u == v));
    if (u.is_lasso()) {
      CHECK(IWord::lasso(u.prefix(), u.cycle()) == u);
      for (std::size_t n = 0; n < 4; ++n) CHECK(is_prefix(u.unroll(n), u.unroll(n + 1)));
    }
  }
}
