#include "catch_amalgamated.hpp"
#include "fcl/cli.hpp"
#include "support.hpp"

using namespace fcl;
using namespace fcl::testing;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result fcl_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  for (auto& a : args)
    if (a.find('.') != std::string::npos && a[0] != '-' && a[0] != '/') a = data_path(a);
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Result& r) { return Json::parse(r.out); }

bool valid_report(const Json& j) {
  if (!j.is_object() || j.size() != 4) return false;
  auto it = j.begin();
  return it.key() == "check" && (++it).key() == "holds" && (++it).key() == "witness" && (++it).key() == "stats" &&
         j["holds"].is_boolean() && (j["holds"] ? j["witness"].is_null() : !j["witness"].is_null());
}

}  // namespace

TEST_CASE("check cui") {
  auto bad = fcl_run({"check", "cui", "bad.ca", "--json"});
  CHECK(bad.code == cli::kViolated);
  auto j = json_of(bad);
  CHECK(valid_report(j));
  CHECK(j["witness"]["alpha"] == "C->B:r");
  CHECK(fcl_run({"check", "cui", "handshake.ca"}).code == cli::kHolds);
  auto text = fcl_run({"check", "cui", "l0.gl"});
  CHECK(text.code == cli::kViolated);
  CHECK(text.out.find("alpha: A->B:g") != std::string::npos);
}

TEST_CASE("check ba and properties") {
  auto ba = fcl_run({"check", "ba", "closnodl.ca"});
  CHECK(ba.code == cli::kViolated);
  CHECK(ba.out.find("violated for B") != std::string::npos);
  CHECK(fcl_run({"check", "ba", "handshake.ca"}).code == cli::kHolds);

  auto props = fcl_run({"check", "props", "closnodl.gl", "--json"});
  CHECK(props.code == cli::kViolated);
  auto arr = json_of(props);
  REQUIRE(arr.is_array());
  CHECK(arr.size() == 5);
  for (const auto& r : arr) CHECK(valid_report(r));
  CHECK(fcl_run({"check", "props", "handshake.cfsm"}).code == cli::kHolds);

  auto cf = fcl_run({"check", "cfsm-props", "closnodl.ca"});
  CHECK(cf.code == cli::kViolated);
  CHECK(cf.out.find("DeadlockFreedom: violated") != std::string::npos);
  CHECK(fcl_run({"check", "cfsm-props", "handshake.cfsm", "--json"}).code == cli::kHolds);
}

TEST_CASE("check realise agrees with check cui") {
  for (const char* f : {"bad.ca", "closnodl.ca", "handshake.ca", "l0.ca", "selfloop.ca"}) {
    INFO(f);
    auto cui = fcl_run({"check", "cui", f});
    auto real = fcl_run({"check", "realise", f, "--max-len", "5"});
    CHECK(cui.code == real.code);
  }
  auto r = json_of(fcl_run({"check", "realise", "bad.ca", "--json", "--max-len", "3"}));
  CHECK(valid_report(r));
  CHECK(r["witness"]["counterexample"] == Json::array({"C->B:r", "C->D:n"}));
  CHECK(r["stats"]["complete"] == true);
}

TEST_CASE("projection, product and words") {
  auto p = fcl_run({"project", "l0.ca"});
  CHECK(p.code == cli::kHolds);
  auto back = parse_cfsm_system(p.out);
  CHECK(back.machines().size() == 3);
  CHECK(words_upto(sync_product(back).fsa, 4) == words_upto(sync_product(project_chaut(load_ca("l0.ca"))).fsa, 4));
  auto pl = fcl_run({"project", "l0.gl"});
  CHECK(pl.code == cli::kHolds);
  CHECK(pl.out.find("subject: A") != std::string::npos);

  auto prod = fcl_run({"product", "handshake.cfsm"});
  CHECK(prod.code == cli::kHolds);
  CHECK(prod.out.find("digraph \"product\"") != std::string::npos);

  auto w = fcl_run({"words", "closnodl.ca", "--max-len", "3"});
  CHECK(w.code == cli::kHolds);
  std::set<std::string> lines;
  std::istringstream in(w.out);
  for (std::string l; std::getline(in, l);) lines.insert(l);
  std::set<std::string> expect;
  auto sys = project_chaut(load_ca("closnodl.ca"));
  for (const auto& x : oracle_sem_words(sys.automata(), 3)) expect.insert(display(x));
  CHECK(lines == expect);
  auto wj = json_of(fcl_run({"words", "l0.gl", "--max-len", "3", "--json"}));
  CHECK(wj.size() == 8);
}

TEST_CASE("global type commands") {
  auto p = fcl_run({"gt", "project", "gt/02_choice.gt"});
  CHECK(p.code == cli::kHolds);
  CHECK(p.out == "A: B!{l.0, r.0}\nB: A?{l.0, r.0}\n");
  CHECK(fcl_run({"project", "gt/06_mixed.gt"}).code == cli::kViolated);
  auto gen = json_of(fcl_run({"gt", "project", "gt/06_mixed.gt", "--mode", "generalised", "--json"}));
  CHECK(gen["projectable"] == true);
  CHECK(gen["processes"]["C"] == "D!{x.0, y.0}");

  auto ca = fcl_run({"gt", "to-ca", "gt/03_loop.gt"});
  CHECK(ca.code == cli::kHolds);
  CHECK(parse_ca(ca.out).fsa().num_states() == 2);
  CHECK(fcl_run({"gt", "lts", "gt/03_loop.gt"}).out.rfind("digraph", 0) == 0);

  auto good = json_of(fcl_run({"gt", "check", "gt/08_two_buyer.gt", "--json"}));
  for (const auto& c : good["checks"]) CHECK(c["holds"] == true);
  auto mixed = fcl_run({"gt", "check", "gt/06_mixed.gt", "--mode", "generalised"});
  CHECK(mixed.code == cli::kViolated);
  CHECK(mixed.out.find("correct: violated") != std::string::npos);
}

TEST_CASE("errors and usage") {
  auto missing = fcl_run({"check", "cui", "/nonexistent/x.ca"});
  CHECK(missing.code == cli::kError);
  CHECK_FALSE(missing.err.empty());
  CHECK(fcl_run({"check", "cui", "handshake.cfsm"}).code == cli::kError);
  CHECK(fcl_run({"check", "nonsense", "bad.ca"}).code == cli::kError);
  CHECK(fcl_run({}).code == cli::kError);
  CHECK(fcl_run({"gt", "project", "gt/01_end.gt", "--mode", "other"}).code == cli::kError);
  auto nd = fcl_run({"check", "cfsm-props", "remark_nondet.cfsm"});
  CHECK(nd.code == cli::kError);
  CHECK(nd.err.find("[NonDeterministicMachine]") != std::string::npos);
  auto budget = fcl_run({"gt", "to-ca", "extra/unbounded_terms.gt", "--budget", "40"});
  CHECK(budget.code == cli::kError);
  CHECK(fcl_run({"--help"}).code == cli::kHolds);
}

TEST_CASE("JSON output is deterministic") {
  for (const char* f : {"bad.ca", "closnodl.ca", "handshake.ca", "l0.ca", "selfloop.ca", "l0.gl", "closnodl.gl",
                        "dfnotlf.gl", "lfnotsf.gl"}) {
    INFO(f);
    for (const char* what : {"cui", "ba", "props"}) {
      auto a = fcl_run({"check", what, f, "--json"});
      auto b = fcl_run({"check", what, f, "--json"});
      CHECK(a.out == b.out);
      auto j = json_of(a);
      if (j.is_array())
        for (const auto& r : j) CHECK(valid_report(r));
      else
        CHECK(valid_report(j));
    }
  }
}
