#pragma once

// The `fcl` command-line driver.  Exit codes: 0 holds / output produced,
// 1 property violated, 2 usage, parse or budget error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcl/cfsm.hpp"
#include "fcl/chaut.hpp"
#include "fcl/frontend.hpp"
#include "fcl/gtypes.hpp"
#include "fcl/langset.hpp"

namespace fcl::cli {

inline constexpr int kHolds = 0, kViolated = 1, kError = 2;

struct Options {
  std::string verb, what, file, dot;
  bool json = false;
  std::size_t budget = kDefaultBudget;
  std::size_t max_len = 8;
  ProjectionMode mode = ProjectionMode::Standard;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string extension(const std::string& file) {
  auto dot = file.rfind('.');
  return dot == std::string::npos ? "" : file.substr(dot);
}

inline std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError("cannot read " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void require_ext(const std::string& file, std::initializer_list<const char*> allowed) {
  std::string ext = extension(file);
  std::string list;
  for (const char* a : allowed) {
    if (ext == a) return;
    list += list.empty() ? a : std::string(", ") + a;
  }
  throw UsageError("expected a " + list + " file, got " + file);
}

// Participant automata for any system-like input.
inline SystemAutomata load_system(const std::string& file, std::size_t budget) {
  std::string ext = extension(file);
  if (ext == ".ca") return project_chaut(parse_ca(read_file(file), file)).automata();
  if (ext == ".cfsm") return parse_cfsm_system(read_file(file), file).automata();
  if (ext == ".gl") {
    SystemAutomata out;
    auto sys = project_language(parse_glang(read_file(file), file));
    for (const auto& [p, l] : sys.parts())
      out.emplace(p, l.automaton(budget));
    return out;
  }
  throw UsageError("unreachable");
}

inline CfsmSystem load_cfsm(const std::string& file) {
  if (extension(file) == ".ca") return project_chaut(parse_ca(read_file(file), file));
  return parse_cfsm_system(read_file(file), file);
}

template <class W>
void print_words(std::ostream& out, const W& words) {
  for (const auto& w : words) out << display(w) << "\n";
}

template <class S>
void line(std::ostream& out, const char* key, const Word<S>& w) {
  out << "  " << key << ": " << display(w) << "\n";
}

inline void write_dot(const Options& o, const std::string& text) {
  if (o.dot.empty()) return;
  std::ofstream f(o.dot, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.dot);
  f << text;
}

inline int check(const Options& o, std::ostream& out) {
  const std::string& f = o.file;
  if (o.what == "cui") {
    require_ext(f, {".ca", ".gl"});
    std::optional<CuiWitness> w;
    Json extra = Json(nullptr);
    if (detail::extension(f) == ".ca") {
      auto a = parse_ca(read_file(f), f);
      write_dot(o, emit_dot(a));
      auto cw = decide_cui(a);
      if (cw) w = cw->words, extra = witness_json(*cw);
    } else {
      w = check_cui(parse_glang(read_file(f), f), o.budget);
      if (w) extra = witness_json(*w);
    }
    if (o.json) {
      out << report("cui", !w, extra).dump(2) << "\n";
    } else if (!w) {
      out << "CUI holds\n";
    } else {
      out << "CUI violated\n";
      line(out, "w1", w->w1);
      line(out, "w2", w->w2);
      line(out, "w", w->w);
      out << "  alpha: " << to_string(w->alpha) << "\n";
    }
    return w ? kViolated : kHolds;
  }
  if (o.what == "ba") {
    require_ext(f, {".ca", ".gl"});
    std::optional<BaWitness> w;
    Json extra = Json(nullptr);
    if (detail::extension(f) == ".ca") {
      auto bw = decide_ba(parse_ca(read_file(f), f));
      if (bw) w = bw->words, extra = witness_json(*bw);
    } else {
      w = check_ba(parse_glang(read_file(f), f));
      if (w) extra = witness_json(*w);
    }
    if (o.json) {
      out << report("ba", !w, extra).dump(2) << "\n";
    } else if (!w) {
      out << "branch-awareness holds\n";
    } else {
      out << "branch-awareness violated for " << w->x.name() << "\n";
      line(out, "w1", w->w1);
      line(out, "w2", w->w2);
    }
    return w ? kViolated : kHolds;
  }
  if (o.what == "props") {
    require_ext(f, {".ca", ".cfsm", ".gl"});
    auto sys = load_system(f, o.budget);
    Json all = Json::array();
    bool ok = true;
    for (Property p : kAllProperties) {
      auto w = check_property(sys, p, o.budget);
      ok = ok && !w;
      if (o.json) {
        all.push_back(emit_report(to_string(p), w));
      } else {
        out << to_string(p) << ": " << (w ? "violated" : "holds") << "\n";
        if (w) {
          out << "  participant: " << w->part.name() << "\n";
          line(out, "word", w->w);
          if (!w->note.empty()) out << "  note: " << w->note << "\n";
        }
      }
    }
    if (o.json) out << all.dump(2) << "\n";
    return ok ? kHolds : kViolated;
  }
  if (o.what == "cfsm-props") {
    require_ext(f, {".ca", ".cfsm"});
    auto sys = load_cfsm(f);
    Json all = Json::array();
    bool ok = true;
    for (CfsmProperty p : kAllCfsmProperties) {
      auto v = check_cfsm_property(sys, p, o.budget);
      ok = ok && !v;
      if (o.json) {
        all.push_back(emit_report(to_string(p), v));
      } else {
        out << to_string(p) << ": " << (v ? "violated" : "holds") << "\n";
        if (v) {
          out << "  participant: " << v->participant.name() << "\n  configuration: " << v->configuration << "\n";
          line(out, "trace", v->trace);
        }
      }
    }
    if (o.json) out << all.dump(2) << "\n";
    return ok ? kHolds : kViolated;
  }
  if (o.what == "realise") {
    require_ext(f, {".ca"});
    auto r = check_realisation(parse_ca(read_file(f), f), o.max_len, o.budget);
    if (o.json) {
      Json stats = Json::object();
      stats["complete"] = r.complete;
      stats["max_len"] = o.max_len;
      stats["words_compared"] = r.words_compared;
      Json w = Json(nullptr);
      if (r.counterexample) {
        w = Json::object();
        w["counterexample"] = word_json(*r.counterexample);
      }
      out << report("realise", r.correct() && r.complete, w, stats).dump(2) << "\n";
    } else {
      out << "complete: " << (r.complete ? "yes" : "NO") << "\n";
      out << "correct: " << (r.correct() ? "yes" : "no") << "\n";
      if (r.counterexample) line(out, "counterexample", *r.counterexample);
    }
    return r.correct() && r.complete ? kHolds : kViolated;
  }
  throw UsageError("unknown check '" + o.what + "'; expected cui, ba, props, cfsm-props or realise");
}

inline int project(const Options& o, std::ostream& out) {
  const std::string& f = o.file;
  require_ext(f, {".ca", ".gl", ".gt"});
  std::string ext = extension(f);
  if (ext == ".ca") {
    auto sys = project_chaut(parse_ca(read_file(f), f));
    if (!o.dot.empty()) {
      std::string dot;
      for (const auto& [p, m] : sys.machines()) dot += emit_dot(m);
      write_dot(o, dot);
    }
    out << serialise_cfsm(sys);
    return kHolds;
  }
  if (ext == ".gl") {
    auto sys = project_language(parse_glang(read_file(f), f));
    bool first = true;
    for (const auto& [p, l] : sys.parts()) {
      if (!first) out << "\n";
      first = false;
      out << serialise_llang(p, l);
    }
    return kHolds;
  }
  return kError;
}

inline int gt(const Options& o, std::ostream& out) {
  const std::string& f = o.file;
  require_ext(f, {".gt"});
  auto g = parse_gt(read_file(f), f);
  const char* mode = o.mode == ProjectionMode::Standard ? "standard" : "generalised";
  if (o.what == "project") {
    bool ok = true;
    Json parts = Json::object();
    for (const auto& x : gt_participants(g)) {
      auto p = proj_gt(g, x, o.mode);
      if (auto* u = std::get_if<Undefined>(&p)) {
        ok = false;
        parts[x.name()] = {{"undefined", to_string(u->reason)}, {"at", u->at}};
        if (!o.json) out << x.name() << ": undefined (" << to_string(u->reason) << ") at " << u->at << "\n";
      } else {
        parts[x.name()] = to_string(std::get<Process>(p));
        if (!o.json) out << x.name() << ": " << to_string(std::get<Process>(p)) << "\n";
      }
    }
    if (o.json) {
      Json r = Json::object();
      r["mode"] = mode;
      r["projectable"] = ok;
      r["processes"] = parts;
      out << r.dump(2) << "\n";
    }
    return ok ? kHolds : kViolated;
  }
  if (o.what == "lts" || o.what == "to-ca") {
    auto a = gt_to_chaut(g, o.budget);
    write_dot(o, emit_dot(a));
    if (o.what == "lts" && o.dot.empty())
      out << emit_dot(a);
    else
      out << serialise_ca(a);
    return kHolds;
  }
  if (o.what == "check") {
    auto m = mps_of(g, o.mode);
    Json checks = Json::array();
    bool ok = true;
    auto add = [&](const std::string& name, bool holds, Json witness, const std::string& text) {
      ok = ok && holds;
      checks.push_back(report(name, holds, std::move(witness)));
      if (!o.json) out << name << ": " << (holds ? "holds" : "violated") << (text.empty() ? "" : "\n  " + text) << "\n";
    };
    if (auto* u = std::get_if<Undefined>(&m)) {
      add("projectable", false, {{"participant", u->participant.name()}, {"reason", to_string(u->reason)}},
          u->participant.name() + ": " + to_string(u->reason));
    } else {
      add("projectable", true, nullptr, "");
      const auto& mps = std::get<Mps>(m);
      auto a = gt_to_chaut(g, o.budget);
      auto cw = decide_cui(a);
      add("cui", !cw, cw ? witness_json(*cw) : Json(nullptr), cw ? "alpha " + to_string(cw->words.alpha) : "");
      auto bw = decide_ba(a);
      add("ba", !bw, bw ? witness_json(*bw) : Json(nullptr), bw ? "participant " + bw->words.x.name() : "");
      auto slf = check_property(mps_automata(mps, o.budget), Property::SLF, o.budget);
      add("SLF", !slf, slf ? witness_json(*slf) : Json(nullptr), slf ? display(slf->w) : "");
      auto corr = gt_correctness(g, mps, o.max_len);
      Json cw2 = Json(nullptr);
      if (corr.counterexample) cw2 = {{"counterexample", word_json(*corr.counterexample)}};
      add("correct", corr.correct(), cw2, corr.counterexample ? display(*corr.counterexample) : "");
    }
    if (o.json) {
      Json r = Json::object();
      r["mode"] = mode;
      r["checks"] = checks;
      out << r.dump(2) << "\n";
    }
    return ok ? kHolds : kViolated;
  }
  throw UsageError("unknown gt action '" + o.what + "'; expected project, lts, to-ca or check");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* env = std::getenv("FCL_BUDGET")) {
    try {
      o.budget = std::stoul(env);
    } catch (const std::exception&) {
      err << "fcl: FCL_BUDGET is not a number\n";
      return kError;
    }
  }
  CLI::App app{"Checks for choreographies, communicating systems and global types", "fcl"};
  app.require_subcommand(1);
  std::string mode = "standard";
  auto common = [&](CLI::App* c) {
    c->add_flag("--json", o.json, "JSON report on stdout");
    c->add_option("--dot", o.dot, "write a DOT rendering to this file");
    c->add_option("--budget", o.budget, "state budget");
    c->add_option("--max-len", o.max_len, "word length bound");
    c->add_option("--mode", mode, "projection mode")->check(CLI::IsMember({"standard", "generalised"}));
  };
  auto* check = app.add_subcommand("check", "check cui|ba|props|cfsm-props|realise FILE");
  check->add_option("what", o.what)->required();
  check->add_option("file", o.file)->required();
  common(check);
  auto* project = app.add_subcommand("project", "project FILE (.ca or .gl)");
  project->add_option("file", o.file)->required();
  common(project);
  auto* product = app.add_subcommand("product", "synchronous product of FILE (.ca or .cfsm)");
  product->add_option("file", o.file)->required();
  common(product);
  auto* words = app.add_subcommand("words", "bounded semantics words of FILE");
  words->add_option("file", o.file)->required();
  common(words);
  auto* gt = app.add_subcommand("gt", "gt project|lts|to-ca|check FILE");
  gt->add_option("what", o.what)->required();
  gt->add_option("file", o.file)->required();
  common(gt);

  std::vector<std::string> storage{"fcl"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kError;
  }
  o.mode = mode == "generalised" ? ProjectionMode::Generalised : ProjectionMode::Standard;

  try {
    if (*check) return detail::check(o, out);
    if (*project) {
      if (detail::extension(o.file) != ".gt") return detail::project(o, out);
      o.what = "project";
      return detail::gt(o, out);
    }
    if (*gt) return detail::gt(o, out);
    if (*product) {
      detail::require_ext(o.file, {".ca", ".cfsm"});
      auto g = sync_product(detail::load_cfsm(o.file), o.budget);
      detail::write_dot(o, emit_dot(g));
      if (o.dot.empty()) out << emit_dot(g);
      return kHolds;
    }
    if (*words) {
      detail::require_ext(o.file, {".ca", ".cfsm", ".gl", ".gt"});
      std::string ext = detail::extension(o.file);
      std::set<Word<Interaction>> ws;
      if (ext == ".gl") {
        ws = sem_enumerate(project_language(parse_glang(detail::read_file(o.file), o.file)), o.max_len);
      } else if (ext == ".gt") {
        ws = gt_traces(parse_gt(detail::read_file(o.file), o.file), o.max_len);
      } else {
        ws = enumerate(sync_product(detail::load_cfsm(o.file), o.budget).fsa, o.max_len, 0).finite;
      }
      std::vector<Word<Interaction>> sorted(ws.begin(), ws.end());
      std::stable_sort(sorted.begin(), sorted.end(), fcl::detail::shorter_then_lex);
      if (o.json) {
        Json arr = Json::array();
        for (const auto& w : sorted) arr.push_back(word_json(w));
        out << arr.dump(2) << "\n";
      } else {
        detail::print_words(out, sorted);
      }
      return kHolds;
    }
  } catch (const ParseError& e) {
    err << "fcl: " << e.what() << " [" << e.kind() << "]\n";
    for (const auto& s : e.related()) err << "  see " << to_string(s) << "\n";
    return kError;
  } catch (const StateBudgetExceeded& e) {
    err << "fcl: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "fcl: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace fcl::cli
