#pragma once

// Text formats (.ca, .cfsm, .gt, .gl, .ll), DOT output and JSON reports.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fcl/cfsm.hpp"
#include "fcl/chaut.hpp"
#include "fcl/core.hpp"
#include "fcl/fsa.hpp"
#include "fcl/gtypes.hpp"
#include "fcl/langset.hpp"
#include "json.hpp"

namespace fcl {

using Json = nlohmann::ordered_json;

// 1-based; columns are byte offsets within the line, end inclusive.
struct SourceSpan {
  std::string file;
  std::size_t line = 1, column = 1, end_line = 1, end_column = 1;
};

inline std::string to_string(const SourceSpan& s) {
  return s.file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {},
             std::string kind = "Syntax", std::vector<SourceSpan> related = {})
      : std::runtime_error(to_string(span) + ": " + message),
        span_(std::move(span)),
        message_(std::move(message)),
        expected_(std::move(expected)),
        kind_(std::move(kind)),
        related_(std::move(related)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }
  // Syntax, SelfCommunication, DeterminismViolation, NonDeterministicMachine,
  // NonLocalAction, DuplicateLabel, UnguardedRecursion, UnboundVariable,
  // NonAntichain, Semantic.
  const std::string& kind() const { return kind_; }
  const std::vector<SourceSpan>& related() const { return related_; }

 private:
  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
  std::string kind_;
  std::vector<SourceSpan> related_;
};

namespace detail {

struct Token {
  std::string text;
  SourceSpan span;
};

// Whitespace-separated tokens of one line, with the comment removed.
inline std::vector<Token> split_line(std::string_view line, std::size_t lineno, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), {file, lineno, i + 1, lineno, j}});
    i = j;
  }
  return out;
}

inline std::vector<std::vector<Token>> split_lines(std::string_view text, const std::string& file) {
  std::vector<std::vector<Token>> out;
  std::size_t lineno = 1, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto toks = split_line(text.substr(start, end - start), lineno, file);
    if (!toks.empty()) out.push_back(std::move(toks));
    start = end + 1;
    ++lineno;
  }
  return out;
}

inline SourceSpan sub_span(const Token& t, std::size_t from, std::size_t len) {
  SourceSpan s = t.span;
  s.column = t.span.column + from;
  s.end_column = s.column + (len ? len - 1 : 0);
  return s;
}

inline std::string expect_identifier(const Token& t, std::size_t from, std::size_t len, const char* what) {
  std::string s = t.text.substr(from, len);
  if (!is_identifier(s)) throw ParseError(sub_span(t, from, len), std::string("expected ") + what, {what});
  return s;
}

inline Interaction parse_interaction(const Token& t) {
  const std::string& s = t.text;
  auto arrow = s.find("->");
  if (arrow == std::string::npos) throw ParseError(t.span, "expected an interaction A->B:m", {"A->B:m"});
  auto colon = s.find(':', arrow);
  if (colon == std::string::npos) throw ParseError(t.span, "missing ':' in interaction", {":"});
  auto a = expect_identifier(t, 0, arrow, "participant");
  auto b = expect_identifier(t, arrow + 2, colon - arrow - 2, "participant");
  auto m = expect_identifier(t, colon + 1, s.size() - colon - 1, "message");
  if (a == b) throw ParseError(t.span, "self-communication of " + a, {}, "SelfCommunication");
  return Interaction(a, b, m);
}

// `AB!m` / `AB?m` with the subject known: it is the prefix of a send and the
// suffix of a receive.
inline Action parse_action(const Token& t, const Participant& subject) {
  const std::string& s = t.text;
  auto op = s.find_first_of("!?");
  if (op == std::string::npos) throw ParseError(t.span, "expected an action AB!m or AB?m", {"AB!m", "AB?m"});
  std::string pair = s.substr(0, op);
  auto m = expect_identifier(t, op + 1, s.size() - op - 1, "message");
  const std::string& subj = subject.name();
  bool send = s[op] == '!';
  if (send ? pair.rfind(subj, 0) != 0 : (pair.size() < subj.size() || pair.compare(pair.size() - subj.size(), subj.size(), subj) != 0))
    throw ParseError(sub_span(t, 0, op), "action is not local to " + subj, {}, "NonLocalAction");
  std::string other = send ? pair.substr(subj.size()) : pair.substr(0, pair.size() - subj.size());
  std::size_t other_at = send ? subj.size() : 0;
  expect_identifier(t, other_at, other.size(), "participant");
  if (other == subj) throw ParseError(t.span, "self-communication of " + subj, {}, "SelfCommunication");
  return send ? Action(subj, other, m, Direction::Send) : Action(other, subj, m, Direction::Receive);
}

inline void expect_count(const std::vector<Token>& line, std::size_t n, const char* shape) {
  if (line.size() == n) return;
  const Token& t = line.size() > n ? line[n] : line.back();
  throw ParseError(t.span, std::string("expected `") + shape + "`", {shape});
}

}  // namespace detail

// `chaut NAME` / `init q0` / `q0 A->B:m q1` ...
inline ChorAutomaton parse_ca(std::string_view text, const std::string& file = "<input>") {
  auto lines = detail::split_lines(text, file);
  if (lines.empty()) throw ParseError({file}, "empty input", {"chaut"});
  if (lines[0][0].text != "chaut") throw ParseError(lines[0][0].span, "expected `chaut NAME`", {"chaut"});
  detail::expect_count(lines[0], 2, "chaut NAME");
  std::string name = detail::expect_identifier(lines[0][1], 0, lines[0][1].text.size(), "name");
  if (lines.size() < 2 || lines[1][0].text != "init")
    throw ParseError(lines.size() < 2 ? lines[0].back().span : lines[1][0].span, "expected `init STATE`", {"init"});
  detail::expect_count(lines[1], 2, "init STATE");
  std::string init = detail::expect_identifier(lines[1][1], 0, lines[1][1].text.size(), "state");
  Fsa<Interaction> f(init);
  std::map<std::pair<StateId, Interaction>, SourceSpan> seen;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto& l = lines[i];
    detail::expect_count(l, 3, "STATE A->B:m STATE");
    auto from = detail::expect_identifier(l[0], 0, l[0].text.size(), "state");
    auto label = detail::parse_interaction(l[1]);
    auto to = detail::expect_identifier(l[2], 0, l[2].text.size(), "state");
    StateId s = f.ensure_state(from), t = f.ensure_state(to);
    if (auto it = seen.find({s, label}); it != seen.end())
      throw ParseError(l[1].span, "state " + from + " has two " + to_string(label) + " transitions", {},
                       "DeterminismViolation", {it->second});
    seen.emplace(std::pair{s, label}, l[1].span);
    f.add_transition(s, label, t);
  }
  return ChorAutomaton(name, std::move(f));
}

namespace detail {
// Shorter names first, so q2 precedes q10.
inline bool name_less(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

// Transition lines sorted by (source, label, target) name; re-parsing and
// serialising again reproduces the text.
template <class L, class Render>
std::string sorted_lines(const Fsa<L>& f, Render render) {
  std::vector<std::tuple<std::string, std::string, std::string>> rows;
  for (const auto& t : f.transitions()) rows.emplace_back(f.name(t.from), render(*t.label), f.name(t.to));
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return name_less(std::get<0>(x), std::get<0>(y));
    if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
    return name_less(std::get<2>(x), std::get<2>(y));
  });
  std::string out;
  for (const auto& [from, label, to] : rows) out += from + " " + label + " " + to + "\n";
  return out;
}
}  // namespace detail

inline std::string serialise_ca(const ChorAutomaton& a) {
  const auto& f = a.fsa();
  return "chaut " + a.name() + "\ninit " + f.name(f.initial()) + "\n" +
         detail::sorted_lines(f, [](const Interaction& i) { return to_string(i); });
}

// Blocks `cfsm A` / `init q0` / `q0 B!m q1` (send m to B), `q0 B?m q1`
// (receive m from B), `q0 eps q1` (silent move, rejected as nondeterminism).
inline CfsmSystem parse_cfsm_system(std::string_view text, const std::string& file = "<input>") {
  auto lines = detail::split_lines(text, file);
  std::map<Participant, Cfsm> machines;
  std::map<Participant, SourceSpan> where;
  std::size_t i = 0;
  if (lines.empty()) throw ParseError({file}, "empty input", {"cfsm"});
  while (i < lines.size()) {
    const auto& head = lines[i];
    if (head[0].text != "cfsm") throw ParseError(head[0].span, "expected `cfsm NAME`", {"cfsm"});
    detail::expect_count(head, 2, "cfsm NAME");
    Participant owner(detail::expect_identifier(head[1], 0, head[1].text.size(), "participant"));
    if (where.count(owner))
      throw ParseError(head[1].span, "second machine for " + owner.name(), {}, "Semantic", {where.at(owner)});
    where.emplace(owner, head[1].span);
    ++i;
    if (i >= lines.size() || lines[i][0].text != "init")
      throw ParseError(i < lines.size() ? lines[i][0].span : head.back().span, "expected `init STATE`", {"init"});
    detail::expect_count(lines[i], 2, "init STATE");
    Fsa<Action> f(detail::expect_identifier(lines[i][1], 0, lines[i][1].text.size(), "state"));
    std::map<StateId, SourceSpan> first_at;
    for (++i; i < lines.size() && lines[i][0].text != "cfsm"; ++i) {
      const auto& l = lines[i];
      detail::expect_count(l, 3, "STATE B!m STATE");
      auto from = detail::expect_identifier(l[0], 0, l[0].text.size(), "state");
      auto to = detail::expect_identifier(l[2], 0, l[2].text.size(), "state");
      std::optional<Action> act;
      if (l[1].text != "eps") {
        const std::string& s = l[1].text;
        auto op = s.find_first_of("!?");
        if (op == std::string::npos) throw ParseError(l[1].span, "expected B!m, B?m or eps", {"B!m", "B?m", "eps"});
        auto peer = detail::expect_identifier(l[1], 0, op, "participant");
        auto m = detail::expect_identifier(l[1], op + 1, s.size() - op - 1, "message");
        if (peer == owner.name())
          throw ParseError(l[1].span, "self-communication of " + peer, {}, "SelfCommunication");
        act = s[op] == '!' ? Action(owner.name(), peer, m, Direction::Send)
                           : Action(peer, owner.name(), m, Direction::Receive);
      }
      StateId s = f.ensure_state(from), t = f.ensure_state(to);
      bool clash = !act;
      for (std::size_t k : f.out(s)) clash = clash || !f.transition(k).label || f.transition(k).label == act;
      if (clash && first_at.count(s))
        throw ParseError(l[1].span, "machine " + owner.name() + " is not deterministic at state " + from, {},
                         "NonDeterministicMachine", {first_at.at(s)});
      if (!act && !first_at.count(s))
        throw ParseError(l[1].span, "machine " + owner.name() + " has a silent move at state " + from, {},
                         "NonDeterministicMachine");
      first_at.emplace(s, l[1].span);
      f.add_transition(s, act, t);
    }
    machines.emplace(owner, Cfsm(owner, std::move(f)));
  }
  for (const auto& [p, m] : machines)
    for (const auto& t : m.automaton().transitions())
      if (!machines.count(t.label->peer()))
        throw ParseError(where.at(p), "participant " + t.label->peer().name() + " has no machine", {}, "Semantic");
  return CfsmSystem(std::move(machines));
}

inline std::string serialise_cfsm(const CfsmSystem& sys) {
  std::string out;
  for (const auto& [p, m] : sys.machines()) {
    if (!out.empty()) out += "\n";
    const auto& f = m.automaton();
    // Subset-state names such as {q0,q1} are not identifiers; such machines
    // get states s0, s1, ... with the original names in comments.
    bool plain = true;
    for (StateId s = 0; s < f.num_states(); ++s) plain = plain && is_identifier(f.name(s));
    auto name = [&](StateId s) { return plain ? f.name(s) : "s" + std::to_string(s); };
    out += "cfsm " + p.name() + "\n";
    if (!plain)
      for (StateId s = 0; s < f.num_states(); ++s) out += "# " + name(s) + " = " + f.name(s) + "\n";
    Fsa<Action> renamed(name(0));
    for (StateId s = 1; s < f.num_states(); ++s) renamed.add_state(name(s));
    renamed.set_initial(f.initial());
    for (const auto& t : f.transitions()) renamed.add_transition(t.from, t.label, t.to);
    out += "init " + name(f.initial()) + "\n";
    out += detail::sorted_lines(renamed, [](const Action& a) {
      return a.peer().name() + (a.is_send() ? "!" : "?") + a.msg().name();
    });
  }
  return out;
}

namespace detail {

// Generator lines of .gl/.ll files: `max: w` and `loop: u ( v )^w`.
template <class S, class SymbolParser>
std::vector<std::pair<Word<S>, SourceSpan>> parse_generators(const std::vector<std::vector<Token>>& lines,
                                                              std::size_t first, SymbolParser sym) {
  std::vector<std::pair<Word<S>, SourceSpan>> out;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const std::string& kw = l[0].text;
    if (kw != "max:" && kw != "loop:") throw ParseError(l[0].span, "expected `max:` or `loop:`", {"max:", "loop:"});
    SourceSpan span = l[0].span;
    span.end_column = l.back().span.end_column;
    std::vector<S> pre, cyc;
    int phase = 0;  // 0: stem, 1: inside ( ), 2: after )^w
    bool want_symbol = true;
    for (std::size_t k = 1; k < l.size(); ++k) {
      const auto& t = l[k];
      if (phase == 2) throw ParseError(t.span, "trailing input after `)^w`", {"end of line"});
      if (t.text == "(") {
        if (kw != "loop:" || phase != 0 || (want_symbol && !pre.empty())) throw ParseError(t.span, "unexpected `(`");
        phase = 1;
        want_symbol = true;
      } else if (t.text == ")^w") {
        if (phase != 1 || want_symbol) throw ParseError(t.span, "expected a symbol", {"symbol"});
        phase = 2;
      } else if (t.text == ".") {
        if (want_symbol) throw ParseError(t.span, "expected a symbol", {"symbol"});
        want_symbol = true;
      } else {
        if (!want_symbol) throw ParseError(t.span, "expected ` . `", {"."});
        (phase == 0 ? pre : cyc).push_back(sym(t));
        want_symbol = false;
      }
    }
    if (phase == 0 && want_symbol && !pre.empty()) throw ParseError(l.back().span, "word ends with ` . `", {"symbol"});
    bool closed = phase == 2;
    if (kw == "loop:") {
      if (!closed) throw ParseError(l.back().span, "expected `( v )^w`", {"(", ")^w"});
      out.emplace_back(Word<S>::lasso(std::move(pre), std::move(cyc)), span);
    } else {
      out.emplace_back(Word<S>::finite(std::move(pre)), span);
    }
  }
  // Comparable generators are rejected with both spans.
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (upw_compare(out[i].first, out[j].first) != Order::Incomparable)
        throw ParseError(out[i].second, "generators " + render(out[j].first) + " and " + render(out[i].first) +
                                            " are comparable", {}, "NonAntichain", {out[j].second});
  return out;
}

template <class S>
std::string serialise_generators(const std::vector<Word<S>>& gens) {
  std::string out;
  for (const auto& w : gens) {
    if (w.is_finite()) {
      out += "max:";
      if (!w.empty()) out += " " + render(w);
    } else {
      out += "loop: " + render(w);
    }
    out += "\n";
  }
  return out;
}

}  // namespace detail

inline GLanguage parse_glang(std::string_view text, const std::string& file = "<input>") {
  auto lines = detail::split_lines(text, file);
  auto gens = detail::parse_generators<Interaction>(lines, 0, detail::parse_interaction);
  std::vector<Word<Interaction>> ws;
  for (auto& [w, s] : gens) ws.push_back(std::move(w));
  return GLanguage::from_antichain(std::move(ws));
}

inline std::string serialise_glang(const GLanguage& l) { return detail::serialise_generators(l.generators()); }

struct LocalLanguageFile {
  Participant subject;
  LLanguage language;
};

inline LocalLanguageFile parse_llang(std::string_view text, const std::string& file = "<input>") {
  auto lines = detail::split_lines(text, file);
  if (lines.empty() || lines[0][0].text != "subject:")
    throw ParseError(lines.empty() ? SourceSpan{file} : lines[0][0].span, "expected `subject: A`", {"subject:"});
  detail::expect_count(lines[0], 2, "subject: A");
  Participant subject(detail::expect_identifier(lines[0][1], 0, lines[0][1].text.size(), "participant"));
  auto gens = detail::parse_generators<Action>(lines, 1,
                                               [&](const detail::Token& t) { return detail::parse_action(t, subject); });
  std::vector<Word<Action>> ws;
  for (auto& [w, s] : gens) ws.push_back(std::move(w));
  return {subject, LLanguage::from_antichain(std::move(ws))};
}

inline std::string serialise_llang(const Participant& subject, const LLanguage& l) {
  return "subject: " + subject.name() + "\n" + detail::serialise_generators(l.generators());
}

namespace detail {

// Tokens of the global-type syntax.
class GtLexer {
 public:
  GtLexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) { advance(); }

  const Token& peek() const { return cur_; }
  bool at_end() const { return cur_.text.empty(); }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

  Token expect(const std::string& s) {
    if (cur_.text != s) throw ParseError(cur_.span, "expected `" + s + "`" + found(), {s});
    return take();
  }

  Token identifier(const char* what) {
    if (!is_identifier(cur_.text)) throw ParseError(cur_.span, std::string("expected ") + what + found(), {what});
    return take();
  }

  std::string found() const { return at_end() ? " at end of input" : ", found `" + cur_.text + "`"; }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    SourceSpan s{file_, line_, col_, line_, col_};
    if (pos_ >= text_.size()) {
      cur_ = {"", s};
      return;
    }
    std::size_t start = pos_;
    char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        bump();
    } else if (text_.substr(pos_, 2) == "->") {
      bump(), bump();
    } else {
      bump();
    }
    s.end_column = col_ - 1;
    cur_ = {std::string(text_.substr(start, pos_ - start)), s};
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Token cur_;
};

class GtParser {
 public:
  GtParser(std::string_view text, std::string file) : lex_(text, std::move(file)) {}

  GlobalType parse() {
    auto g = term();
    if (!lex_.at_end()) throw ParseError(lex_.peek().span, "trailing input" + lex_.found(), {"end of input"});
    return g;
  }

 private:
  GlobalType term() {
    const Token& t = lex_.peek();
    if (t.text == "end") {
      lex_.take();
      return gt_end();
    }
    if (t.text == "rec") {
      lex_.take();
      Token v = lex_.identifier("recursion variable");
      lex_.expect(".");
      bound_.push_back(v.text);
      unguarded_.push_back(v.text);
      auto body = term();
      bound_.pop_back();
      unguarded_.pop_back();
      return gt_rec(v.text, body);
    }
    Token first = lex_.identifier("`end`, `rec`, a variable or an interaction");
    if (lex_.peek().text != "->") {
      if (std::find(bound_.begin(), bound_.end(), first.text) == bound_.end())
        throw ParseError(first.span, "recursion variable " + first.text + " is not bound", {}, "UnboundVariable");
      if (std::find(unguarded_.begin(), unguarded_.end(), first.text) != unguarded_.end())
        throw ParseError(first.span, "recursion variable " + first.text + " is not guarded", {},
                         "UnguardedRecursion");
      return gt_var(first.text);
    }
    lex_.take();
    Token second = lex_.identifier("participant");
    if (first.text == second.text)
      throw ParseError(second.span, "self-communication of " + first.text, {}, "SelfCommunication");
    lex_.expect(":");
    auto saved = unguarded_;
    unguarded_.clear();
    std::vector<std::pair<Message, GlobalType>> branches;
    std::map<std::string, SourceSpan> labels;
    auto branch = [&] {
      Token m = lex_.identifier("message label");
      if (auto it = labels.find(m.text); it != labels.end())
        throw ParseError(m.span, "duplicate branch label " + m.text, {}, "DuplicateLabel", {it->second});
      labels.emplace(m.text, m.span);
      lex_.expect(".");
      branches.emplace_back(Message(m.text), term());
    };
    if (lex_.peek().text == "{") {
      lex_.take();
      branch();
      while (lex_.peek().text == ",") {
        lex_.take();
        branch();
      }
      lex_.expect("}");
    } else {
      branch();
    }
    unguarded_ = saved;
    return gt_comm(Participant(first.text), Participant(second.text), std::move(branches));
  }

  GtLexer lex_;
  std::vector<std::string> bound_, unguarded_;
};

}  // namespace detail

inline GlobalType parse_gt(std::string_view text, const std::string& file = "<input>") {
  return detail::GtParser(text, file).parse();
}

inline std::string serialise_gt(const GlobalType& g) { return to_string(g) + "\n"; }

// DOT

inline std::string emit_dot(const ChorAutomaton& a) { return to_dot(a.fsa(), a.name()); }
inline std::string emit_dot(const Cfsm& m) { return to_dot(m.automaton(), m.owner().name()); }
inline std::string emit_dot(const SemanticsGraph& g) { return to_dot(g.fsa, "product"); }

// JSON reports: {"check", "holds", "witness", "stats"} in that order.

template <class S>
Json word_json(const Word<S>& w) {
  auto arr = [](const std::vector<S>& seq) {
    Json a = Json::array();
    for (const auto& s : seq) a.push_back(to_string(s));
    return a;
  };
  if (w.is_finite()) return arr(w.prefix());
  Json o = Json::object();
  o["prefix"] = arr(w.prefix());
  o["cycle"] = arr(w.cycle());
  return o;
}

inline Json witness_json(const CuiWitness& c) {
  Json o = Json::object();
  o["w1"] = word_json(c.w1);
  o["w2"] = word_json(c.w2);
  o["w"] = word_json(c.w);
  o["alpha"] = to_string(c.alpha);
  return o;
}

inline Json witness_json(const ChautCuiWitness& c) {
  Json o = witness_json(c.words);
  o["triple"] = Json::array({c.state, c.sender_view, c.receiver_view});
  return o;
}

inline Json witness_json(const BaWitness& b) {
  Json o = Json::object();
  o["participant"] = b.x.name();
  o["w1"] = word_json(b.w1);
  o["w2"] = word_json(b.w2);
  return o;
}

inline Json witness_json(const ChautBaWitness& b) {
  Json o = witness_json(b.words);
  o["p"] = b.p;
  o["q"] = b.q;
  o["diagonal_only"] = b.diagonal_only;
  return o;
}

inline Json witness_json(const PropWitness& w) {
  Json o = Json::object();
  o["property"] = to_string(w.property);
  o["participant"] = w.part.name();
  o["word"] = word_json(w.w);
  o["note"] = w.note;
  return o;
}

inline Json witness_json(const CfsmViolation& v) {
  Json o = Json::object();
  o["configuration"] = v.configuration;
  o["participant"] = v.participant.name();
  o["trace"] = word_json(v.trace);
  return o;
}

inline Json report(const std::string& check, bool holds, Json witness, Json stats = Json::object()) {
  Json o = Json::object();
  o["check"] = check;
  o["holds"] = holds;
  o["witness"] = holds ? Json(nullptr) : std::move(witness);
  o["stats"] = std::move(stats);
  return o;
}

template <class W>
Json emit_report(const std::string& check, const std::optional<W>& witness, Json stats = Json::object()) {
  return report(check, !witness.has_value(), witness ? witness_json(*witness) : Json(nullptr), std::move(stats));
}

}  // namespace fcl
