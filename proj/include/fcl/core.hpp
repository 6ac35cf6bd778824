#pragma once

// Alphabets, words and projection.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fcl {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

class StateBudgetExceeded : public std::runtime_error {
 public:
  explicit StateBudgetExceeded(std::size_t budget)
      : std::runtime_error("state budget of " + std::to_string(budget) + " exceeded"),
        budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

inline constexpr std::size_t kDefaultBudget = 100000;

namespace detail {
template <class Tag>
class Name {
 public:
  Name() = default;
  explicit Name(std::string s) : name_(std::move(s)) {
    if (!is_identifier(name_)) throw std::invalid_argument("not an identifier: '" + name_ + "'");
  }
  const std::string& name() const { return name_; }
  auto operator<=>(const Name&) const = default;

 private:
  std::string name_;
};
struct ParticipantTag {};
struct MessageTag {};
}  // namespace detail

using Participant = detail::Name<detail::ParticipantTag>;
using Message = detail::Name<detail::MessageTag>;

inline const std::string& to_string(const Participant& p) { return p.name(); }

class Interaction {
 public:
  Interaction(Participant sender, Participant receiver, Message msg)
      : sender_(std::move(sender)), receiver_(std::move(receiver)), msg_(std::move(msg)) {
    if (sender_ == receiver_) throw std::invalid_argument("self-communication of " + sender_.name());
  }
  Interaction(std::string_view s, std::string_view r, std::string_view m)
      : Interaction(Participant(std::string(s)), Participant(std::string(r)), Message(std::string(m))) {}

  const Participant& sender() const { return sender_; }
  const Participant& receiver() const { return receiver_; }
  const Message& msg() const { return msg_; }
  std::array<Participant, 2> participants() const { return {sender_, receiver_}; }
  bool involves(const Participant& p) const { return p == sender_ || p == receiver_; }
  auto operator<=>(const Interaction&) const = default;

 private:
  Participant sender_, receiver_;
  Message msg_;
};

enum class Direction { Send, Receive };

class Action {
 public:
  Action(Participant sender, Participant receiver, Message msg, Direction kind)
      : sender_(std::move(sender)), receiver_(std::move(receiver)), msg_(std::move(msg)), kind_(kind) {
    if (sender_ == receiver_) throw std::invalid_argument("self-communication of " + sender_.name());
  }
  Action(std::string_view s, std::string_view r, std::string_view m, Direction kind)
      : Action(Participant(std::string(s)), Participant(std::string(r)), Message(std::string(m)), kind) {}

  const Participant& sender() const { return sender_; }
  const Participant& receiver() const { return receiver_; }
  const Message& msg() const { return msg_; }
  Direction kind() const { return kind_; }
  bool is_send() const { return kind_ == Direction::Send; }
  const Participant& subject() const { return is_send() ? sender_ : receiver_; }
  const Participant& peer() const { return is_send() ? receiver_ : sender_; }
  std::array<Participant, 2> participants() const { return {sender_, receiver_}; }
  bool involves(const Participant& p) const { return p == sender_ || p == receiver_; }
  auto operator<=>(const Action&) const = default;

 private:
  Participant sender_, receiver_;
  Message msg_;
  Direction kind_;
};

inline std::string to_string(const Interaction& a) {
  return a.sender().name() + "->" + a.receiver().name() + ":" + a.msg().name();
}

inline std::string to_string(const Action& a) {
  return a.sender().name() + a.receiver().name() + (a.is_send() ? "!" : "?") + a.msg().name();
}

inline std::optional<Action> project_symbol(const Interaction& a, const Participant& p) {
  if (p == a.sender()) return Action(a.sender(), a.receiver(), a.msg(), Direction::Send);
  if (p == a.receiver()) return Action(a.sender(), a.receiver(), a.msg(), Direction::Receive);
  return std::nullopt;
}

// Actions project to themselves on their subject; used when a local word is
// viewed through the same projection interface.
inline std::optional<Action> project_symbol(const Action& a, const Participant& p) {
  if (p == a.subject()) return a;
  return std::nullopt;
}

inline bool independent(const Interaction& a, const Interaction& b) {
  return !a.involves(b.sender()) && !a.involves(b.receiver());
}

// A finite word, or an ultimately periodic word prefix·cycle^ω kept canonical.
template <class S>
class Word {
 public:
  Word() = default;

  static Word finite(std::vector<S> seq) {
    Word w;
    w.prefix_ = std::move(seq);
    return w;
  }

  static Word lasso(std::vector<S> prefix, std::vector<S> cycle) {
    if (cycle.empty()) throw std::invalid_argument("lasso with empty cycle");
    Word w;
    w.prefix_ = std::move(prefix);
    w.cycle_ = std::move(cycle);
    w.canonicalise();
    return w;
  }

  bool is_finite() const { return cycle_.empty(); }
  bool is_lasso() const { return !cycle_.empty(); }
  bool empty() const { return prefix_.empty() && cycle_.empty(); }
  // For finite words the whole sequence; for lassos the stem.
  const std::vector<S>& prefix() const { return prefix_; }
  const std::vector<S>& cycle() const { return cycle_; }
  // Length of a finite word; |prefix|+|cycle| for a lasso.
  std::size_t size() const { return prefix_.size() + cycle_.size(); }

  const S& at(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    if (cycle_.empty()) throw std::out_of_range("word index");
    return cycle_[(i - prefix_.size()) % cycle_.size()];
  }

  // prefix·cycle^k as a finite word; identity on finite words.
  Word unroll(std::size_t k) const {
    std::vector<S> out = prefix_;
    for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), cycle_.begin(), cycle_.end());
    return finite(std::move(out));
  }

  // The first n symbols (or the whole finite word if shorter).
  Word take(std::size_t n) const {
    std::vector<S> out;
    if (is_finite()) n = std::min(n, prefix_.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return finite(std::move(out));
  }

  Word append(const S& s) const {
    if (is_lasso()) return *this;
    Word w = *this;
    w.prefix_.push_back(s);
    return w;
  }

  // Concatenation; a lasso on the left absorbs anything on the right.
  Word concat(const Word& rhs) const {
    if (is_lasso()) return *this;
    std::vector<S> pre = prefix_;
    pre.insert(pre.end(), rhs.prefix_.begin(), rhs.prefix_.end());
    if (rhs.is_finite()) return finite(std::move(pre));
    return lasso(std::move(pre), rhs.cycle_);
  }

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

 private:
  void canonicalise() {
    const std::size_t n = cycle_.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      bool periodic = true;
      for (std::size_t i = d; i < n && periodic; ++i) periodic = cycle_[i] == cycle_[i - d];
      if (periodic) {
        cycle_.erase(cycle_.begin() + static_cast<std::ptrdiff_t>(d), cycle_.end());
        break;
      }
    }
    while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
      prefix_.pop_back();
      std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
    }
  }

  std::vector<S> prefix_;
  std::vector<S> cycle_;
};

template <class S>
Word<S> word(std::initializer_list<S> syms) {
  return Word<S>::finite(std::vector<S>(syms));
}

enum class Order { Equal, StrictPrefixOfSecond, StrictPrefixOfFirst, Incomparable };

template <class S>
Order upw_compare(const Word<S>& u, const Word<S>& v) {
  if (u.is_finite() && v.is_finite()) {
    const auto& a = u.prefix();
    const auto& b = v.prefix();
    const std::size_t n = std::min(a.size(), b.size());
    if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin()))
      return Order::Incomparable;
    if (a.size() == b.size()) return Order::Equal;
    return a.size() < b.size() ? Order::StrictPrefixOfSecond : Order::StrictPrefixOfFirst;
  }
  if (u.is_finite()) {
    for (std::size_t i = 0; i < u.prefix().size(); ++i)
      if (!(u.prefix()[i] == v.at(i))) return Order::Incomparable;
    return Order::StrictPrefixOfSecond;
  }
  if (v.is_finite()) {
    Order o = upw_compare(v, u);
    return o == Order::StrictPrefixOfSecond ? Order::StrictPrefixOfFirst : o;
  }
  const std::size_t bound = u.prefix().size() + v.prefix().size() +
                            2 * std::lcm(u.cycle().size(), v.cycle().size());
  for (std::size_t i = 0; i < bound; ++i)
    if (!(u.at(i) == v.at(i))) return Order::Incomparable;
  return Order::Equal;
}

// u ⪯ v
template <class S>
bool is_prefix(const Word<S>& u, const Word<S>& v) {
  Order o = upw_compare(u, v);
  return o == Order::Equal || o == Order::StrictPrefixOfSecond;
}

template <class S>
Word<Action> project_word(const Word<S>& w, const Participant& p) {
  auto proj = [&](const std::vector<S>& seq) {
    std::vector<Action> out;
    for (const auto& s : seq)
      if (auto a = project_symbol(s, p)) out.push_back(*a);
    return out;
  };
  std::vector<Action> pre = proj(w.prefix());
  if (w.is_finite()) return Word<Action>::finite(std::move(pre));
  std::vector<Action> cyc = proj(w.cycle());
  if (cyc.empty()) return Word<Action>::finite(std::move(pre));
  return Word<Action>::lasso(std::move(pre), std::move(cyc));
}

template <class S>
std::set<Participant> participants_of(const S& s) {
  auto ps = s.participants();
  return {ps[0], ps[1]};
}

template <class S>
std::set<Participant> participants_of(const Word<S>& w) {
  std::set<Participant> out;
  for (const auto& s : w.prefix()) out.insert(s.sender()), out.insert(s.receiver());
  for (const auto& s : w.cycle()) out.insert(s.sender()), out.insert(s.receiver());
  return out;
}

template <class S>
std::set<Participant> participants_of(const std::vector<Word<S>>& ws) {
  std::set<Participant> out;
  for (const auto& w : ws) out.merge(participants_of(w));
  return out;
}

// Canonical rendering: symbols joined by " . ", lassos as "u ( v )^w".
template <class S>
std::string render(const std::vector<S>& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += " . ";
    out += to_string(seq[i]);
  }
  return out;
}

template <class S>
std::string render(const Word<S>& w) {
  if (w.is_finite()) return render(w.prefix());
  std::string out = render(w.prefix());
  if (!out.empty()) out += " ";
  return out + "( " + render(w.cycle()) + " )^w";
}

// Rendering for human-facing output where the empty word must stay visible.
template <class S>
std::string display(const Word<S>& w) {
  return w.empty() ? std::string("ε") : render(w);
}

}  // namespace fcl
