#ifndef DYNLOG_TIME_HPP
#define DYNLOG_TIME_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dynlog {

// The four supported time monoids:
//   Nat      (N, 0, +), generated by 1
//   Int      (Z, 0, +), generated by 1 and -1
//   Word     (Sigma*, eps, concat), generated by the alphabet
//   FreeIdx  free monoid on K numeric generators 0..K-1
enum class TimeKind { Nat, Int, Word, FreeIdx };

// An element of a time monoid: a tick count for nat/int time, a finite
// word over the alphabet for word and free-index time.
class TimeValue {
 public:
  TimeValue() : rep_(std::int64_t{0}) {}

  static TimeValue number(std::int64_t n) { return TimeValue(n); }
  static TimeValue word(std::vector<std::string> letters) {
    return TimeValue(std::move(letters));
  }

  bool is_number() const { return std::holds_alternative<std::int64_t>(rep_); }
  std::int64_t as_number() const { return std::get<std::int64_t>(rep_); }
  const std::vector<std::string>& letters() const {
    return std::get<std::vector<std::string>>(rep_);
  }

  friend bool operator==(const TimeValue&, const TimeValue&) = default;

 private:
  explicit TimeValue(std::int64_t n) : rep_(n) {}
  explicit TimeValue(std::vector<std::string> letters) : rep_(std::move(letters)) {}

  std::variant<std::int64_t, std::vector<std::string>> rep_;
};

// Total order used wherever time values key a container: numbers before
// words, numbers by value, words in shortlex order. Returns <0, 0, >0.
int compare(const TimeValue& a, const TimeValue& b);

// Flags of the canonical monoid order (a <= b iff a + c = b for some c).
struct OrderProfile {
  bool linear = false;
  bool symmetric = false;
  bool nonbranching = false;

  friend bool operator==(const OrderProfile&, const OrderProfile&) = default;
};

class TimeMonoid {
 public:
  static TimeMonoid nat();
  static TimeMonoid integers();
  static TimeMonoid word(std::vector<std::string> alphabet);
  static TimeMonoid free_index(int generator_count);

  TimeKind kind() const { return kind_; }

  // Declared symbols for word time, "0".."K-1" for free-index time,
  // empty for nat/int.
  const std::vector<std::string>& alphabet() const { return alphabet_; }

  TimeValue identity() const;
  std::vector<TimeValue> generators() const;
  std::vector<std::string> generator_names() const;
  std::optional<int> generator_index(const std::string& name) const;

  bool valid(const TimeValue& v) const;

  // valid(v) ? v : nullopt, except that on free-index time a numeric n in
  // range becomes the one-letter word "n" (surface-syntax convenience).
  std::optional<TimeValue> coerce(const TimeValue& v) const;

  // Monoid operation. Inputs must be valid for this monoid.
  TimeValue add(const TimeValue& a, const TimeValue& b) const;

  // a <= b in the canonical order; returns a witness c with a + c = b.
  std::optional<TimeValue> leq_witness(const TimeValue& a, const TimeValue& b) const;

  OrderProfile classify() const;

  // All values whose generator decomposition has length <= max_length,
  // in a fixed deterministic order.
  std::vector<TimeValue> bounded_values(int max_length) const;

  std::string show(const TimeValue& v) const;

  friend bool operator==(const TimeMonoid&, const TimeMonoid&) = default;

 private:
  TimeMonoid(TimeKind kind, std::vector<std::string> alphabet);

  void require_valid(const TimeValue& v) const;

  TimeKind kind_;
  std::vector<std::string> alphabet_;
  std::map<std::string, int> letter_index_;
};

}  // namespace dynlog

#endif
