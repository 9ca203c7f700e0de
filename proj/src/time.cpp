#include "dynlog/time.hpp"

#include <algorithm>
#include <cstdlib>

#include "dynlog/error.hpp"

namespace dynlog {

int compare(const TimeValue& a, const TimeValue& b) {
  if (a.is_number() != b.is_number()) return a.is_number() ? -1 : 1;
  if (a.is_number()) {
    if (a.as_number() < b.as_number()) return -1;
    return a.as_number() == b.as_number() ? 0 : 1;
  }
  const auto& u = a.letters();
  const auto& v = b.letters();
  if (u.size() != v.size()) return u.size() < v.size() ? -1 : 1;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (int c = u[i].compare(v[i]); c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

TimeMonoid::TimeMonoid(TimeKind kind, std::vector<std::string> alphabet)
    : kind_(kind), alphabet_(std::move(alphabet)) {
  for (int i = 0; i < static_cast<int>(alphabet_.size()); ++i) {
    if (alphabet_[i].empty()) throw SemanticError("empty alphabet symbol");
    if (!letter_index_.emplace(alphabet_[i], i).second) {
      throw SemanticError("duplicate alphabet symbol '" + alphabet_[i] + "'");
    }
  }
}

TimeMonoid TimeMonoid::nat() { return TimeMonoid(TimeKind::Nat, {}); }

TimeMonoid TimeMonoid::integers() { return TimeMonoid(TimeKind::Int, {}); }

TimeMonoid TimeMonoid::word(std::vector<std::string> alphabet) {
  return TimeMonoid(TimeKind::Word, std::move(alphabet));
}

TimeMonoid TimeMonoid::free_index(int generator_count) {
  if (generator_count < 1) throw SemanticError("free-index time needs at least one generator");
  std::vector<std::string> names;
  names.reserve(generator_count);
  for (int i = 0; i < generator_count; ++i) names.push_back(std::to_string(i));
  return TimeMonoid(TimeKind::FreeIdx, std::move(names));
}

TimeValue TimeMonoid::identity() const {
  if (kind_ == TimeKind::Nat || kind_ == TimeKind::Int) return TimeValue::number(0);
  return TimeValue::word({});
}

std::vector<TimeValue> TimeMonoid::generators() const {
  switch (kind_) {
    case TimeKind::Nat:
      return {TimeValue::number(1)};
    case TimeKind::Int:
      return {TimeValue::number(1), TimeValue::number(-1)};
    case TimeKind::Word:
    case TimeKind::FreeIdx: {
      std::vector<TimeValue> gens;
      gens.reserve(alphabet_.size());
      for (const auto& sym : alphabet_) gens.push_back(TimeValue::word({sym}));
      return gens;
    }
  }
  return {};
}

std::vector<std::string> TimeMonoid::generator_names() const {
  switch (kind_) {
    case TimeKind::Nat:
      return {"1"};
    case TimeKind::Int:
      return {"1", "-1"};
    case TimeKind::Word:
    case TimeKind::FreeIdx:
      return alphabet_;
  }
  return {};
}

std::optional<int> TimeMonoid::generator_index(const std::string& name) const {
  const auto names = generator_names();
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

bool TimeMonoid::valid(const TimeValue& v) const {
  switch (kind_) {
    case TimeKind::Nat:
      return v.is_number() && v.as_number() >= 0;
    case TimeKind::Int:
      return v.is_number();
    case TimeKind::Word:
    case TimeKind::FreeIdx:
      if (v.is_number()) return false;
      return std::all_of(v.letters().begin(), v.letters().end(),
                         [&](const std::string& l) { return letter_index_.count(l) > 0; });
  }
  return false;
}

std::optional<TimeValue> TimeMonoid::coerce(const TimeValue& v) const {
  if (valid(v)) return v;
  if (kind_ == TimeKind::FreeIdx && v.is_number() && v.as_number() >= 0 &&
      v.as_number() < static_cast<std::int64_t>(alphabet_.size())) {
    return TimeValue::word({std::to_string(v.as_number())});
  }
  return std::nullopt;
}

void TimeMonoid::require_valid(const TimeValue& v) const {
  if (!valid(v)) throw SemanticError("time value " + show(v) + " is not valid for this monoid");
}

TimeValue TimeMonoid::add(const TimeValue& a, const TimeValue& b) const {
  require_valid(a);
  require_valid(b);
  if (kind_ == TimeKind::Nat || kind_ == TimeKind::Int) {
    return TimeValue::number(a.as_number() + b.as_number());
  }
  std::vector<std::string> letters = a.letters();
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return TimeValue::word(std::move(letters));
}

std::optional<TimeValue> TimeMonoid::leq_witness(const TimeValue& a, const TimeValue& b) const {
  require_valid(a);
  require_valid(b);
  switch (kind_) {
    case TimeKind::Nat:
      if (b.as_number() < a.as_number()) return std::nullopt;
      return TimeValue::number(b.as_number() - a.as_number());
    case TimeKind::Int:
      return TimeValue::number(b.as_number() - a.as_number());
    case TimeKind::Word:
    case TimeKind::FreeIdx: {
      const auto& u = a.letters();
      const auto& v = b.letters();
      if (u.size() > v.size() || !std::equal(u.begin(), u.end(), v.begin())) {
        return std::nullopt;
      }
      return TimeValue::word(std::vector<std::string>(v.begin() + u.size(), v.end()));
    }
  }
  return std::nullopt;
}

OrderProfile TimeMonoid::classify() const {
  switch (kind_) {
    case TimeKind::Nat:
      return {.linear = true, .symmetric = false, .nonbranching = true};
    case TimeKind::Int:
      // A group: the order degenerates to the full relation.
      return {.linear = true, .symmetric = true, .nonbranching = true};
    case TimeKind::Word:
    case TimeKind::FreeIdx:
      if (alphabet_.empty()) return {.linear = true, .symmetric = true, .nonbranching = true};
      if (alphabet_.size() == 1) return {.linear = true, .symmetric = false, .nonbranching = true};
      // Two generators already branch at the empty word.
      return {.linear = false, .symmetric = false, .nonbranching = false};
  }
  return {};
}

std::vector<TimeValue> TimeMonoid::bounded_values(int max_length) const {
  std::vector<TimeValue> values;
  switch (kind_) {
    case TimeKind::Nat:
      for (int n = 0; n <= max_length; ++n) values.push_back(TimeValue::number(n));
      break;
    case TimeKind::Int:
      for (int n = -max_length; n <= max_length; ++n) values.push_back(TimeValue::number(n));
      break;
    case TimeKind::Word:
    case TimeKind::FreeIdx: {
      std::vector<std::vector<std::string>> layer = {{}};
      values.push_back(TimeValue::word({}));
      for (int len = 1; len <= max_length; ++len) {
        std::vector<std::vector<std::string>> next_layer;
        for (const auto& w : layer) {
          for (const auto& sym : alphabet_) {
            auto ext = w;
            ext.push_back(sym);
            values.push_back(TimeValue::word(ext));
            next_layer.push_back(std::move(ext));
          }
        }
        layer = std::move(next_layer);
      }
      break;
    }
  }
  return values;
}

std::string TimeMonoid::show(const TimeValue& v) const {
  if (v.is_number()) return std::to_string(v.as_number());
  if (v.letters().empty()) return "~";
  bool compact = std::all_of(v.letters().begin(), v.letters().end(),
                             [](const std::string& l) { return l.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < v.letters().size(); ++i) {
    if (i > 0 && !compact) out += '.';
    out += v.letters()[i];
  }
  return out;
}

}  // namespace dynlog
