#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace topprod {

// A cardinal from the universe {0, 1, 2, ...} ∪ {aleph_i : i ∈ ℕ} ∪ {aleph_omega}.
// Finite < aleph_i < aleph_omega, with the obvious order inside each kind.
class Cardinal {
public:
  enum class Kind : std::uint8_t { Finite = 0, Aleph = 1, AlephOmega = 2 };

  constexpr Cardinal() = default;

  static constexpr Cardinal fin(std::uint64_t k) { return Cardinal(Kind::Finite, k); }
  static constexpr Cardinal aleph(std::uint64_t i) { return Cardinal(Kind::Aleph, i); }
  static constexpr Cardinal aleph_omega() { return Cardinal(Kind::AlephOmega, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_infinite() const { return !is_finite(); }
  constexpr bool is_zero() const { return is_finite() && value_ == 0; }

  // Throws PreconditionError when the kind does not match.
  std::uint64_t finite_value() const;
  std::uint64_t aleph_index() const;

  // aleph_{i+1}; aleph_0 and aleph_omega are limit cardinals.
  constexpr bool is_successor() const { return kind_ == Kind::Aleph && value_ >= 1; }
  constexpr bool is_limit() const {
    return (kind_ == Kind::Aleph && value_ == 0) || kind_ == Kind::AlephOmega;
  }

  // Least infinite cardinal strictly above this one, when it is representable
  // (aleph_omega has no representable successor).
  std::optional<Cardinal> next_infinite() const;

  friend constexpr std::strong_ordering operator<=>(const Cardinal& a, const Cardinal& b) {
    if (a.kind_ != b.kind_)
      return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const Cardinal& a, const Cardinal& b) = default;

  // "3", "aleph_2", "aleph_omega"
  std::string to_string() const;

private:
  constexpr Cardinal(Kind kind, std::uint64_t value) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::Finite;
  std::uint64_t value_ = 0;
};

// Cardinal addition: arithmetic on finite values, maximum otherwise.
Cardinal operator+(Cardinal a, Cardinal b);
Cardinal& operator+=(Cardinal& a, Cardinal b);

Cardinal card_sum(std::span<const Cardinal> values);

// a added to itself n times.
Cardinal card_times(Cardinal a, std::uint64_t n);

// The unique c with b + c = a when that is determined: finite a - b, or a when
// a is infinite and b < a. Throws PreconditionError if b > a or b == a infinite.
Cardinal card_minus(Cardinal a, Cardinal b);

} // namespace topprod
