#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "topprod/cardinal.hpp"

namespace topprod {

struct TailZero {
  friend bool operator==(const TailZero&, const TailZero&) = default;
};
struct TailConstant {
  Cardinal value;
  friend bool operator==(const TailConstant&, const TailConstant&) = default;
};
struct TailPeriodic {
  std::vector<Cardinal> values;
  friend bool operator==(const TailPeriodic&, const TailPeriodic&) = default;
};
// Tail entry k is aleph_{a*k + b}, a >= 1.
struct TailIncreasingAlephs {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  friend bool operator==(const TailIncreasingAlephs&, const TailIncreasingAlephs&) = default;
};

using Tail = std::variant<TailZero, TailConstant, TailPeriodic, TailIncreasingAlephs>;

// A sequence of cardinals presented as a finite prefix followed by a tail rule.
//
// Values are kept in a canonical form so that structural equality coincides
// with equality of the sequences: periodic tails use their minimal period,
// a one-element period becomes a constant, a constant zero becomes Zero, and
// trailing prefix entries that agree with the tail rule are absorbed into it.
class CardSeq {
public:
  CardSeq() = default; // the zero sequence
  CardSeq(std::vector<Cardinal> prefix, Tail tail);

  static CardSeq zero() { return {}; }
  static CardSeq constant(Cardinal c) { return CardSeq({}, TailConstant{c}); }
  static CardSeq finite(std::vector<Cardinal> prefix) { return CardSeq(std::move(prefix), TailZero{}); }

  const std::vector<Cardinal>& prefix() const { return prefix_; }
  const Tail& tail() const { return tail_; }

  Cardinal at(std::uint64_t n) const;

  // Sum of entries 0..M.
  Cardinal partial_sum(std::uint64_t M) const;

  // The tail rule describing entries prefix().size() + offset, ...
  Tail tail_from_offset(std::uint64_t offset) const;

  // Same sequence with entry n replaced.
  CardSeq with_value(std::uint64_t n, Cardinal c) const;

  // Supremum of all partial sums, and whether some partial sum attains it.
  struct Total {
    Cardinal value;
    bool attained = true;
  };
  Total total() const;

  // Every entry is finite.
  bool all_finite() const;

  // Largest entry that occurs infinitely often, or the supremum of the tail
  // for an increasing aleph tail (then not attained).
  Cardinal tail_sup() const;

  std::string to_string() const;

  friend bool operator==(const CardSeq&, const CardSeq&) = default;

private:
  void normalize();

  std::vector<Cardinal> prefix_;
  Tail tail_ = TailZero{};
};

// Entries are eventually 0.
bool eventually_zero(const CardSeq& s);

// All but finitely many entries are < kappa. kappa must be infinite.
bool eventually_below(const CardSeq& s, Cardinal kappa);

// Least M with partial_sum(M) >= x, or nullopt when no partial sum reaches x.
std::optional<std::uint64_t> first_index_reaching(const CardSeq& s, Cardinal x);

// Least M' with sum_{n<=M} s_n <= sum_{n<=M'} t_n, or nullopt if none exists.
std::optional<std::uint64_t> sums_dominated(const CardSeq& s, const CardSeq& t, std::uint64_t M);

// A finite-to-one surjection g: ℕ -> ℕ given by consecutive block lengths:
// block i collapses to index i. `head` lists the first blocks, `repeat` is
// cycled forever afterwards.
struct GroupingSchema {
  std::vector<std::uint64_t> head;
  std::vector<std::uint64_t> repeat;
  // Set when the input declared an unbounded block (an infinite fiber).
  bool has_infinite_block = false;

  static GroupingSchema identity() { return {{}, {1}, false}; }
  static GroupingSchema uniform(std::uint64_t len) { return {{}, {len}, false}; }
};

// mu_i = sum of lambda_m over the i-th block. Throws InvalidSchema for a
// non-surjective or infinite-fiber grouping, and for an increasing aleph tail
// whose repeating block lengths are not all equal (the result would have no
// affine description).
CardSeq regroup(const CardSeq& s, const GroupingSchema& g);

} // namespace topprod
