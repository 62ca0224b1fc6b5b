#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topprod/cardinal.hpp"

namespace topprod {

// Generator `gen` of the free factor at `level`, raised to `exp` (nonzero).
// Generator ids are naturals; for a factor of infinite rank they are opaque
// ordered tokens.
struct Letter {
  std::uint64_t level = 0;
  std::uint64_t gen = 0;
  std::int64_t exp = 1;

  bool same_generator(const Letter& o) const { return level == o.level && gen == o.gen; }
  Letter inverse() const { return {level, gen, -exp}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

// A freely reduced word in a single free factor.
struct FreeWord {
  std::uint64_t level = 0;
  std::vector<Letter> letters;
  friend bool operator==(const FreeWord&, const FreeWord&) = default;
};

struct RawSyllable {
  std::uint64_t level = 0;
  std::vector<Letter> letters;
};

// Freely reduce letters that all live at one level. Throws LevelMismatch on
// mixed levels and InvalidLetter on a zero exponent.
FreeWord reduce_free(std::span<const Letter> letters);

// Normal form of an element of the free product of the free groups F(λ_n),
// n <= level_bound. Since that product is itself free on all (level, gen)
// pairs, the normal form is the freely reduced letter string; syllables are
// its maximal same-level runs.
class ProductNormalForm {
public:
  ProductNormalForm() = default;

  // Reduces the given letters.
  static ProductNormalForm from_letters(std::span<const Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::vector<FreeWord> syllables() const;
  bool is_identity() const { return letters_.empty(); }

  // All levels are <= level_bound(). Defaults to the largest level present.
  std::uint64_t level_bound() const { return level_bound_; }
  ProductNormalForm with_level_bound(std::uint64_t n) const;

  // Declared ranks λ_n for some levels; letters are checked against them.
  const std::map<std::uint64_t, Cardinal>& ranks() const { return ranks_; }
  ProductNormalForm with_ranks(std::map<std::uint64_t, Cardinal> ranks) const;

  // Sum of |exp| over all letters.
  std::uint64_t expanded_length() const;

  // "[a_0 a_1^-1][a_2.3^2]", or "1" for the identity.
  std::string to_string() const;

  // Equality of group elements; bounds and declarations are not compared.
  friend bool operator==(const ProductNormalForm& a, const ProductNormalForm& b) { return a.letters_ == b.letters_; }

private:
  std::vector<Letter> letters_;
  std::uint64_t level_bound_ = 0;
  std::map<std::uint64_t, Cardinal> ranks_;
};

// Merge same-level neighbours, reduce, drop empty syllables. Throws
// LevelMismatch if a letter disagrees with its syllable's level.
ProductNormalForm normal_form(std::span<const RawSyllable> syllables);

// Throws DeclarationMismatch if u and v declare different ranks for a level.
ProductNormalForm multiply(const ProductNormalForm& u, const ProductNormalForm& v);
ProductNormalForm invert(const ProductNormalForm& u);
ProductNormalForm power(const ProductNormalForm& u, std::int64_t n);

// Delete letters of level > N.
ProductNormalForm retract(const ProductNormalForm& u, std::uint64_t N);

struct CyclicDecomposition {
  ProductNormalForm core;
  ProductNormalForm conjugator;
};

// u = conjugator * core * conjugator^-1 with core cyclically reduced.
CyclicDecomposition cyclic_reduce(const ProductNormalForm& u);

// Some r with r^k = u, or nullopt. k >= 1.
std::optional<ProductNormalForm> kth_root(const ProductNormalForm& u, std::uint64_t k);

// {k <= kMax : u has a k-th root}. Throws PreconditionError for the identity.
std::vector<std::uint64_t> divisibility_spectrum(const ProductNormalForm& u, std::uint64_t kMax);

std::string to_string(const Letter& l);

} // namespace topprod
