#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topprod/cardseq.hpp"
#include "topprod/freealg.hpp"

namespace topprod {

// k ↦ a*k + b over the naturals.
struct AffineRule {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t at(std::uint64_t k) const;
  friend bool operator==(const AffineRule&, const AffineRule&) = default;
};

// k ↦ a*k + b over the integers; must never vanish for k >= 0.
struct ExpRule {
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::int64_t at(std::uint64_t k) const;
  bool never_zero() const;
  friend bool operator==(const ExpRule&, const ExpRule&) = default;
};

// Index k ↦ letter a_{level(k)}.gen(k) ^ exp(k), with level(k) strictly increasing.
struct LetterRule {
  AffineRule level{1, 0};
  AffineRule gen{0, 0};
  ExpRule exp{0, 1};

  Letter at(std::uint64_t k) const;
  // Least K with level(k) > N for every k >= K.
  std::uint64_t escape_bound(std::uint64_t N) const;
  // The rule for indices k + shift.
  LetterRule shifted(std::uint64_t shift) const;
  LetterRule inverse() const;
  friend bool operator==(const LetterRule&, const LetterRule&) = default;
};

enum class BlockKind { Finite, Omega, OmegaStar };

// Finite: the explicit letters. Omega: index k = 0, 1, 2, ... in increasing
// order; for each k the tracks contribute tracks[0].at(k), tracks[1].at(k), ...
// OmegaStar: the same with k running downwards (..., 2, 1, 0).
struct Block {
  BlockKind kind = BlockKind::Finite;
  std::vector<Letter> letters;
  std::vector<LetterRule> tracks;

  static Block finite(std::vector<Letter> letters) { return {BlockKind::Finite, std::move(letters), {}}; }
  static Block omega(std::vector<LetterRule> tracks) { return {BlockKind::Omega, {}, std::move(tracks)}; }
  static Block omega_star(std::vector<LetterRule> tracks) { return {BlockKind::OmegaStar, {}, std::move(tracks)}; }

  // Least K such that indices k >= K contribute only letters above level N.
  std::uint64_t escape_bound(std::uint64_t N) const;
  // Letters of level <= N in block order.
  std::vector<Letter> letters_up_to(std::uint64_t N) const;
  bool empty() const { return kind == BlockKind::Finite ? letters.empty() : tracks.empty(); }

  friend bool operator==(const Block&, const Block&) = default;
};

// A word in the topologist product of F(λ_n): a finite concatenation of
// blocks over the level profile (λ_n).
class TopWord {
public:
  TopWord() = default; // the empty word over the zero profile
  // Drops empty blocks; throws InvalidLetter / InvalidSchema on letters or
  // rules that do not fit the profile.
  TopWord(CardSeq profile, std::vector<Block> blocks);

  const CardSeq& profile() const { return profile_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool is_finite() const;

  friend bool operator==(const TopWord&, const TopWord&) = default;

private:
  CardSeq profile_;
  std::vector<Block> blocks_;
};

// The all-ℤ profile (1, 1, 1, ...).
CardSeq integer_profile();

ProductNormalForm project(const TopWord& w, std::uint64_t N);
TopWord tail_retract(const TopWord& w, std::uint64_t N);
// Throws ProfileMismatch.
TopWord concat(const TopWord& u, const TopWord& v);
TopWord invert_word(const TopWord& w);
bool eq_up_to(const TopWord& u, const TopWord& v, std::uint64_t N);
// Least N <= Nmax whose projections differ. nullopt is not a proof of equality.
std::optional<std::uint64_t> semidecide_neq(const TopWord& u, const TopWord& v, std::uint64_t Nmax);

// The isomorphism ⨳∏ℤ → ⨳∏F(r_n) sending a_m to the m-th element of ⊔ r_n,
// where ⊔ r_n is enumerated level by level. Requires w over the all-ℤ profile
// and (r_n) all finite and not eventually zero; otherwise InvalidReindexing.
TopWord reindex_iso(const TopWord& w, const CardSeq& ranks);
// The element of ⊔ r_n with index m under that enumeration, as (level, gen).
std::pair<std::uint64_t, std::uint64_t> enumerate_units(const CardSeq& ranks, std::uint64_t m);

// a_n^e ↦ (a_{2n} a_{2n+1}^-1)^e on the all-ℤ profile. Infinite blocks need a
// constant exponent per track.
TopWord phi_endo(const TopWord& w);

struct Excursion {
  std::string point;
  bool crosses = true;
  int sign = 1;
  friend bool operator==(const Excursion&, const Excursion&) = default;
};

// Excursion k visits the point at (level(k), gen(k)).
struct ExcursionTrack {
  AffineRule level{1, 0};
  AffineRule gen{0, 0};
  bool crosses = true;
  int sign = 1;
  friend bool operator==(const ExcursionTrack&, const ExcursionTrack&) = default;
};

struct LoopBlock {
  BlockKind kind = BlockKind::Finite;
  std::vector<Excursion> excursions;
  std::vector<ExcursionTrack> tracks;
  friend bool operator==(const LoopBlock&, const LoopBlock&) = default;
};

struct CombinatorialLoop {
  std::vector<LoopBlock> blocks;
  friend bool operator==(const CombinatorialLoop&, const CombinatorialLoop&) = default;
};

// Point id ↦ (level, generator).
using PointTable = std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>;

// Deletes excursions that do not cross the check line and turns each
// remaining one into a letter. Throws InvalidLetter for unknown point ids.
TopWord reduce_loop(const CombinatorialLoop& loop, const PointTable& points, const CardSeq& profile);

} // namespace topprod
