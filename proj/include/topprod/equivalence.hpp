#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topprod/cardseq.hpp"

namespace topprod {

enum class PlanCase {
  EventuallyZero,
  EventuallyFiniteAllFinite,
  EventuallyFiniteInfinitePrefix,
  SuccessorStable,
  LimitBackAndForth,
};
std::string_view to_string(PlanCase c);

// Inclusive range of levels.
struct LevelRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  friend bool operator==(const LevelRange&, const LevelRange&) = default;
};

// Match: all of `source` goes onto all of `target`.
// Forward: the rest of source level `source.first` goes into part of target level `target.first`.
// Backward: the rest of target level `target.first` comes from part of source level `source.first`.
enum class PieceKind { Match, Forward, Backward };
std::string_view to_string(PieceKind k);

struct PlanPiece {
  LevelRange source;
  LevelRange target;
  Cardinal card;
  PieceKind kind = PieceKind::Match;
  friend bool operator==(const PlanPiece&, const PlanPiece&) = default;
};

// A bijection between the disjoint unions of two cardinal sequences, given as
// an optional head piece followed by a staircase of single-level pieces that
// is generated on demand.
class BijectionPlan {
public:
  BijectionPlan(CardSeq source, CardSeq target, PlanCase c, std::optional<PlanPiece> head, bool has_staircase);

  PlanCase plan_case() const { return case_; }
  const CardSeq& source() const { return s_; }
  const CardSeq& target() const { return t_; }
  const std::optional<PlanPiece>& head() const { return head_; }

  // Head first, then staircase pieces until every source level <= src_bound
  // and every target level <= tgt_bound has been used up.
  std::vector<PlanPiece> pieces(std::uint64_t src_bound, std::uint64_t tgt_bound) const;

  // M' with f(levels <= M) inside target levels <= M', and the converse.
  std::uint64_t forward_certificate(std::uint64_t M) const;
  std::uint64_t backward_certificate(std::uint64_t M) const;

private:
  CardSeq s_;
  CardSeq t_;
  PlanCase case_;
  std::optional<PlanPiece> head_;
  bool has_staircase_;
};

struct SeqVerdict {
  bool equivalent = false;
  // 1, 2 or 3 when not equivalent.
  int failing_condition = 0;
  std::string reason;
  // Condition 2: an infinite cardinal below which exactly one sequence eventually stays.
  std::optional<Cardinal> kappa;
  // Condition 3: index M of `witness_side` whose partial sum no partial sum
  // of the other sequence reaches.
  std::optional<std::uint64_t> M;
  int witness_side = 0; // 0 = first argument, 1 = second
  std::optional<BijectionPlan> plan;
};

// The infinite cardinals at which condition 2 is checked.
std::vector<Cardinal> kappa_test_set(const CardSeq& s, const CardSeq& t);

SeqVerdict seq_equiv(const CardSeq& s, const CardSeq& t);

struct AuditResult {
  bool ok = true;
  std::vector<std::string> problems;
};

// Re-checks a plan against its sequences through level H: head sums, the
// consumption rules of every piece, that all levels <= H are used up exactly
// once, and both certificates for every M <= H.
AuditResult audit_plan(const BijectionPlan& plan, std::uint64_t H);

struct UnitPair {
  std::uint64_t source_level;
  std::uint64_t source_unit;
  std::uint64_t target_level;
  std::uint64_t target_unit;
  friend bool operator==(const UnitPair&, const UnitPair&) = default;
};

struct Realization {
  // Source units of levels < M mapped explicitly, in (level, unit) order.
  std::vector<UnitPair> explicit_pairs;
  // Pieces with an infinite cardinality that touch source levels < M. For
  // these, `first_source_unit`/`first_target_unit` give where the piece starts
  // inside its level when the piece is single-level.
  struct SymbolicPiece {
    PlanPiece piece;
    std::uint64_t first_source_unit = 0;
    std::uint64_t first_target_unit = 0;
  };
  std::vector<SymbolicPiece> symbolic;
};

// Explicit form of the plan on source levels 0..M-1. Units are consumed in
// (level, unit) order on both sides. Throws PreconditionError when the plan
// does not fit its sequences.
Realization realize_bijection(const BijectionPlan& plan, std::uint64_t M);

} // namespace topprod
