#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topprod/cardseq.hpp"
#include "topprod/equivalence.hpp"
#include "topprod/topword.hpp"

namespace topprod {

// Id of the distinguished point. It may appear as a component member; if no
// component lists it, it forms a component of its own.
inline constexpr const char* kBasepoint = "basepoint";

struct ModelPoint {
  std::string id;
  std::uint64_t level = 0; // the point lies in U_level \ U_{level+1}
  friend bool operator==(const ModelPoint&, const ModelPoint&) = default;
};

struct Component {
  std::string id;
  std::vector<std::string> members;
  // Least n with U_{n+1} ∩ C empty; nullopt when C meets every U_n.
  std::optional<std::uint64_t> max_level;
  friend bool operator==(const Component&, const Component&) = default;
};

// Points x_n at level x_level(n) and y_n at level y_level(n), converging to
// the basepoint. h is the largest k such that a path inside U_k joins x_n and
// y_n; nullopt means unbounded.
struct PairFamily {
  AffineRule x_level{1, 0};
  AffineRule y_level{1, 0};
  bool same_component = false;
  std::optional<std::uint64_t> h;
  // The component holding all x_n, y_n, when they share one.
  std::optional<std::string> component;
  friend bool operator==(const PairFamily&, const PairFamily&) = default;
};

// Anonymous points counted by `annuli` but not listed in `points` are
// isolated: each is a component of its own at its level.
struct SpaceModel {
  CardSeq annuli;
  std::vector<ModelPoint> points;
  std::vector<Component> components;
  std::vector<PairFamily> pair_families;
  friend bool operator==(const SpaceModel&, const SpaceModel&) = default;
};

struct Violation {
  std::string field;
  std::string rule;
  std::string message;
};

std::vector<Violation> validate(const SpaceModel& m);

enum class WitnessTag { DistinctComponents, SingleComponent };
std::string_view to_string(WitnessTag t);

struct HorseshoeWitness {
  std::size_t family = 0;
  // No path inside U_neighborhood joins x_n and y_n.
  std::uint64_t neighborhood = 0;
  // From this n on both x_n and y_n lie in U_neighborhood.
  std::uint64_t first_index = 0;
  // (level of x_n, level of y_n) for the first few n >= first_index.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sample;
  WitnessTag tag = WitnessTag::DistinctComponents;
  std::optional<std::string> component;
};

struct HorseshoeVerdict {
  bool is_horseshoe = false;
  std::optional<HorseshoeWitness> witness;
};

// These throw InvalidSchema when validate() reports violations.
HorseshoeVerdict detect_horseshoe(const SpaceModel& m);

struct SectionEntry {
  std::string component;
  std::uint64_t level = 0;
  friend bool operator==(const SectionEntry&, const SectionEntry&) = default;
};

struct TightSection {
  // One entry per declared component other than the basepoint's.
  std::vector<SectionEntry> section;
  // Number of path components (other than the basepoint's) with maxLevel n,
  // anonymous isolated points included.
  CardSeq invariant;
};

// Throws NotApplicable on a horseshoe model.
TightSection tight_section(const SpaceModel& m);

struct Classification {
  bool horseshoe = false;
  std::optional<HorseshoeWitness> witness;
  std::optional<TightSection> section;
  std::string group_note;
};

Classification classify(const SpaceModel& m);

struct IsoVerdict {
  SeqVerdict verdict;
  CardSeq invariant_a;
  CardSeq invariant_b;
};

// Throws NotApplicable when either model is a horseshoe.
IsoVerdict iso_test(const SpaceModel& a, const SpaceModel& b);

// omegaPlusOne, sineCurve, doubledOmega, discrete(k), bouquetSeed.
// Throws InvalidSchema for an unknown name.
SpaceModel builtin_model(const std::string& name);
SpaceModel bouquet_seed(const CardSeq& seq);
std::vector<std::string> builtin_names();

// Named point ↦ (level, generator): generators count the named points of a
// level in declaration order.
PointTable point_table(const SpaceModel& m);

} // namespace topprod
