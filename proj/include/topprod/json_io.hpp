#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "topprod/cardseq.hpp"
#include "topprod/equivalence.hpp"
#include "topprod/freealg.hpp"
#include "topprod/spacemodel.hpp"
#include "topprod/topword.hpp"

namespace topprod::io {

using nlohmann::json;

// All *_from_json functions throw ParseError on malformed input.

json to_json(const Cardinal& c);
Cardinal cardinal_from_json(const json& j);

json to_json(const CardSeq& s);
CardSeq cardseq_from_json(const json& j);

json to_json(const GroupingSchema& g);
GroupingSchema grouping_from_json(const json& j);

json to_json(const TopWord& w);
// A string "profile" is read as a path to a CardSeq file, relative to base_dir.
TopWord word_from_json(const json& j, const std::filesystem::path& base_dir = {});

json to_json(const ProductNormalForm& u);

json to_json(const SpaceModel& m);
SpaceModel model_from_json(const json& j);

json to_json(const CombinatorialLoop& loop);
CombinatorialLoop loop_from_json(const json& j);

json to_json(const Violation& v);
json to_json(const PlanPiece& p);
// Plan with its pieces and certificates through level `depth`.
json to_json(const BijectionPlan& plan, std::uint64_t depth = 8);
json to_json(const SeqVerdict& v);
json to_json(const HorseshoeWitness& w);
json to_json(const Classification& c);
json to_json(const IsoVerdict& v);

json read_json_file(const std::filesystem::path& path);

} // namespace topprod::io
