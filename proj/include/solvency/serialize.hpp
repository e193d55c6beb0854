#pragma once

// JSON views of solver results. Rationals are always lowest-terms "p/q" strings and
// objects keep insertion order so output is byte-stable.

#include <json.hpp>

#include "solvency/approx.hpp"
#include "solvency/bounds.hpp"
#include "solvency/qualitative.hpp"
#include "solvency/reach.hpp"
#include "solvency/unfold.hpp"

namespace solvency {

using Json = nlohmann::ordered_json;

Json to_json(const MdpStructure& m, const Configuration& c);
Json to_json(const MdpStructure& m, const BoundsTable& bounds);
Json to_json(const MdpStructure& m, const QualitativeResult& result);
Json to_json(const ApproxParams& params);

/// {"origin":{...}, "lambda":"p/q", "horizon":n, "choices":[{"layer","state","class","action"}]}
/// where "class" is the interval upper endpoint "p/q", or "WIN"/"LOSE".
Json to_json(const MdpStructure& m, const LayeredStrategy& sigma);
/// Inverse of the above; bounds are supplied by the caller (recomputed from the model).
LayeredStrategy strategy_from_json(const MdpStructure& m, const BoundsTable& bounds, const Json& j);

/// Layer sizes and per-layer class-kind counts of an unfolded MDP.
Json unfold_summary(const UnfoldedMdp& dag);

}  // namespace solvency
