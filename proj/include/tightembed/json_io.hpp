// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tightembed/certify.hpp"
#include "tightembed/curves.hpp"
#include "tightembed/lp_embedding.hpp"
#include "tightembed/spaces.hpp"
#include "tightembed/stable_embedding.hpp"

namespace tightembed {

using json = nlohmann::json;

// Modulus specification schema:
//   {"family":"power_rho","alpha":0.5} | {"family":"power_omega","alpha":0.5}
//   {"family":"exp_floor"}
//   {"family":"pl","points":[[t,v],...],
//    "tail":{"kind":"affine","slope":s} | {"kind":"power","alpha":a}}
// Derived curves exported on their own are sampled to family "pl"; embedding
// files instead keep composites exact through the output-only families
// "log2", "runsup_floor" and "conj" (a nested "base" object), so re-ingesting
// an embedding re-verifies against bit-identical curves.
json curve_to_json(const ModulusCurve& curve, bool exact = false);
ModulusCurve curve_from_json(const json& spec);

// Space schema: {"type":"points","p":2,"coords":[[...],...],"basepoint":0}
// with p = inf encoded as "inf" and basepoint optional, or
// {"type":"matrix","d":[[...],...]}.
struct SpaceDoc {
  std::optional<LpPointSet> points;
  std::optional<FiniteMetricSpace> metric;

  const FiniteMetricSpace& space() const { return *metric; }
};

SpaceDoc space_doc_from_json(const json& doc);
json points_to_json(const LpPointSet& points);
json metric_to_json(const FiniteMetricSpace& space);
json space_doc_to_json(const SpaceDoc& doc);

json lp_embedding_to_json(const LpEmbedding& embedding);
LpEmbedding lp_embedding_from_json(const json& doc);
json lp_report_to_json(const LpSandwichReport& report);
std::string lp_report_to_csv(const LpSandwichReport& report);

json stable_embedding_to_json(const StableEmbedding& embedding);
StableEmbedding stable_embedding_from_json(const json& doc);
json stable_report_to_json(const StableReport& report);
std::string stable_report_to_csv(const StableReport& report);

json profile_to_json(const ModulusProfile& profile);
std::string profile_to_csv(const ModulusProfile& profile);
json range_report_to_json(const RangeReport& report);
json snowflake_report_to_json(const SnowflakeReport& report);
json compression_to_json(const CompressionEstimate& estimate);
json class_report_to_json(const ClassReport& report);
json net_to_json(double delta, const std::vector<int>& net,
                 const std::vector<int>& assignment);

// +/-inf encode as the strings "inf" / "-inf" (JSON has no infinities)
json real_to_json(double v);
double real_from_json(const json& v);

}  // namespace tightembed
