// SPDX-License-Identifier: Apache-2.0
#include "tightembed/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace tightembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* case_name(LpPairCase c) {
  switch (c) {
    case LpPairCase::Separated:
      return "separated";
    case LpPairCase::SameAnnulus:
      return "same_annulus";
    case LpPairCase::AdjacentAnnuli:
      return "adjacent";
  }
  return "?";
}

json tail_to_json(const Tail& tail) {
  if (tail.kind == Tail::Kind::Affine)
    return json{{"kind", "affine"}, {"slope", tail.value}};
  return json{{"kind", "power"}, {"alpha", tail.value}};
}

Tail tail_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "affine") return Tail{Tail::Kind::Affine, doc.at("slope").get<double>()};
  if (kind == "power") return Tail{Tail::Kind::Power, doc.at("alpha").get<double>()};
  throw std::invalid_argument("curve: unknown tail kind '" + kind + "'");
}

json pl_to_json(const std::vector<Knot>& knots, const Tail& tail) {
  json points = json::array();
  for (const Knot& k : knots) points.push_back(json::array({k.t, k.v}));
  return json{{"family", "pl"}, {"points", points}, {"tail", tail_to_json(tail)}};
}

// Sampled piecewise-linear stand-in for a composite curve, on the default
// grid with an affine continuation matched to the last two samples.
json sampled_pl(const ModulusCurve& curve) {
  const auto grid = default_grid();
  std::vector<Knot> knots;
  knots.reserve(grid.size());
  for (double t : grid) knots.push_back(Knot{t, curve.eval(t)});
  const Knot& a = knots[knots.size() - 2];
  const Knot& b = knots.back();
  return pl_to_json(knots, Tail{Tail::Kind::Affine, (b.v - a.v) / (b.t - a.t)});
}

}  // namespace

json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

double real_from_json(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("expected a number or 'inf', got '" + s + "'");
  }
  return v.get<double>();
}

json curve_to_json(const ModulusCurve& curve, bool exact) {
  switch (curve.family()) {
    case CurveFamily::PowerRho:
      return json{{"family", "power_rho"}, {"alpha", curve.alpha()}};
    case CurveFamily::PowerOmega:
      return json{{"family", "power_omega"}, {"alpha", curve.alpha()}};
    case CurveFamily::ExpFloor:
      return json{{"family", "exp_floor"}};
    case CurveFamily::PiecewiseLinear:
      return pl_to_json(curve.knots(), curve.tail());
    case CurveFamily::Log2:
      if (!exact) return sampled_pl(curve);
      return json{{"family", "log2"}, {"base", curve_to_json(curve.base(), true)}};
    case CurveFamily::RunningSupFloor:
      if (!exact) return sampled_pl(curve);
      return json{{"family", "runsup_floor"},
                  {"base", curve_to_json(curve.base(), true)}};
    case CurveFamily::Conjugate:
      if (!exact) return sampled_pl(curve);
      return json{{"family", "conj"}, {"base", curve_to_json(curve.base(), true)}};
  }
  throw std::invalid_argument("curve: unknown family");
}

ModulusCurve curve_from_json(const json& spec) {
  if (!spec.is_object() || !spec.contains("family"))
    throw std::invalid_argument("curve: expected an object with a 'family' field");
  const std::string family = spec.at("family").get<std::string>();
  if (family == "power_rho")
    return ModulusCurve::power_rho(spec.at("alpha").get<double>());
  if (family == "power_omega")
    return ModulusCurve::power_omega(spec.at("alpha").get<double>());
  if (family == "exp_floor") return ModulusCurve::exp_floor();
  if (family == "pl") {
    std::vector<Knot> knots;
    for (const json& pt : spec.at("points")) {
      if (!pt.is_array() || pt.size() != 2)
        throw std::invalid_argument("curve: pl points must be [t, v] pairs");
      knots.push_back(Knot{pt[0].get<double>(), pt[1].get<double>()});
    }
    return ModulusCurve::piecewise_linear(std::move(knots),
                                          tail_from_json(spec.at("tail")));
  }
  if (family == "log2")
    return ModulusCurve::log2_of(curve_from_json(spec.at("base")));
  if (family == "runsup_floor")
    return ModulusCurve::running_sup_floor(curve_from_json(spec.at("base")));
  if (family == "conj")
    return ModulusCurve::conjugate(curve_from_json(spec.at("base")));
  throw std::invalid_argument("curve: unknown family '" + family + "'");
}

SpaceDoc space_doc_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("type"))
    throw std::invalid_argument("space: expected an object with a 'type' field");
  const std::string type = doc.at("type").get<std::string>();
  SpaceDoc out;
  if (type == "points") {
    const double p = real_from_json(doc.at("p"));
    std::vector<std::vector<double>> coords;
    for (const json& row : doc.at("coords"))
      coords.push_back(row.get<std::vector<double>>());
    std::optional<int> basepoint;
    if (doc.contains("basepoint") && !doc.at("basepoint").is_null())
      basepoint = doc.at("basepoint").get<int>();
    out.points = LpPointSet(p, std::move(coords), basepoint);
    out.metric = out.points->metric();
    return out;
  }
  if (type == "matrix") {
    std::vector<std::vector<double>> d;
    for (const json& row : doc.at("d")) d.push_back(row.get<std::vector<double>>());
    out.metric = FiniteMetricSpace::validate(std::move(d));
    return out;
  }
  throw std::invalid_argument("space: unknown type '" + type + "'");
}

json points_to_json(const LpPointSet& points) {
  json coords = json::array();
  for (const auto& pt : points.points()) coords.push_back(pt);
  json doc{{"type", "points"}, {"p", real_to_json(points.p())}, {"coords", coords}};
  if (points.basepoint()) doc["basepoint"] = *points.basepoint();
  return doc;
}

json metric_to_json(const FiniteMetricSpace& space) {
  return json{{"type", "matrix"}, {"d", space.matrix()}};
}

json space_doc_to_json(const SpaceDoc& doc) {
  if (doc.points) return points_to_json(*doc.points);
  return metric_to_json(*doc.metric);
}

json lp_embedding_to_json(const LpEmbedding& embedding) {
  const LpEmbeddingPlan& plan = embedding.plan;
  json sigma = json::array();
  for (double s : plan.sigma) sigma.push_back(real_to_json(s));
  json psi = json::array();
  for (int k = plan.k_min; k <= plan.k_max + 1; ++k)
    for (int n = 1; n <= plan.scale_count(); ++n)
      psi.push_back(json{{"k", k},
                         {"n", n},
                         {"block", plan.block_index(k, n)},
                         {"dim", plan.trunc(k, n)}});
  json values = json::array();
  for (const BlockVector& v : embedding.values) {
    json blocks = json::object();
    for (const auto& [j, coords] : v.parts) blocks[std::to_string(j)] = coords;
    values.push_back(blocks);
  }
  return json{{"type", "lp_embedding"},
              {"plan",
               {{"eta", plan.eta},
                {"r", plan.r},
                {"outer_s", real_to_json(plan.outer_s)},
                {"k_min", plan.k_min},
                {"k_max", plan.k_max},
                {"n_max", plan.n_max},
                {"sigma", sigma},
                {"trunc_dim", plan.trunc_dim},
                {"modulus", curve_to_json(plan.mu, /*exact=*/true)},
                {"psi", psi}}},
              {"source", points_to_json(embedding.source)},
              {"values", values}};
}

LpEmbedding lp_embedding_from_json(const json& doc) {
  if (doc.value("type", "") != "lp_embedding")
    throw std::invalid_argument("embedding: expected type 'lp_embedding'");
  const json& plan_doc = doc.at("plan");

  SpaceDoc source = space_doc_from_json(doc.at("source"));
  if (!source.points)
    throw std::invalid_argument("embedding: source must be a point set");

  std::vector<double> sigma;
  for (const json& s : plan_doc.at("sigma")) sigma.push_back(real_from_json(s));
  std::vector<std::vector<int>> trunc_dim;
  for (const json& row : plan_doc.at("trunc_dim"))
    trunc_dim.push_back(row.get<std::vector<int>>());

  const double p = source.points->p();
  std::vector<BlockSpec> blocks;
  for (const auto& row : trunc_dim)
    for (int m : row) blocks.push_back(BlockSpec{p, m});

  LpEmbeddingPlan plan{plan_doc.at("eta").get<double>(),
                       plan_doc.at("r").get<double>(),
                       real_from_json(plan_doc.at("outer_s")),
                       plan_doc.at("k_min").get<int>(),
                       plan_doc.at("k_max").get<int>(),
                       plan_doc.at("n_max").get<int>(),
                       std::move(sigma),
                       std::move(trunc_dim),
                       curve_from_json(plan_doc.at("modulus")),
                       BlockSpace(real_from_json(plan_doc.at("outer_s")),
                                  std::move(blocks))};
  if (static_cast<int>(plan.trunc_dim.size()) != plan.slice_count() ||
      static_cast<int>(plan.sigma.size()) != plan.scale_count())
    throw std::invalid_argument("embedding: inconsistent plan tables");
  for (const auto& row : plan.trunc_dim)
    if (static_cast<int>(row.size()) != plan.scale_count())
      throw std::invalid_argument("embedding: inconsistent plan tables");

  std::vector<BlockVector> values;
  for (const json& entry : doc.at("values")) {
    BlockVector v;
    for (auto it = entry.begin(); it != entry.end(); ++it)
      v.parts.emplace(std::stoi(it.key()), it.value().get<std::vector<double>>());
    values.push_back(std::move(v));
  }
  if (static_cast<int>(values.size()) != source.points->size())
    throw std::invalid_argument("embedding: one value per source point required");
  return LpEmbedding{std::move(plan), std::move(*source.points), std::move(values)};
}

json lp_report_to_json(const LpSandwichReport& report) {
  json pairs = json::array();
  for (const LpPairRow& row : report.rows)
    pairs.push_back(json{{"i", row.i},
                         {"j", row.j},
                         {"d", row.d},
                         {"image_d", row.image_d},
                         {"lower", row.lower},
                         {"upper", row.upper},
                         {"case", case_name(row.pair_case)},
                         {"case_upper", row.case_upper},
                         {"lower_margin", row.image_d - row.lower},
                         {"upper_margin", row.upper - row.image_d},
                         {"pass", row.pass}});
  return json{{"type", "report"},
              {"kind", "lp_sandwich"},
              {"pass", report.pass},
              {"worst_row", report.worst_row},
              {"range_consequence",
               {{"s1", real_to_json(report.sigma1)},
                {"r_eff", report.r_eff},
                {"distortion_bound", real_to_json(report.range_distortion)},
                {"pass", report.range_pass}}},
              {"pairs", pairs}};
}

std::string lp_report_to_csv(const LpSandwichReport& report) {
  std::string out =
      "i,j,d,image_d,lower,upper,case,case_upper,lower_margin,upper_margin,pass\n";
  for (const LpPairRow& row : report.rows) {
    out += std::to_string(row.i) + ',' + std::to_string(row.j) + ',' +
           fmt(row.d) + ',' + fmt(row.image_d) + ',' + fmt(row.lower) + ',' +
           fmt(row.upper) + ',' + case_name(row.pair_case) + ',' +
           fmt(row.case_upper) + ',' + fmt(row.image_d - row.lower) + ',' +
           fmt(row.upper - row.image_d) + ',' + (row.pass ? "1" : "0") + '\n';
  }
  return out;
}

json stable_embedding_to_json(const StableEmbedding& embedding) {
  json coords = json::array();
  for (const auto& [p, q] : embedding.coords) {
    const double dpq = embedding.base.distance(p, q);
    coords.push_back(
        json{{"p", p}, {"q", q}, {"weight", embedding.rho.eval(dpq) / dpq}});
  }
  return json{{"type", "stable_embedding"},
              {"basepoint", embedding.basepoint},
              {"rho", curve_to_json(embedding.rho, /*exact=*/true)},
              {"omega", curve_to_json(embedding.omega, /*exact=*/true)},
              {"metric", metric_to_json(embedding.base)},
              {"coords", coords},
              {"table", embedding.table}};
}

StableEmbedding stable_embedding_from_json(const json& doc) {
  if (doc.value("type", "") != "stable_embedding")
    throw std::invalid_argument("embedding: expected type 'stable_embedding'");
  SpaceDoc base = space_doc_from_json(doc.at("metric"));
  StableEmbedding emb{std::move(*base.metric), doc.at("basepoint").get<int>(),
                      curve_from_json(doc.at("rho")),
                      curve_from_json(doc.at("omega")),
                      {},
                      {}};
  for (const json& c : doc.at("coords"))
    emb.coords.emplace_back(c.at("p").get<int>(), c.at("q").get<int>());
  for (const json& row : doc.at("table"))
    emb.table.push_back(row.get<std::vector<double>>());
  const int n = emb.base.size();
  if (static_cast<int>(emb.coords.size()) != n * (n - 1) ||
      emb.table.size() != emb.coords.size())
    throw std::invalid_argument("embedding: inconsistent coordinate table");
  for (const auto& row : emb.table)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("embedding: inconsistent coordinate table");
  return emb;
}

json stable_report_to_json(const StableReport& report) {
  json pairs = json::array();
  for (const StablePairRow& row : report.rows)
    pairs.push_back(json{{"i", row.i},
                         {"j", row.j},
                         {"d", row.d},
                         {"image_d", row.image_d},
                         {"lower", row.lower},
                         {"upper", row.upper},
                         {"attained", row.attained},
                         {"lower_margin", row.image_d - row.lower},
                         {"upper_margin", row.upper - row.image_d},
                         {"pass", row.pass}});
  return json{{"type", "report"},
              {"kind", "stable_sandwich"},
              {"pass", report.pass},
              {"worst_row", report.worst_row},
              {"n_omega_max", report.n_omega_max},
              {"pairs", pairs}};
}

std::string stable_report_to_csv(const StableReport& report) {
  std::string out = "i,j,d,image_d,lower,upper,attained,lower_margin,upper_margin,pass\n";
  for (const StablePairRow& row : report.rows) {
    out += std::to_string(row.i) + ',' + std::to_string(row.j) + ',' +
           fmt(row.d) + ',' + fmt(row.image_d) + ',' + fmt(row.lower) + ',' +
           fmt(row.upper) + ',' + fmt(row.attained) + ',' +
           fmt(row.image_d - row.lower) + ',' + fmt(row.upper - row.image_d) +
           ',' + (row.pass ? "1" : "0") + '\n';
  }
  return out;
}

json profile_to_json(const ModulusProfile& profile) {
  return json{{"type", "modulus_profile"},
              {"t", profile.t},
              {"rho_hat", profile.rho_hat},
              {"omega_hat", profile.omega_hat}};
}

std::string profile_to_csv(const ModulusProfile& profile) {
  std::string out = "t,rho_hat,omega_hat\n";
  for (std::size_t k = 0; k < profile.t.size(); ++k)
    out += fmt(profile.t[k]) + ',' + fmt(profile.rho_hat[k]) + ',' +
           fmt(profile.omega_hat[k]) + '\n';
  return out;
}

namespace {

json checked_pairs_to_json(const std::vector<CheckedPair>& rows) {
  json out = json::array();
  for (const CheckedPair& row : rows)
    out.push_back(json{{"i", row.i},
                       {"j", row.j},
                       {"d", row.d},
                       {"image_d", row.image_d},
                       {"pass", row.pass}});
  return out;
}

}  // namespace

json range_report_to_json(const RangeReport& report) {
  return json{{"type", "report"},
              {"kind", "range"},
              {"s1", report.s1},
              {"s2", real_to_json(report.s2)},
              {"r", report.r},
              {"distortion", report.distortion},
              {"pass", report.pass},
              {"worst_row", report.worst_row},
              {"pairs", checked_pairs_to_json(report.rows)}};
}

json snowflake_report_to_json(const SnowflakeReport& report) {
  json profile = json::array();
  for (const auto& row : report.profile_rows)
    profile.push_back(json{{"t", row.t},
                           {"rho_hat", row.rho_hat},
                           {"bound", row.bound},
                           {"pass", row.pass}});
  return json{{"type", "report"},
              {"kind", "snowflake"},
              {"exponent", report.exponent},
              {"pass", report.pass},
              {"pairs", checked_pairs_to_json(report.pair_rows)},
              {"profile", profile}};
}

json compression_to_json(const CompressionEstimate& estimate) {
  return json{{"type", "report"},
              {"kind", "compression_exponent"},
              {"alpha", estimate.alpha},
              {"C", estimate.scale},
              {"tau", estimate.tau},
              {"pairs_used", estimate.pairs_used},
              {"note",
               "witness certificate (alpha, C) on this sample; not a supremum "
               "over all maps and thresholds"}};
}

json class_report_to_json(const ClassReport& report) {
  json out{{"type", "class_report"},
           {"class", curve_class_name(report.cls)},
           {"grid_size", report.grid.size()},
           {"pass", report.pass}};
  if (report.first_violation)
    out["first_violation"] = json{{"t", real_to_json(report.first_violation->t)},
                                  {"clause", report.first_violation->clause}};
  return out;
}

json net_to_json(double delta, const std::vector<int>& net,
                 const std::vector<int>& assignment) {
  return json{{"type", "net"},
              {"delta", delta},
              {"net", net},
              {"assignment", assignment}};
}

}  // namespace tightembed
