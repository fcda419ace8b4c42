// SPDX-License-Identifier: Apache-2.0
#include "tightembed.h"

#include <cstring>
#include <new>
#include <string>

#include "tightembed/certify.hpp"
#include "tightembed/curves.hpp"
#include "tightembed/json_io.hpp"
#include "tightembed/lp_embedding.hpp"
#include "tightembed/spaces.hpp"
#include "tightembed/stable_embedding.hpp"

using tightembed::json;

struct te_curve {
  tightembed::ModulusCurve curve;
};

struct te_space {
  tightembed::SpaceDoc doc;
};

struct te_lp_embedding {
  tightembed::LpEmbedding embedding;
};

struct te_stable_embedding {
  tightembed::StableEmbedding embedding;
};

namespace {

thread_local std::string g_last_error;

te_status fail(te_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
te_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    return fail(TE_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TE_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TE_ERR_INTERNAL, e.what());
  }
}

te_status require(bool ok, const char* what) {
  return ok ? TE_OK : fail(TE_ERR_INVALID, what);
}

}  // namespace

extern "C" {

const char* te_last_error(void) { return g_last_error.c_str(); }

void te_string_free(char* s) { delete[] s; }

/* ---- curves ------------------------------------------------------------ */

te_status te_curve_parse(const char* spec_json, te_curve** out) {
  if (te_status s = require(spec_json && out, "null argument")) return s;
  return guarded([&] {
    *out = new te_curve{tightembed::curve_from_json(json::parse(spec_json))};
    return TE_OK;
  });
}

void te_curve_free(te_curve* curve) { delete curve; }

te_status te_curve_eval(const te_curve* curve, double t, double* out) {
  if (te_status s = require(curve && out, "null argument")) return s;
  return guarded([&] {
    *out = curve->curve.eval(t);
    return TE_OK;
  });
}

te_status te_curve_check_class(const te_curve* curve, const char* cls,
                               int grid_density, int* pass, char** report_json) {
  if (te_status s = require(curve && cls, "null argument")) return s;
  return guarded([&] {
    tightembed::CurveClass parsed;
    const std::string name(cls);
    if (name == "Phi" || name == "phi")
      parsed = tightembed::CurveClass::Phi;
    else if (name == "P" || name == "p")
      parsed = tightembed::CurveClass::P;
    else if (name == "Omega" || name == "omega")
      parsed = tightembed::CurveClass::Omega;
    else
      return fail(TE_ERR_INVALID, "unknown curve class '" + name +
                                      "' (expected Phi, P or Omega)");
    const auto report = tightembed::check_class(curve->curve, parsed, grid_density);
    if (pass) *pass = report.pass ? 1 : 0;
    if (report_json)
      *report_json = dup_string(tightembed::class_report_to_json(report).dump(2));
    return TE_OK;
  });
}

te_status te_curve_exp_dominate(const te_curve* phi, te_curve** mu) {
  if (te_status s = require(phi && mu, "null argument")) return s;
  return guarded([&] {
    *mu = new te_curve{tightembed::exp_dominate(phi->curve)};
    return TE_OK;
  });
}

te_status te_curve_generalized_inverse(const te_curve* mu, double y,
                                       double* out) {
  if (te_status s = require(mu && out, "null argument")) return s;
  return guarded([&] {
    *out = tightembed::generalized_inverse(mu->curve, y);
    return TE_OK;
  });
}

te_status te_curve_regularize_rho(const te_curve* rho, te_curve** out) {
  if (te_status s = require(rho && out, "null argument")) return s;
  return guarded([&] {
    *out = new te_curve{tightembed::regularize_rho(rho->curve)};
    return TE_OK;
  });
}

te_status te_curve_regularize_omega(const te_curve* omega, te_curve** out) {
  if (te_status s = require(omega && out, "null argument")) return s;
  return guarded([&] {
    *out = new te_curve{tightembed::regularize_omega(omega->curve)};
    return TE_OK;
  });
}

te_status te_curve_to_json(const te_curve* curve, char** out) {
  if (te_status s = require(curve && out, "null argument")) return s;
  return guarded([&] {
    *out = dup_string(tightembed::curve_to_json(curve->curve).dump(2));
    return TE_OK;
  });
}

/* ---- spaces ------------------------------------------------------------ */

te_status te_space_parse(const char* space_json, te_space** out) {
  if (te_status s = require(space_json && out, "null argument")) return s;
  return guarded([&] {
    *out = new te_space{tightembed::space_doc_from_json(json::parse(space_json))};
    return TE_OK;
  });
}

void te_space_free(te_space* space) { delete space; }

te_status te_space_size(const te_space* space, int* n) {
  if (te_status s = require(space && n, "null argument")) return s;
  *n = space->doc.space().size();
  return TE_OK;
}

te_status te_space_distance(const te_space* space, int i, int j, double* d) {
  if (te_status s = require(space && d, "null argument")) return s;
  const auto& metric = space->doc.space();
  if (i < 0 || j < 0 || i >= metric.size() || j >= metric.size())
    return fail(TE_ERR_INVALID, "point index out of range");
  *d = metric.distance(i, j);
  return TE_OK;
}

te_status te_space_to_json(const te_space* space, char** out) {
  if (te_status s = require(space && out, "null argument")) return s;
  return guarded([&] {
    *out = dup_string(tightembed::space_doc_to_json(space->doc).dump(2));
    return TE_OK;
  });
}

te_status te_fixture_kalton(double p, int truncation, const double* weights,
                            int weight_count, int sample_count, uint64_t seed,
                            te_space** out) {
  if (te_status s = require(out != nullptr, "null argument")) return s;
  return guarded([&] {
    std::vector<double> w;
    if (weights)
      w.assign(weights, weights + weight_count);
    else
      w = tightembed::kalton_default_weights(truncation);
    auto points = tightembed::kalton_compact_sample(p, truncation, w,
                                                    sample_count, seed);
    auto* space = new te_space{tightembed::SpaceDoc{}};
    space->doc.points = points;
    space->doc.metric = points.metric();
    *out = space;
    return TE_OK;
  });
}

te_status te_fixture_net(const te_space* space, double delta, char** net_json) {
  if (te_status s = require(space && net_json, "null argument")) return s;
  return guarded([&] {
    const auto& metric = space->doc.space();
    const auto net = tightembed::epsilon_net(metric, delta);
    const auto assignment = tightembed::nearest_net_map(metric, net);
    *net_json =
        dup_string(tightembed::net_to_json(delta, net, assignment).dump(2));
    return TE_OK;
  });
}

/* ---- lp embedding ------------------------------------------------------- */

te_status te_lp_embed(const te_space* points, const te_curve* modulus,
                      double eta, double r, double outer_s,
                      te_lp_embedding** out) {
  if (te_status s = require(points && modulus && out, "null argument")) return s;
  return guarded([&] {
    if (!points->doc.points)
      return fail(TE_ERR_INVALID,
                  "lp embedding requires a point-set space (type 'points')");
    tightembed::ModulusCurve mu =
        tightembed::check_class(modulus->curve, tightembed::CurveClass::Phi).pass
            ? tightembed::exp_dominate(modulus->curve)
            : modulus->curve;
    auto plan = tightembed::make_plan(*points->doc.points, mu, eta, r, outer_s);
    *out = new te_lp_embedding{tightembed::embed(plan, *points->doc.points)};
    return TE_OK;
  });
}

te_status te_lp_embedding_parse(const char* embedding_json,
                                te_lp_embedding** out) {
  if (te_status s = require(embedding_json && out, "null argument")) return s;
  return guarded([&] {
    *out = new te_lp_embedding{
        tightembed::lp_embedding_from_json(json::parse(embedding_json))};
    return TE_OK;
  });
}

void te_lp_embedding_free(te_lp_embedding* embedding) { delete embedding; }

te_status te_lp_embedding_to_json(const te_lp_embedding* embedding, char** out) {
  if (te_status s = require(embedding && out, "null argument")) return s;
  return guarded([&] {
    *out = dup_string(tightembed::lp_embedding_to_json(embedding->embedding).dump(2));
    return TE_OK;
  });
}

te_status te_lp_embedding_verify(const te_lp_embedding* embedding, int* pass,
                                 char** report_json, char** report_csv) {
  if (te_status s = require(embedding != nullptr, "null argument")) return s;
  return guarded([&] {
    const auto report = tightembed::verify_sandwich(embedding->embedding);
    if (pass) *pass = report.pass ? 1 : 0;
    if (report_json)
      *report_json = dup_string(tightembed::lp_report_to_json(report).dump(2));
    if (report_csv) *report_csv = dup_string(tightembed::lp_report_to_csv(report));
    return TE_OK;
  });
}

te_status te_lp_embedding_image(const te_lp_embedding* embedding,
                                te_space** out) {
  if (te_status s = require(embedding && out, "null argument")) return s;
  return guarded([&] {
    auto* space = new te_space{tightembed::SpaceDoc{}};
    space->doc.metric = tightembed::lp_image_metric(embedding->embedding);
    *out = space;
    return TE_OK;
  });
}

/* ---- stable embedding ---------------------------------------------------- */

te_status te_stable_embed(const te_space* space, int basepoint,
                          const te_curve* rho, const te_curve* omega,
                          te_stable_embedding** out) {
  if (te_status s = require(space && rho && omega && out, "null argument"))
    return s;
  return guarded([&] {
    *out = new te_stable_embedding{tightembed::embed_stable(
        space->doc.space(), basepoint, rho->curve, omega->curve)};
    return TE_OK;
  });
}

te_status te_stable_embedding_parse(const char* embedding_json,
                                    te_stable_embedding** out) {
  if (te_status s = require(embedding_json && out, "null argument")) return s;
  return guarded([&] {
    *out = new te_stable_embedding{
        tightembed::stable_embedding_from_json(json::parse(embedding_json))};
    return TE_OK;
  });
}

void te_stable_embedding_free(te_stable_embedding* embedding) {
  delete embedding;
}

te_status te_stable_embedding_to_json(const te_stable_embedding* embedding,
                                      char** out) {
  if (te_status s = require(embedding && out, "null argument")) return s;
  return guarded([&] {
    *out = dup_string(
        tightembed::stable_embedding_to_json(embedding->embedding).dump(2));
    return TE_OK;
  });
}

te_status te_stable_embedding_verify(const te_stable_embedding* embedding,
                                     int* pass, char** report_json,
                                     char** report_csv) {
  if (te_status s = require(embedding != nullptr, "null argument")) return s;
  return guarded([&] {
    const auto report = tightembed::verify_stable(embedding->embedding);
    if (pass) *pass = report.pass ? 1 : 0;
    if (report_json)
      *report_json = dup_string(tightembed::stable_report_to_json(report).dump(2));
    if (report_csv)
      *report_csv = dup_string(tightembed::stable_report_to_csv(report));
    return TE_OK;
  });
}

te_status te_stable_embedding_image(const te_stable_embedding* embedding,
                                    te_space** out) {
  if (te_status s = require(embedding && out, "null argument")) return s;
  return guarded([&] {
    auto* space = new te_space{tightembed::SpaceDoc{}};
    space->doc.metric = tightembed::stable_image_metric(embedding->embedding);
    *out = space;
    return TE_OK;
  });
}

/* ---- certification ------------------------------------------------------ */

te_status te_measure_moduli(const te_space* source, const te_space* image,
                            char** profile_csv, char** profile_json) {
  if (te_status s = require(source && image, "null argument")) return s;
  return guarded([&] {
    const auto profile =
        tightembed::measure_moduli(source->doc.space(), image->doc.space());
    if (profile_csv) *profile_csv = dup_string(tightembed::profile_to_csv(profile));
    if (profile_json)
      *profile_json = dup_string(tightembed::profile_to_json(profile).dump(2));
    return TE_OK;
  });
}

te_status te_range_check(const te_space* source, const te_space* image,
                         double s1, double s2, double r, double distortion,
                         int* pass, char** report_json) {
  if (te_status s = require(source && image, "null argument")) return s;
  return guarded([&] {
    const auto report = tightembed::range_check(source->doc.space(),
                                                image->doc.space(), s1, s2, r,
                                                distortion);
    if (pass) *pass = report.pass ? 1 : 0;
    if (report_json)
      *report_json = dup_string(tightembed::range_report_to_json(report).dump(2));
    return TE_OK;
  });
}

te_status te_snowflake_check(const te_space* source, const te_space* image,
                             double s, int* pass, char** report_json) {
  if (te_status st = require(source && image, "null argument")) return st;
  return guarded([&] {
    const auto report =
        tightembed::snowflake_check(source->doc.space(), image->doc.space(), s);
    if (pass) *pass = report.pass ? 1 : 0;
    if (report_json)
      *report_json =
          dup_string(tightembed::snowflake_report_to_json(report).dump(2));
    return TE_OK;
  });
}

te_status te_compression_exponent(const te_space* source, const te_space* image,
                                  double tau, double* alpha, double* scale,
                                  char** report_json) {
  if (te_status s = require(source && image, "null argument")) return s;
  return guarded([&] {
    const auto estimate = tightembed::compression_exponent_estimate(
        source->doc.space(), image->doc.space(), tau);
    if (alpha) *alpha = estimate.alpha;
    if (scale) *scale = estimate.scale;
    if (report_json)
      *report_json = dup_string(tightembed::compression_to_json(estimate).dump(2));
    return TE_OK;
  });
}

}  // extern "C"
