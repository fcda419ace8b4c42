// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tightembed/json_io.hpp"
#include "tightembed/lp_embedding.hpp"

using namespace tightembed;

namespace {

// mu(t) = log2(t/(1+t)), with sigma(-n) = 1/(2^n - 1) in closed form
ModulusCurve rational_mu() {
  return ModulusCurve::log2_of(ModulusCurve::conjugate(
      ModulusCurve::piecewise_linear({{0.0, 1.0}, {1.0, 2.0}},
                                     Tail{Tail::Kind::Affine, 1.0})));
}

}  // namespace

TEST_CASE("coordinate truncation") {
  CHECK(bap_truncation_error({3.0, 0.001, 0.0}, 1, 1.0) ==
        doctest::Approx(0.001));
  CHECK(bap_truncation_error({3.0, 0.001, 0.0}, 3, 1.0) == 0.0);
  CHECK(bap_truncation({3.0, 0.001, 0.0}, 1) ==
        std::vector<double>{3.0, 0.0, 0.0});
  CHECK_THROWS_AS((void)bap_truncation({1.0}, 2), std::invalid_argument);

  // 1-Lipschitz on random pairs in every norm
  SeededRng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const double p = std::vector<double>{1.0, 2.0, 3.0, HUGE_VAL}[
        static_cast<std::size_t>(rng.next_below(4))];
    std::vector<double> x(6), y(6);
    for (int c = 0; c < 6; ++c) {
      x[static_cast<std::size_t>(c)] = rng.next_symmetric();
      y[static_cast<std::size_t>(c)] = rng.next_symmetric();
    }
    const int m = rng.next_below(7);
    CHECK(lp_distance(bap_truncation(x, m), bap_truncation(y, m), p) <=
          lp_distance(x, y, p) * (1.0 + 1e-12));
  }
}

TEST_CASE("plan: sigma table and scale truncation") {
  // two points at distance ~0.1: n_max = 3 since sigma(-4) = 1/15 <= 0.1 < 1/7
  const LpPointSet pts(2.0, {{0.95}, {1.05}});
  const auto plan = make_plan(pts, rational_mu(), 100.0, 0.06);
  CHECK(plan.n_max == 3);
  REQUIRE(plan.sigma.size() == 4);
  for (int n = 1; n <= 4; ++n)
    CHECK(plan.sigma[static_cast<std::size_t>(n - 1)] ==
          doctest::Approx(1.0 / (std::exp2(n) - 1.0)).epsilon(1e-9));
}

TEST_CASE("plan: annulus range from the realized norms") {
  const LpPointSet pts(2.0, {{1.0}, {5.0}});
  const auto plan = make_plan(pts, rational_mu(), 100.0, 0.06);
  CHECK(plan.k_min == 0);
  CHECK(plan.k_max == 2);
  CHECK(plan.slice_count() == 4);  // slices k = 0..3
  // identity truncation once the tolerance drops below the tail error
  for (int k = plan.k_min; k <= plan.k_max + 1; ++k)
    for (int n = 1; n <= plan.scale_count(); ++n)
      CHECK(plan.trunc(k, n) <= pts.dim());

  // with a nonzero last coordinate everywhere, sigma(-n)/eta below the
  // smallest tail error forces the full dimension
  const LpPointSet thick(2.0, {{1.0, 0.5}, {5.0, 0.5}});
  const auto full = make_plan(thick, rational_mu(), 100.0, 0.06);
  for (int k = full.k_min; k <= full.k_max + 1; ++k)
    for (int n = 1; n <= full.scale_count(); ++n)
      CHECK(full.trunc(k, n) == thick.dim());
}

TEST_CASE("plan: parameter validation") {
  const LpPointSet pts(2.0, {{0.0}, {1.0}}, 0);
  CHECK_THROWS_AS(make_plan(pts, rational_mu(), 2.0, 0.06), std::invalid_argument);
  CHECK_THROWS_AS(make_plan(pts, rational_mu(), 100.0, 0.0625),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_plan(pts, rational_mu(), 100.0, 0.0),
                  std::invalid_argument);
  const LpPointSet single(2.0, {{1.0}});
  CHECK_THROWS_AS(make_plan(single, rational_mu(), 100.0, 0.06),
                  std::invalid_argument);
  // a positive curve is not a log-modulus
  CHECK_THROWS_AS(make_plan(pts, ModulusCurve::power_omega(0.5), 100.0, 0.06),
                  std::invalid_argument);
}

TEST_CASE("slice map on the two-point fixture") {
  const LpPointSet pts(2.0, {{0.0, 0.0}, {1.0, 0.0}}, 0);
  const auto plan = make_plan(pts, rational_mu(), 100.0, 0.06, 2.0);
  CHECK(plan.n_max == 1);  // sigma(-2) = 1/3 <= d_min = 1

  // the origin maps to zero by linearity
  CHECK(slice_embed(plan, 0, pts.point(0)).is_zero());

  // 2^-1 P_{m(0,1)} e1 and 2^-2 P_{m(0,2)} e1 in disjoint blocks
  const auto f0 = slice_embed(plan, 0, pts.point(1));
  CHECK(block_norm(plan.space, f0) ==
        doctest::Approx(std::sqrt(5.0) / 4.0).epsilon(1e-12));
  CHECK(plan.trunc(0, 1) == 1);  // minimal truncation, not the full dimension

  CHECK_THROWS_AS(slice_embed(plan, -5, pts.point(1)), std::invalid_argument);
  // a point outside the slice ball is rejected
  const auto plan_wide = make_plan(LpPointSet(2.0, {{1.0, 0.0}, {8.0, 0.0}}),
                                   rational_mu(), 100.0, 0.06);
  CHECK_THROWS_AS(slice_embed(plan_wide, 0, std::vector<double>{8.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("glued embedding: boundary continuity and the sandwich") {
  const LpPointSet pts(2.0, {{0.0, 0.0}, {1.0, 0.0}}, 0);
  const auto plan = make_plan(pts, rational_mu(), 100.0, 0.06, 2.0);
  const auto embedding = embed(plan, pts);

  CHECK(embedding.values[0].is_zero());  // f(0) = 0
  const double image = block_norm(
      plan.space, block_subtract(embedding.values[1], embedding.values[0]));
  CHECK(image == doctest::Approx(std::sqrt(5.0) / 4.0).epsilon(1e-12));

  // mu(1) = -1: the pair lands inside [2^mu r d, 9 d] = [0.03, 9]
  const auto report = verify_sandwich(embedding);
  CHECK(report.pass);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].lower == doctest::Approx(0.03).epsilon(1e-9));
  CHECK(report.rows[0].upper == doctest::Approx(9.0));
  CHECK(report.rows[0].pair_case == LpPairCase::Separated);
  CHECK(report.rows[0].case_upper == doctest::Approx(3.0));

  // ||x|| = 2^k: lambda = 1, so f(x) = f_k(x)
  const LpPointSet tri(2.0, {{1.0}, {2.0}, {3.0}});
  const auto plan3 = make_plan(tri, rational_mu(), 100.0, 0.06);
  const auto glued = embed_point(plan3, tri.point(0), 2.0);
  const auto sliced = slice_embed(plan3, 0, tri.point(0));
  CHECK(block_norm(plan3.space, block_subtract(glued, sliced)) <= 1e-15);

  // dyadic boundary: the convex glue computed in annulus k with lambda -> 0
  // matches the one computed in annulus k+1 with lambda = 1
  const auto from_below =
      block_add(block_scale(slice_embed(plan3, 0, tri.point(1)), 0.0),
                block_scale(slice_embed(plan3, 1, tri.point(1)), 1.0));
  const auto from_above = embed_point(plan3, tri.point(1), 2.0);
  CHECK(block_norm(plan3.space, block_subtract(from_below, from_above)) == 0.0);

  // a point whose norm lies outside the planned annuli is rejected
  CHECK_THROWS_AS(embed_point(plan3, {16.0}, 2.0), std::invalid_argument);
}

TEST_CASE("slices are 1-Lipschitz and homogeneous on the ball") {
  const auto pts = testutil::random_points_with_origin(24, 5, 1.0, 31, 2.0);
  const auto plan = make_plan(pts, exp_dominate(ModulusCurve::exp_floor()),
                              100.0, 0.06);
  const int k = plan.k_max;  // the widest planned slice
  const auto members = ball_members(pts, k);
  for (std::size_t a = 0; a < members.size(); ++a) {
    const auto fa = slice_embed(plan, k, pts.point(members[a]));
    // homogeneity: f_k(x/2) = f_k(x)/2 (both stay inside the ball)
    std::vector<double> half = pts.point(members[a]);
    for (double& c : half) c *= 0.5;
    CHECK(block_norm(plan.space,
                     block_subtract(slice_embed(plan, k, half),
                                    block_scale(fa, 0.5))) <= 1e-15);
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto fb = slice_embed(plan, k, pts.point(members[b]));
      CHECK(block_norm(plan.space, block_subtract(fa, fb)) <=
            pts.distance(members[a], members[b]) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("sandwich certification on random and adversarial sets") {
  // empty pair set passes vacuously
  const LpPointSet two(2.0, {{0.0}, {1.0}}, 0);
  const auto plan2 = make_plan(two, rational_mu(), 100.0, 0.06);
  const LpPointSet single(2.0, {{1.0}});
  const auto lonely = embed(plan2, single);
  CHECK(verify_sandwich(lonely).pass);
  CHECK(verify_sandwich(lonely).rows.empty());

  const auto mu = exp_dominate(ModulusCurve::exp_floor());
  for (double p : {1.0, 2.0, HUGE_VAL}) {
    const auto pts = testutil::random_points_with_origin(40, 8, p, 101);
    const auto plan = make_plan(pts, mu, 100.0, 0.06);
    const auto report = verify_sandwich(embed(plan, pts));
    CHECK(report.pass);
    CHECK(report.range_pass);
    CHECK(report.rows.size() == 40u * 39u / 2u);
  }

  // compact-image fixture with tiny coordinates in high scales
  const auto kalton = kalton_compact_sample(2.0, 6, 30, 12);
  const auto plan = make_plan(kalton, mu, 100.0, 0.06);
  const auto report = verify_sandwich(embed(plan, kalton));
  CHECK(report.pass);
}

TEST_CASE("range-embedding consequence for distant pairs") {
  const auto pts = testutil::random_points_with_origin(30, 4, 2.0, 55, 3.0);
  const auto plan = make_plan(pts, exp_dominate(ModulusCurve::exp_floor()),
                              100.0, 0.06);
  const auto embedding = embed(plan, pts);
  const auto report = verify_sandwich(embedding);
  REQUIRE(report.pass);
  CHECK(report.range_pass);
  CHECK(report.r_eff == doctest::Approx(plan.r * std::exp2(plan.mu.eval(
                            plan.sigma.front()))));
  for (const auto& row : report.rows)
    if (row.d >= report.sigma1) {
      CHECK(le_slack(report.r_eff * row.d, row.image_d));
      CHECK(le_slack(row.image_d, 9.0 * row.d));
    }
}

TEST_CASE("sandwich across widely separated dyadic scales") {
  // norms spanning six orders of magnitude: many annuli, deep scale table
  SeededRng rng(71);
  std::vector<std::vector<double>> coords{{0.0, 0.0, 0.0}};
  for (int i = 0; i < 30; ++i) {
    const double magnitude = std::pow(10.0, -3.0 + 6.0 * rng.next_unit());
    std::vector<double> pt(3);
    for (double& c : pt) c = magnitude * rng.next_symmetric();
    if (lp_norm(pt, 2.0) == 0.0) pt[0] = magnitude;
    coords.push_back(std::move(pt));
  }
  const LpPointSet pts(2.0, std::move(coords), 0);
  const auto plan = make_plan(pts, exp_dominate(ModulusCurve::exp_floor()),
                              100.0, 0.06);
  CHECK(plan.k_max - plan.k_min > 10);
  CHECK(verify_sandwich(embed(plan, pts)).pass);
}

TEST_CASE("verification is independent of the worker count") {
  const auto pts = testutil::random_points_with_origin(90, 6, 2.0, 23);
  const auto plan = make_plan(pts, exp_dominate(ModulusCurve::exp_floor()),
                              100.0, 0.06);
  const auto embedding = embed(plan, pts);

  setenv("TIGHT_EMBED_THREADS", "4", 1);
  const auto threaded = lp_report_to_csv(verify_sandwich(embedding));
  setenv("TIGHT_EMBED_THREADS", "1", 1);
  const auto serial = lp_report_to_csv(verify_sandwich(embedding));
  unsetenv("TIGHT_EMBED_THREADS");
  CHECK(threaded == serial);
}

TEST_CASE("embedding JSON round trip re-verifies to the same verdict") {
  const auto pts = testutil::random_points_with_origin(15, 4, 1.0, 8);
  const auto plan = make_plan(pts, exp_dominate(ModulusCurve::exp_floor()),
                              100.0, 0.06);
  const auto embedding = embed(plan, pts);
  const auto report = verify_sandwich(embedding);

  const auto doc = lp_embedding_to_json(embedding);
  const auto reloaded = lp_embedding_from_json(doc);
  const auto report2 = verify_sandwich(reloaded);
  CHECK(report2.pass == report.pass);
  REQUIRE(report2.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report2.rows[i].image_d == report.rows[i].image_d);
    CHECK(report2.rows[i].lower == report.rows[i].lower);
  }
  // serialization is deterministic
  CHECK(lp_embedding_to_json(reloaded).dump() == doc.dump());
}
