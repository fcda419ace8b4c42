// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tightembed/certify.hpp"
#include "tightembed/json_io.hpp"
#include "tightembed/stable_embedding.hpp"

using namespace tightembed;
using testutil::line_space;
using testutil::random_metric;

TEST_CASE("profiles of the identity and of a scaled copy") {
  const auto line = line_space({0, 1, 3});
  const auto profile = measure_moduli(line, line);
  REQUIRE(profile.t == std::vector<double>{1, 2, 3});
  CHECK(profile.rho_at(2.0) == doctest::Approx(2.0));
  CHECK(profile.omega_at(2.0) == doctest::Approx(2.0));

  const auto doubled = measure_moduli(line, testutil::scaled_image(line, 2.0));
  for (std::size_t k = 0; k < profile.t.size(); ++k) {
    CHECK(doubled.rho_hat[k] == doctest::Approx(2.0 * profile.rho_hat[k]));
    CHECK(doubled.omega_hat[k] == doctest::Approx(2.0 * profile.omega_hat[k]));
  }

  // queries between realized distances follow the inf/sup definitions
  CHECK(profile.rho_at(0.5) == doctest::Approx(1.0));
  CHECK(profile.rho_at(2.5) == doctest::Approx(3.0));
  CHECK(std::isinf(profile.rho_at(3.5)));  // inf over the empty set
  CHECK(profile.omega_at(0.5) == 0.0);     // sup over the empty set
  CHECK(profile.omega_at(2.5) == doctest::Approx(2.0));

  CHECK_THROWS_WITH_AS(measure_moduli(line, line_space({0, 1})),
                       doctest::Contains("cardinality"), std::invalid_argument);
}

TEST_CASE("profiles agree with the naive double-loop oracle") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto source = random_metric(20, seed);
    const auto image = random_metric(20, seed + 1000);
    const auto profile = measure_moduli(source, image);
    double prev_rho = 0.0, prev_omega = 0.0;
    for (std::size_t k = 0; k < profile.t.size(); ++k) {
      CHECK(profile.rho_hat[k] ==
            doctest::Approx(testutil::rho_hat_oracle(source, image, profile.t[k]))
                .epsilon(1e-12));
      CHECK(profile.omega_hat[k] ==
            doctest::Approx(
                testutil::omega_hat_oracle(source, image, profile.t[k]))
                .epsilon(1e-12));
      // monotone in the threshold, and consistent where a pair realizes both
      CHECK(profile.rho_hat[k] >= prev_rho);
      CHECK(profile.omega_hat[k] >= prev_omega);
      CHECK(profile.rho_hat[k] <= profile.omega_hat[k]);
      prev_rho = profile.rho_hat[k];
      prev_omega = profile.omega_hat[k];
    }
  }
}

TEST_CASE("range check: isometries and scaled maps") {
  const auto space = random_metric(15, 3);
  CHECK(range_check(space, space, 0.1, HUGE_VAL, 1.0, 1.0).pass);

  const auto rough = testutil::scaled_image(space, 1.05);
  CHECK_FALSE(range_check(space, rough, 0.1, HUGE_VAL, 1.0, 1.0).pass);
  CHECK(range_check(space, rough, 0.1, HUGE_VAL, 1.0, 1.1).pass);

  // only pairs inside the window are consulted
  const auto report = range_check(space, rough, 2.0, 3.0, 1.0, 1.1);
  for (const auto& row : report.rows) {
    CHECK(row.d >= 2.0);
    CHECK(row.d <= 3.0);
  }

  CHECK_THROWS_AS(range_check(space, space, 0.0, 1.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(range_check(space, space, 2.0, 1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("isometric range embedding through the coordinate construction") {
  // moduli equal to t on [s1, s2] = [0.5, 4]: rho is the identity capped at
  // s2; omega follows t down to s1 and bends to a power head below it
  const auto rho = ModulusCurve::piecewise_linear({{0.0, 0.0}, {4.0, 4.0}},
                                                  Tail{Tail::Kind::Affine, 0.0});
  const auto omega = ModulusCurve::conjugate(ModulusCurve::piecewise_linear(
      {{0.0, 0.0}, {2.0, 2.0}}, Tail{Tail::Kind::Power, 0.5}));
  REQUIRE(is_regular_rho(rho));
  REQUIRE(is_regular_omega(omega));

  const auto space = random_metric(20, 9, 0.4, 6.0);
  const auto emb = embed_stable(space, 0, rho, omega);
  REQUIRE(verify_stable(emb).pass);

  const auto report =
      range_check(space, stable_image_metric(emb), 0.5, 4.0, 1.0, 1.0);
  CHECK(report.pass);
  CHECK_FALSE(report.rows.empty());
}

TEST_CASE("snowflake quality checks") {
  const auto space = random_metric(15, 6, 0.3, 9.0);

  for (double s : {0.3, 0.7})
    CHECK(snowflake_check(space, space, s).pass);

  const auto flaked = testutil::snowflake_image(space, 0.5);
  const auto report = snowflake_check(space, flaked, 0.5);
  CHECK(report.pass);
  // equality rows: the profile bound is attained at realized t >= 1
  for (const auto& row : report.profile_rows)
    if (row.t >= 1.0)
      CHECK(row.rho_hat >= row.bound - 1e-9 * std::max(1.0, row.bound));

  // doubling distances breaks the upper bound as soon as d > 1
  const auto doubled = testutil::scaled_image(space, 2.0);
  CHECK_FALSE(snowflake_check(space, doubled, 0.5).pass);

  CHECK_THROWS_AS(snowflake_check(space, space, 1.0), std::invalid_argument);
}

TEST_CASE("compression exponent certificates") {
  const auto space = random_metric(12, 2, 0.5, 40.0);
  const auto identity = compression_exponent_estimate(space, space, 0.0);
  CHECK(identity.alpha == 1.0);
  CHECK(identity.scale == 1.0);

  // the snowflake of a line with distances in [1, 1000] is certified at 1/2
  const auto line = line_space({0, 1, 10, 100, 1000});
  const auto flaked = testutil::snowflake_image(line, 0.5);
  const auto flaked_est = compression_exponent_estimate(line, flaked, 0.0);
  CHECK(flaked_est.alpha == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(flaked_est.scale == 1.0);

  // determinism
  const auto again = compression_exponent_estimate(line, flaked, 0.0);
  CHECK(again.alpha == flaked_est.alpha);
  CHECK(again.scale == flaked_est.scale);

  // post-composition with a scaling changes C but not the clamped estimate
  // on pairs whose log-ratio already exceeded 1
  const auto tripled =
      compression_exponent_estimate(space, testutil::scaled_image(space, 3.0), 0.0);
  CHECK(tripled.alpha == 1.0);
  CHECK(tripled.scale == doctest::Approx(3.0));

  // a bounded image drives the estimate toward zero as the source grows
  const auto small_src = line_space({0, 1, 50});
  const auto big_src = line_space({0, 1, 50, 5000});
  const auto cap = [](const FiniteMetricSpace& s) {
    return testutil::transform_image(
        s, [](double d, double c) { return std::min(d, c); }, 5.0);
  };
  const double a_small =
      compression_exponent_estimate(small_src, cap(small_src), 0.0).alpha;
  const double a_big =
      compression_exponent_estimate(big_src, cap(big_src), 0.0).alpha;
  CHECK(a_big < a_small);
  CHECK(a_big < 0.25);

  // the witness inequality holds on every pair above the threshold
  const auto image = random_metric(12, 77, 0.5, 40.0);
  const auto est = compression_exponent_estimate(space, image, 2.0);
  for (int i = 0; i < space.size(); ++i)
    for (int j = i + 1; j < space.size(); ++j) {
      CHECK(image.distance(i, j) <= est.scale * space.distance(i, j) * (1 + 1e-12));
      if (space.distance(i, j) > std::max(est.tau, 1.0))
        CHECK(image.distance(i, j) >=
              std::pow(space.distance(i, j), est.alpha) / est.scale * (1 - 1e-12));
    }

  // no pair above the threshold
  const auto tiny = line_space({0, 0.5, 0.9});
  CHECK_THROWS_WITH_AS(compression_exponent_estimate(tiny, tiny, 0.0),
                       doctest::Contains("threshold"), std::invalid_argument);
}

TEST_CASE("range-check consistency with the measured profile") {
  // a map passing range_check on [s, inf) with (r, D) has rho_hat(t) >= r t
  // there, and the in-range expansion stays below D r t
  const auto space = random_metric(18, 13, 0.5, 12.0);
  const auto image = testutil::scaled_image(space, 1.07);
  const double s = 2.0, r = 1.0, distortion = 1.1;
  REQUIRE(range_check(space, image, s, HUGE_VAL, r, distortion).pass);

  const auto profile = measure_moduli(space, image);
  for (std::size_t k = 0; k < profile.t.size(); ++k) {
    if (profile.t[k] < s) continue;
    CHECK(profile.rho_hat[k] >= r * profile.t[k] * (1 - 1e-12));
    double in_range_sup = 0.0;
    for (int i = 0; i < space.size(); ++i)
      for (int j = i + 1; j < space.size(); ++j)
        if (space.distance(i, j) >= s && space.distance(i, j) <= profile.t[k])
          in_range_sup = std::max(in_range_sup, image.distance(i, j));
    CHECK(in_range_sup <= distortion * r * profile.t[k] * (1 + 1e-12));
  }
}

TEST_CASE("report serialization smoke checks") {
  const auto line = line_space({0, 1, 3});
  const auto profile = measure_moduli(line, line);
  CHECK(profile_to_csv(profile).rfind("t,rho_hat,omega_hat\n", 0) == 0);
  CHECK(profile_to_json(profile).at("t").size() == 3);

  const auto range = range_check(line, line, 0.5, HUGE_VAL, 1.0, 1.0);
  const auto doc = range_report_to_json(range);
  CHECK(doc.at("pass") == true);
  CHECK(doc.at("s2") == "inf");
}
