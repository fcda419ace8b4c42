// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tightembed/json_io.hpp"
#include "tightembed/stable_embedding.hpp"

using namespace tightembed;
using testutil::line_space;
using testutil::random_metric;

TEST_CASE("truncated-distance coordinates on the line fixture") {
  const auto line = line_space({0, 1, 3});  // indices 0, 1, 2
  CHECK(g_pq(line, 0, 1, 2, 0) == doctest::Approx(0.0));
  CHECK(g_pq(line, 0, 1, 2, 1) == doctest::Approx(0.0));
  CHECK(g_pq(line, 0, 1, 2, 2) == doctest::Approx(2.0));

  CHECK_THROWS_AS(g_pq(line, 0, 1, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(g_pq(line, 9, 1, 2, 0), std::invalid_argument);

  // the coordinate vanishes at the basepoint, whatever the instance
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto space = random_metric(10, seed);
    for (int p = 0; p < 10; ++p)
      for (int q = 0; q < 10; ++q)
        if (p != q) CHECK(g_pq(space, 3, p, q, 3) == 0.0);
  }
}

TEST_CASE("coordinate differences obey the min bound") {
  for (std::uint64_t seed = 10; seed < 13; ++seed) {
    const auto space = random_metric(12, seed);
    for (int p = 0; p < 12; ++p)
      for (int q = 0; q < 12; ++q) {
        if (p == q) continue;
        for (int x = 0; x < 12; ++x)
          for (int y = x + 1; y < 12; ++y) {
            const double diff =
                std::abs(g_pq(space, 0, p, q, x) - g_pq(space, 0, p, q, y));
            CHECK(le_slack(diff, std::min(space.distance(p, q),
                                          space.distance(x, y))));
          }
      }
  }
}

TEST_CASE("weighted coordinates") {
  const auto line = line_space({0, 1, 3});
  const auto rho = ModulusCurve::power_rho(0.5);
  // weight rho(2)/2 = sqrt(2)/2 applied to g
  CHECK(h_pq(line, rho, 0, 1, 2, 2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // distances at most 1 leave the coordinate unweighted
  const auto small = line_space({0, 0.3, 0.8});
  for (int x = 0; x < 3; ++x)
    CHECK(h_pq(small, rho, 0, 1, 2, x) ==
          doctest::Approx(g_pq(small, 0, 1, 2, x)));

  // |h_{x,y}(x) - h_{x,y}(y)| = rho(d(x,y)) exactly
  for (std::uint64_t seed = 2; seed < 5; ++seed) {
    const auto space = random_metric(9, seed);
    for (int x = 0; x < 9; ++x)
      for (int y = 0; y < 9; ++y) {
        if (x == y) continue;
        const double diff =
            std::abs(h_pq(space, rho, 0, x, y, x) - h_pq(space, rho, 0, x, y, y));
        CHECK(diff ==
              doctest::Approx(rho.eval(space.distance(x, y))).epsilon(1e-12));
      }
  }

  CHECK_THROWS_WITH_AS(h_pq(line, ModulusCurve::power_omega(0.5), 0, 1, 2, 0),
                       doctest::Contains("not in P"), std::invalid_argument);
}

TEST_CASE("omega-weighted Lipschitz seminorm") {
  const auto line = line_space({0, 1, 3});
  const auto omega = ModulusCurve::power_omega(0.5);

  CHECK(n_omega({5.0, 5.0, 5.0}, line, omega) == 0.0);

  // table of h_{1,3} over the points: (0, 0, sqrt(2)); the sup ratio sits at
  // the pair (1, 3) with value sqrt(2)/omega(2) = sqrt(2)/2
  const auto rho = ModulusCurve::power_rho(0.5);
  std::vector<double> table(3);
  for (int x = 0; x < 3; ++x) table[static_cast<std::size_t>(x)] =
      h_pq(line, rho, 0, 1, 2, x);
  CHECK(n_omega(table, line, omega) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));

  // every weighted coordinate is 1-Lipschitz against omega
  for (std::uint64_t seed = 30; seed < 33; ++seed) {
    const auto space = random_metric(8, seed);
    for (int p = 0; p < 8; ++p)
      for (int q = 0; q < 8; ++q) {
        if (p == q) continue;
        std::vector<double> values(8);
        for (int x = 0; x < 8; ++x)
          values[static_cast<std::size_t>(x)] = h_pq(space, rho, 0, p, q, x);
        CHECK(n_omega(values, space, omega) <= 1.0 + 1e-9);
      }
  }

  CHECK_THROWS_AS(n_omega({1.0}, line, omega), std::invalid_argument);
}

TEST_CASE("stable embedding: construction and verification") {
  const auto rho = ModulusCurve::power_rho(0.5);
  const auto omega = ModulusCurve::power_omega(0.5);

  // two points: the embedded distance is exactly rho(d)
  const auto two = line_space({0, 3.7});
  const auto emb2 = embed_stable(two, 0, rho, omega);
  CHECK(emb2.image_distance(0, 1) ==
        doctest::Approx(rho.eval(3.7)).epsilon(1e-12));

  const auto line = line_space({0, 1, 3});
  const auto emb = embed_stable(line, 0, rho, omega);
  REQUIRE(emb.coords.size() == 6);
  // the basepoint column vanishes
  for (const auto& row : emb.table)
    CHECK(row[0] == 0.0);
  // coordinate lookup matches construction order
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      if (p != q)
        CHECK(emb.coords[static_cast<std::size_t>(emb.coord_index(p, q))] ==
              std::pair<int, int>{p, q});

  const auto report = verify_stable(emb);
  CHECK(report.pass);
  CHECK(report.n_omega_max <= 1.0 + 1e-9);
  for (const auto& row : report.rows) {
    CHECK(le_slack(row.lower, row.image_d));
    CHECK(le_slack(row.image_d, row.upper));
    CHECK(approx_eq(row.attained, row.lower));
  }

  CHECK_THROWS_AS(embed_stable(line, 5, rho, omega), std::invalid_argument);
}

TEST_CASE("stable embedding rejects unregularized moduli") {
  // in P but rho(t)/t increases between t = 3 and t = 4
  const auto bumpy = ModulusCurve::piecewise_linear(
      {{0.0, 0.0}, {1.0, 1.0}, {3.0, 1.2}, {4.0, 3.6}},
      Tail{Tail::Kind::Affine, 0.0});
  REQUIRE(check_class(bumpy, CurveClass::P).pass);
  REQUIRE_FALSE(is_regular_rho(bumpy));

  const auto line = line_space({0, 1, 3});
  const auto omega = ModulusCurve::power_omega(0.5);
  CHECK_THROWS_WITH_AS(embed_stable(line, 0, bumpy, omega),
                       doctest::Contains("regularize"), std::invalid_argument);
  CHECK_NOTHROW(embed_stable(line, 0, regularize_rho(bumpy), omega));
}

TEST_CASE("stable embedding on random spaces with regularized moduli") {
  const auto rho = regularize_rho(ModulusCurve::power_rho(0.25));
  const auto omega = regularize_omega(ModulusCurve::power_omega(0.25));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto space = random_metric(18, seed);
    const auto emb = embed_stable(space, 0, rho, omega);
    const auto report = verify_stable(emb);
    CHECK(report.pass);
    CHECK(report.n_omega_max <= 1.0 + 1e-9);
  }
}

TEST_CASE("coordinate ratio bounds, case by case") {
  const auto rho = ModulusCurve::power_rho(0.5);
  const auto omega = ModulusCurve::power_omega(0.5);
  for (std::uint64_t seed = 50; seed < 53; ++seed) {
    const auto space = random_metric(10, seed, 0.2, 8.0);
    for (int p = 0; p < 10; ++p)
      for (int q = 0; q < 10; ++q) {
        if (p == q) continue;
        for (int x = 0; x < 10; ++x)
          for (int y = x + 1; y < 10; ++y) {
            const auto bounds = ratio_R(space, rho, omega, 0, p, q, x, y);
            CHECK(bounds.pass);
            CHECK(bounds.ratio <= 1.0 + 1e-9);
            CHECK(bounds.bound_uniform ==
                  doctest::Approx(rho.eval(space.distance(p, q)) /
                                  space.distance(p, q)));
            const double dpq = space.distance(p, q);
            const double dxy = space.distance(x, y);
            CHECK(bounds.bound_small_pq.has_value() == (dpq <= 1.0));
            CHECK(bounds.bound_large_xy.has_value() == (dxy > 1.0));
            CHECK(bounds.bound_small_xy.has_value() == (dxy <= 1.0));
          }
      }
  }
  const auto line = line_space({0, 1, 3});
  CHECK_THROWS_AS(ratio_R(line, rho, omega, 0, 1, 1, 0, 2),
                  std::invalid_argument);
}

TEST_CASE("stable embedding JSON round trip") {
  const auto rho = regularize_rho(ModulusCurve::power_rho(0.5), 801);
  const auto omega = regularize_omega(ModulusCurve::power_omega(0.5), 801);
  const auto space = random_metric(8, 4);
  const auto emb = embed_stable(space, 2, rho, omega);
  const auto report = verify_stable(emb);

  const auto doc = stable_embedding_to_json(emb);
  const auto reloaded = stable_embedding_from_json(doc);
  CHECK(reloaded.basepoint == 2);
  const auto report2 = verify_stable(reloaded);
  CHECK(report2.pass == report.pass);
  REQUIRE(report2.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report2.rows[i].image_d == report.rows[i].image_d);
    CHECK(report2.rows[i].lower == report.rows[i].lower);
    CHECK(report2.rows[i].upper == report.rows[i].upper);
  }
  CHECK(stable_embedding_to_json(reloaded).dump() == doc.dump());
}
