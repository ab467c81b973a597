// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "helpers.hpp"
#include "wqaoa/analysis.hpp"
#include "wqaoa/error.hpp"

using namespace wqaoa;
using namespace testing;

namespace {

InstanceRecord rec(std::string id, double rt, std::optional<double> ro, std::optional<double> rp = std::nullopt) {
  InstanceRecord r;
  r.graph_id = std::move(id);
  r.r_transferred = rt;
  r.r_optimized = ro;
  r.r_polished = rp;
  return r;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("orbit structure") {
  const QaoaParams p({0.1}, {0.2});
  SymmetryOrbitSpec spec;
  spec.shift_window = 1;
  const auto orbit = symmetry_orbit(p, spec);
  CHECK(orbit.size() == 6u);
  CHECK(orbit.front() == p);
  spec.include_time_reversal = false;
  CHECK(symmetry_orbit(p, spec).size() == 3u);
  CHECK(symmetry_orbit(QaoaParams({0, 0, 0}, {0, 0, 0})).size() == 2u * 9 * 9 * 9);
  SymmetryOrbitSpec huge;
  huge.shift_window = 100;
  CHECK_THROWS_AS(symmetry_orbit(QaoaParams({0, 0, 0}, {0, 0, 0}), huge), ResourceError);
  SymmetryOrbitSpec bad;
  bad.shift_quantum = 0.0;
  CHECK_THROWS_AS(symmetry_orbit(p, bad), DomainError);
  bad = {};
  bad.shift_window = 0;
  CHECK_THROWS_AS(symmetry_orbit(p, bad), DomainError);
}

TEST_CASE("objective is invariant over the orbit") {
  Rng rng(12);
  for (int t = 0; t < 6; ++t) {
    const auto g = random_weighted(6, 0.6, 900 + t);
    const auto params = random_params(1 + t % 3, rng);
    QaoaEvaluator ev(g);
    const double base = ev.value(params);
    SymmetryOrbitSpec spec;
    spec.shift_window = 2;
    double worst = 0.0;
    for (const auto& m : symmetry_orbit(params, spec)) worst = std::max(worst, std::abs(ev.value(m) - base));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("canonical distance") {
  const QaoaParams t({-0.3, -0.2}, {-0.6, -1.1});
  auto d = canonical_distance(t, t);
  CHECK(d.d_beta == 0.0);
  CHECK(d.d_gamma == 0.0);
  CHECK(d.d_total == 0.0);
  d = canonical_distance(QaoaParams({0.3, 0.2}, {0.6, 1.1}), t);
  CHECK(d.d_total == 0.0);
  d = canonical_distance(QaoaParams({-0.3 + kPi / 2, -0.2}, {-0.5, -1.1}), t);
  CHECK(d.d_beta <= 1e-15);
  CHECK(d.d_gamma == doctest::Approx(0.1));
  CHECK(d.d_total == doctest::Approx(0.1));
  SymmetryOrbitSpec no_tr;
  no_tr.include_time_reversal = false;
  CHECK(canonical_distance(QaoaParams({0.3, 0.2}, {0.6, 1.1}), t, no_tr).d_gamma > 1.0);
  CHECK_THROWS_AS(canonical_distance(QaoaParams({0.1}, {0.1}), t), DimensionError);
}

TEST_CASE("canonicalize breaks ties by gamma, then lexicographically") {
  // beta = pi/4 is equidistant from 0 under the shift -pi/2 (gives -pi/4),
  // while time reversal flips gamma.
  const QaoaParams ref({0.0}, {0.5});
  const auto c = canonicalize(QaoaParams({kPi / 4}, {0.5}), ref);
  CHECK(c.gamma()[0] == 0.5);
  CHECK(c.beta()[0] == doctest::Approx(-kPi / 4));
  const auto c2 = canonicalize(QaoaParams({kPi / 4}, {0.0}), QaoaParams({0.0}, {0.0}));
  CHECK(c2.beta()[0] == doctest::Approx(-kPi / 4));
}

TEST_CASE("canonicalize reaches members far outside the enumeration window") {
  const QaoaParams ref({-0.3, -0.2}, {-0.6, -1.1});
  const QaoaParams far({0.3 - 1000 * kPi / 2, 0.2 + 37 * kPi / 2}, {0.6, 1.1});
  const auto c = canonicalize(far, ref);
  CHECK(c.beta()[0] == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(c.beta()[1] == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(c.gamma() == ref.gamma());
  // Brute force over the enumerated orbit agrees when the member is inside
  // the window.
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto opt = random_params(2, rng), target = random_params(2, rng);
    SymmetryOrbitSpec spec;
    spec.shift_window = 3;
    double best = 1e300;
    for (const auto& m : symmetry_orbit(opt, spec)) {
      double db = 0.0;
      for (int l = 0; l < 2; ++l) db += std::pow(m.beta()[l] - target.beta()[l], 2);
      best = std::min(best, db);
    }
    CHECK(std::pow(canonical_distance(opt, target).d_beta, 2) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("gamma period for integer weights") {
  SymmetryOrbitSpec spec;
  spec.gamma_shift_quantum = 2 * kPi;
  spec.shift_window = 1;
  const QaoaParams p({0.1}, {0.4});
  CHECK(symmetry_orbit(p, spec).size() == 18u);
  const auto g = cycle(5, 2.0);
  QaoaEvaluator ev(g);
  for (const auto& m : symmetry_orbit(p, spec)) CHECK(std::abs(ev.value(m) - ev.value(p)) <= 1e-12);
  const auto c = canonicalize(QaoaParams({0.1}, {0.4 + 40 * kPi}), p, spec);
  CHECK(c.gamma()[0] == doctest::Approx(0.4).epsilon(1e-12));
  spec.gamma_shift_quantum = -1.0;
  CHECK_THROWS_AS(canonicalize(p, p, spec), DomainError);
}

TEST_CASE("gamma_period") {
  CHECK(gamma_period(build_diagonal(cycle(5))) == doctest::Approx(kPi));
  CHECK(gamma_period(build_diagonal(cycle(4))) == doctest::Approx(kPi));
  CHECK(gamma_period(build_diagonal(complete(4))) == doctest::Approx(2 * kPi));
  CHECK(gamma_period(build_diagonal(cycle(4, 3.0))) == doctest::Approx(kPi / 3));
  CHECK(gamma_period(build_diagonal(cycle(4, 0.3))) == 0.0);
  // Even-degree graphs only have even cuts.
  const auto g = cycle(6);
  QaoaEvaluator ev(g);
  const QaoaParams p({0.2, -0.1}, {0.3, 0.7});
  CHECK(std::abs(ev.value(QaoaParams({0.2, -0.1}, {0.3 + kPi, 0.7 - kPi})) - ev.value(p)) <= 1e-12);
}

TEST_CASE("quartiles") {
  const auto q = quartiles({4, 1, 3, 2, 5});
  CHECK(q.q1 == 2.0);
  CHECK(q.median == 3.0);
  CHECK(q.q3 == 4.0);
  const auto e = quartiles({1, 2, 3, 4});
  CHECK(e.median == 2.5);
  CHECK(e.q1 == 1.75);
  CHECK_THROWS_AS(quartiles({}), DomainError);
}

TEST_CASE("aggregate") {
  const std::vector<InstanceRecord> one{rec("a", 0.9, 0.9, 0.9)};
  const auto s1 = aggregate(one);
  CHECK(*s1.median_gap_pp == 0.0);
  CHECK(*s1.recovery_rate == 1.0);

  const std::vector<InstanceRecord> two{rec("a", 0.90, 0.92), rec("b", 0.88, 0.91)};
  const auto s2 = aggregate(two);
  CHECK(*s2.median_gap_pp == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_FALSE(s2.recovery_rate.has_value());
  CHECK(s2.r_transferred.median == doctest::Approx(0.89));
  CHECK(s2.count == 2u);

  CHECK(recovered(1e-7, 0.0));
  CHECK_FALSE(recovered(1.0000001e-7, 0.0));
  CHECK(gap_pp(0.92, 0.90) == doctest::Approx(2.0));

  std::vector<InstanceRecord> many;
  for (int i = 0; i < 9; ++i) many.push_back(rec(std::to_string(i), 0.8 + 0.01 * i, 0.9, 0.9 - (i % 3 == 0 ? 1e-3 : 0)));
  const auto s = aggregate(many);
  CHECK(*s.recovery_rate == doctest::Approx(6.0 / 9));
  auto shuffled = many;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[1], shuffled[5]);
  const auto t = aggregate(shuffled);
  CHECK(*t.median_gap_pp == *s.median_gap_pp);
  CHECK(t.iqr->first == s.iqr->first);
  CHECK(t.r_transferred.median == s.r_transferred.median);

  many[0].polished_param_distance = 5e-5;
  many[1].polished_param_distance = 2e-4;
  CHECK(*aggregate(many).parameter_match_rate == 0.5);
  CHECK_THROWS_AS(aggregate({}), DomainError);
}

TEST_CASE("weight std versus gap") {
  std::vector<InstanceRecord> recs;
  for (int i = 0; i < 10; ++i) {
    auto r = rec("g" + std::to_string(i), 0.9 - 0.01 * i, 0.95);
    r.weight_std = 0.1 * i;
    recs.push_back(r);
  }
  const auto table = weight_std_vs_gap(recs);
  REQUIRE(table.rows.size() == 10u);
  CHECK(table.rows[3].gap_pp == doctest::Approx((0.87 - 0.95) * 100));
  CHECK(*table.rank_correlation == doctest::Approx(-1.0));
  CHECK_FALSE(weight_std_vs_gap(std::vector<InstanceRecord>{recs[0]}).rank_correlation.has_value());
  // Records without an optimized ratio are skipped.
  recs.push_back(rec("none", 0.5, std::nullopt));
  CHECK(weight_std_vs_gap(recs).rows.size() == 10u);
}

TEST_CASE("spearman") {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{5, 6, 7, 8, 7};
  // ranks of y: 1 2 3.5 5 3.5
  const double r = *spearman(x, y);
  // Pearson on ranks computed by hand: 0.8207826816681233
  CHECK(r == doctest::Approx(0.8207826816681233).epsilon(1e-12));
  CHECK_FALSE(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}).has_value());
  CHECK_FALSE(spearman(std::vector<double>{1}, std::vector<double>{1}).has_value());
}

}  // TEST_SUITE
