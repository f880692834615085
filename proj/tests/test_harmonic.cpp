#include <catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "hfix/expr.hpp"
#include "hfix/harmonic.hpp"
#include "support.hpp"

using namespace hfix;

namespace {

HarmonicMap harmonic(const std::string& h, const std::string& g) { return {parse_function(h), parse_function(g)}; }

const HFixedPoint& pair_at(const std::vector<HFixedPoint>& pts, Complex mu, Complex omega) {
  for (const auto& p : pts)
    if (p.kind == HFixedKind::finite && std::abs(p.mu.value() - mu) < 1e-9 && std::abs(p.omega.value() - omega) < 1e-9)
      return p;
  FAIL("no h-fixed point for mu=" << mu << " omega=" << omega);
  throw;
}

std::size_t count_finite(const std::vector<HFixedPoint>& pts) {
  return static_cast<std::size_t>(
      std::count_if(pts.begin(), pts.end(), [](const HFixedPoint& p) { return p.kind == HFixedKind::finite; }));
}

}  // namespace

TEST_CASE("harmonic map kinds") {
  CHECK(harmonic("z^3", "z^2").kind() == HarmonicKind::polynomial_harmonic);
  CHECK(harmonic("1/z^2", "z^2").kind() == HarmonicKind::rational_harmonic);
  CHECK(harmonic("z^3", "2*z").kind() == HarmonicKind::low_degree);
}

TEST_CASE("cubic example z^3 + conj(z^3)") {
  const HarmonicMap f = harmonic("z^3", "z^3");
  const auto pts = induced_h_fixed_points(f);
  CHECK(count_finite(pts) == 9);
  CHECK(pts.size() == 9 + 3 + 3 + 1);

  const HFixedPoint& two = pair_at(pts, 1.0, 1.0);
  CHECK(std::abs(two.zeta.value() - 2.0) < 1e-10);
  CHECK(std::abs(two.lambda - 3.0) < 1e-10);
  CHECK(std::abs(two.theta - 3.0) < 1e-10);

  const HFixedPoint& mixed = pair_at(pts, 1.0, 0.0);
  CHECK(std::abs(mixed.zeta.value() - 1.0) < 1e-12);
  CHECK(std::abs(mixed.lambda - 3.0) < 1e-10);
  CHECK(std::abs(mixed.theta) < 1e-12);

  const HFixedPoint& origin = pair_at(pts, 0.0, 0.0);
  CHECK(origin.zeta.value() == Complex(0.0));
  CHECK(origin.lambda == Complex(0.0));
  CHECK(origin.theta == Complex(0.0));

  const ConjectureReport c = conjecture_witness(f);
  CHECK(c.theorem_applies);
  CHECK(c.pass);
  std::vector<double> zetas;
  for (const auto& p : c.witnesses_ge1)
    if (p.kind == HFixedKind::finite) zetas.push_back(p.zeta.value().real());
  for (double z : {2.0, 0.0, -2.0})
    CHECK(std::any_of(zetas.begin(), zetas.end(), [z](double x) { return std::abs(x - z) < 1e-10; }));

  const RemarkReport r = remark_witnesses(f);
  CHECK(std::any_of(r.le1.begin(), r.le1.end(), [](const HFixedPoint& p) {
    return p.kind == HFixedKind::finite && std::abs(p.zeta.value()) < 1e-12 && std::abs(p.mu.value()) < 1e-12;
  }));
}

TEST_CASE("infinite h-fixed point kinds") {
  const auto pts = induced_h_fixed_points(harmonic("z^2", "z^2"));
  REQUIRE(pts.size() == 4 + 2 + 2 + 1);
  for (std::size_t k = 4; k < 6; ++k) {
    CHECK(pts[k].kind == HFixedKind::infinite_mu_fixed);
    CHECK(pts[k].mu.is_finite());
    CHECK(pts[k].omega.is_infinite());
    CHECK(pts[k].zeta.is_infinite());
  }
  for (std::size_t k = 6; k < 8; ++k) {
    CHECK(pts[k].kind == HFixedKind::infinite_omega_fixed);
    CHECK(pts[k].mu.is_infinite());
  }
  CHECK(pts[8].kind == HFixedKind::infinite_both);

  // 1/z^2 does not fix infinity: no infinite kinds at all.
  const auto rat = induced_h_fixed_points(harmonic("1/z^2", "1/z^2"));
  CHECK(rat.size() == 9);
  CHECK(count_finite(rat) == 9);
}

TEST_CASE("quadratic example z^2 + conj(z^2)") {
  const auto pts = induced_h_fixed_points(harmonic("z^2", "z^2"));
  const HFixedPoint& p = pair_at(pts, 1.0, 1.0);
  CHECK(std::abs(p.zeta.value() - 2.0) < 1e-12);
  CHECK(std::abs(p.lambda - 2.0) < 1e-12);
  CHECK(std::abs(p.theta - 2.0) < 1e-12);

  const RemarkReport r = remark_witnesses(harmonic("z^2", "z^2"));
  CHECK(std::any_of(r.le1.begin(), r.le1.end(), [](const HFixedPoint& q) {
    return q.kind == HFixedKind::finite && std::abs(q.zeta.value()) < 1e-12;
  }));
  CHECK(!r.im_nonneg_h.empty());
  CHECK(!r.im_nonneg_g.empty());
}

TEST_CASE("rational example 2z/(z^2+z+1)") {
  const HarmonicMap f = harmonic("(2*z)/(z^2+z+1)", "(2*z)/(z^2+z+1)");
  const auto pts = induced_h_fixed_points(f);
  const HFixedPoint& p = pair_at(pts, 0.0, 0.0);
  CHECK(std::abs(p.zeta.value()) < 1e-12);
  CHECK(std::abs(p.lambda - 2.0) < 1e-12);
  CHECK(std::abs(p.theta - 2.0) < 1e-12);
}

TEST_CASE("1/z^2 + conj(1/z^2) does not meet the hypothesis") {
  const ConjectureReport c = conjecture_witness(harmonic("1/z^2", "1/z^2"));
  CHECK(!c.theorem_applies);
  CHECK(c.hypothesis == "not met");
  CHECK(c.witnesses_ge1.empty());
  CHECK(c.pass);
}

TEST_CASE("a super-attracting point in each component meets the hypothesis") {
  // Both components fix 0 with multiplier 0.
  const HarmonicMap f = harmonic("z^2/(2*z - 1)", "(z^3 + z^2)/(3*z - 1)");
  const ConjectureReport c = conjecture_witness(f);
  CHECK(c.theorem_applies);
  CHECK(c.pass);
}

TEST_CASE("degree below two is rejected by the witness checks") {
  CHECK_THROWS_AS(conjecture_witness(harmonic("z^3", "2*z")), Error);
  CHECK_THROWS_AS(remark_witnesses(harmonic("z^3", "2*z")), Error);
  CHECK_THROWS_AS(induced_h_fixed_points(harmonic("z^3", "z")), Error);
}

TEST_CASE("induced points: count, defining equation and swap symmetry") {
  test::Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const HarmonicMap f{test::random_rational_map(rng), test::random_rational_map(rng)};
    const FixedPointReport hr = fixed_points(f.h), gr = fixed_points(f.g);
    const auto pts = induced_h_fixed_points(hr, gr);
    auto finite_count = [](const FixedPointReport& r) {
      return static_cast<std::size_t>(std::count_if(r.points.begin(), r.points.end(),
                                                    [](const FixedPoint& p) { return p.location.is_finite(); }));
    };
    REQUIRE(count_finite(pts) == finite_count(hr) * finite_count(gr));
    REQUIRE(pts.size() == hr.points.size() * gr.points.size());

    for (const auto& p : pts) {
      if (p.kind != HFixedKind::finite) continue;
      const Complex mu = p.mu.value(), om = p.omega.value();
      const Complex rhs = evaluate(f.h, mu).value() + std::conj(evaluate(f.g, om).value());
      REQUIRE(std::abs(mu + std::conj(om) - rhs) <= 1e-8 * (1.0 + std::abs(mu) + std::abs(om)));
    }

    const auto swapped = induced_h_fixed_points(gr, hr);
    std::vector<std::array<double, 4>> a, b;
    for (const auto& p : pts) a.push_back({p.lambda.real(), p.lambda.imag(), p.theta.real(), p.theta.imag()});
    for (const auto& p : swapped) b.push_back({p.theta.real(), p.theta.imag(), p.lambda.real(), p.lambda.imag()});
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a == b);
  }
}

TEST_CASE("every polynomial harmonic map has both witness kinds") {
  test::Rng rng(9001);
  for (int trial = 0; trial < 500; ++trial) {
    const HarmonicMap f{RationalMap::polynomial(rng.poly(static_cast<std::size_t>(rng.integer(2, 5)))),
                        RationalMap::polynomial(rng.poly(static_cast<std::size_t>(rng.integer(2, 5))))};
    const ConjectureReport c = conjecture_witness(f);
    REQUIRE(c.theorem_applies);
    REQUIRE(c.pass);
    auto finite = [](const std::vector<HFixedPoint>& v) {
      return std::any_of(v.begin(), v.end(), [](const HFixedPoint& p) { return p.kind == HFixedKind::finite; });
    };
    REQUIRE(finite(c.witnesses_ge1));
    REQUIRE(finite(remark_witnesses(f).le1));
  }
}

TEST_CASE("quadratic family closed forms") {
  const QuadraticReport q = quadratic_family_analyze(0.25);
  CHECK(q.single_point);
  REQUIRE(q.fixed_points.size() == 1);
  CHECK(q.fixed_points[0] == Complex(0.5));
  CHECK(q.multipliers[0] == Complex(1.0));
  CHECK(q.multiplicities[0] == 2);
  REQUIRE(q.h_fixed_points.size() == 1);
  CHECK(q.h_fixed_points[0].zeta.value() == Complex(1.0));

  const QuadraticReport one = quadratic_family_analyze(1.0);
  CHECK(one.re_exactly_one);
  for (const auto& l : one.multipliers) {
    CHECK(std::abs(l.real() - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(l.imag()) - std::sqrt(3.0)) < 1e-15);
  }

  const QuadraticReport zero = quadratic_family_analyze(0.0);
  CHECK(!zero.re_exactly_one);
  CHECK(zero.multipliers[0] == Complex(0.0));
  CHECK(zero.multipliers[1] == Complex(2.0));
  CHECK(zero.h_fixed_points.size() == 4);

  for (double c : {-1.0, 0.0, 0.24, 0.25, 0.26, 1.0, 10.0}) {
    const QuadraticReport r = quadratic_family_analyze(c);
    CHECK(r.re_exactly_one == (c >= 0.25));
    CHECK(r.equivalence_holds);
  }
  CHECK(!quadratic_family_analyze({1.0, 1.0}).c_real);
}

TEST_CASE("quadratic closed forms agree with the generic pipeline") {
  test::Rng rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex c = rng.unit_disk() * 3.0;
    const QuadraticReport q = quadratic_family_analyze(c);
    const FixedPointReport g = fixed_points(RationalMap::polynomial(Polynomial({c, 0.0, 1.0})));
    std::size_t finite = 0;
    for (const auto& p : g.points) {
      if (p.location.is_infinite()) continue;
      ++finite;
      double best = INFINITY;
      for (std::size_t k = 0; k < q.fixed_points.size(); ++k)
        best = std::min(best, std::max(std::abs(p.location.value() - q.fixed_points[k]),
                                       std::abs(p.multiplier - q.multipliers[k])));
      REQUIRE(best <= 1e-10);
    }
    REQUIRE(finite == q.fixed_points.size());
  }
}
