#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hfix/roots.hpp"
#include "support.hpp"

using namespace hfix;

namespace {

Polynomial from_roots(const std::vector<std::pair<Complex, std::size_t>>& roots) {
  return Polynomial(test::expand_roots(roots));
}

// Greedy nearest matching of recovered roots to known ones; max distance.
double match_distance(const RootSet& set, std::vector<Complex> known) {
  double worst = 0.0;
  for (const auto& r : set.roots)
    for (std::size_t j = 0; j < r.multiplicity; ++j) {
      auto best = known.begin();
      for (auto it = known.begin(); it != known.end(); ++it)
        if (std::abs(*it - r.location) < std::abs(*best - r.location)) best = it;
      worst = std::max(worst, std::abs(*best - r.location));
      known.erase(best);
    }
  return known.empty() ? worst : INFINITY;
}

}  // namespace

TEST_CASE("roots of z^3 - z") {
  const RootSet s = find_roots(Polynomial({0.0, -1.0, 0.0, 1.0}));
  REQUIRE(s.roots.size() == 3);
  CHECK(std::abs(s.roots[0].location - Complex(-1.0)) < 1e-14);
  CHECK(std::abs(s.roots[1].location) < 1e-14);
  CHECK(std::abs(s.roots[2].location - Complex(1.0)) < 1e-14);
  for (const auto& r : s.roots) CHECK(r.multiplicity == 1);
  CHECK(s.converged);
}

TEST_CASE("double root of z^2 - z + 1/4") {
  const RootSet s = find_roots(Polynomial({0.25, -1.0, 1.0}));
  REQUIRE(s.roots.size() == 1);
  CHECK(s.roots[0].multiplicity == 2);
  CHECK(std::abs(s.roots[0].location - Complex(0.5)) < 1e-8);
}

TEST_CASE("cube roots of unity") {
  const Polynomial p({-1.0, 0.0, 0.0, 1.0});
  const RootSet s = find_roots(p);
  REQUIRE(s.roots.size() == 3);
  for (const auto& r : s.roots) {
    CHECK(std::abs(p(r.location)) < 1e-12);
    CHECK(std::abs(std::abs(r.location) - 1.0) < 1e-14);
  }
}

TEST_CASE("known random roots are recovered") {
  test::Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> known(6);
    std::vector<std::pair<Complex, std::size_t>> wanted;
    for (auto& r : known) {
      r = rng.unit_disk() * 2.0;
      wanted.emplace_back(r, 1);
    }
    const RootSet s = find_roots(from_roots(wanted));
    REQUIRE(s.total_multiplicity() == 6);
    // Nearly coincident draws make multiplicities ambiguous; skip those.
    double sep = INFINITY;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) sep = std::min(sep, std::abs(known[i] - known[j]));
    if (sep < 1e-3) continue;
    REQUIRE(match_distance(s, known) <= 1e-8);
  }
}

TEST_CASE("exact zero roots and multiple roots") {
  const RootSet z5 = find_roots(Polynomial::monomial(1.0, 5));
  REQUIRE(z5.roots.size() == 1);
  CHECK(z5.roots[0].multiplicity == 5);
  CHECK(z5.roots[0].location == Complex(0.0));

  const RootSet triple = find_roots(from_roots({{Complex(1.0, 1.0), 3}, {Complex(-2.0), 1}}), 1e-12, 1e-4);
  REQUIRE(triple.roots.size() == 2);
  CHECK(triple.total_multiplicity() == 4);
  CHECK(std::abs(triple.roots[1].location - Complex(1.0, 1.0)) < 1e-6);
  CHECK(triple.roots[1].multiplicity == 3);

  CHECK_THROWS_AS(find_roots(Polynomial::constant(2.0)), Error);
}

TEST_CASE("cluster_roots") {
  const std::vector<Complex> pair{0.5 + 1e-9, 0.5 - 1e-9};
  const RootSet merged = cluster_roots(pair, 1e-6);
  REQUIRE(merged.roots.size() == 1);
  CHECK(merged.roots[0].multiplicity == 2);
  CHECK(std::abs(merged.roots[0].location - Complex(0.5)) < 1e-15);

  const std::vector<Complex> three{0.0, 1.0, -1.0};
  const RootSet apart = cluster_roots(three, 1e-6);
  CHECK(apart.roots.size() == 3);
  for (const auto& r : apart.roots) CHECK(r.multiplicity == 1);

  // Single linkage chains a-b-c even though |a - c| > eps.
  const std::vector<Complex> chain{0.0, 0.8e-6, 1.6e-6};
  CHECK(cluster_roots(chain, 1e-6).roots.size() == 1);
}

TEST_CASE("near-double root sits on the clustering boundary") {
  // Roots are 0.5 +- 1e-5 i: separation 2e-5 against a default radius of
  // about 1.5e-6, so they stay apart unless the radius is widened.
  const Polynomial p({0.2500000001, -1.0, 1.0});
  const RootSet by_default = find_roots(p);
  CHECK(by_default.roots.size() == 2);
  const RootSet widened = find_roots(p, 1e-12, 1e-4);
  REQUIRE(widened.roots.size() == 1);
  CHECK(widened.roots[0].multiplicity == 2);
  CHECK(std::abs(widened.roots[0].location - Complex(0.5)) < 1e-9);
}

TEST_CASE("reconstruction, residuals and multiplicity sum on random polynomials") {
  test::Rng rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = static_cast<std::size_t>(rng.integer(1, 8));
    const Polynomial p = rng.poly(d);
    const RootSet s = find_roots(p);
    REQUIRE(s.total_multiplicity() == d);

    std::vector<std::pair<Complex, std::size_t>> wanted;
    for (const auto& r : s.roots) wanted.emplace_back(r.location, r.multiplicity);
    const std::vector<Complex> rebuilt = test::expand_roots(wanted);
    const Complex lead = p.leading();
    for (std::size_t k = 0; k <= d; ++k) REQUIRE(std::abs(rebuilt[k] - p.coeff(k) / lead) <= 1e-7);

    for (const auto& r : s.roots) REQUIRE(std::abs(p(r.location)) <= s.residual);
  }
}

TEST_CASE("residuals are small for well-separated roots") {
  test::Rng rng(1618);
  int tested = 0;
  while (tested < 200) {
    const auto d = static_cast<std::size_t>(rng.integer(2, 8));
    std::vector<Complex> known(d);
    std::vector<std::pair<Complex, std::size_t>> wanted;
    for (auto& r : known) {
      r = rng.unit_disk();
      wanted.emplace_back(r, 1);
    }
    double sep = INFINITY;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) sep = std::min(sep, std::abs(known[i] - known[j]));
    if (sep < 0.05) continue;
    ++tested;
    const Polynomial p = from_roots(wanted);
    const RootSet s = find_roots(p);
    REQUIRE(s.roots.size() == d);
    REQUIRE(s.residual <= 1e-9 * p.max_abs_coeff());
  }
}

TEST_CASE("root finding is deterministic") {
  test::Rng rng(1);
  const Polynomial p = rng.poly(7);
  const RootSet a = find_roots(p), b = find_roots(p);
  REQUIRE(a.roots.size() == b.roots.size());
  for (std::size_t k = 0; k < a.roots.size(); ++k) {
    CHECK(a.roots[k].location == b.roots[k].location);
    CHECK(a.roots[k].multiplicity == b.roots[k].multiplicity);
  }
  CHECK(a.sweeps == b.sweeps);
}
