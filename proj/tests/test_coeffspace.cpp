#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "quadsure/coeffspace.hpp"
#include "quadsure/errors.hpp"

using namespace quadsure;
using std::numbers::pi;

namespace {

CoefficientPair make(const std::vector<double>& a, const std::vector<double>& b) {
  return {Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())),
          Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()))};
}

}  // namespace

TEST_CASE("pair validation") {
  CHECK_THROWS_AS(make({1, 2}, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(make({1}, {2}), DomainError);
  CHECK_THROWS_AS(make({1, NAN}, {0, 1}), DomainError);
  CHECK_THROWS_AS(make({1, INFINITY}, {0, 1}), DomainError);
}

TEST_CASE("commutator matrix") {
  const auto A = commutator_matrix(canonical_pair());
  CHECK(A(0, 1) == 1.0);
  CHECK(A(1, 0) == -1.0);
  CHECK(A(0, 0) == 0.0);

  const auto zero = commutator_matrix(make({1, 2, 3}, {2, 4, 6}));
  CHECK(zero.matrix().cwiseAbs().maxCoeff() == 0.0);

  // Adjacent vertices of the canonical pentagon are canonical pairs.
  const auto pent = commutator_matrix(regular_polygon({5, canonical_circumradius(5)}));
  for (int j = 0; j < 5; ++j) CHECK(pent(j, (j + 1) % 5) == doctest::Approx(1.0).epsilon(1e-14));

  oracle::Gen gen(11);
  for (int t = 0; t < 50; ++t) {
    const int n = gen.integer(2, 9);
    const auto m = commutator_matrix(make(gen.normals(n), gen.normals(n))).matrix();
    CHECK((m + m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("incompatibility values") {
  CHECK(incompatibility(canonical_pair()) == 1.0);
  CHECK(incompatibility(make({1, 2}, {2, 4})) == 0.0);
  CHECK(incompatibility(regular_polygon({7, 1.0})) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(incompatibility(regular_polygon({4, 1.0})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(incompatibility(regular_polygon({2, 1.0})) == doctest::Approx(0.0));

  // Canonical pentagon: N R_5^2 / 2 = 5 / (2 sin 72deg); the enclosed area is 5/2.
  const auto pent = regular_polygon({5, canonical_circumradius(5)});
  CHECK(incompatibility(pent) == doctest::Approx(2.5 / std::sin(2 * pi / 5)).epsilon(1e-14));
  CHECK(incompatibility(pent) == doctest::Approx(2.628655560595668).epsilon(1e-14));
  CHECK(enclosed_area(pent) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("property: three incompatibility forms agree with the pairwise oracle") {
  oracle::Gen gen(1);
  for (int t = 0; t < 10000; ++t) {
    const int n = gen.integer(2, 12);
    const auto a = gen.normals(n), b = gen.normals(n);
    const auto pair = make(a, b);
    const auto f = incompatibility_forms(pair);
    const double ref = oracle::pairwise_area(a, b);
    REQUIRE(std::abs(f.lagrange - ref) <= 1e-12 * std::max(1.0, ref));
    REQUIRE(std::abs(f.pairwise - ref) <= 1e-12 * std::max(1.0, ref));
    REQUIRE(std::abs(f.frobenius - ref) <= 1e-12 * std::max(1.0, ref));
  }
}

TEST_CASE("property: scaling and the |a||b| sin form") {
  oracle::Gen gen(2);
  for (int t = 0; t < 500; ++t) {
    const int n = gen.integer(2, 8);
    const auto pair = make(gen.normals(n), gen.normals(n));
    const double s = gen.uniform(0.0, 3.0);
    const double inc = incompatibility(pair);
    CHECK(incompatibility(pair.scaled(s)) == doctest::Approx(s * s * inc).epsilon(1e-12));
    const double cosine = pair.a().dot(pair.b()) / (pair.a().norm() * pair.b().norm());
    const double sine = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
    CHECK(inc == doctest::Approx(pair.a().norm() * pair.b().norm() * sine).epsilon(1e-9));
  }
  // Row scaling multiplies each operator separately.
  const auto square = regular_polygon({4, 1.0});
  const std::vector<double> f{2.0, 1.0, 2.0, 1.0};
  CHECK(incompatibility(square.rows_scaled(f)) == doctest::Approx(oracle::pairwise_area({2, 0, -2, 0}, {0, 1, 0, -1})));
}

TEST_CASE("property: unit rows never exceed N/2 and equality means a rectangle") {
  oracle::Gen gen(3);
  for (int t = 0; t < 2000; ++t) {
    const int n = gen.integer(2, 10);
    std::vector<double> theta(n);
    for (double& x : theta) x = gen.uniform(0, 2 * pi);
    const auto pair = CoefficientPair::from_angles(theta);
    CHECK(incompatibility(pair) <= 0.5 * n + 1e-12);
    CHECK(incompatibility_objective(theta) == doctest::Approx(std::pow(incompatibility(pair), 2)).epsilon(1e-10));
  }
  for (int n = 3; n <= 9; ++n) {
    const auto poly = regular_polygon({n, 1.0});
    CHECK(std::abs(poly.a().dot(poly.b())) < 1e-13);
    CHECK(poly.a().squaredNorm() == doctest::Approx(0.5 * n).epsilon(1e-13));
    CHECK(poly.b().squaredNorm() == doctest::Approx(0.5 * n).epsilon(1e-13));
  }
}

TEST_CASE("polygons and the canonical radius") {
  const auto square = regular_polygon({4, 1.0});
  CHECK(square.a()[2] == doctest::Approx(-1.0));
  CHECK(square.b()[3] == doctest::Approx(-1.0));
  CHECK(canonical_circumradius(4) == doctest::Approx(1.0));
  CHECK(std::pow(canonical_circumradius(3), 2) == doctest::Approx(1.0 / std::sin(2 * pi / 3)).epsilon(1e-14));
  CHECK(std::pow(canonical_circumradius(3), 2) == doctest::Approx(1.1547005383792515));
  CHECK(canonical_circumradius(5) == doctest::Approx(1.0254083207).epsilon(1e-9));
  CHECK_THROWS_AS(canonical_circumradius(2), DomainError);
  CHECK_THROWS_AS(regular_polygon({1, 1.0}), DomainError);
  CHECK_THROWS_AS(regular_polygon({4, 0.0}), DomainError);
}

TEST_CASE("objective examples") {
  CHECK(incompatibility_objective(std::vector<double>{0, pi / 3, 2 * pi / 3}) == doctest::Approx(2.25));
  CHECK(incompatibility_objective(std::vector<double>{0.4, 0.4, 0.4}) == 0.0);
  const std::vector<double> th{0.1, 0.9, 2.0};
  double closed = 1.5;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < j; ++k) closed -= 0.5 * std::cos(2 * (th[j] - th[k]));
  CHECK(incompatibility_objective(th) == doctest::Approx(closed).epsilon(1e-14));
}

TEST_CASE("maximization") {
  for (int n = 2; n <= 8; ++n) {
    const auto r = maximize_incompatibility(n, 5);
    CHECK(r.value <= 0.5 * n + 1e-9);
    CHECK(r.value >= 0.5 * n - 1e-6);
    CHECK(r.angles[0] == 0.0);
  }
  const auto three = maximize_incompatibility(3, 9);
  CHECK(three.distinct_maxima.size() <= 8);
  for (const auto& angles : three.distinct_maxima) {
    // Orbit of (0, pi/3, 2pi/3): multiples of pi/3 with residues {1, 2} mod 3.
    const double m2 = angles[1] / (pi / 3), m3 = angles[2] / (pi / 3);
    CHECK(std::abs(m2 - std::round(m2)) < 1e-5);
    CHECK(std::abs(m3 - std::round(m3)) < 1e-5);
    const int r2 = static_cast<int>(std::lround(m2)) % 3, r3 = static_cast<int>(std::lround(m3)) % 3;
    CHECK(((r2 == 1 && r3 == 2) || (r2 == 2 && r3 == 1)));
  }
  const auto again = maximize_incompatibility(6, 5);
  CHECK(again.angles == maximize_incompatibility(6, 5).angles);
  CHECK_THROWS_AS(maximize_incompatibility(1, 1), DomainError);
}
