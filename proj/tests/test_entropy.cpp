#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "quadsure/entropy.hpp"
#include "quadsure/errors.hpp"
#include "quadsure/transforms.hpp"

using namespace quadsure;
using std::numbers::pi;

namespace {

const GridSpec kGrid = GridSpec::symmetric();

double l1_to_gaussian(const QuadratureDistribution& d, double mean, double var) {
  double s = 0.0;
  for (std::size_t k = 0; k < d.density().size(); ++k) s += std::abs(d.density()[k] - oracle::gaussian_density(d.r(k), mean, var));
  return s * d.dr();
}

double l1(const QuadratureDistribution& x, const QuadratureDistribution& y) {
  REQUIRE(x.dr() == y.dr());
  REQUIRE(x.r_min() == y.r_min());
  double s = 0.0;
  for (std::size_t k = 0; k < x.density().size(); ++k) s += std::abs(x.density()[k] - y.density()[k]);
  return s * x.dr();
}

GridWavefunction gaussian_psi(const oracle::Cov& c, double p0 = 0.0, double q0 = 0.0, double hbar = 1.0) {
  Eigen::Matrix2d cov;
  cov << c.pp, c.pq, c.pq, c.qq;
  return gaussian_on_grid(GaussianState(Eigen::Vector2d(p0, q0), cov, hbar), GridSpec::symmetric(2048, 16.0, hbar));
}

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(QuadratureDistribution({1.0, 1.0}, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(QuadratureDistribution({1.5, -0.5}, 0.0, 1.0, 0.0), DomainError);
  const QuadratureDistribution clamped({1.0 + 1e-15, -1e-15}, 0.0, 1.0, 0.0);
  CHECK(clamped.density()[1] == 0.0);
}

TEST_CASE("shannon entropy examples") {
  const std::vector<double> box(100, 0.25);
  CHECK(shannon_entropy(QuadratureDistribution(box, 0.0, 0.04, 0.0), 1.0) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  std::vector<double> padded(200, 0.0);
  for (int k = 50; k < 150; ++k) padded[k] = 0.25;
  CHECK(shannon_entropy(QuadratureDistribution(padded, 0.0, 0.04, 0.0), 1.0) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  const auto psi = gaussian_on_grid(ground_state(), kGrid);
  const double s = shannon_entropy(rotate_quadrature(psi, pi / 2), 1.0);
  CHECK(std::abs(s - 0.5 * std::log(std::numbers::e * pi)) < 1e-6);
  CHECK(s == doctest::Approx(1.07236).epsilon(1e-5));

  for (double var : {0.2, 0.5, 1.2, 1.7}) {
    const auto sq = gaussian_psi({0.25 / var, 0.0, var});
    CHECK(std::abs(shannon_entropy(rotate_quadrature(sq, pi / 2), 1.0) - oracle::gaussian_entropy(var, 1.0)) < 1e-6);
  }
  for (double hbar : {0.3, 2.0}) {
    const auto g = gaussian_psi({hbar / 2, 0.0, hbar / 2}, 0.0, 0.0, hbar);
    CHECK(std::abs(shannon_entropy(rotate_quadrature(g, 0.4), hbar) - 0.5 * std::log(std::numbers::e * pi)) < 1e-6);
  }
}

TEST_CASE("rotation reproduces position and momentum") {
  const std::vector<Complex> c{0.6, Complex(0.2, 0.5), -0.3, Complex(0.0, 0.4)};
  const auto psi = hermite_superposition(c, kGrid);
  const auto pos = rotate_quadrature(psi, pi / 2);
  const auto dens = psi.position_density();
  double diff = 0.0;
  for (std::size_t k = 0; k < dens.size(); ++k) diff = std::max(diff, std::abs(dens[k] - pos.density()[k]));
  CHECK(diff < 1e-14);

  const auto mom = momentum_representation(psi);
  const auto p = rotate_quadrature(psi, 0.0);
  CHECK(p.r_min() == mom.p_min);
  CHECK(p.dr() == mom.dp);
  double err = 0.0;
  for (std::size_t k = 0; k < mom.samples.size(); ++k) err += std::abs(std::norm(mom.samples[k]) - p.density()[k]);
  CHECK(err * p.dr() < 1e-10);
}

TEST_CASE("ground and excited states are rotation invariant") {
  const auto g = gaussian_on_grid(ground_state(), kGrid);
  const std::vector<Complex> one{0.0, 1.0};
  const auto e = hermite_superposition(one, kGrid);
  const auto e_ref = rotate_quadrature(e, pi / 2);
  for (double phi : {0.0, 0.3, 1.1, 2.0, 2.9, 3.9, 5.5}) {
    CHECK(l1_to_gaussian(rotate_quadrature(g, phi), 0.0, 0.5) < 1e-6);
    const auto d = rotate_quadrature(e, phi);
    double dev = 0.0;
    for (std::size_t k = 0; k < d.density().size(); ++k) {
      dev += std::abs(d.density()[k] - oracle::rotated_density(one, pi / 2, d.r(k), 1.0));
    }
    CHECK(dev * d.dr() < 1e-6);
  }
  CHECK(rotate_quadrature(e, 0.2).variance() == doctest::Approx(e_ref.variance()).epsilon(1e-9));
}

TEST_CASE("property: FrFT matches rotated Gaussians") {
  oracle::Gen gen(51);
  for (int t = 0; t < 100; ++t) {
    const auto c = gen.pure_cov(1.0, 0.7);
    const double p0 = gen.uniform(-1, 1), q0 = gen.uniform(-1, 1);
    const auto psi = gaussian_psi(c, p0, q0);
    for (int a = 0; a < 16; ++a) {
      const double phi = 2 * pi * a / 16 + gen.uniform(0, 0.3);
      const double mean = p0 * std::cos(phi) + q0 * std::sin(phi);
      REQUIRE(l1_to_gaussian(rotate_quadrature(psi, phi), mean, oracle::quadrature_variance(c, phi)) < 1e-6);
    }
  }
}

TEST_CASE("property: FrFT matches the eigenbasis oracle") {
  oracle::Gen gen(52);
  for (int t = 0; t < 10; ++t) {
    const auto c = gen.superposition(gen.integer(1, 8));
    const auto psi = hermite_superposition(c, kGrid);
    for (int a = 0; a < 8; ++a) {
      const double phi = gen.uniform(0, 2 * pi);
      const auto d = rotate_quadrature(psi, phi);
      double dev = 0.0;
      for (std::size_t k = 0; k < d.density().size(); ++k) dev += std::abs(d.density()[k] - oracle::rotated_density(c, phi, d.r(k), 1.0));
      REQUIRE(dev * d.dr() < 1e-6);
    }
  }
}

TEST_CASE("property: angle composition") {
  oracle::Gen gen(53);
  for (int t = 0; t < 20; ++t) {
    const auto c = gen.superposition(5);
    const auto psi = hermite_superposition(c, kGrid);
    // Pick phi_1 and phi_1 - phi_2 in the same quarter-turn class so both
    // densities land on the same grid.
    const double base = t % 2 == 0 ? 0.5 * pi : 0.0;
    const double phi1 = base + gen.uniform(-0.35, 0.35);
    const double phi2 = gen.uniform(-0.4, 0.4);
    const double residual = phi1 - phi2;
    REQUIRE(std::abs(residual - base) < 0.25 * pi);
    const auto direct = rotate_quadrature(psi, phi1);
    const auto via = rotate_quadrature(rotate_state(psi, phi2), residual);
    REQUIRE(l1(direct, via) < 1e-8);
  }
  // rotate_state realizes rotation_map on the moments.
  const auto psi = gaussian_psi({0.8, 0.2, 0.3625}, 0.3, -0.4);
  const double theta = 1.9;
  const auto m = grid_moments(rotate_state(psi, theta));
  Eigen::Matrix2d cov;
  cov << 0.8, 0.2, 0.2, 0.3625;
  const auto ref = apply_map(GaussianState(Eigen::Vector2d(0.3, -0.4), cov), rotation_map(theta));
  CHECK((m.cov - ref.cov()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((m.mean - ref.mean()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("hirschman and variance-entropy relations") {
  const auto g = gaussian_on_grid(ground_state(), kGrid);
  const auto h = hirschman_check(g);
  CHECK(h.saturated);
  CHECK(h.rhs == doctest::Approx(std::log(std::numbers::e * pi)));
  for (double gamma : {0.5, 1.7, 3.0}) {
    const auto sq = gaussian_on_grid(apply_map(ground_state(), squeeze_map(gamma)), kGrid);
    CHECK(hirschman_check(sq).saturated);
    CHECK(variance_entropy_check(sq, 0.0).saturated);
  }
  const std::vector<Complex> sup{1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)};
  const auto hs = hirschman_check(hermite_superposition(sup, kGrid));
  CHECK(hs.satisfied);
  CHECK(hs.lhs - hs.rhs > 0.0);

  const std::vector<Complex> one{0.0, 1.0};
  const auto ve = variance_entropy_check(hermite_superposition(one, kGrid), pi / 2);
  CHECK(ve.lhs == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(ve.rhs < ve.lhs);
  CHECK_FALSE(ve.saturated);

  oracle::Gen gen(54);
  for (int t = 0; t < 20; ++t) {
    const auto c = gen.pure_cov(1.0, 0.8);
    const auto psi = gaussian_psi(c);
    for (int a = 0; a < 6; ++a) CHECK(variance_entropy_check(psi, gen.uniform(0, 2 * pi)).saturated);
    const auto s = hermite_superposition(gen.superposition(6), kGrid);
    CHECK(hirschman_check(s).lhs >= hirschman_bound() - 1e-5);
  }
}

TEST_CASE("polygon entropy scan") {
  const auto g = gaussian_on_grid(ground_state(), kGrid);
  for (int n = 2; n <= 7; ++n) {
    const auto r = polygon_entropy_scan(g, n);
    CHECK(std::abs(r.margin) < 1e-6);
    CHECK(r.polygon);
    CHECK(r.margin == r.mean2 - r.bound);
  }
  CHECK(polygon_angles(2) == std::vector<double>{0.0, pi / 2});
  const auto coherent = gaussian_on_grid(translate(ground_state(), {0.8, -1.1}), kGrid);
  CHECK(std::abs(polygon_entropy_scan(coherent, 5).margin) < 1e-6);

  const std::vector<double> odd{0.0, 0.4, 2.0};
  const auto r = entropy_scan(g, odd);
  CHECK_FALSE(r.polygon);
  const std::vector<double> shifted{0.3, 0.3 + 2 * pi / 3, 0.3 + 4 * pi / 3};
  CHECK(entropy_scan(g, shifted).polygon);
  CHECK_THROWS_AS(polygon_entropy_scan(g, 1), DomainError);
}

TEST_CASE("entropy translation invariance") {
  oracle::Gen gen(55);
  const auto psi = hermite_superposition(gen.superposition(4), kGrid);
  const auto moved = translate(psi, {0.0, 40 * kGrid.dq});
  for (double phi : {pi / 2, 0.0}) {
    CHECK(std::abs(shannon_entropy(rotate_quadrature(psi, phi), 1.0) - shannon_entropy(rotate_quadrature(moved, phi), 1.0)) < 1e-9);
  }
}

TEST_CASE("entropic product chain") {
  const auto g = gaussian_on_grid(ground_state(), kGrid);
  const auto chain = entropic_product_consistency(g, 2);
  CHECK(chain.variance_link.saturated);
  CHECK(chain.entropy_link.saturated);
  const std::vector<Complex> one{0.0, 1.0};
  const auto e = entropic_product_consistency(hermite_superposition(one, kGrid), 2);
  CHECK(e.variance_link.satisfied);
  CHECK(e.entropy_link.satisfied);
  oracle::Gen gen(56);
  const auto s = entropic_product_consistency(hermite_superposition(gen.superposition(6), kGrid), 5);
  CHECK(s.variance_link.satisfied);
  CHECK(s.entropy_link.satisfied);
}

TEST_CASE("leakage is reported") {
  // A fast coherent state is carried towards the grid edge by the residual rotation.
  const auto fast = gaussian_on_grid(translate(ground_state(), {20.0, 0.0}), kGrid);
  CHECK_NOTHROW(rotate_quadrature(fast, pi / 2));
  CHECK_THROWS_AS(rotate_quadrature(fast, pi / 2 - 0.7), LeakageError);
  const auto wide = apply_map(ground_state(), squeeze_map(0.3));
  CHECK_THROWS_AS(gaussian_on_grid(wide, GridSpec::symmetric(256, 6.0)), LeakageError);
}

TEST_CASE("conjecture scan is deterministic") {
  const auto a = conjecture_scan(6, 3, 20, 9, kGrid);
  const auto b = conjecture_scan(6, 3, 20, 9, kGrid);
  REQUIRE(a.records.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(a.records[i].report.margin == b.records[i].report.margin);
  CHECK(a.min_margin >= -kConjectureSlack);
  CHECK(a.offenders.empty());
  const auto j = to_json(a.records[0]);
  CHECK(j.at("state").at("re").size() == 6);
}
