#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "quadsure/errors.hpp"
#include "quadsure/states.hpp"
#include "quadsure/transforms.hpp"

using namespace quadsure;

TEST_CASE("ground state") {
  const auto g = ground_state(1.0);
  CHECK(g.cov()(0, 0) == 0.5);
  CHECK(g.cov()(1, 1) == 0.5);
  CHECK(g.cov()(0, 1) == 0.0);
  CHECK(g.is_pure());
  CHECK(ground_state(2.0).cov().isApprox(Eigen::Matrix2d::Identity()));
  CHECK(ground_state(3.0).cov().determinant() == 9.0 / 4.0);
}

TEST_CASE("gaussian validation") {
  Eigen::Matrix2d narrow;
  narrow << 0.1, 0.0, 0.0, 0.1;
  CHECK_THROWS_AS(GaussianState(Eigen::Vector2d::Zero(), narrow), DomainError);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.2, 0.1, 1.0;
  CHECK_THROWS_AS(GaussianState(Eigen::Vector2d::Zero(), asym), DomainError);
  Eigen::Matrix2d thermal = 2.0 * Eigen::Matrix2d::Identity();
  const GaussianState t(Eigen::Vector2d(1.0, -1.0), thermal);
  CHECK_FALSE(t.is_pure());
  // Strong squeezing at the purity edge is still admissible.
  const auto sq = apply_map(ground_state(), squeeze_map(1e4));
  CHECK(sq.is_pure());
}

TEST_CASE("mixture moments") {
  const auto g = ground_state();
  const MixtureState single({1.0}, {g});
  CHECK(single.moments().cov.isApprox(g.cov()));
  const double q0 = 1.5;
  const MixtureState pair({0.5, 0.5}, {translate(g, {0.0, q0}), translate(g, {0.0, -q0})});
  CHECK(pair.moments().var_q() == doctest::Approx(0.5 + q0 * q0));
  CHECK(pair.moments().var_p() == doctest::Approx(0.5));
  CHECK_THROWS_AS(MixtureState({0.6, 0.6}, {g, g}), DomainError);
  CHECK_THROWS_AS(MixtureState({0.5, 0.5}, {g, ground_state(2.0)}), DomainError);
}

TEST_CASE("grid construction") {
  const auto grid = GridSpec::symmetric();
  CHECK(grid.m == 2048);
  CHECK(grid.q_min == -16.0);
  CHECK(grid.dq == 1.0 / 64.0);
  CHECK_THROWS_AS(GridSpec::symmetric(1000).validate(), DomainError);
  CHECK_THROWS_AS(GridSpec::symmetric(128).validate(), DomainError);

  std::vector<Complex> flat(2048, Complex(1.0, 0.0));
  CHECK_THROWS_AS(GridWavefunction::normalized(flat, grid), LeakageError);
  const auto psi = gaussian_on_grid(ground_state(), grid);
  std::vector<Complex> doubled(psi.samples().begin(), psi.samples().end());
  for (auto& v : doubled) v *= 2.0;
  CHECK_THROWS_AS(GridWavefunction(doubled, grid), DomainError);
}

TEST_CASE("hermite superpositions") {
  const auto grid = GridSpec::symmetric();
  const std::vector<Complex> ground{1.0};
  const auto h0 = hermite_superposition(ground, grid);
  const auto g0 = gaussian_on_grid(ground_state(), grid);
  double diff = 0.0;
  for (int k = 0; k < grid.m; ++k) diff = std::max(diff, std::abs(h0.samples()[k] - g0.samples()[k]));
  CHECK(diff < 1e-12);
  CHECK(grid_moments(h0).var_q() == doctest::Approx(0.5).epsilon(1e-10));

  const std::vector<Complex> first{0.0, 1.0};
  const auto h1 = hermite_superposition(first, grid);
  CHECK(grid_moments(h1).var_q() == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(grid_moments(h1).var_p() == doctest::Approx(1.5).epsilon(1e-10));

  const std::vector<Complex> mixed{Complex(1.0, 0.0) / std::sqrt(2.0), Complex(0.0, 1.0) / std::sqrt(2.0)};
  const auto h = hermite_superposition(mixed, grid);
  double norm = 0.0;
  for (const auto& v : h.samples()) norm += std::norm(v);
  CHECK(norm * grid.dq == doctest::Approx(1.0).epsilon(1e-10));

  // Eigenfunction values against std::hermite.
  const std::vector<Complex> fifth{0, 0, 0, 0, 0, 1.0};
  const auto h5 = hermite_superposition(fifth, grid);
  for (int k = 900; k < 1150; k += 37) {
    CHECK(std::abs(h5.samples()[k]) == doctest::Approx(std::abs(oracle::eigenfunction(5, grid.q(k), 1.0))).epsilon(1e-10));
  }
  CHECK_THROWS_AS(hermite_superposition(fifth, GridSpec::symmetric(2048, 6.0)), LeakageError);
  CHECK_THROWS_AS(hermite_superposition(std::vector<Complex>{0.0, 0.0}, grid), DomainError);
}

TEST_CASE("grid moments") {
  const auto grid = GridSpec::symmetric();
  const auto g = grid_moments(gaussian_on_grid(ground_state(), grid));
  CHECK(g.cov.isApprox(0.5 * Eigen::Matrix2d::Identity(), 1e-8));

  const double gamma = 1.7;
  const auto sq = grid_moments(gaussian_on_grid(apply_map(ground_state(), squeeze_map(gamma)), grid));
  CHECK(sq.var_p() == doctest::Approx(gamma * gamma / 2).epsilon(1e-10));
  CHECK(sq.var_q() == doctest::Approx(0.5 / (gamma * gamma)).epsilon(1e-10));

  const auto sheared = grid_moments(gaussian_on_grid(apply_map(ground_state(), gauge_map(1.0)), grid));
  const auto ref = oracle::propagate({0.5, 0.0, 0.5}, 1.0, 0.0, 1.0, 1.0);
  CHECK(sheared.cov_pq() == doctest::Approx(ref.pq).epsilon(1e-8));
  CHECK(sheared.var_q() == doctest::Approx(ref.qq).epsilon(1e-8));
}

TEST_CASE("property: grid moments reproduce random pure covariances") {
  const auto grid = GridSpec::symmetric();
  oracle::Gen gen(21);
  for (int t = 0; t < 100; ++t) {
    const auto c = gen.pure_cov(1.0, 0.8);
    Eigen::Matrix2d cov;
    cov << c.pp, c.pq, c.pq, c.qq;
    const Eigen::Vector2d mean(gen.uniform(-1, 1), gen.uniform(-1, 1));
    const auto m = grid_moments(gaussian_on_grid(GaussianState(mean, cov), grid));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        REQUIRE(std::abs(m.cov(i, j) - cov(i, j)) <= 1e-7 * cov.cwiseAbs().maxCoeff());
      }
    }
    REQUIRE((m.mean - mean).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("hbar scaling on the grid") {
  const double hbar = 2.5;
  const auto grid = GridSpec::symmetric(2048, 16.0, hbar);
  const auto m = grid_moments(gaussian_on_grid(ground_state(hbar), grid));
  CHECK(m.var_q() == doctest::Approx(hbar / 2).epsilon(1e-10));
  CHECK(m.var_p() == doctest::Approx(hbar / 2).epsilon(1e-10));
}

TEST_CASE("json round trip") {
  Eigen::Matrix2d cov;
  cov << 0.7, 0.1, 0.1, 0.9;
  const GaussianState s(Eigen::Vector2d(0.1, -0.3), cov, 1.3);
  const auto j = to_json(s);
  CHECK(j.at("type") == "gaussian");
  const auto back = std::get<GaussianState>(state_from_json(nlohmann::json::parse(j.dump())));
  CHECK(back.cov() == s.cov());
  CHECK(back.mean() == s.mean());
  CHECK(back.hbar() == s.hbar());

  const auto grid = GridSpec::symmetric(256, 10.0);
  const auto psi = gaussian_on_grid(ground_state(), grid);
  const auto again = std::get<GridWavefunction>(state_from_json(nlohmann::json::parse(to_json(psi).dump())));
  for (int k = 0; k < grid.m; ++k) CHECK(again.samples()[k] == psi.samples()[k]);
  CHECK_THROWS_AS(state_from_json({{"type", "fock"}}), DomainError);
  CHECK_THROWS_AS(state_from_json({{"type", "gaussian"}}), DomainError);
}
