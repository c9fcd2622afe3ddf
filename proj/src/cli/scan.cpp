#include <cmath>
#include <numbers>
#include <random>

#include "quadsure/cli.hpp"
#include "quadsure/parallel.hpp"
#include "quadsure/transforms.hpp"

namespace quadsure::cli {

GaussianState random_gaussian(std::uint64_t seed, double hbar) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> squeeze(-2.0, 2.0), angle(0.0, std::numbers::pi), unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  const double u = squeeze(rng);
  const double theta = angle(rng);
  // A quarter of the states are pure; the rest are thermal up to e^2 times.
  const double draw = unit(rng);
  const double thermal = draw < 0.25 ? 1.0 : std::exp(2.0 * unit(rng));
  Eigen::Matrix2d base = Eigen::Matrix2d::Zero();
  base(0, 0) = 0.5 * hbar * thermal * std::exp(2.0 * u);
  base(1, 1) = 0.5 * hbar * thermal * std::exp(-2.0 * u);
  const auto& r = rotation_map(theta).matrix();
  Eigen::Matrix2d cov = r * base * r.transpose();
  cov(1, 0) = cov(0, 1);
  const double mean_p = normal(rng), mean_q = normal(rng);
  return {Eigen::Vector2d(mean_p, mean_q) * std::sqrt(hbar), cov, hbar};
}

CoefficientPair random_pair(std::uint64_t seed, int n_min, int n_max) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(n_min, n_max);
  std::normal_distribution<double> normal;
  const int n = size(rng);
  Eigen::VectorXd a(n), b(n);
  for (int j = 0; j < n; ++j) {
    a[j] = normal(rng);
    b[j] = normal(rng);
  }
  return {a, b};
}

MixtureState random_mixture(std::uint64_t seed, double hbar) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(2, 4);
  std::exponential_distribution<double> weight;
  const int k = count(rng);
  std::vector<double> w(static_cast<std::size_t>(k));
  std::vector<GaussianState> components;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    w[i] = weight(rng) + 1e-3;
    total += w[i];
    components.push_back(random_gaussian(rng(), hbar));
  }
  for (double& x : w) x /= total;
  return {std::move(w), std::move(components)};
}

UniversalityScan universality_scan(std::size_t gaussians, std::size_t mixtures, std::uint64_t seed, double tol,
                                   double hbar) {
  const std::size_t total = gaussians + mixtures;
  auto cases = parallel_map<UniversalityCase>(total, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    UniversalityCase c;
    c.index = i;
    c.mixture = i >= gaussians;
    const SecondMoments mom = c.mixture ? random_mixture(rng(), hbar).moments() : random_gaussian(rng(), hbar).moments();
    const auto pair = random_pair(rng());
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> corr(-0.99, 0.99);
    const double mu = std::exp(normal(rng)), nu = std::exp(normal(rng));
    const double lambda = corr(rng) * std::sqrt(mu * nu);
    c.reports = {linear_ur_check(mom, mu, nu, lambda, tol), sum_check(mom, pair, tol), product_check(mom, pair, tol)};
    return c;
  });

  UniversalityScan scan;
  scan.gaussians = gaussians;
  scan.mixtures = mixtures;
  for (auto& c : cases) {
    bool bad = false;
    if (!c.reports[0].satisfied) ++scan.linear_violations, bad = true;
    if (!c.reports[1].satisfied) ++scan.sum_violations, bad = true;
    if (!c.reports[2].satisfied) ++scan.product_violations, bad = true;
    if (bad) scan.violating.push_back(std::move(c));
  }
  return scan;
}

nlohmann::json to_json(const UniversalityScan& scan) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : scan.violating) {
    if (cases.size() == 100) break;
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : c.reports) reports.push_back(to_json(r));
    cases.push_back({{"index", c.index}, {"mixture", c.mixture}, {"reports", reports}});
  }
  return {{"gaussians", scan.gaussians},
          {"mixtures", scan.mixtures},
          {"violations",
           {{"linear", scan.linear_violations}, {"sum", scan.sum_violations}, {"product", scan.product_violations}}},
          {"violating_cases_total", scan.violating.size()},
          {"violating_cases", cases}};
}

}  // namespace quadsure::cli
