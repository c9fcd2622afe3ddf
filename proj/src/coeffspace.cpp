#include "quadsure/coeffspace.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "quadsure/errors.hpp"
#include "quadsure/parallel.hpp"

namespace quadsure {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// x y - z w to within about one ulp (Kahan's fma trick).
double exact_cross(double x, double y, double z, double w) {
  const double zw = z * w;
  const double err = std::fma(-z, w, zw);
  return std::fma(x, y, -zw) + err;
}

double circular_distance(double x, double y) {
  const double d = std::abs(wrap_angle(x) - wrap_angle(y));
  return std::min(d, kTwoPi - d);
}

}  // namespace

CoefficientPair::CoefficientPair(Eigen::VectorXd a, Eigen::VectorXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) {
    throw DomainError("coefficient vectors differ in length (" + std::to_string(a_.size()) +
                      " vs " + std::to_string(b_.size()) + ")");
  }
  if (a_.size() < 2) throw DomainError("need at least two observables, got N = " + std::to_string(a_.size()));
  if (!a_.allFinite() || !b_.allFinite()) throw DomainError("coefficient vectors must be finite");
}

CoefficientPair CoefficientPair::from_angles(std::span<const double> angles, double radius) {
  Eigen::VectorXd a(static_cast<Eigen::Index>(angles.size()));
  Eigen::VectorXd b(a.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    a[j] = radius * std::cos(angles[j]);
    b[j] = radius * std::sin(angles[j]);
  }
  return {std::move(a), std::move(b)};
}

CoefficientPair CoefficientPair::scaled(double s) const { return {s * a_, s * b_}; }

CoefficientPair CoefficientPair::rows_scaled(std::span<const double> factors) const {
  if (static_cast<int>(factors.size()) != size()) {
    throw DomainError("row scaling needs one factor per observable");
  }
  Eigen::VectorXd a = a_, b = b_;
  for (int j = 0; j < size(); ++j) {
    a[j] *= factors[j];
    b[j] *= factors[j];
  }
  return {std::move(a), std::move(b)};
}

CoefficientPair canonical_pair() { return {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)}; }

AntisymmetricMatrix commutator_matrix(const CoefficientPair& pair) {
  const int n = pair.size();
  const auto& a = pair.a();
  const auto& b = pair.b();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double area = a[j] * b[k] - a[k] * b[j];
      m(j, k) = area;
      m(k, j) = -area;
    }
  }
  return AntisymmetricMatrix(std::move(m));
}

IncompatibilityForms incompatibility_forms(const CoefficientPair& pair) {
  const auto& a = pair.a();
  const auto& b = pair.b();
  const double ab = a.dot(b);
  const double lagrange_sq = a.squaredNorm() * b.squaredNorm() - ab * ab;

  const auto A = commutator_matrix(pair);
  double pairwise_sq = 0.0;
  for (int j = 0; j < A.size(); ++j) {
    for (int k = 0; k < j; ++k) pairwise_sq += A(j, k) * A(j, k);
  }
  const double frobenius_sq = 0.5 * (A.matrix().transpose() * A.matrix()).trace();

  return {std::sqrt(std::max(0.0, lagrange_sq)), std::sqrt(pairwise_sq), std::sqrt(frobenius_sq)};
}

double incompatibility(const CoefficientPair& pair) {
  // Summing the squared pairwise areas avoids the cancellation in
  // |a|^2 |b|^2 - (a.b)^2, which loses relative accuracy quadratically
  // as a and b approach collinearity.
  const auto& a = pair.a();
  const auto& b = pair.b();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    for (Eigen::Index k = 0; k < j; ++k) {
      const double area = exact_cross(a[j], b[k], a[k], b[j]);
      sum += area * area;
    }
  }
  const double value = std::sqrt(sum);
#ifndef NDEBUG
  {
    const auto forms = incompatibility_forms(pair);
    // Squared forms agree to rounding of |a|^2 |b|^2.
    const double scale = std::max(1e-300, a.squaredNorm() * b.squaredNorm());
    assert(std::abs(forms.pairwise * forms.pairwise - value * value) <= 1e-12 * scale);
    assert(std::abs(forms.frobenius * forms.frobenius - value * value) <= 1e-12 * scale);
  }
#endif
  return value;
}

double PolygonSpec::angle(int j) const { return kTwoPi * j / n; }

CoefficientPair regular_polygon(const PolygonSpec& spec) {
  if (spec.n < 2) throw DomainError("a polygon needs N >= 2 vertices, got " + std::to_string(spec.n));
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    throw DomainError("polygon circumradius must be positive and finite");
  }
  std::vector<double> angles(spec.n);
  for (int j = 0; j < spec.n; ++j) angles[j] = spec.angle(j);
  return CoefficientPair::from_angles(angles, spec.radius);
}

double canonical_circumradius(int n) {
  if (n <= 2) {
    throw DomainError("canonical circumradius undefined for N = " + std::to_string(n) +
                      ": sin(2 pi/N) <= 0, adjacent vertices cannot form canonical pairs");
  }
  return 1.0 / std::sqrt(std::sin(kTwoPi / n));
}

double enclosed_area(const CoefficientPair& pair) {
  const int n = pair.size();
  double twice = 0.0;
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    twice += pair.a()[j] * pair.b()[k] - pair.a()[k] * pair.b()[j];
  }
  return 0.5 * std::abs(twice);
}

double incompatibility_objective(std::span<const double> angles) {
  double sum = 0.0;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const double s = std::sin(angles[j] - angles[k]);
      sum += s * s;
    }
  }
  return sum;
}

namespace {

struct AscentOutcome {
  std::vector<double> angles;
  double objective = 0.0;
  bool converged = false;
};

// d/dtheta_j of sum_{j>k} sin^2(theta_j - theta_k) is sum_{k != j} sin(2(theta_j - theta_k)).
void objective_gradient(const std::vector<double>& theta, std::vector<double>& grad) {
  const std::size_t n = theta.size();
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const double s = std::sin(2.0 * (theta[j] - theta[k]));
      grad[j] += s;
      grad[k] -= s;
    }
  }
  grad[0] = 0.0;  // gauge: theta_1 is pinned
}

AscentOutcome ascend(std::vector<double> theta) {
  constexpr int kMaxIterations = 20000;
  constexpr double kGradTol = 1e-12;
  const std::size_t n = theta.size();
  std::vector<double> grad(n), trial(n);
  double value = incompatibility_objective(theta);
  double step = 1.0 / static_cast<double>(n);
  bool converged = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    objective_gradient(theta, grad);
    double g2 = 0.0;
    for (double g : grad) g2 += g * g;
    if (std::sqrt(g2) < kGradTol) {
      converged = true;
      break;
    }
    // Armijo backtracking; the step is allowed to grow again after success.
    double t = std::min(2.0 * step, 1.0);
    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt, t *= 0.5) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = theta[j] + t * grad[j];
      const double candidate = incompatibility_objective(trial);
      if (candidate > value && candidate >= value + 1e-4 * t * g2) {
        theta.swap(trial);
        value = candidate;
        step = t;
        accepted = true;
      }
    }
    // No ascent step survives once t |grad|^2 drops below the rounding of
    // the objective, i.e. |grad| around 1e-8.
    if (!accepted) {
      converged = std::sqrt(g2) < 1e-7;
      break;
    }
  }
  for (double& x : theta) x = wrap_angle(x);
  const double objective = incompatibility_objective(theta);
  return {std::move(theta), objective, converged};
}

bool same_arrangement(const std::vector<double>& x, const std::vector<double>& y) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (circular_distance(x[j], y[j]) > 1e-6) return false;
  }
  return true;
}

}  // namespace

MaximizeResult maximize_incompatibility(int n, std::uint64_t seed, int restarts) {
  if (n < 2) throw DomainError("maximization needs N >= 2, got " + std::to_string(n));
  if (restarts < 1) throw DomainError("need at least one restart");

  auto outcomes = parallel_map<AscentOutcome>(static_cast<std::size_t>(restarts), [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(seed, r));
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    std::vector<double> theta(n, 0.0);
    for (int j = 1; j < n; ++j) theta[j] = uniform(rng);
    return ascend(std::move(theta));
  });

  MaximizeResult result;
  result.restarts = restarts;
  const AscentOutcome* best = nullptr;
  for (const auto& o : outcomes) {
    if (o.converged) ++result.converged_restarts;
    if (!best || o.objective > best->objective) best = &o;
  }
  if (result.converged_restarts == 0) {
    throw OptimizationError("incompatibility ascent did not converge in any of " + std::to_string(restarts) +
                                " restarts",
                            std::sqrt(best->objective));
  }
  result.angles = best->angles;
  result.value = std::sqrt(best->objective);
  result.gap = 0.5 * n - result.value;
  for (const auto& o : outcomes) {
    if (!o.converged || best->objective - o.objective > 1e-9) continue;
    bool seen = false;
    for (const auto& m : result.distinct_maxima) seen = seen || same_arrangement(m, o.angles);
    if (!seen) result.distinct_maxima.push_back(o.angles);
  }
  return result;
}

}  // namespace quadsure
