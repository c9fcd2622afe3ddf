#pragma once

// Variances of the observables r_j = a_j p + b_j q and the variance-based
// uncertainty relations built on them.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "quadsure/coeffspace.hpp"
#include "quadsure/states.hpp"

namespace quadsure {

inline constexpr double kDefaultTolerance = 1e-9;

/// Outcome of one inequality lhs >= rhs.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs, +inf when rhs == 0
  bool satisfied = false;
  bool saturated = false;
  double tol = kDefaultTolerance;

  /// satisfied <=> lhs >= rhs - tol max(1, |rhs|);
  /// saturated <=> |lhs - rhs| <= tol max(1, |rhs|).
  static BoundReport make(std::string name, double lhs, double rhs, double tol = kDefaultTolerance);

  /// rhs == 0: the bound carries no information (compatible observables).
  bool trivial() const noexcept { return rhs == 0.0; }
};

nlohmann::json to_json(const BoundReport& report);

class VarianceVector {
 public:
  explicit VarianceVector(std::vector<double> values) : values_(std::move(values)) {}
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }
  double sum() const;
  double product() const;

 private:
  std::vector<double> values_;
};

/// D2r_j = a_j^2 D2p + b_j^2 D2q + 2 a_j b_j Cpq. Throws DomainError for
/// inadmissible moments.
VarianceVector variances(const SecondMoments& moments, const CoefficientPair& pair);

/// sum_j D2r_j >= hbar |a ^ b|
BoundReport sum_check(const SecondMoments& moments, const CoefficientPair& pair, double tol = kDefaultTolerance);

/// prod_j D2r_j >= (hbar |a ^ b| / N)^N. Holds for N = 2 and for regular
/// polygons; general pairs can violate it, and the report says so.
BoundReport product_check(const SecondMoments& moments, const CoefficientPair& pair, double tol = kDefaultTolerance);

/// mu D2p + nu D2q + 2 lambda Cpq >= hbar sqrt(mu nu - lambda^2).
/// Throws DomainError unless mu, nu > 0 and mu nu > lambda^2.
BoundReport linear_ur_check(const SecondMoments& moments, double mu, double nu, double lambda,
                            double tol = kDefaultTolerance);

/// sqrt(sum_{j>k} |hbar A_jk|^2), which equals hbar |a ^ b|.
double commutator_form_bound(const CoefficientPair& pair, double hbar = 1.0);

/// (1/(N-1)) sum_{j>k} hbar |A_jk|. Throws DomainError for N <= 2.
double pairwise_concatenated_bound(const CoefficientPair& pair, double hbar = 1.0);

/// (arithmetic mean >= geometric mean, geometric mean >= hbar |a ^ b| / N).
std::pair<BoundReport, BoundReport> am_gm_chain_check(const SecondMoments& moments, const CoefficientPair& pair,
                                                      double tol = kDefaultTolerance);

/// Per-observable concavity D2_rho r_j >= sum_k w_k D2_k r_j, followed by
/// the same for the sum over j (last entry). Tolerance is absolute 1e-12.
std::vector<BoundReport> concavity_check(const MixtureState& mixture, const CoefficientPair& pair);

struct KktReport {
  int n = 0;
  double budget = 0.0;  // c = hbar |a ^ b|
  double expected_minimum = 0.0;  // (c/N)^N

  // Stationary point of prod x_j on sum x_j = c, found by a multiplicative
  // fixed-point iteration from random interior starts.
  std::vector<double> kkt_point;
  double kkt_value = 0.0;
  double kkt_spread = 0.0;  // max_j |x_j - c/N|
  bool kkt_converged = false;
  // Largest eigenvalue of the Hessian of prod x_j restricted to the face
  // sum x_j = c at the KKT point. Negative: the point is a maximum of the
  // product over the face, and the product is unbounded below (-> 0) there.
  double face_curvature = 0.0;

  // Minimum of prod_j D2r_j over admissible states, located by multi-start
  // Nelder-Mead over pure Gaussians (squeeze, rotation). Mixed states only
  // add to every variance, so pure states suffice.
  std::vector<double> state_minimizer;  // variances at the minimum
  double state_minimum = 0.0;
  double relative_error = 0.0;  // |state_minimum - expected| / expected
  bool state_converged = false;
};

/// Numerical cross-check of the product bound. `samples` random starts are
/// used by both searches. Throws DegenerateError for collinear pairs.
KktReport kkt_cross_check(const CoefficientPair& pair, double hbar = 1.0, int samples = 16, std::uint64_t seed = 1);

nlohmann::json to_json(const KktReport& report);

}  // namespace quadsure
