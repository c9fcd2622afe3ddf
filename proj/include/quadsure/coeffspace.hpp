#pragma once

// Geometry of the coefficient space R^N.
//
// N observables r_j = a_j p + b_j q are stored as a pair of vectors (a, b).
// Their commutators [r_j, r_k] = A_jk (hbar/i) are encoded in the
// antisymmetric matrix A_jk = a_j b_k - a_k b_j, and the degree of
// incompatibility is the bivector norm |a ^ b|.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace quadsure {

class CoefficientPair {
 public:
  /// Throws DomainError unless len(a) == len(b) >= 2 and all entries are finite.
  CoefficientPair(Eigen::VectorXd a, Eigen::VectorXd b);

  /// Unit-length rows at the given phase-space angles, scaled by `radius`:
  /// a_j = radius cos(theta_j), b_j = radius sin(theta_j).
  static CoefficientPair from_angles(std::span<const double> angles, double radius = 1.0);

  const Eigen::VectorXd& a() const noexcept { return a_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }
  int size() const noexcept { return static_cast<int>(a_.size()); }

  /// Row r_j = (a_j, b_j) in phase space.
  Eigen::Vector2d row(int j) const { return {a_[j], b_[j]}; }
  double row_length(int j) const { return row(j).norm(); }

  /// (a, b) -> (s a, s b). Incompatibility scales by s^2.
  CoefficientPair scaled(double s) const;

  /// r_j -> factors[j] r_j, i.e. rescaling each operator individually.
  CoefficientPair rows_scaled(std::span<const double> factors) const;

 private:
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
};

/// The canonical pair (p, q): a = (1, 0), b = (0, 1).
CoefficientPair canonical_pair();

class AntisymmetricMatrix {
 public:
  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  double operator()(int j, int k) const { return entries_(j, k); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

 private:
  friend AntisymmetricMatrix commutator_matrix(const CoefficientPair&);
  explicit AntisymmetricMatrix(Eigen::MatrixXd m) : entries_(std::move(m)) {}
  Eigen::MatrixXd entries_;
};

/// A_jk = a_j b_k - a_k b_j. Only the strict upper triangle is computed;
/// the lower one is its exact negation.
AntisymmetricMatrix commutator_matrix(const CoefficientPair& pair);

/// The three algebraically equivalent routes to |a ^ b|.
struct IncompatibilityForms {
  double lagrange;   // sqrt(|a|^2 |b|^2 - (a.b)^2)
  double pairwise;   // sqrt(sum_{j>k} A_jk^2)
  double frobenius;  // sqrt(Tr(A^T A) / 2)
};

IncompatibilityForms incompatibility_forms(const CoefficientPair& pair);

/// Degree of incompatibility |a ^ b| via Lagrange's identity.
double incompatibility(const CoefficientPair& pair);

struct PolygonSpec {
  int n;
  double radius;

  /// Vertex angle 2 pi j / n for zero-based j.
  double angle(int j) const;
};

/// Vertices of a regular n-gon of circumradius R with the first vertex on
/// the momentum axis. Throws DomainError for n < 2 or R <= 0.
CoefficientPair regular_polygon(const PolygonSpec& spec);

/// R_N = 1 / sqrt(sin(2 pi / N)); adjacent observables are then canonical.
/// Throws DomainError for N <= 2.
double canonical_circumradius(int n);

/// Area enclosed by the closed polygon through the row vectors in index
/// order, (1/2) sum_j A_{j,j+1} with cyclic wrap. For a canonical N-gon this
/// is N/2, which differs from |a ^ b| = N/(2 sin(2 pi/N)).
double enclosed_area(const CoefficientPair& pair);

/// Inc^2 for unit rows at the given angles: sum_{j>k} sin^2(theta_j - theta_k).
double incompatibility_objective(std::span<const double> angles);

struct MaximizeResult {
  std::vector<double> angles;  // theta_1 = 0, others reduced to [0, 2 pi)
  double value = 0.0;          // Inc, not Inc^2
  double gap = 0.0;            // N/2 - value
  int restarts = 0;
  int converged_restarts = 0;
  /// Distinct angle sets (modulo 1e-6) whose value is within 1e-9 of the best.
  std::vector<std::vector<double>> distinct_maxima;
};

/// Multi-start gradient ascent of Inc^2 over unit rows with theta_1 pinned
/// to zero. Each restart uses a seed derived from `seed`, so the result is
/// a function of (n, seed, restarts) only. Throws OptimizationError when no
/// restart converges.
MaximizeResult maximize_incompatibility(int n, std::uint64_t seed, int restarts = 32);

}  // namespace quadsure
