#pragma once

// Quantum states of a single continuous variable, represented either by
// their first and second moments (Gaussian states and finite Gaussian
// mixtures) or by position-space samples on a uniform grid.
//
// Units: p and q carry dimension sqrt(hbar); hbar is an explicit field.
// Phase-space vectors are ordered (p, q) throughout.

#include <complex>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace quadsure {

using Complex = std::complex<double>;

/// Mean (p, q) and symmetric covariance [[D2p, Cpq], [Cpq, D2q]] of some
/// state. No admissibility is implied by the type itself.
struct SecondMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  double hbar = 1.0;

  double var_p() const { return cov(0, 0); }
  double var_q() const { return cov(1, 1); }
  double cov_pq() const { return cov(0, 1); }

  /// Symmetric, positive definite, det >= hbar^2/4 - 1e-12 max(1, hbar^2).
  bool admissible() const;
};

class GaussianState {
 public:
  /// Throws DomainError for non-finite input, asymmetric or inadmissible cov.
  GaussianState(Eigen::Vector2d mean, Eigen::Matrix2d cov, double hbar = 1.0);

  const Eigen::Vector2d& mean() const noexcept { return moments_.mean; }
  const Eigen::Matrix2d& cov() const noexcept { return moments_.cov; }
  double hbar() const noexcept { return moments_.hbar; }
  const SecondMoments& moments() const noexcept { return moments_; }

  /// det cov == hbar^2/4 within `tol` relative to hbar^2/4.
  bool is_pure(double tol = 1e-9) const;

 private:
  SecondMoments moments_;
};

/// Oscillator ground state: zero mean, cov = (hbar/2) I.
GaussianState ground_state(double hbar = 1.0);

class MixtureState {
 public:
  /// Weights must be non-negative and sum to 1 within 1e-12; components
  /// must share one hbar.
  MixtureState(std::vector<double> weights, std::vector<GaussianState> components);

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const GaussianState> components() const noexcept { return components_; }
  double hbar() const noexcept { return components_.front().hbar(); }

  /// Exact mixture moments: second moments average linearly, the mean
  /// outer product is subtracted afterwards.
  SecondMoments moments() const;

 private:
  std::vector<double> weights_;
  std::vector<GaussianState> components_;
};

/// Uniform position grid q_k = q_min + k dq, k = 0..m-1.
struct GridSpec {
  int m = 2048;
  double q_min = -16.0;
  double dq = 1.0 / 64.0;
  double hbar = 1.0;

  /// Symmetric grid over [-halfwidth sqrt(hbar), halfwidth sqrt(hbar)).
  static GridSpec symmetric(int m = 2048, double halfwidth = 16.0, double hbar = 1.0);

  double q(int k) const { return q_min + k * dq; }
  double q_max() const { return q_min + (m - 1) * dq; }
  /// Throws DomainError unless m is a power of two >= 256 and dq, hbar > 0.
  void validate() const;
};

class GridWavefunction {
 public:
  /// Validates the grid, unit norm (1e-10) and boundary decay
  /// (|psi| at both ends < 1e-8 max|psi|). Normalization failures throw
  /// DomainError, boundary failures throw LeakageError.
  GridWavefunction(std::vector<Complex> samples, GridSpec grid);

  /// Rescales to unit norm before validating.
  static GridWavefunction normalized(std::vector<Complex> samples, GridSpec grid);

  std::span<const Complex> samples() const noexcept { return samples_; }
  const GridSpec& grid() const noexcept { return grid_; }
  double hbar() const noexcept { return grid_.hbar; }
  int size() const noexcept { return grid_.m; }

  std::vector<double> position_density() const;

 private:
  std::vector<Complex> samples_;
  GridSpec grid_;
};

/// Momentum wavefunction psi(p) = (2 pi hbar)^{-1/2} int e^{-ipq/hbar} psi(q) dq
/// sampled on p_m = (m - M/2) dp, dp = 2 pi hbar / (M dq).
struct MomentumSamples {
  std::vector<Complex> samples;
  double p_min = 0.0;
  double dp = 0.0;
};

MomentumSamples momentum_representation(const GridWavefunction& psi);

/// Superposition sum_n c_n phi_n(q) of oscillator eigenfunctions (unit mass
/// and frequency). The grid must cover +-(sqrt(2 n_max + 1) + 6) sqrt(hbar).
GridWavefunction hermite_superposition(std::span<const Complex> coeffs, const GridSpec& grid);

/// Samples of the pure Gaussian with the given moments. Throws DomainError
/// for mixed (det > hbar^2/4) states.
GridWavefunction gaussian_on_grid(const GaussianState& state, const GridSpec& grid);

/// Mean, D2q by quadrature, D2p from the FFT momentum density, and
/// Cpq = Re int psi* q (-i hbar d/dq) psi dq - <q><p> with spectral
/// differentiation. Throws DomainError if the result is inadmissible.
SecondMoments grid_moments(const GridWavefunction& psi);

using AnyState = std::variant<GaussianState, GridWavefunction>;

nlohmann::json to_json(const GaussianState& state);
nlohmann::json to_json(const GridWavefunction& psi);
/// Accepts {"type":"gaussian",...} or {"type":"grid",...}; throws DomainError
/// on missing fields or unknown type.
AnyState state_from_json(const nlohmann::json& j);

}  // namespace quadsure
