#pragma once

// Linear canonical maps of the phase-space pair (p, q) and the reduction of
// the commutation relations of N observables to standard form.
//
// A SymplecticMap M acts on the moment vector, (p, q)^T -> M (p, q)^T, so
// a Gaussian state transforms as mean -> M mean, cov -> M cov M^T. The same
// matrix acts row-wise on coefficient pairs, (a_j, b_j)^T -> M (a_j, b_j)^T.
// Since det M = 1 every A_jk, and hence |a ^ b|, is unchanged.

#include <Eigen/Dense>

#include "json.hpp"
#include "quadsure/coeffspace.hpp"
#include "quadsure/states.hpp"

namespace quadsure {

enum class MapKind { gauge, squeeze, rotation, composite };

struct MapParams {
  double g = 0.0;      // gauge shear
  double gamma = 1.0;  // multiplicative squeeze, gamma = e^{s} for generator parameter s
  double theta = 0.0;  // rotation angle
};

class SymplecticMap {
 public:
  /// Throws DomainError if |det m - 1| > 1e-12.
  SymplecticMap(Eigen::Matrix2d m, MapKind kind, MapParams params);

  const Eigen::Matrix2d& matrix() const noexcept { return m_; }
  MapKind kind() const noexcept { return kind_; }
  const MapParams& params() const noexcept { return params_; }

  SymplecticMap inverse() const;

 private:
  Eigen::Matrix2d m_;
  MapKind kind_;
  MapParams params_;
};

/// (p, q) -> (p, q + g p)
SymplecticMap gauge_map(double g);
/// (p, q) -> (gamma p, q / gamma). Throws DomainError for gamma == 0.
SymplecticMap squeeze_map(double gamma);
/// (p, q) -> (p cos t + q sin t, -p sin t + q cos t)
SymplecticMap rotation_map(double theta);
/// Apply `second` after `first`.
SymplecticMap compose(const SymplecticMap& second, const SymplecticMap& first);

struct Translation {
  double dp = 0.0;
  double dq = 0.0;
};

GaussianState apply_map(const GaussianState& state, const SymplecticMap& map);
GaussianState translate(const GaussianState& state, const Translation& t);
/// Spectral shift by dq and momentum kick e^{i dp q / hbar}. The result must
/// still satisfy the boundary-decay invariant.
GridWavefunction translate(const GridWavefunction& psi, const Translation& t);

CoefficientPair coefficient_action(const CoefficientPair& pair, const SymplecticMap& map);

struct StandardFormResult {
  CoefficientPair reduced;
  Eigen::MatrixXd rotation;  // orthogonal N x N, rows e_a, e_b, completion
  double gauge_g = 0.0;
  double squeeze_gamma = 1.0;
};

/// Gauge to a rectangle (g = -a.b/|a|^2), squeeze to equal lengths
/// (gamma = (|b_perp|/|a_perp|)^{1/2}), then rotate R^N so that
/// a' = |a^b|^{1/2} e_1 and b' = |a^b|^{1/2} e_2. Throws DegenerateError for
/// collinear a, b (|a^b| <= 1e-12 relative).
StandardFormResult standard_form(const CoefficientPair& pair);

/// Undo a reduction: R^T, then squeeze(1/gamma), then gauge(-g).
CoefficientPair restore_pair(const StandardFormResult& result);

nlohmann::json to_json(const StandardFormResult& result);

/// Squeezed and sheared ground state saturating
/// mu D2p + nu D2q + 2 lambda Cpq >= hbar sqrt(mu nu - lambda^2):
/// cov = hbar / (2 sqrt(mu nu - lambda^2)) [[nu, -lambda], [-lambda, mu]].
/// Throws DomainError unless mu, nu > 0 and mu nu > lambda^2.
GaussianState extremal_state(double mu, double nu, double lambda, double hbar = 1.0);

}  // namespace quadsure
