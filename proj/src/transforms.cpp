#include "quadsure/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "quadsure/errors.hpp"

namespace quadsure {

SymplecticMap::SymplecticMap(Eigen::Matrix2d m, MapKind kind, MapParams params)
    : m_(std::move(m)), kind_(kind), params_(params) {
  if (!m_.allFinite()) throw DomainError("symplectic map entries must be finite");
  const double det = m_.determinant();
  if (std::abs(det - 1.0) > 1e-12 * std::max(1.0, m_.cwiseAbs().maxCoeff() * m_.cwiseAbs().maxCoeff())) {
    throw DomainError("symplectic map must have unit determinant, got " + std::to_string(det));
  }
}

SymplecticMap SymplecticMap::inverse() const {
  // For det = 1 the inverse is the adjugate.
  Eigen::Matrix2d inv;
  inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
  switch (kind_) {
    case MapKind::gauge: return gauge_map(-params_.g);
    case MapKind::squeeze: return squeeze_map(1.0 / params_.gamma);
    case MapKind::rotation: return rotation_map(-params_.theta);
    case MapKind::composite: break;
  }
  return {inv, MapKind::composite, {}};
}

SymplecticMap gauge_map(double g) {
  Eigen::Matrix2d m;
  m << 1.0, 0.0, g, 1.0;
  return {m, MapKind::gauge, {.g = g}};
}

SymplecticMap squeeze_map(double gamma) {
  if (gamma == 0.0 || !std::isfinite(gamma)) throw DomainError("squeeze parameter must be finite and non-zero");
  Eigen::Matrix2d m;
  m << gamma, 0.0, 0.0, 1.0 / gamma;
  return {m, MapKind::squeeze, {.gamma = gamma}};
}

SymplecticMap rotation_map(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d m;
  m << c, s, -s, c;
  return {m, MapKind::rotation, {.theta = theta}};
}

SymplecticMap compose(const SymplecticMap& second, const SymplecticMap& first) {
  Eigen::Matrix2d m = second.matrix() * first.matrix();
  // Re-impose det = 1 against accumulated rounding in long products.
  m /= std::sqrt(m.determinant());
  return {m, MapKind::composite, {}};
}

GaussianState apply_map(const GaussianState& state, const SymplecticMap& map) {
  const auto& m = map.matrix();
  return {m * state.mean(), m * state.cov() * m.transpose(), state.hbar()};
}

GaussianState translate(const GaussianState& state, const Translation& t) {
  return {state.mean() + Eigen::Vector2d(t.dp, t.dq), state.cov(), state.hbar()};
}

GridWavefunction translate(const GridWavefunction& psi, const Translation& t) {
  const auto& g = psi.grid();
  const int m = g.m;
  std::vector<Complex> work(psi.samples().begin(), psi.samples().end());
  if (t.dq != 0.0) {
    detail::fft_forward(work);
    const double dk = 2.0 * std::numbers::pi / (m * g.dq);
    for (int i = 0; i < m; ++i) {
      const int signed_index = i < m / 2 ? i : i - m;
      work[i] *= std::polar(1.0 / m, -signed_index * dk * t.dq);
    }
    detail::fft_backward(work);
  }
  if (t.dp != 0.0) {
    for (int k = 0; k < m; ++k) work[k] *= std::polar(1.0, t.dp * g.q(k) / g.hbar);
  }
  return GridWavefunction::normalized(std::move(work), g);
}

CoefficientPair coefficient_action(const CoefficientPair& pair, const SymplecticMap& map) {
  const auto& m = map.matrix();
  return {m(0, 0) * pair.a() + m(0, 1) * pair.b(), m(1, 0) * pair.a() + m(1, 1) * pair.b()};
}

namespace {

// Orthonormal rows: the given unit vectors first, then standard basis
// vectors in index order, skipping any whose residual is below 1e-8.
Eigen::MatrixXd complete_basis(const Eigen::VectorXd& first, const Eigen::VectorXd& second) {
  const Eigen::Index n = first.size();
  Eigen::MatrixXd rows(n, n);
  rows.row(0) = first.transpose();
  rows.row(1) = second.transpose();
  Eigen::Index filled = 2;
  for (Eigen::Index i = 0; i < n && filled < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index r = 0; r < filled; ++r) v -= rows.row(r).dot(v) * rows.row(r).transpose();
    }
    const double len = v.norm();
    if (len < 1e-8) continue;
    rows.row(filled++) = (v / len).transpose();
  }
  return rows;
}

}  // namespace

StandardFormResult standard_form(const CoefficientPair& pair) {
  const double inc = incompatibility(pair);
  const double scale = pair.a().norm() * pair.b().norm();
  if (!(inc > 1e-12 * std::max(1.0, scale))) {
    throw DegenerateError("compatible set, no standard form: a and b are collinear (|a^b| = " + std::to_string(inc) +
                          ")");
  }
  const double g = -pair.a().dot(pair.b()) / pair.a().squaredNorm();
  const auto rect = coefficient_action(pair, gauge_map(g));
  const double gamma = std::sqrt(rect.b().norm() / rect.a().norm());
  const auto equal = coefficient_action(rect, squeeze_map(gamma));

  const Eigen::VectorXd e_a = equal.a().normalized();
  // Re-orthogonalize against rounding left over from the gauge step.
  Eigen::VectorXd e_b = equal.b() - e_a.dot(equal.b()) * e_a;
  e_b.normalize();
  Eigen::MatrixXd rotation = complete_basis(e_a, e_b);

  CoefficientPair reduced(rotation * equal.a(), rotation * equal.b());
  return {std::move(reduced), std::move(rotation), g, gamma};
}

CoefficientPair restore_pair(const StandardFormResult& result) {
  const CoefficientPair unrotated(result.rotation.transpose() * result.reduced.a(),
                                  result.rotation.transpose() * result.reduced.b());
  const auto unsqueezed = coefficient_action(unrotated, squeeze_map(1.0 / result.squeeze_gamma));
  return coefficient_action(unsqueezed, gauge_map(-result.gauge_g));
}

nlohmann::json to_json(const StandardFormResult& result) {
  const auto n = result.rotation.rows();
  std::vector<double> a(result.reduced.a().begin(), result.reduced.a().end());
  std::vector<double> b(result.reduced.b().begin(), result.reduced.b().end());
  std::vector<double> rotation;
  rotation.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rotation.push_back(result.rotation(i, j));
  }
  return {{"reduced_a", a},
          {"reduced_b", b},
          {"rotation", rotation},
          {"gauge_g", result.gauge_g},
          {"squeeze_gamma", result.squeeze_gamma}};
}

GaussianState extremal_state(double mu, double nu, double lambda, double hbar) {
  if (!(mu > 0.0) || !(nu > 0.0) || !(mu * nu > lambda * lambda)) {
    throw DomainError("extremal state needs mu, nu > 0 and mu nu > lambda^2");
  }
  const double det = std::sqrt(mu * nu - lambda * lambda);
  // The unitary gauge operator G_g shears the state's moments as q -> q - g p,
  // so G_{lambda/nu} acts on moments as gauge_map(-lambda/nu).
  const auto squeeze = squeeze_map(std::sqrt(nu / det));
  const auto shear = gauge_map(-lambda / nu);
  return apply_map(apply_map(ground_state(hbar), squeeze), shear);
}

}  // namespace quadsure
