#include "quadsure/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "quadsure/errors.hpp"

namespace quadsure {

namespace {

constexpr double kPi = std::numbers::pi;

// det cov carries rounding of order eps * var_p * var_q, so strongly
// squeezed states need a slack that grows with the diagonal product.
double admissibility_slack(const Eigen::Matrix2d& cov, double hbar) {
  return 1e-12 * std::max({1.0, hbar * hbar, std::abs(cov(0, 0) * cov(1, 1))});
}

// Spectral derivative d/dq of periodic samples with spacing dq.
std::vector<Complex> spectral_derivative(std::span<const Complex> samples, double dq) {
  const int m = static_cast<int>(samples.size());
  std::vector<Complex> work(samples.begin(), samples.end());
  detail::fft_forward(work);
  const double dk = 2.0 * kPi / (m * dq);
  for (int i = 0; i < m; ++i) {
    const int signed_index = i < m / 2 ? i : i - m;
    // The Nyquist mode has no consistent sign for a real derivative.
    const double k = (i == m / 2) ? 0.0 : signed_index * dk;
    work[i] *= Complex(0.0, k) / static_cast<double>(m);
  }
  detail::fft_backward(work);
  return work;
}

}  // namespace

bool SecondMoments::admissible() const {
  if (!mean.allFinite() || !cov.allFinite() || !(hbar > 0.0)) return false;
  if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff())) return false;
  if (!(cov(0, 0) > 0.0) || !(cov(1, 1) > 0.0)) return false;
  return cov.determinant() >= 0.25 * hbar * hbar - admissibility_slack(cov, hbar);
}

GaussianState::GaussianState(Eigen::Vector2d mean, Eigen::Matrix2d cov, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive and finite");
  moments_ = {std::move(mean), std::move(cov), hbar};
  if (!moments_.admissible()) {
    throw DomainError("inadmissible Gaussian state: need symmetric positive covariance with det >= hbar^2/4 (det = " +
                      std::to_string(moments_.cov.determinant()) + ", hbar^2/4 = " + std::to_string(0.25 * hbar * hbar) +
                      ")");
  }
  // Symmetrize exactly so downstream code can read either off-diagonal.
  const double c = 0.5 * (moments_.cov(0, 1) + moments_.cov(1, 0));
  moments_.cov(0, 1) = moments_.cov(1, 0) = c;
}

bool GaussianState::is_pure(double tol) const {
  const double floor = 0.25 * hbar() * hbar();
  return std::abs(cov().determinant() - floor) <= tol * floor;
}

GaussianState ground_state(double hbar) {
  return {Eigen::Vector2d::Zero(), 0.5 * hbar * Eigen::Matrix2d::Identity(), hbar};
}

MixtureState::MixtureState(std::vector<double> weights, std::vector<GaussianState> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (weights_.empty() || weights_.size() != components_.size()) {
    throw DomainError("mixture needs one weight per component and at least one component");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
  for (const auto& c : components_) {
    if (c.hbar() != components_.front().hbar()) throw DomainError("mixture components must share hbar");
  }
}

SecondMoments MixtureState::moments() const {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d raw = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const auto& c = components_[k];
    mean += weights_[k] * c.mean();
    raw += weights_[k] * (c.cov() + c.mean() * c.mean().transpose());
  }
  return {mean, raw - mean * mean.transpose(), hbar()};
}

GridSpec GridSpec::symmetric(int m, double halfwidth, double hbar) {
  const double width = 2.0 * halfwidth * std::sqrt(hbar);
  return {m, -0.5 * width, width / m, hbar};
}

void GridSpec::validate() const {
  if (m < 256 || !std::has_single_bit(static_cast<unsigned>(m))) {
    throw DomainError("grid size must be a power of two >= 256, got " + std::to_string(m));
  }
  if (!(dq > 0.0) || !std::isfinite(dq) || !std::isfinite(q_min)) throw DomainError("grid spacing must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive and finite");
}

GridWavefunction::GridWavefunction(std::vector<Complex> samples, GridSpec grid)
    : samples_(std::move(samples)), grid_(grid) {
  grid_.validate();
  if (static_cast<int>(samples_.size()) != grid_.m) throw DomainError("sample count does not match grid size");
  double norm = 0.0, peak = 0.0;
  for (const auto& s : samples_) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("wavefunction samples must be finite");
    norm += std::norm(s);
    peak = std::max(peak, std::abs(s));
  }
  norm *= grid_.dq;
  if (std::abs(norm - 1.0) > 1e-10) {
    throw DomainError("wavefunction not normalized: sum |psi|^2 dq = " + std::to_string(norm));
  }
  const double edge = std::max(std::abs(samples_.front()), std::abs(samples_.back()));
  if (edge >= 1e-8 * peak) {
    throw LeakageError("wavefunction reaches the grid boundary (|psi_edge|/max|psi| = " + std::to_string(edge / peak) +
                       "); widen the grid");
  }
}

GridWavefunction GridWavefunction::normalized(std::vector<Complex> samples, GridSpec grid) {
  grid.validate();
  double norm = 0.0;
  for (const auto& s : samples) norm += std::norm(s);
  norm *= grid.dq;
  if (!(norm > 0.0)) throw DomainError("cannot normalize a zero wavefunction");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& s : samples) s *= scale;
  return {std::move(samples), grid};
}

std::vector<double> GridWavefunction::position_density() const {
  std::vector<double> rho(samples_.size());
  std::transform(samples_.begin(), samples_.end(), rho.begin(), [](Complex s) { return std::norm(s); });
  return rho;
}

MomentumSamples momentum_representation(const GridWavefunction& psi) {
  const auto& g = psi.grid();
  const int m = g.m;
  std::vector<Complex> work(psi.samples().begin(), psi.samples().end());
  for (int k = 1; k < m; k += 2) work[k] = -work[k];
  detail::fft_forward(work);
  const double dp = 2.0 * kPi * g.hbar / (m * g.dq);
  const double prefactor = g.dq / std::sqrt(2.0 * kPi * g.hbar);
  MomentumSamples out;
  out.dp = dp;
  out.p_min = -0.5 * m * dp;
  out.samples.resize(m);
  for (int i = 0; i < m; ++i) {
    const double p = out.p_min + i * dp;
    // Bin i of the FFT is frequency i; with the (-1)^k modulation it lands on p_i.
    out.samples[i] = prefactor * std::polar(1.0, -p * g.q_min / g.hbar) * work[i];
  }
  return out;
}

GridWavefunction hermite_superposition(std::span<const Complex> coeffs, const GridSpec& grid) {
  grid.validate();
  if (coeffs.empty()) throw DomainError("need at least one Hermite coefficient");
  double weight = 0.0;
  for (const auto& c : coeffs) weight += std::norm(c);
  if (!(weight > 0.0)) throw DomainError("Hermite coefficients are all zero");

  const int n_max = static_cast<int>(coeffs.size()) - 1;
  const double root_hbar = std::sqrt(grid.hbar);
  const double reach = (std::sqrt(2.0 * n_max + 1.0) + 6.0) * root_hbar;
  if (grid.q_min > -reach || grid.q_max() < reach) {
    throw LeakageError("grid too narrow for Hermite level " + std::to_string(n_max) + ": need +-" +
                       std::to_string(reach));
  }

  const double c0 = std::pow(kPi * grid.hbar, -0.25);
  std::vector<Complex> samples(grid.m);
  for (int k = 0; k < grid.m; ++k) {
    const double x = grid.q(k) / root_hbar;
    double prev = 0.0;
    double curr = c0 * std::exp(-0.5 * x * x);
    Complex acc = coeffs[0] * curr;
    for (int n = 0; n < n_max; ++n) {
      const double next = std::sqrt(2.0 / (n + 1)) * x * curr - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
      prev = curr;
      curr = next;
      acc += coeffs[n + 1] * curr;
    }
    samples[k] = acc;
  }
  return GridWavefunction::normalized(std::move(samples), grid);
}

GridWavefunction gaussian_on_grid(const GaussianState& state, const GridSpec& grid) {
  grid.validate();
  if (state.hbar() != grid.hbar) throw DomainError("state and grid disagree on hbar");
  if (!state.is_pure(1e-9)) throw DomainError("only pure Gaussian states have a wavefunction");
  const double hbar = state.hbar();
  const double var_q = state.cov()(1, 1);
  const double alpha = hbar / (2.0 * var_q);
  const double beta = state.cov()(0, 1) / var_q;
  const double p0 = state.mean()(0);
  const double q0 = state.mean()(1);
  std::vector<Complex> samples(grid.m);
  for (int k = 0; k < grid.m; ++k) {
    const double x = grid.q(k) - q0;
    const Complex exponent = Complex(-alpha * x * x, beta * x * x + 2.0 * p0 * x) / (2.0 * hbar);
    samples[k] = std::exp(exponent);
  }
  return GridWavefunction::normalized(std::move(samples), grid);
}

SecondMoments grid_moments(const GridWavefunction& psi) {
  const auto& g = psi.grid();
  const auto samples = psi.samples();

  double mean_q = 0.0;
  for (int k = 0; k < g.m; ++k) mean_q += g.q(k) * std::norm(samples[k]);
  mean_q *= g.dq;
  double var_q = 0.0;
  for (int k = 0; k < g.m; ++k) var_q += (g.q(k) - mean_q) * (g.q(k) - mean_q) * std::norm(samples[k]);
  var_q *= g.dq;

  const auto mom = momentum_representation(psi);
  double mean_p = 0.0;
  for (int i = 0; i < g.m; ++i) mean_p += (mom.p_min + i * mom.dp) * std::norm(mom.samples[i]);
  mean_p *= mom.dp;
  double var_p = 0.0;
  for (int i = 0; i < g.m; ++i) {
    const double d = mom.p_min + i * mom.dp - mean_p;
    var_p += d * d * std::norm(mom.samples[i]);
  }
  var_p *= mom.dp;

  const auto derivative = spectral_derivative(samples, g.dq);
  Complex qp = 0.0;
  for (int k = 0; k < g.m; ++k) qp += std::conj(samples[k]) * g.q(k) * Complex(0.0, -g.hbar) * derivative[k];
  qp *= g.dq;
  const double cov_pq = qp.real() - mean_q * mean_p;

  SecondMoments out;
  out.mean = {mean_p, mean_q};
  out.cov << var_p, cov_pq, cov_pq, var_q;
  out.hbar = g.hbar;
  if (!out.admissible()) throw DomainError("grid moments are inadmissible; grid too coarse or state not resolved");
  return out;
}

nlohmann::json to_json(const GaussianState& state) {
  return {{"type", "gaussian"},
          {"hbar", state.hbar()},
          {"mean", {state.mean()(0), state.mean()(1)}},
          {"cov", {{state.cov()(0, 0), state.cov()(0, 1)}, {state.cov()(1, 0), state.cov()(1, 1)}}}};
}

nlohmann::json to_json(const GridWavefunction& psi) {
  std::vector<double> re, im;
  re.reserve(psi.size());
  im.reserve(psi.size());
  for (const auto& s : psi.samples()) {
    re.push_back(s.real());
    im.push_back(s.imag());
  }
  return {{"type", "grid"}, {"hbar", psi.hbar()}, {"q_min", psi.grid().q_min},
          {"dq", psi.grid().dq}, {"re", re},        {"im", im}};
}

AnyState state_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    const double hbar = j.at("hbar").get<double>();
    if (type == "gaussian") {
      const auto mean = j.at("mean").get<std::vector<double>>();
      const auto cov = j.at("cov").get<std::vector<std::vector<double>>>();
      if (mean.size() != 2 || cov.size() != 2 || cov[0].size() != 2 || cov[1].size() != 2) {
        throw DomainError("gaussian state needs mean[2] and cov[2][2]");
      }
      Eigen::Matrix2d c;
      c << cov[0][0], cov[0][1], cov[1][0], cov[1][1];
      return GaussianState({mean[0], mean[1]}, c, hbar);
    }
    if (type == "grid") {
      const auto re = j.at("re").get<std::vector<double>>();
      const auto im = j.at("im").get<std::vector<double>>();
      if (re.size() != im.size()) throw DomainError("grid state re/im lengths differ");
      std::vector<Complex> samples(re.size());
      for (std::size_t k = 0; k < re.size(); ++k) samples[k] = {re[k], im[k]};
      GridSpec grid{static_cast<int>(re.size()), j.at("q_min").get<double>(), j.at("dq").get<double>(), hbar};
      return GridWavefunction(std::move(samples), grid);
    }
    throw DomainError("unknown state type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed state JSON: ") + e.what());
  }
}

}  // namespace quadsure
