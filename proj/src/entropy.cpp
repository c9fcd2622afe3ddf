#include "quadsure/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "fft.hpp"
#include "quadsure/errors.hpp"
#include "quadsure/parallel.hpp"

namespace quadsure {

namespace {

constexpr double kPi = std::numbers::pi;

struct GridSamples {
  std::vector<Complex> samples;
  GridSpec grid;
};

// exp(-i delta H / hbar) for |delta| <= pi/4 without leaving the grid:
// chirp tan(delta/2), free propagation sin(delta), chirp tan(delta/2).
void shear_rotate(GridSamples& s, double delta) {
  const auto& g = s.grid;
  const int m = g.m;
  const double t = std::tan(0.5 * delta);
  auto chirp = [&] {
    for (int k = 0; k < m; ++k) {
      const double x = g.q(k);
      s.samples[k] *= std::polar(1.0, -t * x * x / (2.0 * g.hbar));
    }
  };
  chirp();
  detail::fft_forward(s.samples);
  const double dk = 2.0 * kPi / (m * g.dq);
  const double sd = std::sin(delta);
  for (int i = 0; i < m; ++i) {
    const double kappa = (i < m / 2 ? i : i - m) * dk;
    s.samples[i] *= std::polar(1.0 / m, -sd * g.hbar * kappa * kappa / 2.0);
  }
  detail::fft_backward(s.samples);
  chirp();
}

// psi(x) -> psi(-x). Grids with q_min = -(m/2) dq are mapped onto themselves
// (sample k <-> m - k); other grids are mirrored.
void parity(GridSamples& s) {
  const auto& g = s.grid;
  const int m = g.m;
  if (std::abs(g.q_min + 0.5 * m * g.dq) <= 1e-12 * m * g.dq) {
    std::reverse(s.samples.begin() + 1, s.samples.end());
  } else {
    std::reverse(s.samples.begin(), s.samples.end());
    s.grid.q_min = -g.q_max();
  }
}

GridWavefunction checked(GridSamples s, double angle) {
  try {
    return GridWavefunction::normalized(std::move(s.samples), s.grid);
  } catch (const LeakageError& e) {
    throw LeakageError("rotation by " + std::to_string(angle) +
                       " pushes the state to the grid edge; increase the grid halfwidth (" + e.what() + ")");
  }
}

double wrap_angle(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w;
}

double circular_distance(double x, double y) {
  const double d = std::abs(wrap_angle(x) - wrap_angle(y));
  return std::min(d, 2.0 * kPi - d);
}

bool is_polygon(std::span<const double> angles) {
  const std::size_t n = angles.size();
  if (n < 2) return false;
  if (n == 2) return std::abs(circular_distance(angles[0], angles[1]) - 0.5 * kPi) <= 1e-9;
  std::vector<double> w(angles.begin(), angles.end());
  for (double& a : w) a = wrap_angle(a - angles[0]);
  std::sort(w.begin(), w.end());
  for (std::size_t j = 0; j < n; ++j) {
    if (circular_distance(w[j], 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n)) > 1e-9) return false;
  }
  return true;
}

}  // namespace

double hirschman_bound() { return std::log(std::numbers::e * kPi); }

QuadratureDistribution::QuadratureDistribution(std::vector<double> density, double r_min, double dr, double angle)
    : density_(std::move(density)), r_min_(r_min), dr_(dr), angle_(angle) {
  if (density_.empty() || !(dr_ > 0.0)) throw DomainError("quadrature density needs samples and dr > 0");
  double norm = 0.0;
  for (double& v : density_) {
    if (!std::isfinite(v) || v < -1e-14) throw DomainError("quadrature density has negative or non-finite entries");
    v = std::max(v, 0.0);
    norm += v;
  }
  norm *= dr_;
  if (std::abs(norm - 1.0) > 1e-9) {
    throw DomainError("quadrature density is not normalized: integral " + std::to_string(norm));
  }
}

double QuadratureDistribution::mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < density_.size(); ++k) s += r(k) * density_[k];
  return s * dr_;
}

double QuadratureDistribution::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t k = 0; k < density_.size(); ++k) {
    const double d = r(k) - mu;
    s += d * d * density_[k];
  }
  return s * dr_;
}

QuadratureDistribution rotate_quadrature(const GridWavefunction& psi, double phi) {
  const double alpha = 0.5 * kPi - phi;
  const long quarter = static_cast<long>(std::floor((alpha + 0.25 * kPi) / (0.5 * kPi)));
  const double delta = alpha - static_cast<double>(quarter) * 0.5 * kPi;
  const long turns = ((quarter % 4) + 4) % 4;

  GridSamples s{{psi.samples().begin(), psi.samples().end()}, psi.grid()};
  if (delta != 0.0) {
    shear_rotate(s, delta);
    const auto rotated = checked(std::move(s), phi);
    s = {{rotated.samples().begin(), rotated.samples().end()}, rotated.grid()};
  }
  if (turns % 2 == 1) {
    auto mom = momentum_representation(GridWavefunction(std::move(s.samples), s.grid));
    s.grid = GridSpec{s.grid.m, mom.p_min, mom.dp, s.grid.hbar};
    s.samples = std::move(mom.samples);
  }
  if (turns >= 2) parity(s);
  const auto final_state = checked(std::move(s), phi);

  std::vector<double> density(static_cast<std::size_t>(final_state.size()));
  for (std::size_t k = 0; k < density.size(); ++k) density[k] = std::norm(final_state.samples()[k]);
  return {std::move(density), final_state.grid().q_min, final_state.grid().dq, wrap_angle(phi)};
}

GridWavefunction rotate_state(const GridWavefunction& psi, double theta) {
  const double alpha = -theta;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(alpha) / (0.25 * kPi))));
  GridSamples s{{psi.samples().begin(), psi.samples().end()}, psi.grid()};
  if (alpha != 0.0) {
    for (int i = 0; i < steps; ++i) shear_rotate(s, alpha / steps);
  }
  return checked(std::move(s), theta);
}

double shannon_entropy(const QuadratureDistribution& dist, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const double root_hbar = std::sqrt(hbar);
  double s = 0.0;
  for (double rho : dist.density()) {
    if (rho == 0.0) continue;
    s -= rho * std::log(root_hbar * std::max(rho, 1e-300));
  }
  return s * dist.dr();
}

BoundReport hirschman_check(const GridWavefunction& psi, double tol) {
  const double sq = shannon_entropy(rotate_quadrature(psi, 0.5 * kPi), psi.hbar());
  const double sp = shannon_entropy(rotate_quadrature(psi, 0.0), psi.hbar());
  return BoundReport::make("hirschman", sq + sp, hirschman_bound(), tol);
}

BoundReport variance_entropy_check(const GridWavefunction& psi, double phi, double tol) {
  const auto dist = rotate_quadrature(psi, phi);
  const double s = shannon_entropy(dist, psi.hbar());
  const double rhs = psi.hbar() / (2.0 * std::numbers::e * kPi) * std::exp(2.0 * s);
  return BoundReport::make("variance_entropy", dist.variance(), rhs, tol);
}

std::vector<double> polygon_angles(int n) {
  if (n < 2) throw DomainError("polygon entropy scan needs N >= 2");
  if (n == 2) return {0.0, 0.5 * kPi};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[j] = 2.0 * kPi * j / n;
  return out;
}

EntropyReport entropy_scan(const GridWavefunction& psi, std::span<const double> angles) {
  if (angles.empty()) throw DomainError("entropy scan needs at least one angle");
  EntropyReport r;
  r.angles.assign(angles.begin(), angles.end());
  r.entropies = parallel_map<double>(angles.size(), [&](std::size_t j) {
    return shannon_entropy(rotate_quadrature(psi, angles[j]), psi.hbar());
  });
  r.mean2 = 2.0 * std::accumulate(r.entropies.begin(), r.entropies.end(), 0.0) / static_cast<double>(angles.size());
  r.bound = hirschman_bound();
  r.margin = r.mean2 - r.bound;
  r.satisfied = r.margin >= -kConjectureSlack;
  r.polygon = is_polygon(angles);
  return r;
}

EntropyReport polygon_entropy_scan(const GridWavefunction& psi, int n) {
  const auto angles = polygon_angles(n);
  return entropy_scan(psi, angles);
}

nlohmann::json to_json(const EntropyReport& r) {
  return {{"angles", r.angles},
          {"entropies", r.entropies},
          {"mean2", r.mean2},
          {"bound", r.bound},
          {"margin", r.margin},
          {"satisfied", r.satisfied},
          {"conjecture_applicable", r.polygon}};
}

EntropicChain entropic_product_consistency(const GridWavefunction& psi, int n, double tol) {
  const auto angles = polygon_angles(n);
  struct Quadrature {
    double variance = 0.0;
    double entropy = 0.0;
  };
  const auto parts = parallel_map<Quadrature>(angles.size(), [&](std::size_t j) {
    const auto dist = rotate_quadrature(psi, angles[j]);
    return Quadrature{dist.variance(), shannon_entropy(dist, psi.hbar())};
  });
  double product = 1.0, entropy_sum = 0.0;
  for (const auto& q : parts) {
    product *= q.variance;
    entropy_sum += q.entropy;
  }
  const double hbar = psi.hbar();
  const double nn = static_cast<double>(angles.size());
  const double entropic = std::pow(hbar / (2.0 * std::numbers::e * kPi), nn) * std::exp(2.0 * entropy_sum);
  return {BoundReport::make("variance_link", product, entropic, tol),
          BoundReport::make("entropy_link", entropic, std::pow(0.5 * hbar, nn), tol)};
}

std::vector<Complex> random_superposition(int levels, std::uint64_t seed) {
  if (levels < 1) throw DomainError("superposition needs at least one level");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> c(static_cast<std::size_t>(levels));
  double norm = 0.0;
  for (auto& x : c) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = {re, im};
    norm += std::norm(x);
  }
  for (auto& x : c) x /= std::sqrt(norm);
  return c;
}

ConjectureScan conjecture_scan(int levels, int n, std::size_t samples, std::uint64_t seed, const GridSpec& grid) {
  ConjectureScan scan;
  scan.levels = levels;
  scan.n = n;
  scan.seed = seed;
  scan.records = parallel_map<ScanRecord>(samples, [&](std::size_t i) {
    ScanRecord rec;
    rec.index = i;
    rec.coeffs = random_superposition(levels, derive_seed(seed, i));
    rec.report = polygon_entropy_scan(hermite_superposition(rec.coeffs, grid), n);
    return rec;
  });
  scan.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& rec : scan.records) {
    if (rec.report.margin < scan.min_margin) {
      scan.min_margin = rec.report.margin;
      scan.argmin = rec.index;
    }
    if (rec.report.margin < -kConjectureSlack) scan.offenders.push_back(rec);
  }
  return scan;
}

nlohmann::json to_json(const ScanRecord& record) {
  std::vector<double> re, im;
  for (const auto& c : record.coeffs) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  auto j = to_json(record.report);
  j["index"] = record.index;
  j["state"] = {{"type", "hermite"}, {"re", re}, {"im", im}};
  return j;
}

}  // namespace quadsure
