#pragma once

// Quadrature densities of grid wavefunctions and their differential
// Shannon entropies.
//
// The quadrature at angle phi is p_phi = p cos(phi) + q sin(phi), so phi = 0
// is momentum and phi = pi/2 is position. Its density is the position
// density of exp(-i (pi/2 - phi) H / hbar) psi, H = (p^2 + q^2) / 2, which is
// evaluated as exact quarter turns (FFTs) plus one residual rotation of at
// most pi/4 done as chirp, momentum phase, chirp.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "quadsure/moments.hpp"
#include "quadsure/states.hpp"

namespace quadsure {

inline constexpr double kEntropyTolerance = 1e-6;
/// Margins of the N-term entropic inequality below -kConjectureSlack count
/// as counterexamples; anything above is numerical noise.
inline constexpr double kConjectureSlack = 1e-5;

/// ln(e pi), the Gaussian value of S_q + S_p.
double hirschman_bound();

class QuadratureDistribution {
 public:
  /// Entries in [-1e-14, 0) are clamped to zero; anything more negative, or
  /// a norm off by more than 1e-9, throws DomainError.
  QuadratureDistribution(std::vector<double> density, double r_min, double dr, double angle);

  std::span<const double> density() const noexcept { return density_; }
  double r_min() const noexcept { return r_min_; }
  double dr() const noexcept { return dr_; }
  double angle() const noexcept { return angle_; }
  double r(std::size_t k) const { return r_min_ + static_cast<double>(k) * dr_; }

  double mean() const;
  double variance() const;

 private:
  std::vector<double> density_;
  double r_min_;
  double dr_;
  double angle_;
};

/// Density of p cos(phi) + q sin(phi). Lands on the position grid of psi
/// when the nearest quarter turn count is even and on its momentum grid
/// (see momentum_representation) when it is odd. Throws LeakageError if the
/// rotated state reaches the grid edge.
QuadratureDistribution rotate_quadrature(const GridWavefunction& psi, double phi);

/// exp(+i theta H / hbar) psi on the same grid: the state whose moments are
/// transformed by rotation_map(theta).
GridWavefunction rotate_state(const GridWavefunction& psi, double theta);

/// -sum rho ln(sqrt(hbar) rho) dr, with 0 ln 0 = 0.
double shannon_entropy(const QuadratureDistribution& dist, double hbar);

/// S_q + S_p >= ln(e pi).
BoundReport hirschman_check(const GridWavefunction& psi, double tol = kEntropyTolerance);

/// D2p_phi >= (hbar / (2 e pi)) e^{2 S_phi}.
BoundReport variance_entropy_check(const GridWavefunction& psi, double phi, double tol = kEntropyTolerance);

struct EntropyReport {
  std::vector<double> angles;
  std::vector<double> entropies;
  double mean2 = 0.0;  // (2/N) sum S_j
  double bound = 0.0;  // ln(e pi)
  bool satisfied = false;  // margin >= -kConjectureSlack
  double margin = 0.0;
  // False for angle sets that are not a regular polygon; the ln(e pi) bound
  // is then reported but the conjecture does not apply.
  bool polygon = true;
};

/// Angles 2 pi j / N for N >= 3; N = 2 uses the orthogonal pair {0, pi/2}.
std::vector<double> polygon_angles(int n);

EntropyReport polygon_entropy_scan(const GridWavefunction& psi, int n);
EntropyReport entropy_scan(const GridWavefunction& psi, std::span<const double> angles);

nlohmann::json to_json(const EntropyReport& report);

/// prod D2r_j >= (hbar / (2 e pi))^N e^{2 sum S_j} >= (hbar/2)^N over the
/// polygon angles. The first link holds factor by factor; the second is the
/// N-term entropic inequality, proved only for N = 2.
struct EntropicChain {
  BoundReport variance_link;
  BoundReport entropy_link;
};

EntropicChain entropic_product_consistency(const GridWavefunction& psi, int n, double tol = kEntropyTolerance);

/// One random superposition of the lowest `levels` oscillator eigenstates
/// with complex Gaussian coefficients, normalized.
std::vector<Complex> random_superposition(int levels, std::uint64_t seed);

struct ScanRecord {
  std::size_t index = 0;
  std::vector<Complex> coeffs;
  EntropyReport report;
};

struct ConjectureScan {
  int levels = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<ScanRecord> records;  // in sample order
  double min_margin = 0.0;
  std::size_t argmin = 0;
  // Records with margin < -kConjectureSlack, kept with their coefficients.
  std::vector<ScanRecord> offenders;
};

/// Samples random `levels`-level superpositions on `grid` and scans each
/// over the N polygon angles. Sample i uses derive_seed(seed, i).
ConjectureScan conjecture_scan(int levels, int n, std::size_t samples, std::uint64_t seed, const GridSpec& grid);

nlohmann::json to_json(const ScanRecord& record);

}  // namespace quadsure
