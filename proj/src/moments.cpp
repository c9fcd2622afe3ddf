#include "quadsure/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "quadsure/errors.hpp"
#include "quadsure/parallel.hpp"

namespace quadsure {

BoundReport BoundReport::make(std::string name, double lhs, double rhs, double tol) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.ratio = rhs == 0.0 ? std::numeric_limits<double>::infinity() : lhs / rhs;
  const double slack = tol * std::max(1.0, std::abs(rhs));
  r.satisfied = lhs >= rhs - slack;
  r.saturated = std::abs(lhs - rhs) <= slack;
  return r;
}

nlohmann::json to_json(const BoundReport& report) {
  // A null ratio marks a trivial bound.
  nlohmann::json ratio = nullptr;
  if (std::isfinite(report.ratio)) ratio = report.ratio;
  return {{"name", report.name},           {"lhs", report.lhs},
          {"rhs", report.rhs},             {"ratio", ratio},
          {"satisfied", report.satisfied}, {"saturated", report.saturated},
          {"tol", report.tol}};
}

double VarianceVector::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double VarianceVector::product() const {
  return std::accumulate(values_.begin(), values_.end(), 1.0, std::multiplies<>());
}

VarianceVector variances(const SecondMoments& moments, const CoefficientPair& pair) {
  if (!moments.admissible()) throw DomainError("inadmissible moments: det cov < hbar^2/4");
  std::vector<double> out(static_cast<std::size_t>(pair.size()));
  for (int j = 0; j < pair.size(); ++j) {
    const double a = pair.a()[j], b = pair.b()[j];
    out[j] = a * a * moments.var_p() + b * b * moments.var_q() + 2.0 * a * b * moments.cov_pq();
  }
  return VarianceVector(std::move(out));
}

BoundReport sum_check(const SecondMoments& moments, const CoefficientPair& pair, double tol) {
  return BoundReport::make("sum", variances(moments, pair).sum(), moments.hbar * incompatibility(pair), tol);
}

BoundReport product_check(const SecondMoments& moments, const CoefficientPair& pair, double tol) {
  const double n = pair.size();
  const double rhs = std::pow(moments.hbar * incompatibility(pair) / n, n);
  return BoundReport::make("product", variances(moments, pair).product(), rhs, tol);
}

BoundReport linear_ur_check(const SecondMoments& moments, double mu, double nu, double lambda, double tol) {
  if (!(mu > 0.0) || !(nu > 0.0) || !(mu * nu > lambda * lambda)) {
    throw DomainError("linear uncertainty relation needs mu, nu > 0 and mu nu > lambda^2");
  }
  if (!moments.admissible()) throw DomainError("inadmissible moments: det cov < hbar^2/4");
  const double lhs = mu * moments.var_p() + nu * moments.var_q() + 2.0 * lambda * moments.cov_pq();
  return BoundReport::make("linear", lhs, moments.hbar * std::sqrt(mu * nu - lambda * lambda), tol);
}

double commutator_form_bound(const CoefficientPair& pair, double hbar) {
  const auto A = commutator_matrix(pair);
  double sum = 0.0;
  for (int j = 0; j < A.size(); ++j) {
    for (int k = 0; k < j; ++k) {
      const double c = hbar * A(j, k);
      sum += c * c;
    }
  }
  return std::sqrt(sum);
}

double pairwise_concatenated_bound(const CoefficientPair& pair, double hbar) {
  const int n = pair.size();
  if (n <= 2) throw DomainError("pairwise-concatenated bound is defined for N > 2");
  const auto A = commutator_matrix(pair);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) sum += hbar * std::abs(A(j, k));
  }
  return sum / (n - 1);
}

std::pair<BoundReport, BoundReport> am_gm_chain_check(const SecondMoments& moments, const CoefficientPair& pair,
                                                      double tol) {
  const auto v = variances(moments, pair);
  const double n = static_cast<double>(v.size());
  const double arithmetic = v.sum() / n;
  double log_sum = 0.0;
  for (double x : v.values()) log_sum += std::log(x);
  const double geometric = std::exp(log_sum / n);
  return {BoundReport::make("am_gm", arithmetic, geometric, tol),
          BoundReport::make("gm_bound", geometric, moments.hbar * incompatibility(pair) / n, tol)};
}

std::vector<BoundReport> concavity_check(const MixtureState& mixture, const CoefficientPair& pair) {
  constexpr double kTol = 1e-12;
  const auto mixed = variances(mixture.moments(), pair);
  std::vector<double> averaged(mixed.size(), 0.0);
  for (std::size_t k = 0; k < mixture.weights().size(); ++k) {
    const auto component = variances(mixture.components()[k].moments(), pair);
    for (std::size_t j = 0; j < averaged.size(); ++j) averaged[j] += mixture.weights()[k] * component[j];
  }
  std::vector<BoundReport> out;
  out.reserve(averaged.size() + 1);
  for (std::size_t j = 0; j < averaged.size(); ++j) {
    out.push_back(BoundReport::make("concavity_r" + std::to_string(j + 1), mixed[j], averaged[j], kTol));
  }
  out.push_back(BoundReport::make("concavity_sum", mixed.sum(),
                                  std::accumulate(averaged.begin(), averaged.end(), 0.0), kTol));
  return out;
}

namespace {

struct FaceSearch {
  std::vector<double> x;
  bool converged = false;
};

// Multiplicative fixed-point iteration x_j <- x_j (g_j / mean g)^w, with
// g_j = dJ/dx_j = J / x_j, followed by projection onto sum x = c. Its only
// interior fixed point is the KKT stationarity condition g_j = kappa.
FaceSearch solve_face_kkt(int n, double c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = uniform(rng);
  auto project = [&] {
    const double s = std::accumulate(x.begin(), x.end(), 0.0);
    for (double& v : x) v *= c / s;
  };
  project();
  constexpr double kWeight = 0.5;
  std::vector<double> g(n);
  for (int it = 0; it < 500; ++it) {
    // J / x_j evaluated in logs so large N and c cannot overflow.
    double log_j = 0.0;
    for (double v : x) log_j += std::log(v);
    for (int j = 0; j < n; ++j) g[j] = std::exp(log_j - std::log(x[j]) - log_j / n);
    const double mean_g = std::accumulate(g.begin(), g.end(), 0.0) / n;
    for (int j = 0; j < n; ++j) x[j] *= std::pow(g[j] / mean_g, kWeight);
    project();
    double spread = 0.0;
    for (double v : x) spread = std::max(spread, std::abs(v - c / n));
    if (spread <= 1e-14 * c) return {x, true};
  }
  return {x, false};
}

// Hessian of J = prod x restricted to the tangent space of sum x = c.
double face_curvature(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  double j_value = 1.0;
  for (double v : x) j_value *= v;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) h(a, b) = j_value / (x[a] * x[b]);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::VectorXd::Ones(n));
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd tangent = q.rightCols(n - 1);
  const Eigen::MatrixXd reduced = tangent.transpose() * h * tangent;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
  return eig.eigenvalues().maxCoeff();
}

struct StateSearch {
  std::array<double, 2> point{};  // (log-squeeze u, rotation theta)
  double value = 0.0;              // sum_j ln D2r_j
  bool converged = false;
};

// sum_j ln D2r_j for the pure Gaussian (hbar/2) R diag(e^{2u}, e^{-2u}) R^T.
double log_product(const CoefficientPair& pair, double hbar, std::array<double, 2> x) {
  const double u = std::clamp(x[0], -30.0, 30.0);
  const double c = std::cos(x[1]), s = std::sin(x[1]);
  const double wide = std::exp(2.0 * u), narrow = std::exp(-2.0 * u);
  double total = 0.0;
  for (int j = 0; j < pair.size(); ++j) {
    const double a = pair.a()[j], b = pair.b()[j];
    const double along = c * a + s * b;
    const double across = -s * a + c * b;
    total += std::log(0.5 * hbar * (along * along * wide + across * across * narrow));
  }
  return total;
}

StateSearch nelder_mead(const CoefficientPair& pair, double hbar, std::array<double, 2> start) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> simplex{start, Point{start[0] + 0.3, start[1]}, Point{start[0], start[1] + 0.3}};
  std::array<double, 3> f{};
  for (int i = 0; i < 3; ++i) f[i] = log_product(pair, hbar, simplex[i]);
  auto lerp = [](const Point& p, const Point& q, double t) { return Point{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])}; };

  for (int it = 0; it < 4000; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int l, int r) { return f[l] < f[r]; });
    const int best = order[0], mid = order[1], worst = order[2];
    const double size = std::max(std::hypot(simplex[mid][0] - simplex[best][0], simplex[mid][1] - simplex[best][1]),
                                 std::hypot(simplex[worst][0] - simplex[best][0], simplex[worst][1] - simplex[best][1]));
    if (size < 1e-11 && f[worst] - f[best] < 1e-14) return {simplex[best], f[best], true};

    const Point centroid = lerp(simplex[best], simplex[mid], 0.5);
    const Point reflected = lerp(simplex[worst], centroid, 2.0);
    const double fr = log_product(pair, hbar, reflected);
    if (fr < f[best]) {
      const Point expanded = lerp(simplex[worst], centroid, 3.0);
      const double fe = log_product(pair, hbar, expanded);
      if (fe < fr) {
        simplex[worst] = expanded, f[worst] = fe;
      } else {
        simplex[worst] = reflected, f[worst] = fr;
      }
    } else if (fr < f[mid]) {
      simplex[worst] = reflected, f[worst] = fr;
    } else {
      const Point contracted =
          fr < f[worst] ? lerp(simplex[worst], centroid, 1.5) : lerp(simplex[worst], centroid, 0.5);
      const double fc = log_product(pair, hbar, contracted);
      if (fc < std::min(fr, f[worst])) {
        simplex[worst] = contracted, f[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          simplex[i] = lerp(simplex[best], simplex[i], 0.5);
          f[i] = log_product(pair, hbar, simplex[i]);
        }
      }
    }
  }
  const int best = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  return {simplex[best], f[best], false};
}

}  // namespace

KktReport kkt_cross_check(const CoefficientPair& pair, double hbar, int samples, std::uint64_t seed) {
  const double inc = incompatibility(pair);
  if (!(inc > 1e-12)) throw DegenerateError("compatible set: product bound is zero, nothing to cross-check");
  if (samples < 1) throw DomainError("kkt_cross_check needs at least one sample");

  KktReport report;
  report.n = pair.size();
  report.budget = hbar * inc;
  report.expected_minimum = std::pow(report.budget / report.n, report.n);

  const auto faces = parallel_map<FaceSearch>(static_cast<std::size_t>(samples), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, 2 * i));
    return solve_face_kkt(report.n, report.budget, rng);
  });
  const FaceSearch* face = &faces.front();
  for (const auto& f : faces) {
    if (f.converged) {
      face = &f;
      break;
    }
  }
  report.kkt_point = face->x;
  report.kkt_converged = face->converged;
  report.kkt_value = std::accumulate(face->x.begin(), face->x.end(), 1.0, std::multiplies<>());
  for (double v : face->x) report.kkt_spread = std::max(report.kkt_spread, std::abs(v - report.budget / report.n));
  report.face_curvature = face_curvature(face->x);

  const auto searches = parallel_map<StateSearch>(static_cast<std::size_t>(samples), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, 2 * i + 1));
    std::uniform_real_distribution<double> squeeze(-1.5, 1.5), angle(0.0, std::numbers::pi);
    return nelder_mead(pair, hbar, {squeeze(rng), angle(rng)});
  });
  const StateSearch* best = &searches.front();
  for (const auto& s : searches) {
    if (s.value < best->value) best = &s;
  }
  report.state_converged = best->converged;
  report.state_minimum = std::exp(best->value);
  report.relative_error = std::abs(report.state_minimum - report.expected_minimum) / report.expected_minimum;
  const double u = best->point[0], theta = best->point[1];
  const double c = std::cos(theta), s = std::sin(theta);
  for (int j = 0; j < pair.size(); ++j) {
    const double along = c * pair.a()[j] + s * pair.b()[j];
    const double across = -s * pair.a()[j] + c * pair.b()[j];
    report.state_minimizer.push_back(0.5 * hbar * (along * along * std::exp(2 * u) + across * across * std::exp(-2 * u)));
  }
  return report;
}

nlohmann::json to_json(const KktReport& r) {
  return {{"n", r.n},
          {"budget", r.budget},
          {"expected_minimum", r.expected_minimum},
          {"kkt_point", r.kkt_point},
          {"kkt_value", r.kkt_value},
          {"kkt_spread", r.kkt_spread},
          {"kkt_converged", r.kkt_converged},
          {"face_curvature", r.face_curvature},
          {"state_minimizer", r.state_minimizer},
          {"state_minimum", r.state_minimum},
          {"relative_error", r.relative_error},
          {"state_converged", r.state_converged}};
}

}  // namespace quadsure
