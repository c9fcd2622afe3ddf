#include "quadsure/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "quadsure/entropy.hpp"
#include "quadsure/errors.hpp"
#include "quadsure/transforms.hpp"

namespace quadsure::cli {

namespace {

struct Options {
  std::string config;
  std::optional<double> hbar, grid_halfwidth, tol;
  std::optional<int> grid_m;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> output, format;

  std::string a, b, pair_file;
  std::optional<int> polygon;
  std::optional<double> radius;
  bool canonical = false;

  std::string state, state_file;
  std::optional<int> n;
  std::string angles, scan;
  int restarts = 32;
  bool kkt = false;
};

RunConfig resolve_config(const Options& o) {
  RunConfig cfg;
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("QUADSURE_CONFIG"); env != nullptr) path = env;
  }
  if (!path.empty()) cfg = load_config_file(path, cfg);
  if (o.hbar) cfg.hbar = *o.hbar;
  if (o.grid_m) cfg.grid_m = *o.grid_m;
  if (o.grid_halfwidth) cfg.grid_halfwidth = *o.grid_halfwidth;
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.samples = *o.samples;
  if (o.tol) cfg.tol = *o.tol;
  if (o.output) cfg.output = *o.output;
  if (o.format) cfg.format = *o.format;
  cfg.validate();
  return cfg;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + " is not valid JSON: " + e.what());
  }
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct PairInput {
  CoefficientPair pair;
  std::optional<PolygonSpec> polygon;
};

PairInput build_pair(const Options& o) {
  const int sources = (o.polygon ? 1 : 0) + (!o.a.empty() || !o.b.empty() ? 1 : 0) + (o.pair_file.empty() ? 0 : 1);
  if (sources > 1) throw DomainError("give exactly one of --a/--b, --pair-file, --polygon");
  if (o.polygon) {
    if (o.canonical && o.radius) throw DomainError("--radius and --canonical are exclusive");
    const PolygonSpec spec{*o.polygon, o.canonical ? canonical_circumradius(*o.polygon) : o.radius.value_or(1.0)};
    return {regular_polygon(spec), spec};
  }
  if (!o.a.empty() || !o.b.empty()) {
    if (o.a.empty() || o.b.empty()) throw DomainError("--a and --b must be given together");
    return {CoefficientPair(to_vector(parse_list(o.a)), to_vector(parse_list(o.b))), std::nullopt};
  }
  if (!o.pair_file.empty()) {
    const auto j = read_json_file(o.pair_file);
    try {
      return {CoefficientPair(to_vector(j.at("a").get<std::vector<double>>()),
                              to_vector(j.at("b").get<std::vector<double>>())),
              std::nullopt};
    } catch (const nlohmann::json::exception& e) {
      throw DomainError("pair file needs numeric arrays \"a\" and \"b\": " + std::string(e.what()));
    }
  }
  return {canonical_pair(), std::nullopt};
}

struct StateInput {
  std::string label;
  std::optional<GaussianState> gaussian;
  std::optional<GridWavefunction> wave;
  std::optional<std::array<double, 3>> extremal;

  SecondMoments moments() const { return gaussian ? gaussian->moments() : grid_moments(*wave); }
  GridWavefunction on_grid(const GridSpec& grid) const {
    if (wave) return *wave;
    return gaussian_on_grid(*gaussian, grid);
  }
};

std::vector<double> expect_params(const std::string& spec, const std::string& kind, std::size_t count) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw DomainError("state '" + kind + "' needs parameters, e.g. " + kind + ":...");
  auto v = parse_list(spec.substr(colon + 1));
  if (count != 0 && v.size() != count) {
    throw DomainError("state '" + kind + "' takes " + std::to_string(count) + " parameters");
  }
  return v;
}

StateInput build_state(const Options& o, const RunConfig& cfg) {
  if (!o.state.empty() && !o.state_file.empty()) throw DomainError("give one of --state, --state-file");
  StateInput s;
  if (!o.state_file.empty()) {
    s.label = o.state_file;
    auto any = state_from_json(read_json_file(o.state_file));
    if (auto* g = std::get_if<GaussianState>(&any)) s.gaussian = *g;
    else s.wave = std::get<GridWavefunction>(std::move(any));
    return s;
  }
  const std::string spec = o.state.empty() ? "ground" : o.state;
  s.label = spec;
  const std::string kind = spec.substr(0, spec.find(':'));
  if (kind == "ground") {
    s.gaussian = ground_state(cfg.hbar);
  } else if (kind == "coherent") {
    const auto v = expect_params(spec, kind, 2);
    s.gaussian = translate(ground_state(cfg.hbar), Translation{v[0], v[1]});
  } else if (kind == "squeezed") {
    s.gaussian = apply_map(ground_state(cfg.hbar), squeeze_map(expect_params(spec, kind, 1)[0]));
  } else if (kind == "extremal") {
    const auto v = expect_params(spec, kind, 3);
    s.gaussian = extremal_state(v[0], v[1], v[2], cfg.hbar);
    s.extremal = std::array<double, 3>{v[0], v[1], v[2]};
  } else if (kind == "hermite") {
    const auto v = expect_params(spec, kind, 0);
    const std::vector<Complex> coeffs(v.begin(), v.end());
    s.wave = hermite_superposition(coeffs, cfg.grid());
  } else {
    throw DomainError("unknown state '" + spec + "' (ground, coherent:p,q, squeezed:g, extremal:mu,nu,lambda, hermite:c0,...)");
  }
  return s;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scalar(const nlohmann::json& j) {
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_null()) return "";
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ',' << scalar(j) << '\n';
  }
}

void write_reports_csv(const std::vector<BoundReport>& reports, std::ostream& out) {
  out << "name,lhs,rhs,ratio,satisfied,saturated,tol\n";
  for (const auto& r : reports) {
    out << r.name << ',' << number(r.lhs) << ',' << number(r.rhs) << ',' << number(r.ratio) << ','
        << (r.satisfied ? "true" : "false") << ',' << (r.saturated ? "true" : "false") << ',' << number(r.tol) << '\n';
  }
}

void emit(const nlohmann::json& j, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "csv") {
    out << "key,value\n";
    flatten(j, "", out);
  } else {
    out << j.dump(2) << '\n';
  }
}

nlohmann::json reports_json(const std::vector<BoundReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

int cmd_incompat(const Options& o, const RunConfig& cfg, std::ostream& out) {
  const auto in = build_pair(o);
  const auto& pair = in.pair;
  const auto forms = incompatibility_forms(pair);
  const auto comm = commutator_matrix(pair);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(pair.size()));
  double max_possible = 0.0;
  for (int j = 0; j < pair.size(); ++j) {
    for (int k = 0; k < pair.size(); ++k) rows[j].push_back(comm(j, k));
    max_possible += 0.5 * pair.row(j).squaredNorm();
  }
  const double scale = pair.a().norm() * pair.b().norm();
  nlohmann::json j = {{"n", pair.size()},
                      {"incompatibility", forms.lagrange},
                      {"forms", {{"lagrange", forms.lagrange}, {"pairwise", forms.pairwise}, {"frobenius", forms.frobenius}}},
                      {"commutator", rows},
                      {"max_possible", max_possible},
                      {"ratio_to_max", forms.lagrange / max_possible},
                      {"compatible", !(forms.lagrange > 1e-12 * std::max(1.0, scale))},
                      {"enclosed_area", enclosed_area(pair)}};
  if (in.polygon) j["polygon"] = {{"n", in.polygon->n}, {"radius", in.polygon->radius}};
  emit(j, cfg, out);
  return kOk;
}

int cmd_verify(const Options& o, const RunConfig& cfg, std::ostream& out) {
  if (o.state.empty() && o.state_file.empty() && cfg.samples > 0) {
    const auto scan = universality_scan(cfg.samples, cfg.samples / 10, cfg.seed, cfg.tol, cfg.hbar);
    auto j = to_json(scan);
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tol;
    emit(j, cfg, out);
    return scan.total_violations() == 0 ? kOk : kViolation;
  }
  const auto pair = build_pair(o).pair;
  const auto state = build_state(o, cfg);
  const auto mom = state.moments();
  const double hbar = mom.hbar;

  std::vector<BoundReport> reports;
  if (state.extremal) {
    const auto& e = *state.extremal;
    reports.push_back(linear_ur_check(mom, e[0], e[1], e[2], cfg.tol));
  } else if (incompatibility(pair) > 0.0) {
    // The sum of variances is the linear relation with these coefficients.
    reports.push_back(linear_ur_check(mom, pair.a().squaredNorm(), pair.b().squaredNorm(), pair.a().dot(pair.b()), cfg.tol));
  }
  reports.push_back(sum_check(mom, pair, cfg.tol));
  reports.push_back(product_check(mom, pair, cfg.tol));
  const auto [am_gm, gm_bound] = am_gm_chain_check(mom, pair, cfg.tol);
  reports.push_back(am_gm);
  reports.push_back(gm_bound);
  const double commutator = commutator_form_bound(pair, hbar);
  reports.push_back(BoundReport::make("commutator_form", commutator, hbar * incompatibility(pair), cfg.tol));
  if (pair.size() > 2) {
    reports.push_back(BoundReport::make("pairwise_concatenated", commutator, pairwise_concatenated_bound(pair, hbar), cfg.tol));
  }
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.satisfied; });

  if (cfg.format == "csv") {
    write_reports_csv(reports, out);
  } else {
    const auto v = variances(mom, pair);
    nlohmann::json j = {{"state", state.label},
                        {"hbar", hbar},
                        {"n", pair.size()},
                        {"variances", v.values()},
                        {"reports", reports_json(reports)},
                        {"all_satisfied", ok}};
    if (o.kkt) {
      try {
        j["kkt"] = to_json(kkt_cross_check(pair, hbar, 16, cfg.seed));
      } catch (const DegenerateError& e) {
        j["kkt"] = e.what();
      }
    }
    out << j.dump(2) << '\n';
  }
  return ok ? kOk : kViolation;
}

int cmd_standard_form(const Options& o, const RunConfig& cfg, std::ostream& out) {
  const auto pair = build_pair(o).pair;
  const auto result = standard_form(pair);
  const double before = incompatibility(pair);
  const double after = incompatibility(result.reduced);
  const auto restored = restore_pair(result);
  const double roundtrip = std::max((restored.a() - pair.a()).cwiseAbs().maxCoeff(),
                                    (restored.b() - pair.b()).cwiseAbs().maxCoeff());
  auto j = to_json(result);
  j["reduced_lengths"] = {result.reduced.a().norm(), result.reduced.b().norm()};
  j["incompatibility_before"] = before;
  j["incompatibility_after"] = after;
  j["residual"] = std::abs(after - before);
  j["roundtrip_residual"] = roundtrip;
  emit(j, cfg, out);
  return kOk;
}

int cmd_entropy(const Options& o, const RunConfig& cfg, std::ostream& out) {
  if (!o.scan.empty()) {
    if (o.scan.rfind("hermite:", 0) != 0) throw DomainError("--scan expects hermite:L");
    const auto levels = parse_list(o.scan.substr(8));
    if (levels.size() != 1 || levels[0] < 1 || levels[0] != std::floor(levels[0])) {
      throw DomainError("--scan hermite:L needs a positive integer L");
    }
    if (cfg.samples == 0) throw DomainError("--scan needs --samples K > 0");
    const int n = o.n.value_or(3);
    const auto scan = conjecture_scan(static_cast<int>(levels[0]), n, cfg.samples, cfg.seed, cfg.grid());
    if (cfg.format == "csv") {
      out << "index,mean2,margin,satisfied\n";
      for (const auto& r : scan.records) {
        out << r.index << ',' << number(r.report.mean2) << ',' << number(r.report.margin) << ','
            << (r.report.satisfied ? "true" : "false") << '\n';
      }
    } else {
      for (const auto& r : scan.records) out << to_json(r).dump() << '\n';
      auto offenders = nlohmann::json::array();
      for (const auto& r : scan.offenders) offenders.push_back(to_json(r));
      out << nlohmann::json{{"summary", true},       {"levels", scan.levels},       {"n", scan.n},
                            {"samples", cfg.samples}, {"seed", scan.seed},           {"min_margin", scan.min_margin},
                            {"argmin", scan.argmin},  {"offenders", offenders}}
                 .dump()
          << '\n';
    }
    return scan.offenders.empty() ? kOk : kViolation;
  }

  if (o.n && !o.angles.empty()) throw DomainError("give one of --n, --angles");
  const auto state = build_state(o, cfg);
  const auto psi = state.on_grid(cfg.grid());
  const auto angles = o.angles.empty() ? polygon_angles(o.n.value_or(2)) : parse_list(o.angles);
  const auto report = entropy_scan(psi, angles);

  std::vector<BoundReport> checks{hirschman_check(psi)};
  for (double phi : angles) {
    auto r = variance_entropy_check(psi, phi);
    r.name += "@" + number(phi);
    checks.push_back(r);
  }
  bool ok = std::all_of(checks.begin(), checks.end(), [](const BoundReport& r) { return r.satisfied; });
  if (report.polygon) ok = ok && report.satisfied;

  auto j = to_json(report);
  j["state"] = state.label;
  j["checks"] = reports_json(checks);
  if (report.polygon && o.angles.empty()) {
    const auto chain = entropic_product_consistency(psi, o.n.value_or(2));
    j["chain"] = {to_json(chain.variance_link), to_json(chain.entropy_link)};
  }
  emit(j, cfg, out);
  return ok ? kOk : kViolation;
}

int cmd_maximize(const Options& o, const RunConfig& cfg, std::ostream& out) {
  if (!o.n) throw DomainError("maximize needs --n N");
  nlohmann::json j;
  try {
    const auto r = maximize_incompatibility(*o.n, cfg.seed, o.restarts);
    j = {{"n", *o.n},
         {"angles", r.angles},
         {"value", r.value},
         {"target", 0.5 * *o.n},
         {"gap", r.gap},
         {"restarts", r.restarts},
         {"converged_restarts", r.converged_restarts},
         {"distinct_maxima", r.distinct_maxima},
         {"converged", true}};
  } catch (const OptimizationError& e) {
    j = {{"n", *o.n}, {"value", e.best_value()}, {"target", 0.5 * *o.n},
         {"gap", 0.5 * *o.n - e.best_value()}, {"converged", false}};
  }
  emit(j, cfg, out);
  return kOk;
}

void add_pair_options(CLI::App* sub, Options& o) {
  sub->add_option("--a", o.a, "comma-separated a_j");
  sub->add_option("--b", o.b, "comma-separated b_j");
  sub->add_option("--pair-file", o.pair_file, "JSON file with arrays a and b");
  sub->add_option("--polygon", o.polygon, "regular N-gon of rows");
  sub->add_option("--radius", o.radius, "polygon circumradius (default 1)");
  sub->add_flag("--canonical", o.canonical, "circumradius 1/sqrt(sin(2 pi/N))");
}

void add_state_options(CLI::App* sub, Options& o) {
  sub->add_option("--state", o.state,
                  "ground | coherent:p,q | squeezed:g | extremal:mu,nu,lambda | hermite:c0,c1,...");
  sub->add_option("--state-file", o.state_file, "state JSON (gaussian or grid)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Uncertainty relations for N observables linear in p and q", "quadsure"};
  app.require_subcommand(1);
  app.add_option("--config", o.config, "RunConfig JSON (default: $QUADSURE_CONFIG)");
  app.add_option("--hbar", o.hbar);
  app.add_option("--grid-m", o.grid_m, "grid size, power of two");
  app.add_option("--grid-halfwidth", o.grid_halfwidth, "grid halfwidth in units of sqrt(hbar)");
  app.add_option("--seed", o.seed);
  app.add_option("--samples", o.samples);
  app.add_option("--tol", o.tol);
  app.add_option("--output", o.output, "write the report here instead of stdout");
  app.add_option("--format", o.format, "json or csv");

  auto* incompat = app.add_subcommand("incompat", "degree of incompatibility of a pair");
  add_pair_options(incompat, o);
  auto* verify = app.add_subcommand("verify", "check the variance inequalities on a state, or a random scan");
  add_pair_options(verify, o);
  add_state_options(verify, o);
  verify->add_flag("--kkt", o.kkt, "also run the numerical product-bound cross-check");
  auto* standard = app.add_subcommand("standard-form", "reduce a pair to standard form");
  add_pair_options(standard, o);
  auto* entropy = app.add_subcommand("entropy", "quadrature entropies of a state");
  add_state_options(entropy, o);
  entropy->add_option("--n", o.n, "regular polygon of N angles (default 2)");
  entropy->add_option("--angles", o.angles, "comma-separated angles");
  entropy->add_option("--scan", o.scan, "hermite:L random superposition scan");
  auto* maximize = app.add_subcommand("maximize", "maximize incompatibility over unit rows");
  maximize->add_option("--n", o.n)->required();
  maximize->add_option("--restarts", o.restarts);
  for (auto* sub : {incompat, verify, standard, entropy, maximize}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const RunConfig cfg = resolve_config(o);
    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw DomainError("cannot write " + cfg.output);
    }
    std::ostream& sink = cfg.output.empty() ? out : file;
    if (incompat->parsed()) return cmd_incompat(o, cfg, sink);
    if (verify->parsed()) return cmd_verify(o, cfg, sink);
    if (standard->parsed()) return cmd_standard_form(o, cfg, sink);
    if (entropy->parsed()) return cmd_entropy(o, cfg, sink);
    return cmd_maximize(o, cfg, sink);
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const LeakageError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace quadsure::cli
