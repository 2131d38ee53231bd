#include "bloch/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bloch/bounds.hpp"
#include "bloch/contraction.hpp"
#include "bloch/io.hpp"
#include "bloch/wu.hpp"

namespace bloch::cli {

namespace {

struct GlobalOptions {
  std::string out_path;
  bool no_timestamp = false;
};

struct BoundsOptions {
  std::string which;
  std::optional<double> gamma;
  std::optional<double> sigma;
  double rho = 0.45;
  double r = 0.8;
  int m = 2;
  double K = 1.0;
  std::optional<double> det;
  bool ball = false;
  std::optional<int> coarse;
  int rounds = 3;
  std::string grid_csv;
};

struct CertifyCliOptions {
  std::string poly_file;
  double b = 0.0;
  double b_imag = 0.0;
  double rho = 0.5;
  bool origin = false;
  bool search = false;
  double b_min = -0.3;
  double b_max = 0.3;
  double rho_min = 0.3;
  double rho_max = 0.9;
  int grid_b = 61;
  int grid_rho = 61;
  bool banach = false;
  long verify = 0;
  int samples = 4096;
  double tol = 1e-12;
  long max_iter = 100000;
};

struct WuCliOptions {
  std::string map_file;
  std::string action;
  std::string point;
  std::optional<double> K;
  double radius = 0.5;
  int grid = 16;
  int levels = 4;
  std::string beta;
  double eta = 0.5;
  double sigma = 0.5;
  int torus = 16;
  long verify = 0;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Json provenance(const GlobalOptions& g, Json defaults) {
  Json p{{"tool", kToolName}, {"version", kToolVersion}, {"defaults", std::move(defaults)}};
  if (!g.no_timestamp) p["timestamp"] = utc_timestamp();
  return p;
}

/// Streams coarse grid points to a CSV file.
class GridCsv {
 public:
  GridCsv(const std::string& path, const std::string& header) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw ParseError("cannot write " + path);
    file_ << std::setprecision(17) << header << '\n';
  }

  std::function<void(double, double, double)> sink() {
    if (!file_.is_open()) return {};
    return [this](double x, double y, double v) {
      file_ << x << ',' << y << ',';
      if (!std::isnan(v)) file_ << v;
      file_ << '\n';
    };
  }

 private:
  std::ofstream file_;
};

RunReport cmd_bounds(const BoundsOptions& o, const GlobalOptions& g) {
  RunReport rep;
  rep.command = "bounds " + o.which;
  const bool pointwise = o.gamma.has_value() || o.sigma.has_value();
  if (pointwise && !(o.gamma && o.sigma))
    throw DomainError("pointwise evaluation needs both --gamma and --sigma");

  if (o.which == "v1" || o.which == "v2") {
    auto* f = o.which == "v1" ? &bloch_bound_v1 : &bloch_bound_v2;
    if (pointwise) {
      rep.inputs = {{"gamma", *o.gamma}, {"sigma", *o.sigma}};
      rep.results = to_json(BoundParams{*o.gamma, *o.sigma, f(*o.gamma, *o.sigma)});
    } else {
      GridCsv csv(o.grid_csv, "gamma,sigma,value");
      Optimize2dOptions opt;
      opt.coarse_points = o.coarse.value_or(201);
      opt.refine_rounds = o.rounds;
      opt.on_coarse_point = csv.sink();
      const Box2 box = default_bound_box();
      rep.inputs = {{"box", {{"gamma", {box.x_lo, box.x_hi}}, {"sigma", {box.y_lo, box.y_hi}}}},
                    {"coarse", opt.coarse_points},
                    {"rounds", opt.refine_rounds}};
      rep.results = to_json(optimize_bound(f, opt));
    }
    rep.provenance = provenance(g, {{"coarse", 201}, {"rounds", 3}, {"refine_factor", 10}});
  } else if (o.which == "eh") {
    rep.inputs = {{"rho", o.rho}, {"r", o.r}};
    GridCsv csv(o.grid_csv, "a2,a3,penalty");
    EHOptions opt;
    opt.coarse_points = o.coarse.value_or(401);
    opt.refine_rounds = o.rounds;
    opt.on_coarse_point = csv.sink();
    rep.inputs["coarse"] = opt.coarse_points;
    rep.results = to_json(eh_bound(o.rho, o.r, opt));
    rep.provenance = provenance(g, {{"coarse", 401}, {"rounds", 3}, {"rho", 0.45}, {"r", 0.8}});
  } else if (o.which == "wu") {
    rep.inputs = {{"m", o.m}, {"K", o.K}, {"ball", o.ball}};
    if (pointwise) {
      rep.inputs["gamma"] = *o.gamma;
      rep.inputs["sigma"] = *o.sigma;
      const double scale = o.ball ? 1.0 / std::sqrt(static_cast<double>(o.m)) : 1.0;
      rep.results = to_json(
          BoundParams{*o.gamma, *o.sigma, wu_bound(o.m, o.K, *o.gamma, *o.sigma) * scale});
      if (o.det) {
        rep.inputs["det"] = *o.det;
        const auto [first, second] = wu_branch_bounds(o.m, o.K, *o.gamma, *o.sigma, *o.det);
        rep.results["branches"] = {{"first", first}, {"second", second}};
      }
    } else {
      GridCsv csv(o.grid_csv, "gamma,sigma,value");
      Optimize2dOptions opt;
      opt.coarse_points = o.coarse.value_or(201);
      opt.refine_rounds = o.rounds;
      opt.on_coarse_point = csv.sink();
      rep.inputs["coarse"] = opt.coarse_points;
      rep.results = to_json(theorem_bound_mv(o.m, o.K, o.ball, opt));
      rep.results["K_exponent"] = (3.0 * o.m - 1.0) / 2.0;
    }
    rep.provenance = provenance(g, {{"coarse", 201}, {"rounds", 3}, {"m", 2}, {"K", 1.0}});
  }
  return rep;
}

RunReport cmd_certify(const CertifyCliOptions& o, const GlobalOptions& g, int& exit_code) {
  const Poly p = poly_from_json(read_json_file(o.poly_file));
  RunReport rep;
  rep.command = "certify";
  rep.inputs = {{"poly", poly_to_json(p)}};

  CertifyOptions copt;
  copt.max_modulus.samples = o.samples;
  copt.upgrade_to_banach = o.banach;

  CertificationResult cert;
  if (o.search) {
    rep.inputs["search"] = {{"b", {o.b_min, o.b_max}},
                            {"rho", {o.rho_min, o.rho_max}},
                            {"grid", {o.grid_b, o.grid_rho}}};
    SearchGrid grid;
    grid.b_points = o.grid_b;
    grid.rho_points = o.grid_rho;
    cert = search_center(p, {o.b_min, o.b_max}, {o.rho_min, o.rho_max}, grid, copt);
  } else if (o.origin) {
    rep.inputs["origin"] = true;
    rep.inputs["rho"] = o.rho;
    cert = certify_origin(p, o.rho);
  } else {
    rep.inputs["b"] = complex_to_json(Complex(o.b, o.b_imag));
    rep.inputs["rho"] = o.rho;
    cert = certify_schlicht(p, Complex(o.b, o.b_imag), o.rho, copt);
  }
  rep.inputs["banach"] = o.banach;
  rep.results = {{"certificate", to_json(cert)}};

  if (o.verify > 0) {
    VerifyOptions vopt;
    vopt.solve.tol = o.tol;
    vopt.solve.max_iter = o.max_iter;
    const auto report = verify_schlicht_disk(p, cert, o.verify, vopt);
    rep.inputs["verify"] = o.verify;
    rep.results["verification"] = to_json(report);
    if (!report.ok()) exit_code = kVerificationFailed;
  }
  rep.provenance = provenance(g, {{"max_modulus_samples", 4096},
                                  {"search_grid", {61, 61}},
                                  {"refine_points", 21},
                                  {"tol", 1e-12},
                                  {"max_iter", 100000},
                                  {"residual_tolerance", 1e-9}});
  return rep;
}

CVector vector_option(const std::string& text, int m) {
  if (text.empty()) return CVector::Zero(m);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("point is not valid JSON: ") + e.what());
  }
  CVector v = vector_from_json(j);
  if (v.size() != m) throw ParseError("point dimension does not match the map");
  return v;
}

RunReport cmd_wu(const WuCliOptions& o, const GlobalOptions& g, int& exit_code) {
  const PolyMap F = polymap_from_json(read_json_file(o.map_file));
  RunReport rep;
  rep.command = "wu " + o.action;
  rep.inputs = {{"map", polymap_to_json(F)}};

  if (o.action == "stats") {
    const CVector z = vector_option(o.point, F.dim());
    rep.inputs["point"] = vector_to_json(z);
    const auto st = jacobian_stats(F, z);
    rep.results = {{"stats", to_json(st)}};
    const double K = o.K.value_or(st.wu_ratio);
    if (std::isfinite(K) && K > 0.0) {
      rep.results["small_eigen"] = {{"K", K}, {"holds", check_small_eigen(F, z, K)}};
    }
  } else if (o.action == "estimate-k") {
    rep.inputs["radius"] = o.radius;
    rep.inputs["grid"] = o.grid;
    rep.inputs["levels"] = o.levels;
    WuGridOptions gopt;
    gopt.radial_levels = o.levels;
    rep.results = to_json(estimate_wu_K(F, o.radius, o.grid, gopt));
  } else {
    const CVector beta = vector_option(o.beta, F.dim());
    rep.inputs["beta"] = vector_to_json(beta);
    rep.inputs["eta"] = o.eta;
    rep.inputs["sigma"] = o.sigma;
    MvCertifyOptions copt;
    copt.torus_points = o.torus;
    const auto cert = certify_schlicht_mv(F, beta, o.eta, o.sigma, copt);
    rep.results = {{"certificate", to_json(cert)}};
    if (o.verify > 0) {
      rep.inputs["verify"] = o.verify;
      const auto report = verify_schlicht_mv(F, cert, o.verify);
      rep.results["verification"] = to_json(report);
      if (!report.ok()) exit_code = kVerificationFailed;
    }
  }
  rep.provenance = provenance(g, {{"radius", 0.5},
                                  {"grid", 16},
                                  {"levels", 4},
                                  {"eta", 0.5},
                                  {"sigma", 0.5},
                                  {"torus", 16}});
  return rep;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lower bounds for Bloch-type constants and schlicht-disk certificates", kToolName};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--out", global.out_path, "Write the JSON report to this file");
  app.add_flag("--no-timestamp", global.no_timestamp, "Omit the timestamp from provenance");

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "Evaluate or optimize a closed-form bound");
  bounds->add_option("which", bo.which, "v1 | v2 | eh | wu")
      ->required()
      ->check(CLI::IsMember({"v1", "v2", "eh", "wu"}));
  bounds->add_option("--gamma", bo.gamma, "Evaluate at this gamma instead of optimizing");
  bounds->add_option("--sigma", bo.sigma, "Evaluate at this sigma instead of optimizing");
  bounds->add_option("--rho", bo.rho, "Ball radius (eh)")->capture_default_str();
  bounds->add_option("--r", bo.r, "Cauchy radius (eh)")->capture_default_str();
  bounds->add_option("--m", bo.m, "Dimension (wu)")->capture_default_str();
  bounds->add_option("--K", bo.K, "Wu constant (wu)")->capture_default_str();
  bounds->add_option("--det", bo.det, "|det F'(beta)| for the branch bounds (wu, pointwise)");
  bounds->add_flag("--ball", bo.ball, "Unit-ball domain instead of the polydisk (wu)");
  bounds->add_option("--coarse", bo.coarse, "Coarse grid points per axis (201; 401 for eh)");
  bounds->add_option("--rounds", bo.rounds, "Refinement rounds")->capture_default_str();
  bounds->add_option("--grid-csv", bo.grid_csv, "Dump the coarse objective grid as CSV");

  CertifyCliOptions co;
  auto* certify = app.add_subcommand("certify", "Certify a schlicht disk for a polynomial");
  certify->add_option("poly_file", co.poly_file, "Polynomial JSON")->required();
  certify->add_option("--b", co.b, "Real part of the expansion center")->capture_default_str();
  certify->add_option("--b-imag", co.b_imag, "Imaginary part of the expansion center")
      ->capture_default_str();
  certify->add_option("--rho", co.rho, "Domain disk radius")->capture_default_str();
  certify->add_flag("--origin", co.origin, "Triangle-bound certificate at the origin");
  certify->add_flag("--search", co.search, "Grid search over real b and rho");
  certify->add_option("--b-min", co.b_min)->capture_default_str();
  certify->add_option("--b-max", co.b_max)->capture_default_str();
  certify->add_option("--rho-min", co.rho_min)->capture_default_str();
  certify->add_option("--rho-max", co.rho_max)->capture_default_str();
  certify->add_option("--grid-b", co.grid_b)->capture_default_str();
  certify->add_option("--grid-rho", co.grid_rho)->capture_default_str();
  certify->add_flag("--banach", co.banach, "Upgrade to a Banach certificate when contractive");
  certify->add_option("--verify", co.verify, "Verify with this many sampled targets");
  certify->add_option("--samples", co.samples, "Max-modulus circle samples")->capture_default_str();
  certify->add_option("--tol", co.tol, "Fixed-point tolerance")->capture_default_str();
  certify->add_option("--max-iter", co.max_iter, "Fixed-point iteration cap")->capture_default_str();

  WuCliOptions wo;
  auto* wu = app.add_subcommand("wu", "Polynomial maps C^m -> C^m");
  wu->add_option("map_file", wo.map_file, "PolyMap JSON")->required();
  wu->add_option("action", wo.action, "stats | estimate-k | certify")
      ->required()
      ->check(CLI::IsMember({"stats", "estimate-k", "certify"}));
  wu->add_option("--point", wo.point, "Point as JSON [[re,im],...] (stats)");
  wu->add_option("--K", wo.K, "K for the small-singular-value check (stats)");
  wu->add_option("--radius", wo.radius, "Polydisk radius (estimate-k)")->capture_default_str();
  wu->add_option("--grid", wo.grid, "Angles per axis (estimate-k)")->capture_default_str();
  wu->add_option("--levels", wo.levels, "Radial levels per axis (estimate-k)")->capture_default_str();
  wu->add_option("--beta", wo.beta, "Expansion center as JSON (certify)");
  wu->add_option("--eta", wo.eta, "Domain ball radius (certify)")->capture_default_str();
  wu->add_option("--sigma", wo.sigma, "Contraction margin (certify)")->capture_default_str();
  wu->add_option("--torus", wo.torus, "Torus angles per axis (certify)")->capture_default_str();
  wu->add_option("--verify", wo.verify, "Verify with this many sampled targets (certify)");

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  int exit_code = kSuccess;
  RunReport report;
  try {
    if (bounds->parsed()) {
      report = cmd_bounds(bo, global);
    } else if (certify->parsed()) {
      report = cmd_certify(co, global, exit_code);
    } else {
      report = cmd_wu(wo, global, exit_code);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }

  const std::string text = to_json(report).dump(2) + "\n";
  if (global.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(global.out_path);
    if (!f) {
      err << "error: cannot write " << global.out_path << '\n';
      return kUsage;
    }
    f << text;
  }
  if (exit_code == kVerificationFailed) err << "verification failed\n";
  return exit_code;
}

}  // namespace bloch::cli
