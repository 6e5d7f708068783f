// kaondec: simulate decoherence of single and entangled neutral kaons,
// evaluate strangeness asymmetries, fit the decoherence strength, and
// tabulate entanglement measures. Emits deterministic CSV/JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kaondec/entanglement.hpp"
#include "kaondec/evolution.hpp"
#include "kaondec/fit.hpp"
#include "kaondec/observables.hpp"

namespace {

using namespace kaondec;

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitInput = 2;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Table {
  std::vector<std::string> comments;  // emitted as leading '#' lines in CSV
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& out, const Table& t, const std::string& format) {
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json obj;
      for (size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = row[i];
      arr.push_back(obj);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  for (const std::string& c : t.comments) out << "# " << c << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << "\n";
  }
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  if (stop < start) throw std::invalid_argument("grid stop must be >= start");
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> g;
  g.reserve(n + 1);
  for (int i = 0; i <= n; ++i) g.push_back(start + i * step);
  return g;
}

// shared flags wired onto every subcommand
struct Shared {
  std::string constants_path;
  std::string units = "taus";
  std::string format;
  std::string output;

  Constants constants() const {
    return constants_path.empty() ? Constants{} : load_constants(constants_path);
  }
  double lambda_gs(double value, const Constants& c) const {
    return units == "mev" ? value / c.gamma_S_mev : value;
  }
};

void add_shared(CLI::App* cmd, Shared& s, const std::string& default_format) {
  s.format = default_format;
  cmd->add_option("--constants", s.constants_path,
                  "constants file (key = value)");
  cmd->add_option("--units", s.units, "unit of lambda flags")
      ->check(CLI::IsMember({"taus", "mev"}))
      ->capture_default_str();
  cmd->add_option("--format", s.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", s.output, "output file (default stdout)");
}

// opened before any computation so unwritable paths fail fast
struct Output {
  std::ofstream file;
  bool to_file = false;
  std::ostream& os() { return to_file ? file : std::cout; }
};

Output open_output(const Shared& s) {
  Output o;
  if (s.output.empty()) return o;
  o.file.open(s.output);
  if (!o.file) throw std::runtime_error("cannot write " + s.output);
  o.to_file = true;
  return o;
}

// ---- evolve ----------------------------------------------------------

struct EvolveOpts {
  Shared shared;
  std::string system = "2p";
  std::string init = "k0";
  double lambda = 0.0;
  double t_max = 5.0;
  double step = 0.05;
  bool oracle = false;
  double rk_step = 1e-3;
  double gamma_L = -1.0;
  double delta_m = -1.0;
};

DensityMatrix initial_1p(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "k0") return DensityMatrix{CMatrix::outer({s, s}, {s, s})};
  if (name == "k0bar") return DensityMatrix{CMatrix::outer({s, -s}, {s, -s})};
  if (name == "ks") return DensityMatrix{quasispin::up()};
  if (name == "kl") return DensityMatrix{quasispin::down()};
  throw std::invalid_argument("unknown initial state: " + name);
}

KaonParams resolve_params(const Constants& c, double lambda_gs, double gamma_L,
                          double delta_m) {
  KaonParams p = KaonParams::from_constants(c, lambda_gs);
  if (gamma_L >= 0.0) p.gamma_L = gamma_L;
  if (delta_m >= 0.0) p.delta_m = delta_m;
  p.validate();
  return p;
}

int run_evolve(const EvolveOpts& o) {
  Output out = open_output(o.shared);
  const Constants c = o.shared.constants();
  const KaonParams p =
      resolve_params(c, o.shared.lambda_gs(o.lambda, c), o.gamma_L, o.delta_m);
  const std::vector<double> grid = linear_grid(0.0, o.t_max, o.step);
  const bool two = (o.system == "2p");
  const int dim = two ? 4 : 2;

  Table table;
  table.comments.push_back(two ? "two-particle basis order: SS, SL, LS, LL"
                               : "one-particle basis order: K_S, K_L");
  table.columns.push_back("t");
  for (int i = 0; i < dim; ++i)
    table.columns.push_back("rho_" + std::to_string(i) + std::to_string(i));
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const std::string tag = std::to_string(i) + std::to_string(j);
      table.columns.push_back("rho_" + tag + "_re");
      table.columns.push_back("rho_" + tag + "_im");
    }
  if (o.oracle) table.columns.push_back("oracle_max_abs_dev");

  const DensityMatrix rho0 = two ? singlet_state() : initial_1p(o.init);
  const EffectiveHamiltonian h = two ? EffectiveHamiltonian::two_particle(p)
                                     : EffectiveHamiltonian::one_particle(p);
  const LindbladOperatorSet ops = two ? LindbladOperatorSet::two_particle(p)
                                      : LindbladOperatorSet::one_particle(p);

  std::optional<DensityMatrix> numeric;
  if (o.oracle) numeric = rho0;

  double prev_t = 0.0;
  for (double t : grid) {
    const DensityMatrix rho =
        two ? evolve_2p_analytic(t, p) : evolve_1p_analytic(rho0, t, p);
    std::vector<double> row{t};
    for (int i = 0; i < dim; ++i) row.push_back(rho.mat()(i, i).real());
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        row.push_back(rho.mat()(i, j).real());
        row.push_back(rho.mat()(i, j).imag());
      }
    if (o.oracle) {
      if (t > prev_t)
        numeric = evolve_numeric(*numeric, h, ops, t - prev_t, o.rk_step);
      row.push_back(numeric->mat().max_abs_diff(rho.mat()));
      prev_t = t;
    }
    table.rows.push_back(std::move(row));
  }
  write_table(out.os(), table, o.shared.format);
  return kExitOk;
}

// ---- asymmetry -------------------------------------------------------

struct AsymmetryOpts {
  Shared shared;
  std::string grid_kind = "equal";  // equal times or a dt scan
  double t_r = 0.55;                // fixed first-measurement time (dt scan)
  double start = 0.0;
  double stop = 3.0;
  double step = 0.05;
  double lambda = 0.0;
  std::string zeta_model = "min";
  double zeta_const = 0.0;
  double dt_scale = 1.0;
  double gamma_L = -1.0;
  double delta_m = -1.0;
};

ZetaModel make_zeta_model(const std::string& name, double lambda_gs,
                          double zeta_const) {
  if (name == "min") return ZetaModel::min_time(lambda_gs);
  if (name == "sum") return ZetaModel::sum_time(lambda_gs);
  if (name == "const") return ZetaModel::constant_zeta(zeta_const);
  throw std::invalid_argument("unknown zeta model: " + name);
}

int run_asymmetry(const AsymmetryOpts& o) {
  Output out = open_output(o.shared);
  const Constants c = o.shared.constants();
  const double lambda_gs = o.shared.lambda_gs(o.lambda, c);
  const KaonParams p = resolve_params(c, lambda_gs, o.gamma_L, o.delta_m);
  const ZetaModel model = make_zeta_model(o.zeta_model, lambda_gs, o.zeta_const);

  Table table;
  table.columns = {"t_l", "t_r", "dt", "a_qm", "a_lambda", "a_zeta"};
  for (double x : linear_grid(o.start, o.stop, o.step)) {
    const double t_l = (o.grid_kind == "equal") ? x : o.t_r + x;
    const double t_r = (o.grid_kind == "equal") ? x : o.t_r;
    table.rows.push_back({t_l, t_r, t_l - t_r,
                          asymmetry_qm(t_l - t_r, p, o.dt_scale),
                          asymmetry_lambda(t_l, t_r, p, o.dt_scale),
                          asymmetry_zeta(t_l, t_r, p, model, o.dt_scale)});
  }
  write_table(out.os(), table, o.shared.format);
  return kExitOk;
}

// ---- entangle / sweep ------------------------------------------------

const std::vector<std::string> kReportColumns = {
    "t",          "S",           "S_left",  "S_right",
    "w_minus",    "w_plus",      "w_phi_minus", "w_phi_plus",
    "ppt_min",    "reduction_min", "C",     "f",
    "E",          "zeta",        "one_minus_C", "one_minus_E"};

std::vector<double> report_row(const EntanglementReport& r) {
  return {r.t,
          r.entropy,
          r.reduced_entropy_left,
          r.reduced_entropy_right,
          r.bell.w_minus,
          r.bell.w_plus,
          r.bell.w_phi_minus,
          r.bell.w_phi_plus,
          r.ppt_min_eigval,
          r.reduction_min_eigval,
          r.concurrence,
          r.fraction,
          r.eof,
          r.zeta,
          r.loss_concurrence,
          r.loss_eof};
}

struct EntangleOpts {
  Shared shared;
  double t = 0.55;
  double lambda = 0.25;
  double gamma_L = -1.0;
  double delta_m = -1.0;
};

int run_entangle(const EntangleOpts& o) {
  Output out = open_output(o.shared);
  const Constants c = o.shared.constants();
  const KaonParams p =
      resolve_params(c, o.shared.lambda_gs(o.lambda, c), o.gamma_L, o.delta_m);
  const EntanglementReport rep = entanglement_report(o.t, p);
  Table table;
  table.columns = kReportColumns;
  table.rows.push_back(report_row(rep));
  write_table(out.os(), table, o.shared.format);
  return kExitOk;
}

struct SweepOpts {
  Shared shared;
  std::vector<double> lambdas = {0.25};
  double t_max = 5.0;
  double step = 0.05;
  double gamma_L = -1.0;
  double delta_m = -1.0;
};

int run_sweep(const SweepOpts& o) {
  Output out = open_output(o.shared);
  const Constants c = o.shared.constants();
  const std::vector<double> grid = linear_grid(0.0, o.t_max, o.step);

  std::vector<double> lambdas_gs;
  for (double l : o.lambdas) lambdas_gs.push_back(o.shared.lambda_gs(l, c));

  Table table;
  table.columns.push_back("t");
  std::vector<std::vector<EntanglementReport>> sweeps;
  for (double l : lambdas_gs) {
    const KaonParams p = resolve_params(c, l, o.gamma_L, o.delta_m);
    sweeps.push_back(sweep_report(grid, p));
    char tag[32];
    std::snprintf(tag, sizeof tag, "%g", l);
    for (const char* name : {"S", "one_minus_E", "one_minus_C", "zeta"})
      table.columns.push_back(std::string(name) + "[" + tag + "]");
  }
  for (size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    for (const auto& sweep : sweeps) {
      row.push_back(sweep[i].entropy);
      row.push_back(sweep[i].loss_eof);
      row.push_back(sweep[i].loss_concurrence);
      row.push_back(sweep[i].zeta);
    }
    table.rows.push_back(std::move(row));
  }
  write_table(out.os(), table, o.shared.format);
  return kExitOk;
}

// ---- fit -------------------------------------------------------------

struct FitOptsCli {
  Shared shared;
  std::string input;
  std::string model = "min";
  double lambda_max = 10.0;
  double dt_scale = 1.0;
  double gamma_L = -1.0;
  double delta_m = -1.0;
};

int run_fit(const FitOptsCli& o) {
  Output out = open_output(o.shared);
  const Constants c = o.shared.constants();
  AsymmetryDataset data;
  try {
    data = load_dataset_csv(o.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  const KaonParams base = resolve_params(c, 0.0, o.gamma_L, o.delta_m);

  ZetaKind kind = ZetaKind::two_particle_min;
  if (o.model == "sum")
    kind = ZetaKind::one_particle_sum;
  else if (o.model == "const")
    kind = ZetaKind::constant;

  FitOptions opts;
  opts.lambda_max = o.shared.lambda_gs(o.lambda_max, c);
  opts.dt_scale = o.dt_scale;
  const FitResult fit = fit_lambda(data, base, kind, opts);
  if (fit.boundary)
    std::cerr << "warning: minimum sits on the scan-domain boundary\n";

  out.os() << fit_result_to_json(fit, c.gamma_S_mev) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decoherence of single and entangled neutral kaons: evolution, "
      "asymmetries, entanglement measures, and decoherence-strength fits"};
  app.require_subcommand(1);

  EvolveOpts ev;
  CLI::App* evolve = app.add_subcommand(
      "evolve", "tabulate the analytic density-matrix evolution");
  add_shared(evolve, ev.shared, "csv");
  evolve->add_option("--system", ev.system, "1p or 2p")
      ->check(CLI::IsMember({"1p", "2p"}))
      ->capture_default_str();
  evolve->add_option("--init", ev.init, "1p initial state")
      ->check(CLI::IsMember({"k0", "k0bar", "ks", "kl"}))
      ->capture_default_str();
  evolve->add_option("--lambda", ev.lambda, "decoherence strength")
      ->capture_default_str();
  evolve->add_option("--t-max", ev.t_max, "grid end (tau_S)")
      ->capture_default_str();
  evolve->add_option("--step", ev.step, "grid step")->capture_default_str();
  evolve->add_flag("--oracle", ev.oracle, "add the RK4 max-deviation column");
  evolve->add_option("--rk-step", ev.rk_step, "RK4 integrator step")
      ->capture_default_str();
  evolve->add_option("--gamma-l", ev.gamma_L, "override Gamma_L/Gamma_S");
  evolve->add_option("--delta-m", ev.delta_m, "override dm/Gamma_S");

  AsymmetryOpts as;
  CLI::App* asym = app.add_subcommand(
      "asymmetry", "tabulate QM, lambda-model and zeta-model asymmetries");
  add_shared(asym, as.shared, "csv");
  asym->add_option("--grid", as.grid_kind, "equal-time scan or dt scan")
      ->check(CLI::IsMember({"equal", "dt"}))
      ->capture_default_str();
  asym->add_option("--t-r", as.t_r, "first measurement time for the dt scan")
      ->capture_default_str();
  asym->add_option("--start", as.start, "grid start")->capture_default_str();
  asym->add_option("--stop", as.stop, "grid stop")->capture_default_str();
  asym->add_option("--step", as.step, "grid step")->capture_default_str();
  asym->add_option("--lambda", as.lambda, "decoherence strength")
      ->capture_default_str();
  asym->add_option("--zeta-model", as.zeta_model, "min, sum or const")
      ->check(CLI::IsMember({"min", "sum", "const"}))
      ->capture_default_str();
  asym->add_option("--zeta-const", as.zeta_const, "zeta for the const model")
      ->capture_default_str();
  asym->add_option("--dt-scale", as.dt_scale, "rescale dt in the QM curve")
      ->capture_default_str();
  asym->add_option("--gamma-l", as.gamma_L, "override Gamma_L/Gamma_S");
  asym->add_option("--delta-m", as.delta_m, "override dm/Gamma_S");

  EntangleOpts en;
  CLI::App* entangle = app.add_subcommand(
      "entangle", "entanglement report of the evolved state at one time");
  add_shared(entangle, en.shared, "json");
  entangle->add_option("--t", en.t, "time (tau_S)")->capture_default_str();
  entangle->add_option("--lambda", en.lambda, "decoherence strength")
      ->capture_default_str();
  entangle->add_option("--gamma-l", en.gamma_L, "override Gamma_L/Gamma_S");
  entangle->add_option("--delta-m", en.delta_m, "override dm/Gamma_S");

  SweepOpts sw;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "entropy and entanglement-loss curves over a time grid");
  add_shared(sweep, sw.shared, "csv");
  sweep->add_option("--lambdas", sw.lambdas, "decoherence strengths")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--t-max", sw.t_max, "grid end")->capture_default_str();
  sweep->add_option("--step", sw.step, "grid step")->capture_default_str();
  sweep->add_option("--gamma-l", sw.gamma_L, "override Gamma_L/Gamma_S");
  sweep->add_option("--delta-m", sw.delta_m, "override dm/Gamma_S");

  FitOptsCli ft;
  CLI::App* fit = app.add_subcommand(
      "fit", "fit the decoherence strength to asymmetry data");
  add_shared(fit, ft.shared, "json");
  fit->add_option("-i,--input", ft.input, "dataset CSV (t_l,t_r,asym,sigma)")
      ->required();
  fit->add_option("--model", ft.model, "zeta model: min, sum or const")
      ->check(CLI::IsMember({"min", "sum", "const"}))
      ->capture_default_str();
  fit->add_option("--lambda-max", ft.lambda_max, "scan-domain upper edge")
      ->capture_default_str();
  fit->add_option("--dt-scale", ft.dt_scale, "rescale dt in the QM curve")
      ->capture_default_str();
  fit->add_option("--gamma-l", ft.gamma_L, "override Gamma_L/Gamma_S");
  fit->add_option("--delta-m", ft.delta_m, "override dm/Gamma_S");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (evolve->parsed()) return run_evolve(ev);
    if (asym->parsed()) return run_asymmetry(as);
    if (entangle->parsed()) return run_entangle(en);
    if (sweep->parsed()) return run_sweep(sw);
    if (fit->parsed()) return run_fit(ft);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    // file and parse problems
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitOk;
}
