#include "kaondec/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kaondec {

namespace {

constexpr double kNoiselessSigma = 0.01;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

ZetaModel model_for(ZetaKind kind, double value) {
  switch (kind) {
    case ZetaKind::two_particle_min:
      return ZetaModel::min_time(value);
    case ZetaKind::single_time:
      return ZetaModel::single_time(value);
    case ZetaKind::one_particle_sum:
      return ZetaModel::sum_time(value);
    case ZetaKind::constant:
      return ZetaModel::constant_zeta(value);
  }
  throw std::logic_error("unknown zeta kind");
}

// golden-section search for the minimum of f on [a, b], finished with a
// parabolic step through the final bracket
double minimize_1d(const std::function<double(double)>& f, double a, double b,
                   double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  // parabola through (a, f(a)), (xm, fm), (b, f(b))
  const double fa = f(a), fb = f(b);
  const double denom = (xm - a) * (fm - fb) - (xm - b) * (fm - fa);
  if (std::abs(denom) > 0.0) {
    const double num =
        (xm - a) * (xm - a) * (fm - fb) - (xm - b) * (xm - b) * (fm - fa);
    const double xp = xm - 0.5 * num / denom;
    if (xp > a && xp < b && f(xp) < fm) return xp;
  }
  return xm;
}

// first crossing of chi2(x) == target walking from x0 towards edge
double crossing(const std::function<double(double)>& chi, double x0,
                double edge, double target) {
  const int steps = 1024;
  const double h = (edge - x0) / steps;
  if (h == 0.0) return x0;
  double prev = x0;
  for (int i = 1; i <= steps; ++i) {
    const double x = x0 + i * h;
    if (chi(x) >= target) {
      // bisect within [prev, x]
      double lo = prev, hi = x;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (chi(mid) >= target)
          hi = mid;
        else
          lo = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = x;
  }
  return edge;  // never crossed: clamp to the domain edge
}

}  // namespace

void AsymmetryDataset::validate() const {
  for (size_t i = 0; i < records.size(); ++i) {
    const AsymmetryRecord& r = records[i];
    if (!(r.sigma > 0.0))
      throw std::invalid_argument("dataset record " + std::to_string(i) +
                                  ": sigma must be > 0");
    if (r.t_l < 0.0 || r.t_r < 0.0)
      throw std::invalid_argument("dataset record " + std::to_string(i) +
                                  ": negative time");
  }
}

double AsymmetryDataset::min_time() const {
  if (records.empty())
    throw std::invalid_argument("dataset is empty");
  double m = std::numeric_limits<double>::infinity();
  for (const AsymmetryRecord& r : records) m = std::min(m, std::min(r.t_l, r.t_r));
  return m;
}

AsymmetryDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  AsymmetryDataset data;
  data.label = path;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      std::string h = t;
      h.erase(std::remove_if(h.begin(), h.end(), ::isspace), h.end());
      if (h != "t_l,t_r,asym,sigma")
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected header t_l,t_r,asym,sigma");
      header_seen = true;
      continue;
    }
    std::istringstream ss(t);
    std::string cell;
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected 4 comma-separated values");
      try {
        size_t used = 0;
        vals[i] = std::stod(trim(cell), &used);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad number '" + trim(cell) + "'");
      }
    }
    if (std::getline(ss, cell, ','))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": extra columns");
    data.records.push_back({vals[0], vals[1], vals[2], vals[3]});
  }
  if (!header_seen)
    throw std::runtime_error(path + ": missing header t_l,t_r,asym,sigma");
  data.validate();
  return data;
}

void save_dataset_csv(const std::string& path, const AsymmetryDataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  out << "t_l,t_r,asym,sigma\n";
  char buf[512];
  for (const AsymmetryRecord& r : data.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.t_l, r.t_r,
                  r.a_meas, r.sigma);
    out << buf;
  }
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::gauss() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

double chi2(const AsymmetryDataset& data, const KaonParams& p,
            const ZetaModel& model, double dt_scale) {
  if (data.records.empty())
    throw std::invalid_argument("chi2: empty dataset");
  data.validate();
  double sum = 0.0;
  for (const AsymmetryRecord& r : data.records) {
    const double a = asymmetry_zeta(r.t_l, r.t_r, p, model, dt_scale);
    const double res = (r.a_meas - a) / r.sigma;
    sum += res * res;
  }
  return sum;
}

FitResult fit_lambda(const AsymmetryDataset& data, const KaonParams& p0,
                     ZetaKind kind, const FitOptions& opts) {
  if (data.records.empty())
    throw std::invalid_argument("fit_lambda: empty dataset");
  data.validate();
  p0.validate();

  const bool zeta_fit = (kind == ZetaKind::constant);
  const double x_max = zeta_fit ? 1.0 : opts.lambda_max;
  const auto chi = [&](double x) {
    return chi2(data, p0, model_for(kind, x), opts.dt_scale);
  };

  // coarse scan to bracket the global minimum
  const int n = std::max(8, opts.coarse_points);
  int best = 0;
  double best_chi = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double c = chi(x_max * i / n);
    if (c < best_chi) {
      best_chi = c;
      best = i;
    }
  }
  const double lo = x_max * std::max(0, best - 1) / n;
  const double hi = x_max * std::min(n, best + 1) / n;
  const double x_hat = minimize_1d(chi, lo, hi, 1e-11 * x_max);
  const double chi_min = chi(x_hat);
  const bool boundary = (x_hat <= 1e-9 * x_max) || (x_hat >= x_max * (1.0 - 1e-9));

  const double target = chi_min + 1.0;
  const double x_lo = crossing(chi, x_hat, 0.0, target);
  const double x_hi = crossing(chi, x_hat, x_max, target);

  FitResult res;
  res.chi2_min = chi_min;
  res.ndf = static_cast<int>(data.records.size()) - 1;
  res.boundary = boundary;
  res.label = data.label;
  const double tmin = data.min_time();
  if (zeta_fit) {
    res.param = "zeta";
    res.zeta_hat = x_hat;
    res.zeta_err_lo = x_lo;
    res.zeta_err_hi = x_hi;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    res.lambda_hat = res.lambda_err_lo = res.lambda_err_hi = nan;
  } else {
    res.param = "lambda";
    res.lambda_hat = x_hat;
    res.lambda_err_lo = x_lo;
    res.lambda_err_hi = x_hi;
    res.zeta_hat = 1.0 - std::exp(-x_hat * tmin);
    res.zeta_err_lo = 1.0 - std::exp(-x_lo * tmin);
    res.zeta_err_hi = 1.0 - std::exp(-x_hi * tmin);
  }
  return res;
}

FitResult average_configs(const std::vector<FitResult>& results) {
  if (results.empty())
    throw std::invalid_argument("average_configs: empty result list");
  if (results.size() == 1) return results.front();

  double wsum = 0.0, xsum = 0.0, zsum = 0.0, chi_sum = 0.0;
  int ndf_sum = 0;
  bool any_boundary = false;
  for (const FitResult& r : results) {
    if (r.param != results.front().param)
      throw std::invalid_argument(
          "average_configs: mixed fit parameters");
    const double center = (r.param == "zeta") ? r.zeta_hat : r.lambda_hat;
    const double lo = (r.param == "zeta") ? r.zeta_err_lo : r.lambda_err_lo;
    const double hi = (r.param == "zeta") ? r.zeta_err_hi : r.lambda_err_hi;
    const double sym = 0.5 * (hi - lo);
    if (!(sym > 0.0))
      throw std::invalid_argument(
          "average_configs: zero-width interval cannot be weighted");
    const double w = 1.0 / (sym * sym);
    wsum += w;
    xsum += w * center;
    zsum += w * r.zeta_hat;
    chi_sum += r.chi2_min;
    ndf_sum += r.ndf;
    any_boundary = any_boundary || r.boundary;
  }
  const double mean = xsum / wsum;
  const double err = 1.0 / std::sqrt(wsum);

  FitResult out;
  out.param = results.front().param;
  out.chi2_min = chi_sum;
  out.ndf = ndf_sum;
  out.boundary = any_boundary;
  out.label = "average";
  out.per_config = results;
  if (out.param == "zeta") {
    out.zeta_hat = mean;
    out.zeta_err_lo = mean - err;
    out.zeta_err_hi = mean + err;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.lambda_hat = out.lambda_err_lo = out.lambda_err_hi = nan;
  } else {
    out.lambda_hat = mean;
    out.lambda_err_lo = mean - err;
    out.lambda_err_hi = mean + err;
    out.zeta_hat = zsum / wsum;
    out.zeta_err_lo = out.zeta_err_hi = out.zeta_hat;  // not re-scanned
  }
  return out;
}

AsymmetryDataset synth_dataset(
    const KaonParams& p, const ZetaModel& model,
    const std::vector<std::pair<double, double>>& t_grid, double sigma,
    std::uint64_t seed, double dt_scale) {
  if (sigma < 0.0)
    throw std::invalid_argument("synth_dataset: sigma must be >= 0");
  p.validate();
  SplitMix64 rng(seed);
  AsymmetryDataset data;
  data.label = "synthetic";
  data.config = CplearConfig::custom;
  data.records.reserve(t_grid.size());
  for (const auto& [t_l, t_r] : t_grid) {
    const double a = asymmetry_zeta(t_l, t_r, p, model, dt_scale);
    const double noise = (sigma > 0.0) ? sigma * rng.gauss() : 0.0;
    data.records.push_back(
        {t_l, t_r, a + noise, sigma > 0.0 ? sigma : kNoiselessSigma});
  }
  return data;
}

std::pair<double, double> config_times(CplearConfig config,
                                       double tau_s_per_cm) {
  switch (config) {
    case CplearConfig::cfg_2cm_2cm:
      return {2.0 * tau_s_per_cm, 2.0 * tau_s_per_cm};
    case CplearConfig::cfg_2cm_7cm:
      return {7.0 * tau_s_per_cm, 2.0 * tau_s_per_cm};
    case CplearConfig::custom:
      throw std::invalid_argument(
          "config_times: custom configuration requires explicit times");
  }
  throw std::logic_error("unknown configuration");
}

namespace {

nlohmann::json result_json(const FitResult& r, double gamma_S_mev) {
  nlohmann::json j;
  j["param"] = r.param;
  j["lambda_hat"] = r.lambda_hat;
  j["lambda_err_lo"] = r.lambda_err_lo;
  j["lambda_err_hi"] = r.lambda_err_hi;
  j["lambda_mev"] = r.lambda_hat * gamma_S_mev;
  j["lambda_err_lo_mev"] = r.lambda_err_lo * gamma_S_mev;
  j["lambda_err_hi_mev"] = r.lambda_err_hi * gamma_S_mev;
  j["zeta_hat"] = r.zeta_hat;
  j["zeta_err_lo"] = r.zeta_err_lo;
  j["zeta_err_hi"] = r.zeta_err_hi;
  j["chi2_min"] = r.chi2_min;
  j["ndf"] = r.ndf;
  j["boundary"] = r.boundary;
  j["label"] = r.label;
  if (!r.per_config.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const FitResult& sub : r.per_config)
      arr.push_back(result_json(sub, gamma_S_mev));
    j["per_config"] = arr;
  }
  return j;
}

}  // namespace

std::string fit_result_to_json(const FitResult& r, double gamma_S_mev,
                               int indent) {
  return result_json(r, gamma_S_mev).dump(indent);
}

}  // namespace kaondec
