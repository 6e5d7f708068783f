#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kaondec/observables.hpp"
#include "kaondec/params.hpp"

// Chi-square estimation of the decoherence strength from asymmetry data,
// synthetic-dataset generation, and the two CPLEAR-style absorber
// configurations.

namespace kaondec {

struct AsymmetryRecord {
  double t_l = 0.0;
  double t_r = 0.0;
  double a_meas = 0.0;
  double sigma = 0.0;
};

enum class CplearConfig { cfg_2cm_2cm, cfg_2cm_7cm, custom };

struct AsymmetryDataset {
  std::vector<AsymmetryRecord> records;
  std::string label;
  std::optional<CplearConfig> config;

  // sigma > 0 and times >= 0 for every record
  void validate() const;
  // smallest min(t_l, t_r) over the records
  double min_time() const;
};

// Dataset CSV, header `t_l,t_r,asym,sigma`, '#' comment lines. Parse
// errors carry the offending line number.
AsymmetryDataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const std::string& path, const AsymmetryDataset& data);

// Deterministic splittable generator used for synthetic data; documented
// counter-based algorithm so seeds mean the same thing everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform01();  // [0, 1)
  double gauss();      // standard normal via Box-Muller
 private:
  std::uint64_t state_;
};

struct FitOptions {
  double lambda_max = 10.0;  // scan domain upper edge for lambda fits
  double dt_scale = 1.0;
  int coarse_points = 512;
};

struct FitResult {
  std::string param = "lambda";  // "lambda" or "zeta" (constant-zeta fits)
  // Delta chi^2 = 1 interval endpoints around the best fit; NaN when the
  // fitted parameter is zeta.
  double lambda_hat = 0.0;
  double lambda_err_lo = 0.0;
  double lambda_err_hi = 0.0;
  double zeta_hat = 0.0;  // zeta at the dataset's min-time (or the fit value)
  double zeta_err_lo = 0.0;
  double zeta_err_hi = 0.0;
  double chi2_min = 0.0;
  int ndf = 0;
  bool boundary = false;  // minimum pinned at a domain edge
  std::string label;
  std::vector<FitResult> per_config;

  bool brackets() const {
    return lambda_err_lo <= lambda_hat && lambda_hat <= lambda_err_hi;
  }
};

// sum_i ((a_i - A_model(t_l, t_r)) / sigma_i)^2
double chi2(const AsymmetryDataset& data, const KaonParams& p,
            const ZetaModel& model, double dt_scale = 1.0);

// 1-D chi-square minimization over lambda (or over zeta for
// ZetaKind::constant), golden-section refined by a parabolic step, with
// asymmetric errors from the Delta chi^2 = 1 scan.
FitResult fit_lambda(const AsymmetryDataset& data, const KaonParams& p0,
                     ZetaKind kind, const FitOptions& opts = {});

// Inverse-variance weighted average using symmetrized interval widths.
FitResult average_configs(const std::vector<FitResult>& results);

// Model asymmetry plus Gaussian noise of width sigma, deterministic per
// seed. A noiseless dataset (sigma == 0) records a nominal 0.01 error so
// it stays usable in chi-square fits.
AsymmetryDataset synth_dataset(const KaonParams& p, const ZetaModel& model,
                               const std::vector<std::pair<double, double>>& t_grid,
                               double sigma, std::uint64_t seed,
                               double dt_scale = 1.0);

// Measurement times of the named absorber configuration, scaled linearly
// from the 2 cm ~ 0.55 tau_S anchor.
std::pair<double, double> config_times(
    CplearConfig config, double tau_s_per_cm = Constants{}.tau_S_per_cm);

// FitResult as JSON text; gamma_S_mev converts the lambda fields to MeV.
std::string fit_result_to_json(const FitResult& r, double gamma_S_mev,
                               int indent = 2);

}  // namespace kaondec
