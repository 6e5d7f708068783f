#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "kaondec/fit.hpp"

using namespace kaondec;

namespace {

std::vector<std::pair<double, double>> equal_time_grid(int n, double t0,
                                                       double t1) {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * i / (n - 1);
    grid.emplace_back(t, t);
  }
  return grid;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("chi2") {
  const KaonParams p = KaonParams::with_lambda(0.25);
  const ZetaModel model = ZetaModel::min_time(p.lambda);

  // dataset generated exactly from the model
  const AsymmetryDataset exact =
      synth_dataset(p, model, equal_time_grid(20, 0.1, 3.0), 0.0, 1);
  CHECK(chi2(exact, p, model) == doctest::Approx(0.0));

  AsymmetryDataset single;
  single.records.push_back({0.55, 0.55, std::exp(-0.1375), 0.01});
  CHECK(chi2(single, p, model) == doctest::Approx(0.0));
  CHECK(chi2(single, KaonParams::with_lambda(0.0), ZetaModel::min_time(0.0)) ==
        doctest::Approx(165.03423230652732).epsilon(1e-12));

  CHECK_THROWS_AS(chi2(AsymmetryDataset{}, p, model), std::invalid_argument);
}

TEST_CASE("noiseless round trip recovers the decoherence strength") {
  for (double lambda : {0.0, 0.1, 0.25, 0.59, 1.0}) {
    const KaonParams truth = KaonParams::with_lambda(lambda);
    const AsymmetryDataset data =
        synth_dataset(truth, ZetaModel::min_time(lambda),
                      equal_time_grid(40, 0.1, 3.0), 0.0, 7);
    const FitResult fit = fit_lambda(data, KaonParams::with_lambda(0.0),
                                     ZetaKind::two_particle_min);
    CHECK(std::abs(fit.lambda_hat - lambda) < 1e-6);
    CHECK(fit.chi2_min == doctest::Approx(0.0));
    if (lambda == 0.0) CHECK(fit.boundary);
  }
}

TEST_CASE("zeta_hat tracks the dataset min-time") {
  const KaonParams truth = KaonParams::with_lambda(0.25);
  std::vector<std::pair<double, double>> grid = {{0.55, 0.55}, {1.925, 0.55}};
  const AsymmetryDataset data =
      synth_dataset(truth, ZetaModel::min_time(0.25), grid, 0.0, 3);
  const FitResult fit = fit_lambda(data, KaonParams::with_lambda(0.0),
                                   ZetaKind::two_particle_min);
  CHECK(std::abs(fit.lambda_hat - 0.25) < 1e-6);
  CHECK(fit.zeta_hat == doctest::Approx(0.1285).epsilon(1e-4 / 0.1285));
  CHECK(std::abs(fit.zeta_hat - 0.12846565000284213) < 1e-6);
}

TEST_CASE("chi2 is locally convex around a well-posed minimum") {
  const KaonParams truth = KaonParams::with_lambda(0.25);
  const AsymmetryDataset data =
      synth_dataset(truth, ZetaModel::min_time(0.25),
                    equal_time_grid(40, 0.1, 3.0), 0.02, 11);
  const KaonParams base = KaonParams::with_lambda(0.0);
  const FitResult fit =
      fit_lambda(data, base, ZetaKind::two_particle_min);
  const double h = 0.01;
  for (double x = fit.lambda_hat - 5 * h; x <= fit.lambda_hat + 5 * h; x += h) {
    if (x - h < 0.0) continue;
    const double cm = chi2(data, base, ZetaModel::min_time(x - h));
    const double c0 = chi2(data, base, ZetaModel::min_time(x));
    const double cp = chi2(data, base, ZetaModel::min_time(x + h));
    CHECK(cm + cp - 2.0 * c0 > 0.0);  // positive second difference
  }
}

TEST_CASE("delta-chi2 interval brackets the estimate") {
  const KaonParams truth = KaonParams::with_lambda(0.25);
  const AsymmetryDataset data =
      synth_dataset(truth, ZetaModel::min_time(0.25),
                    equal_time_grid(40, 0.1, 3.0), 0.02, 13);
  const KaonParams base = KaonParams::with_lambda(0.0);
  const FitResult fit = fit_lambda(data, base, ZetaKind::two_particle_min);
  CHECK(fit.brackets());
  CHECK(fit.lambda_err_lo < fit.lambda_hat);
  CHECK(fit.lambda_err_hi > fit.lambda_hat);
  // chi2 rises by one at the interval ends
  CHECK(chi2(data, base, ZetaModel::min_time(fit.lambda_err_hi)) ==
        doctest::Approx(fit.chi2_min + 1.0).epsilon(1e-6));
  CHECK(chi2(data, base, ZetaModel::min_time(fit.lambda_err_lo)) ==
        doctest::Approx(fit.chi2_min + 1.0).epsilon(1e-6));
}

TEST_CASE("model discrimination: wrong zeta model fits worse") {
  const KaonParams truth = KaonParams::with_lambda(0.4);
  // unequal times separate min from sum
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 30; ++i) grid.emplace_back(0.55 + 0.1 * i, 0.55);
  const AsymmetryDataset data =
      synth_dataset(truth, ZetaModel::min_time(0.4), grid, 0.0, 17);
  const KaonParams base = KaonParams::with_lambda(0.0);
  const FitResult min_fit =
      fit_lambda(data, base, ZetaKind::two_particle_min);
  const FitResult sum_fit =
      fit_lambda(data, base, ZetaKind::one_particle_sum);
  CHECK(min_fit.chi2_min < sum_fit.chi2_min);
  CHECK(sum_fit.chi2_min > 1.0);
}

TEST_CASE("constant-zeta fit") {
  // constant-zeta data is recovered in the zeta parameter
  const KaonParams base = KaonParams::with_lambda(0.0);
  const AsymmetryDataset data =
      synth_dataset(base, ZetaModel::constant_zeta(0.13),
                    equal_time_grid(25, 0.1, 2.0), 0.0, 19);
  const FitResult fit = fit_lambda(data, base, ZetaKind::constant);
  CHECK(fit.param == "zeta");
  CHECK(std::abs(fit.zeta_hat - 0.13) < 1e-6);
  CHECK(std::isnan(fit.lambda_hat));
}

TEST_CASE("interval coverage on noisy ensembles") {
  const double sigma = 0.02;
  const KaonParams truth = KaonParams::with_lambda(0.25);
  const KaonParams base = KaonParams::with_lambda(0.0);
  const auto grid = equal_time_grid(40, 0.1, 3.0);
  int covered = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    const AsymmetryDataset data = synth_dataset(
        truth, ZetaModel::min_time(0.25), grid, sigma, 42 + trial);
    const FitResult fit = fit_lambda(data, base, ZetaKind::two_particle_min);
    if (fit.lambda_err_lo <= 0.25 && 0.25 <= fit.lambda_err_hi) ++covered;
  }
  // a 68% interval; generous two-sided band for the small sample
  CHECK(covered >= static_cast<int>(0.6 * trials));
  CHECK(covered <= static_cast<int>(0.8 * trials));
}

TEST_CASE("average of configurations") {
  FitResult a;
  a.lambda_hat = 0.20;
  a.lambda_err_lo = -0.20;
  a.lambda_err_hi = 0.60;  // symmetric width 0.40
  a.zeta_hat = 0.10;
  a.ndf = 9;
  FitResult b;
  b.lambda_hat = 0.30;
  b.lambda_err_lo = -0.10;
  b.lambda_err_hi = 0.70;
  b.zeta_hat = 0.16;
  b.ndf = 9;

  const FitResult avg = average_configs({a, b});
  CHECK(avg.lambda_hat == doctest::Approx(0.25).epsilon(1e-14));
  const double width = 0.5 * (avg.lambda_err_hi - avg.lambda_err_lo);
  CHECK(width == doctest::Approx(0.28284271247461901).epsilon(1e-13));
  CHECK(avg.ndf == 18);
  CHECK(avg.per_config.size() == 2);

  // permutation invariance and the singleton identity
  const FitResult swapped = average_configs({b, a});
  CHECK(swapped.lambda_hat == doctest::Approx(avg.lambda_hat));
  CHECK(average_configs({a}).lambda_hat == a.lambda_hat);

  // identical results shrink the error by sqrt(2)
  const FitResult twice = average_configs({a, a});
  CHECK(twice.lambda_hat == doctest::Approx(a.lambda_hat));
  CHECK(0.5 * (twice.lambda_err_hi - twice.lambda_err_lo) ==
        doctest::Approx(0.40 / std::sqrt(2.0)).epsilon(1e-13));

  CHECK_THROWS_AS(average_configs({}), std::invalid_argument);
}

TEST_CASE("synthetic datasets") {
  const KaonParams p = KaonParams::with_lambda(0.25);
  const ZetaModel model = ZetaModel::min_time(0.25);
  const auto grid = equal_time_grid(10, 0.2, 2.0);

  // exact at sigma = 0
  const AsymmetryDataset clean = synth_dataset(p, model, grid, 0.0, 42);
  for (const AsymmetryRecord& r : clean.records)
    CHECK(r.a_meas == asymmetry_zeta(r.t_l, r.t_r, p, model));

  // deterministic per seed
  const AsymmetryDataset n1 = synth_dataset(p, model, grid, 0.05, 42);
  const AsymmetryDataset n2 = synth_dataset(p, model, grid, 0.05, 42);
  for (size_t i = 0; i < n1.records.size(); ++i)
    CHECK(n1.records[i].a_meas == n2.records[i].a_meas);
  const AsymmetryDataset other = synth_dataset(p, model, grid, 0.05, 43);
  CHECK(n1.records[0].a_meas != other.records[0].a_meas);

  // residual mean within three standard errors
  double mean = 0.0;
  for (size_t i = 0; i < n1.records.size(); ++i)
    mean += n1.records[i].a_meas - clean.records[i].a_meas;
  mean /= static_cast<double>(n1.records.size());
  CHECK(std::abs(mean) <= 3.0 * 0.05 / std::sqrt(10.0));

  CHECK_THROWS_AS(synth_dataset(p, model, grid, -0.1, 42),
                  std::invalid_argument);
}

TEST_CASE("configuration times") {
  const auto [l22, r22] = config_times(CplearConfig::cfg_2cm_2cm);
  CHECK(l22 == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(r22 == doctest::Approx(0.55).epsilon(1e-15));

  const auto [l27, r27] = config_times(CplearConfig::cfg_2cm_7cm);
  CHECK(l27 == doctest::Approx(1.925).epsilon(1e-15));
  CHECK(r27 == doctest::Approx(0.55).epsilon(1e-15));

  CHECK_THROWS_AS(config_times(CplearConfig::custom), std::invalid_argument);
}

TEST_CASE("dataset csv round trip") {
  const KaonParams p = KaonParams::with_lambda(0.25);
  const AsymmetryDataset data = synth_dataset(
      p, ZetaModel::min_time(0.25), equal_time_grid(15, 0.1, 2.5), 0.03, 5);

  const auto path = temp_file("kaondec_test_dataset.csv");
  save_dataset_csv(path.string(), data);
  const AsymmetryDataset back = load_dataset_csv(path.string());
  REQUIRE(back.records.size() == data.records.size());
  for (size_t i = 0; i < data.records.size(); ++i) {
    // 17 significant digits round-trip doubles exactly
    CHECK(back.records[i].t_l == data.records[i].t_l);
    CHECK(back.records[i].a_meas == data.records[i].a_meas);
    CHECK(back.records[i].sigma == data.records[i].sigma);
  }
  std::filesystem::remove(path);
}

TEST_CASE("dataset csv parse errors name the line") {
  const auto path = temp_file("kaondec_test_bad.csv");
  {
    std::ofstream out(path);
    out << "# comment\nt_l,t_r,asym,sigma\n0.5,0.5,0.9,0.01\n0.5,oops,0.9,0.01\n";
  }
  try {
    load_dataset_csv(path.string());
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":4") != std::string::npos);
  }
  std::filesystem::remove(path);

  {
    std::ofstream out(path);
    out << "a,b\n";
  }
  CHECK_THROWS_AS(load_dataset_csv(path.string()), std::runtime_error);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(load_dataset_csv("/nonexistent/nothing.csv"),
                  std::runtime_error);
}

TEST_CASE("constants file parsing") {
  const auto path = temp_file("kaondec_test_constants.txt");
  {
    std::ofstream out(path);
    out << "# widths\n"
        << "gamma_L_over_gamma_S = 2.0e-3  # inline comment\n"
        << "\n"
        << "delta_m_over_gamma_S=0.5\n";
  }
  const Constants c = load_constants(path.string());
  CHECK(c.gamma_L_over_gamma_S == 2.0e-3);
  CHECK(c.delta_m_over_gamma_S == 0.5);
  CHECK(c.gamma_S_mev == Constants{}.gamma_S_mev);  // untouched keys keep defaults
  std::filesystem::remove(path);

  {
    std::ofstream out(path);
    out << "mystery_key = 1\n";
  }
  CHECK_THROWS_AS(load_constants(path.string()), std::runtime_error);
  {
    std::ofstream out(path);
    out << "gamma_S_mev = not-a-number\n";
  }
  CHECK_THROWS_AS(load_constants(path.string()), std::runtime_error);
  {
    std::ofstream out(path);
    out << "gamma_S_mev 7e-12\n";
  }
  CHECK_THROWS_AS(load_constants(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("fit result json") {
  const KaonParams truth = KaonParams::with_lambda(0.25);
  const AsymmetryDataset data =
      synth_dataset(truth, ZetaModel::min_time(0.25),
                    equal_time_grid(20, 0.1, 3.0), 0.0, 23);
  const FitResult fit = fit_lambda(data, KaonParams::with_lambda(0.0),
                                   ZetaKind::two_particle_min);
  const Constants c;
  const nlohmann::json j =
      nlohmann::json::parse(fit_result_to_json(fit, c.gamma_S_mev));
  CHECK(j["lambda_hat"].get<double>() == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(j["lambda_mev"].get<double>() ==
        doctest::Approx(0.25 * c.gamma_S_mev).epsilon(1e-6));
  CHECK(j["ndf"].get<int>() == 19);
  CHECK(j.contains("lambda_err_lo"));
  CHECK(j.contains("lambda_err_hi"));
  CHECK(j.contains("zeta_hat"));
  CHECK(j.contains("chi2_min"));
  CHECK_FALSE(j["boundary"].get<bool>());
}
