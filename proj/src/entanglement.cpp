#include "kaondec/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "kaondec/evolution.hpp"
#include "kaondec/observables.hpp"

namespace kaondec {

namespace {

constexpr double kBellDiagonalTol = 1e-10;

void require_normalized(const DensityMatrix& rho) {
  if (!rho.normalized())
    throw std::invalid_argument("state must be normalized (trace 1)");
}

void require_dim4(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("two-particle state (4x4) required");
}

// Bell kets on the (SS, SL, LS, LL) product basis. psi-+ live in the
// e1/e2 block, phi-+ in the SS/LL block.
const std::vector<Complex>& bell_ket(int i) {
  static const double s = 1.0 / std::sqrt(2.0);
  static const std::vector<std::vector<Complex>> kets = {
      {0.0, s, -s, 0.0},  // psi-
      {0.0, s, s, 0.0},   // psi+
      {s, 0.0, 0.0, -s},  // phi-
      {s, 0.0, 0.0, s},   // phi+
  };
  return kets[i];
}

double bell_weight(const CMatrix& rho, int i) {
  const std::vector<Complex>& k = bell_ket(i);
  Complex w = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) w += std::conj(k[r]) * rho(r, c) * k[c];
  return w.real();
}

const CMatrix& spin_flip_kernel() {
  static const CMatrix f = tensor(quasispin::sigma_y(), quasispin::sigma_y());
  return f;
}

}  // namespace

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double vn_entropy(const DensityMatrix& rho) {
  require_normalized(rho);
  double s = 0.0;
  for (double ev : herm_eigvals(rho.mat()))
    if (ev > 0.0) s -= ev * std::log2(ev);
  return s;
}

std::pair<double, double> reduced_entropies(const DensityMatrix& rho) {
  require_dim4(rho);
  require_normalized(rho);
  return {vn_entropy(partial_trace(rho, Side::right)),
          vn_entropy(partial_trace(rho, Side::left))};
}

BellDecomposition bell_decompose(const DensityMatrix& rho) {
  require_dim4(rho);
  require_normalized(rho);
  BellDecomposition d;
  d.w_minus = bell_weight(rho.mat(), 0);
  d.w_plus = bell_weight(rho.mat(), 1);
  d.w_phi_minus = bell_weight(rho.mat(), 2);
  d.w_phi_plus = bell_weight(rho.mat(), 3);
  return d;
}

SeparabilityResult ppt_test(const DensityMatrix& rho) {
  require_dim4(rho);
  require_normalized(rho);
  const std::vector<double> evs =
      herm_eigvals(partial_transpose(rho, Side::right));
  const double min_ev = evs.back();
  return {min_ev >= kPsdTol, min_ev};
}

SeparabilityResult reduction_test(const DensityMatrix& rho) {
  require_dim4(rho);
  require_normalized(rho);
  const CMatrix& id = quasispin::id2();
  const CMatrix left_red =
      tensor(partial_trace(rho.mat(), Side::right), id) - rho.mat();
  const CMatrix right_red =
      tensor(id, partial_trace(rho.mat(), Side::left)) - rho.mat();
  const double min_left = herm_eigvals(left_red).back();
  const double min_right = herm_eigvals(right_red).back();
  // separable iff either ordering is positive
  const bool candidate =
      (min_left >= kPsdTol) || (min_right >= kPsdTol);
  return {candidate, std::min(min_left, min_right)};
}

CMatrix spin_flip(const CMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("spin_flip: 4x4 matrix required");
  const CMatrix& f = spin_flip_kernel();
  return f * rho.conjugated() * f;
}

std::vector<double> concurrence_roots(const DensityMatrix& rho) {
  require_dim4(rho);
  require_normalized(rho);
  // eigenvalues of rho * rho~ via the Hermitian similar form
  // sqrt(rho) rho~ sqrt(rho)
  const CMatrix root = sqrt_psd(rho.mat());
  const CMatrix m = root * spin_flip(rho.mat()) * root;
  const std::vector<double> evs = herm_eigvals(m);
  // eigenvalues that are zero up to round-off must not leak sqrt(eps)
  // size roots into the concurrence difference
  const double floor = 1e-13 * std::max(evs.front(), 0.0);
  std::vector<double> out;
  out.reserve(4);
  for (double ev : evs) out.push_back(ev > floor ? std::sqrt(ev) : 0.0);
  return out;  // already decreasing
}

double concurrence(const DensityMatrix& rho) {
  const std::vector<double> r = concurrence_roots(rho);
  return std::max(0.0, r[0] - r[1] - r[2] - r[3]);
}

double fully_entangled_fraction(const DensityMatrix& rho) {
  require_dim4(rho);
  require_normalized(rho);
  // verify the state is Bell-diagonal before reading off the weights
  double max_off = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const std::vector<Complex>& bi = bell_ket(i);
      const std::vector<Complex>& bj = bell_ket(j);
      Complex w = 0.0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          w += std::conj(bi[r]) * rho.mat()(r, c) * bj[c];
      max_off = std::max(max_off, std::abs(w));
    }
  if (max_off > kBellDiagonalTol)
    throw std::invalid_argument(
        "fully_entangled_fraction: implemented for Bell-diagonal states "
        "only");
  const BellDecomposition d = bell_decompose(rho);
  return std::max({d.w_minus, d.w_plus, d.w_phi_minus, d.w_phi_plus});
}

double eof_from_concurrence(double c) {
  if (c < 0.0 || c > 1.0)
    throw std::invalid_argument("eof: concurrence outside [0, 1]");
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double eof(const DensityMatrix& rho) {
  return eof_from_concurrence(concurrence(rho));
}

double eof_lower_bound_from_fraction(double f) {
  if (f < 0.0 || f > 1.0)
    throw std::invalid_argument("eof bound: fraction outside [0, 1]");
  if (f < 0.5) return 0.0;
  return binary_entropy(0.5 + std::sqrt(f * (1.0 - f)));
}

EntanglementReport entanglement_report(double t, const KaonParams& p) {
  if (!(t >= 0.0))
    throw std::invalid_argument("entanglement_report: t must be >= 0");
  p.validate();
  const DensityMatrix rho_n = normalize(evolve_2p_analytic(t, p));

  EntanglementReport rep;
  rep.t = t;
  rep.entropy = vn_entropy(rho_n);
  std::tie(rep.reduced_entropy_left, rep.reduced_entropy_right) =
      reduced_entropies(rho_n);
  rep.bell = bell_decompose(rho_n);
  rep.ppt_min_eigval = ppt_test(rho_n).min_eigval;
  rep.reduction_min_eigval = reduction_test(rho_n).min_eigval;
  rep.concurrence = kaondec::concurrence(rho_n);
  rep.fraction = fully_entangled_fraction(rho_n);
  rep.eof = kaondec::eof(rho_n);
  rep.zeta = zeta_eval(ZetaModel::single_time(p.lambda), t, t);
  rep.loss_concurrence = 1.0 - rep.concurrence;
  rep.loss_eof = 1.0 - rep.eof;
  return rep;
}

std::vector<EntanglementReport> sweep_report(const std::vector<double>& t_grid,
                                             const KaonParams& p) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("sweep_report: grid must be sorted");
  std::vector<EntanglementReport> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(entanglement_report(t, p));
  return out;
}

}  // namespace kaondec
