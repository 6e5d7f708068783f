#include "kaondec/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kaondec/evolution.hpp"
#include "kaondec/qmat.hpp"

namespace kaondec {

namespace {

void require_times(double t_l, double t_r) {
  if (!(t_l >= 0.0) || !(t_r >= 0.0))
    throw std::invalid_argument("measurement times must be >= 0");
}

// strangeness eigenstates in the mass basis under CP invariance:
// |K0> = (|K_S> + |K_L>)/sqrt(2), |K0bar> = (|K_S> - |K_L>)/sqrt(2)
CMatrix strangeness_projector(Strangeness s) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double sign = (s == Strangeness::plus) ? 1.0 : -1.0;
  const std::vector<Complex> ket{inv_sqrt2, sign * inv_sqrt2};
  return CMatrix::outer(ket, ket);
}

// interference-weight factor: -1 like strangeness, +1 unlike
double interference_sign(const TwoTimeOutcome& o) {
  return (o.s_left == o.s_right) ? -1.0 : 1.0;
}

double prob_with_weight(const TwoTimeOutcome& o, const KaonParams& p,
                        double interference_weight) {
  require_times(o.t_left, o.t_right);
  p.validate();
  const double tl = std::max(o.t_left, o.t_right);
  const double tr = std::min(o.t_left, o.t_right);
  const double direct = std::exp(-p.gamma_S * tl - p.gamma_L * tr) +
                        std::exp(-p.gamma_L * tl - p.gamma_S * tr);
  const double interference = interference_weight * 2.0 *
                              std::cos(p.delta_m * (tl - tr)) *
                              std::exp(-p.gamma() * (tl + tr));
  return 0.125 * (direct + interference_sign(o) * interference);
}

}  // namespace

ZetaModel ZetaModel::min_time(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("zeta model: lambda < 0");
  return {ZetaKind::two_particle_min, lambda, 0.0};
}

ZetaModel ZetaModel::single_time(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("zeta model: lambda < 0");
  return {ZetaKind::single_time, lambda, 0.0};
}

ZetaModel ZetaModel::sum_time(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("zeta model: lambda < 0");
  return {ZetaKind::one_particle_sum, lambda, 0.0};
}

ZetaModel ZetaModel::constant_zeta(double zeta) {
  if (zeta < 0.0 || zeta > 1.0)
    throw std::invalid_argument("zeta model: constant zeta outside [0, 1]");
  return {ZetaKind::constant, 0.0, zeta};
}

double zeta_eval(const ZetaModel& model, double t_l, double t_r) {
  require_times(t_l, t_r);
  switch (model.kind) {
    case ZetaKind::two_particle_min:
      return 1.0 - std::exp(-model.lambda * std::min(t_l, t_r));
    case ZetaKind::single_time:
      if (t_l != t_r)
        throw std::invalid_argument(
            "zeta_eval: single-time form is only defined for t_l == t_r");
      return 1.0 - std::exp(-model.lambda * t_l);
    case ZetaKind::one_particle_sum:
      return 1.0 - std::exp(-model.lambda * (t_l + t_r));
    case ZetaKind::constant:
      return model.zeta_const;
  }
  throw std::logic_error("zeta_eval: unknown model kind");
}

double prob_lambda(const TwoTimeOutcome& o, const KaonParams& p) {
  const double tmin = std::min(o.t_left, o.t_right);
  return prob_with_weight(o, p, std::exp(-p.lambda * tmin));
}

double prob_zeta(const TwoTimeOutcome& o, const KaonParams& p, double zeta) {
  if (zeta < 0.0 || zeta > 1.0)
    throw std::invalid_argument("prob_zeta: zeta outside [0, 1]");
  return prob_with_weight(o, p, 1.0 - zeta);
}

double prob_lambda_sequential(const TwoTimeOutcome& o, const KaonParams& p) {
  require_times(o.t_left, o.t_right);
  p.validate();
  // order so the "right" particle is measured first
  const bool swap = o.t_left < o.t_right;
  const double t_first = swap ? o.t_left : o.t_right;
  const double t_second = swap ? o.t_right : o.t_left;
  const Strangeness s_first = swap ? o.s_left : o.s_right;
  const Strangeness s_second = swap ? o.s_right : o.s_left;
  const Side first_side = swap ? Side::left : Side::right;

  // two-particle state at the first measurement, still under decoherence
  const DensityMatrix rho2 = evolve_2p_analytic(t_first, p);

  // project the first-measured side; the sandwiched form keeps the
  // conditional state Hermitian
  const CMatrix proj = strangeness_projector(s_first);
  const CMatrix meas = (first_side == Side::right)
                           ? tensor(quasispin::id2(), proj)
                           : tensor(proj, quasispin::id2());
  const CMatrix conditioned = meas * rho2.mat() * meas;
  const DensityMatrix survivor(partial_trace(conditioned, first_side));

  // the surviving kaon evolves as a one-particle state with pure QM
  KaonParams pure_qm = p;
  pure_qm.lambda = 0.0;
  const DensityMatrix evolved =
      evolve_1p_analytic(survivor, t_second - t_first, pure_qm);

  const CMatrix final_proj = strangeness_projector(s_second);
  return (final_proj * evolved.mat()).trace().real();
}

double asymmetry_qm(double dt, const KaonParams& p, double dt_scale) {
  p.validate();
  const double x = dt * dt_scale;
  return std::cos(p.delta_m * x) / std::cosh(0.5 * p.delta_gamma() * x);
}

double asymmetry_lambda(double t_l, double t_r, const KaonParams& p,
                        double dt_scale) {
  require_times(t_l, t_r);
  p.validate();
  return asymmetry_qm(t_l - t_r, p, dt_scale) *
         std::exp(-p.lambda * std::min(t_l, t_r));
}

double asymmetry_zeta(double t_l, double t_r, const KaonParams& p,
                      const ZetaModel& model, double dt_scale) {
  require_times(t_l, t_r);
  p.validate();
  return asymmetry_qm(t_l - t_r, p, dt_scale) *
         (1.0 - zeta_eval(model, t_l, t_r));
}

}  // namespace kaondec
