#pragma once

#include "kaondec/params.hpp"

// Strangeness measurement probabilities at two times, the QM and
// decoherence-model asymmetries, and the effective-decoherence (zeta)
// parameterizations that interpolate between pure QM (zeta = 0) and
// spontaneous factorization (zeta = 1).

namespace kaondec {

enum class Strangeness { plus, minus };  // + = K0, - = K0bar

struct TwoTimeOutcome {
  Strangeness s_left = Strangeness::plus;
  Strangeness s_right = Strangeness::plus;
  double t_left = 0.0;
  double t_right = 0.0;

  double dt() const { return t_left - t_right; }
};

enum class ZetaKind {
  two_particle_min,  // zeta = 1 - e^{-lambda min(t_l, t_r)}
  single_time,       // zeta(t) = 1 - e^{-lambda t}, equal times only
  one_particle_sum,  // zeta = 1 - e^{-lambda (t_l + t_r)}
  constant,          // fixed zeta
};

struct ZetaModel {
  ZetaKind kind = ZetaKind::two_particle_min;
  double lambda = 0.0;     // used by the time-dependent kinds
  double zeta_const = 0.0; // used by ZetaKind::constant

  static ZetaModel min_time(double lambda);
  static ZetaModel single_time(double lambda);
  static ZetaModel sum_time(double lambda);
  static ZetaModel constant_zeta(double zeta);
};

double zeta_eval(const ZetaModel& model, double t_l, double t_r);

// Like/unlike-strangeness coincidence probability
//   (1/8) [ e^{-gS tl - gL tr} + e^{-gL tl - gS tr}
//           -+ e^{-lambda min} 2 cos(dm dt) e^{-Gamma (tl+tr)} ],
// minus sign for like strangeness. Symmetric under swapping both sides.
double prob_lambda(const TwoTimeOutcome& outcome, const KaonParams& p);

// Same probability built the long way: project the first-measured side,
// evolve the survivor as a one-particle state with pure QM, project again.
double prob_lambda_sequential(const TwoTimeOutcome& outcome,
                              const KaonParams& p);

// Interference term scaled by (1 - zeta) instead of e^{-lambda min}.
double prob_zeta(const TwoTimeOutcome& outcome, const KaonParams& p,
                 double zeta);

// cos(dm dt) / cosh(dGamma dt / 2); dt_scale replicates the published
// rescaling of dt in the QM curve and defaults to 1 (no rescaling).
double asymmetry_qm(double dt, const KaonParams& p, double dt_scale = 1.0);

// A_qm(dt) e^{-lambda min(t_l, t_r)}
double asymmetry_lambda(double t_l, double t_r, const KaonParams& p,
                        double dt_scale = 1.0);

// A_qm(dt) (1 - zeta(t_l, t_r))
double asymmetry_zeta(double t_l, double t_r, const KaonParams& p,
                      const ZetaModel& model, double dt_scale = 1.0);

}  // namespace kaondec
