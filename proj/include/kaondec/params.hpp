#pragma once

#include <string>

// Physical parameters of the neutral-kaon system. All times are in units
// of the K_S lifetime tau_S and all rates in units of Gamma_S, so
// gamma_S == 1 by convention and lambda is the dimensionless decoherence
// strength Lambda = lambda/Gamma_S.

namespace kaondec {

// Default constants, overridable through a key-value constants file.
// Values are standard particle-data numbers, not model inputs:
//   Gamma_L/Gamma_S  from the K_L/K_S lifetime ratio,
//   dm/Gamma_S       from the K_L-K_S mass difference,
//   Gamma_S [MeV]    hbar/tau_S with tau_S = 0.8954e-10 s,
//   tau_S per cm     anchored at 2 cm ~ 0.55 tau_S for the CPLEAR-style
//                    absorber geometry (linear in distance).
struct Constants {
  double gamma_L_over_gamma_S = 1.727e-3;
  double delta_m_over_gamma_S = 0.4736;
  double gamma_S_mev = 7.3510e-12;
  double tau_S_per_cm = 0.275;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys are an
// error so typos cannot silently fall back to defaults.
Constants load_constants(const std::string& path);

struct KaonParams {
  double gamma_S = 1.0;
  double gamma_L = Constants{}.gamma_L_over_gamma_S;
  double delta_m = Constants{}.delta_m_over_gamma_S;
  double lambda = 0.0;

  double gamma() const { return 0.5 * (gamma_S + gamma_L); }
  double delta_gamma() const { return gamma_L - gamma_S; }

  // gamma_S > 0, gamma_L >= 0, lambda >= 0
  void validate() const;

  static KaonParams with_lambda(double lam);
  static KaonParams from_constants(const Constants& c, double lam);
};

}  // namespace kaondec
