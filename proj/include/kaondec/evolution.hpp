#pragma once

#include <vector>

#include "kaondec/params.hpp"
#include "kaondec/qmat.hpp"

// Time evolution of one- and two-particle kaon density matrices under the
// effective-mass Hamiltonian plus a projector-built dissipator of strength
// lambda. Closed-form solutions exist because the dissipator commutes with
// the Hamiltonian eigenprojectors; a fixed-step RK4 integrator of the full
// master equation serves as an independent oracle.

namespace kaondec {

// Non-Hermitian effective Hamiltonian, diagonal in the mass basis under
// CP invariance. The common real offset m_S is dropped (a global phase).
class EffectiveHamiltonian {
 public:
  explicit EffectiveHamiltonian(CMatrix mat);

  // diag(-i gamma_S/2, dm - i gamma_L/2)
  static EffectiveHamiltonian one_particle(const KaonParams& p);
  // H (x) 1 + 1 (x) H on the (SS, SL, LS, LL) product basis
  static EffectiveHamiltonian two_particle(const KaonParams& p);

  const CMatrix& mat() const { return mat_; }
  int dim() const { return mat_.dim(); }

 private:
  CMatrix mat_;
};

// Lindblad operators A_j = sqrt(lambda) P_j for Hermitian idempotent
// projectors P_j.
class LindbladOperatorSet {
 public:
  explicit LindbladOperatorSet(std::vector<CMatrix> ops);

  static LindbladOperatorSet from_projectors(
      const std::vector<CMatrix>& projectors, double lambda);
  // P_S, P_L
  static LindbladOperatorSet one_particle(const KaonParams& p);
  // |e1><e1|, |e2><e2| with e1 = K_S(x)K_L, e2 = K_L(x)K_S
  static LindbladOperatorSet two_particle(const KaonParams& p);

  const std::vector<CMatrix>& ops() const { return ops_; }

 private:
  std::vector<CMatrix> ops_;
};

// Product-basis kets of the two-particle Hamiltonian eigenstates.
std::vector<Complex> ket_e1();
std::vector<Complex> ket_e2();

// |psi-><psi-| = (|e1><e1| + |e2><e2| - |e1><e2| - |e2><e1|)/2, the
// antisymmetric maximally entangled initial state of the experiment.
DensityMatrix singlet_state();

// Decoupled closed-form solution for one particle:
//   rho_SS(t) = rho_SS(0) e^{-gamma_S t}
//   rho_LL(t) = rho_LL(0) e^{-gamma_L t}
//   rho_LS(t) = rho_LS(0) e^{-i dm t - Gamma t - lambda t},  rho_SL h.c.
DensityMatrix evolve_1p_analytic(const DensityMatrix& rho0, double t,
                                 const KaonParams& p);

// Closed-form solution for the singlet:
//   (1/2) e^{-2 Gamma t} [ |e1><e1| + |e2><e2|
//                          - e^{-lambda t} (|e1><e2| + |e2><e1|) ]
DensityMatrix evolve_2p_analytic(double t, const KaonParams& p);

// Fixed-step classical RK4 integration of
//   d rho/dt = -i H rho + i rho H' - D[rho]   (H' = adjoint of H),
//   D[rho] = (1/2) sum_j (A'A rho + rho A'A - 2 A rho A').
// The state is re-symmetrized after every step so Hermiticity round-off
// cannot accumulate.
DensityMatrix evolve_numeric(const DensityMatrix& rho0,
                             const EffectiveHamiltonian& h,
                             const LindbladOperatorSet& ops, double t,
                             double step);

// rho / Tr(rho); throws "fully decayed state" once the trace is below
// the 1e-300 guard.
DensityMatrix normalize(const DensityMatrix& rho);

}  // namespace kaondec
