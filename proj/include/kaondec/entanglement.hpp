#pragma once

#include <utility>
#include <vector>

#include "kaondec/params.hpp"
#include "kaondec/qmat.hpp"

// Entanglement quantities on the normalized two-particle state: von
// Neumann entropy, reduced entropies, Bell-basis decomposition, the
// partial-transposition and reduction separability criteria, Wootters
// concurrence, fully entangled fraction, entanglement of formation, and
// the loss measures 1-C and 1-E that track the decoherence parameter.

namespace kaondec {

// -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0
double binary_entropy(double x);

// -sum lambda_i log2 lambda_i over the spectrum; requires a normalized
// state (entropy in bits).
double vn_entropy(const DensityMatrix& rho);

// entropies of the left and right reduced states
std::pair<double, double> reduced_entropies(const DensityMatrix& rho);

struct BellDecomposition {
  double w_minus = 0.0;      // |psi-><psi-|
  double w_plus = 0.0;       // |psi+><psi+|
  double w_phi_minus = 0.0;  // |phi-><phi-|
  double w_phi_plus = 0.0;   // |phi+><phi+|

  double sum() const { return w_minus + w_plus + w_phi_minus + w_phi_plus; }
};

// diagonal Bell-basis weights <bell_i| rho |bell_i>
BellDecomposition bell_decompose(const DensityMatrix& rho);

struct SeparabilityResult {
  bool separable_candidate = false;
  double min_eigval = 0.0;
};

// Peres-Horodecki: a separable state has a positive partial transpose,
// so a negative eigenvalue certifies entanglement.
SeparabilityResult ppt_test(const DensityMatrix& rho);

// Reduction criterion: rho_l (x) 1 - rho >= 0 or 1 (x) rho_r - rho >= 0.
// min_eigval is the smallest eigenvalue over both orderings.
SeparabilityResult reduction_test(const DensityMatrix& rho);

// (sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y), conjugation in
// the standard product basis
CMatrix spin_flip(const CMatrix& rho);

// Wootters: C = max{0, r1 - r2 - r3 - r4} where the r_i are the square
// roots, in decreasing order, of the eigenvalues of rho * spin_flip(rho).
double concurrence(const DensityMatrix& rho);
// the four concurrence roots themselves (decreasing)
std::vector<double> concurrence_roots(const DensityMatrix& rho);

// Largest Bell weight; only defined for Bell-diagonal states, which is
// the whole family this model produces. Rejects anything else.
double fully_entangled_fraction(const DensityMatrix& rho);

// E(C) = H(1/2 + sqrt(1 - C^2)/2), exact for two qubits
double eof_from_concurrence(double c);
double eof(const DensityMatrix& rho);

// Bennett lower bound E >= H(1/2 + sqrt(f(1-f))) for f >= 1/2, which is
// saturated for Bell mixtures.
double eof_lower_bound_from_fraction(double f);

struct EntanglementReport {
  double t = 0.0;
  double entropy = 0.0;
  double reduced_entropy_left = 0.0;
  double reduced_entropy_right = 0.0;
  BellDecomposition bell;
  double ppt_min_eigval = 0.0;
  double reduction_min_eigval = 0.0;
  double concurrence = 0.0;
  double fraction = 0.0;
  double eof = 0.0;
  double zeta = 0.0;
  double loss_concurrence = 0.0;  // 1 - C == zeta
  double loss_eof = 0.0;          // 1 - E ~ zeta/ln2 for small zeta
};

// Everything above evaluated on the normalized evolved singlet at time t.
EntanglementReport entanglement_report(double t, const KaonParams& p);

// One report per grid point; grid must be sorted ascending with t >= 0.
std::vector<EntanglementReport> sweep_report(const std::vector<double>& t_grid,
                                             const KaonParams& p);

}  // namespace kaondec
