#include "kaondec/evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kaondec {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_nonnegative_time(double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("time must be >= 0, got " + std::to_string(t));
}

}  // namespace

EffectiveHamiltonian::EffectiveHamiltonian(CMatrix mat) : mat_(std::move(mat)) {
  // CP invariance keeps H diagonal in the mass basis
  for (int r = 0; r < mat_.dim(); ++r)
    for (int c = 0; c < mat_.dim(); ++c)
      if (r != c && std::abs(mat_(r, c)) > kHermTol)
        throw std::invalid_argument(
            "EffectiveHamiltonian: off-diagonal entry in the mass basis");
}

EffectiveHamiltonian EffectiveHamiltonian::one_particle(const KaonParams& p) {
  p.validate();
  CMatrix h(2);
  h(0, 0) = -kI * 0.5 * p.gamma_S;
  h(1, 1) = p.delta_m - kI * 0.5 * p.gamma_L;
  return EffectiveHamiltonian(std::move(h));
}

EffectiveHamiltonian EffectiveHamiltonian::two_particle(const KaonParams& p) {
  const CMatrix h1 = one_particle(p).mat();
  const CMatrix& id = quasispin::id2();
  return EffectiveHamiltonian(tensor(h1, id) + tensor(id, h1));
}

LindbladOperatorSet::LindbladOperatorSet(std::vector<CMatrix> ops)
    : ops_(std::move(ops)) {
  for (const CMatrix& a : ops_)
    if (!a.is_hermitian())
      throw std::invalid_argument(
          "LindbladOperatorSet: operators must be Hermitian");
}

LindbladOperatorSet LindbladOperatorSet::from_projectors(
    const std::vector<CMatrix>& projectors, double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("LindbladOperatorSet: lambda must be >= 0");
  const double root = std::sqrt(lambda);
  std::vector<CMatrix> ops;
  ops.reserve(projectors.size());
  for (const CMatrix& p : projectors) {
    if ((p * p).max_abs_diff(p) > kHermTol)
      throw std::invalid_argument(
          "LindbladOperatorSet: projector is not idempotent");
    ops.push_back(root * p);
  }
  return LindbladOperatorSet(std::move(ops));
}

LindbladOperatorSet LindbladOperatorSet::one_particle(const KaonParams& p) {
  p.validate();
  return from_projectors({quasispin::up(), quasispin::down()}, p.lambda);
}

LindbladOperatorSet LindbladOperatorSet::two_particle(const KaonParams& p) {
  p.validate();
  return from_projectors({CMatrix::outer(ket_e1(), ket_e1()),
                          CMatrix::outer(ket_e2(), ket_e2())},
                         p.lambda);
}

std::vector<Complex> ket_e1() { return {0.0, 1.0, 0.0, 0.0}; }
std::vector<Complex> ket_e2() { return {0.0, 0.0, 1.0, 0.0}; }

DensityMatrix singlet_state() {
  CMatrix m(4);
  m(1, 1) = m(2, 2) = 0.5;
  m(1, 2) = m(2, 1) = -0.5;
  return DensityMatrix(std::move(m));
}

DensityMatrix evolve_1p_analytic(const DensityMatrix& rho0, double t,
                                 const KaonParams& p) {
  require_nonnegative_time(t);
  p.validate();
  if (rho0.dim() != 2)
    throw std::invalid_argument("evolve_1p_analytic: state must be 2x2");
  const CMatrix& r0 = rho0.mat();
  CMatrix r(2);
  r(0, 0) = r0(0, 0) * std::exp(-p.gamma_S * t);
  r(1, 1) = r0(1, 1) * std::exp(-p.gamma_L * t);
  const double damp = std::exp(-(p.gamma() + p.lambda) * t);
  // rho_LS picks up e^{-i dm t}; rho_SL its conjugate
  r(1, 0) = r0(1, 0) * damp * std::exp(-kI * p.delta_m * t);
  r(0, 1) = r0(0, 1) * damp * std::exp(kI * p.delta_m * t);
  return DensityMatrix(std::move(r));
}

DensityMatrix evolve_2p_analytic(double t, const KaonParams& p) {
  require_nonnegative_time(t);
  p.validate();
  const double half_decay = 0.5 * std::exp(-2.0 * p.gamma() * t);
  const double coherence = std::exp(-p.lambda * t);
  CMatrix m(4);
  m(1, 1) = m(2, 2) = half_decay;
  m(1, 2) = m(2, 1) = -half_decay * coherence;
  return DensityMatrix(std::move(m));
}

namespace {

CMatrix master_rhs(const CMatrix& rho, const CMatrix& h, const CMatrix& h_adj,
                   const std::vector<CMatrix>& asq,
                   const std::vector<CMatrix>& a) {
  CMatrix out = -kI * (h * rho) + kI * (rho * h_adj);
  for (size_t j = 0; j < a.size(); ++j) {
    out -= 0.5 * (asq[j] * rho + rho * asq[j]);
    out += a[j] * rho * a[j];  // A_j Hermitian
  }
  return out;
}

}  // namespace

DensityMatrix evolve_numeric(const DensityMatrix& rho0,
                             const EffectiveHamiltonian& h,
                             const LindbladOperatorSet& ops, double t,
                             double step) {
  require_nonnegative_time(t);
  if (!(step > 0.0))
    throw std::invalid_argument("evolve_numeric: step must be > 0");
  if (h.dim() != rho0.dim())
    throw std::invalid_argument("evolve_numeric: Hamiltonian/state dims differ");
  for (const CMatrix& a : ops.ops())
    if (a.dim() != rho0.dim())
      throw std::invalid_argument(
          "evolve_numeric: Lindblad operator/state dims differ");

  const CMatrix& hm = h.mat();
  const CMatrix h_adj = hm.adjoint();
  std::vector<CMatrix> asq;
  asq.reserve(ops.ops().size());
  for (const CMatrix& a : ops.ops()) asq.push_back(a * a);

  CMatrix rho = rho0.mat();
  double remaining = t;
  while (remaining > 0.0) {
    const double hstep = std::min(step, remaining);
    const CMatrix k1 = master_rhs(rho, hm, h_adj, asq, ops.ops());
    const CMatrix k2 =
        master_rhs(rho + (0.5 * hstep) * k1, hm, h_adj, asq, ops.ops());
    const CMatrix k3 =
        master_rhs(rho + (0.5 * hstep) * k2, hm, h_adj, asq, ops.ops());
    const CMatrix k4 = master_rhs(rho + hstep * k3, hm, h_adj, asq, ops.ops());
    rho += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // project out Hermiticity round-off
    rho = 0.5 * (rho + rho.adjoint());
    remaining -= hstep;
    if (remaining < 1e-15) break;
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix normalize(const DensityMatrix& rho) {
  const double tr = rho.trace_real();
  if (tr <= 1e-300) throw std::domain_error("fully decayed state");
  return DensityMatrix((1.0 / tr) * rho.mat());
}

}  // namespace kaondec
