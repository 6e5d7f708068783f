#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kaondec/entanglement.hpp"
#include "kaondec/evolution.hpp"
#include "kaondec/fit.hpp"

using namespace kaondec;

namespace {

DensityMatrix rho_n(double lambda, double t) {
  return normalize(evolve_2p_analytic(t, KaonParams::with_lambda(lambda)));
}

// w- rho(psi-) + (1-w-) rho(psi+)
DensityMatrix bell_mixture(double w_minus) {
  const double e = 2.0 * w_minus - 1.0;  // coherence weight, may be negative
  CMatrix m(4);
  m(1, 1) = m(2, 2) = 0.5;
  m(1, 2) = m(2, 1) = -0.5 * e;
  return DensityMatrix(m);
}

CMatrix random_hermitian4(SplitMix64& rng) {
  CMatrix m(4);
  for (int r = 0; r < 4; ++r) {
    m(r, r) = 2.0 * rng.uniform01() - 1.0;
    for (int c = r + 1; c < 4; ++c) {
      const Complex z{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
      m(r, c) = z;
      m(c, r) = std::conj(z);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("von neumann entropy of the evolving state") {
  CHECK(vn_entropy(rho_n(0.25, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));

  // large-time limit approaches one bit
  CHECK(vn_entropy(rho_n(1.0, 40.0)) == doctest::Approx(1.0).epsilon(1e-12));

  // coherence weight 1/2
  const double t_half = std::log(2.0) / 0.25;
  CHECK(vn_entropy(rho_n(0.25, t_half)) ==
        doctest::Approx(0.81127812445913286).epsilon(1e-12));

  // closed form at arbitrary points
  for (double lt : {0.1, 0.7, 2.0}) {
    const double e = std::exp(-lt);
    const double want = binary_entropy(0.5 * (1.0 + e));
    CHECK(vn_entropy(rho_n(1.0, lt)) == doctest::Approx(want).epsilon(1e-12));
  }

  // unnormalized input is rejected
  CHECK_THROWS_AS(
      vn_entropy(evolve_2p_analytic(1.0, KaonParams::with_lambda(0.25))),
      std::invalid_argument);
}

TEST_CASE("entropy is monotone in time") {
  const KaonParams p = KaonParams::with_lambda(0.59);
  double prev = -1.0;
  for (double t = 0.0; t <= 5.0; t += 0.05) {
    const double s = vn_entropy(rho_n(p.lambda, t));
    CHECK(s >= prev - 1e-12);
    prev = s;
  }
}

TEST_CASE("reduced entropies are one bit, independent of lambda") {
  for (double lambda : {0.0, 0.25, 0.59, 2.0})
    for (double t : {0.0, 0.5, 3.0}) {
      const auto [sl, sr] = reduced_entropies(rho_n(lambda, t));
      CHECK(sl == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(sr == doctest::Approx(1.0).epsilon(1e-10));
    }

  // a pure product state carries no subsystem uncertainty
  const DensityMatrix prod{tensor(quasispin::up(), quasispin::down())};
  const auto [sl, sr] = reduced_entropies(prod);
  CHECK(sl == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sr == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bell decomposition") {
  const BellDecomposition at0 = bell_decompose(rho_n(0.25, 0.0));
  CHECK(at0.w_minus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at0.w_plus == doctest::Approx(0.0));
  CHECK(at0.w_phi_minus == doctest::Approx(0.0));
  CHECK(at0.w_phi_plus == doctest::Approx(0.0));

  // coherence weight 1/2 gives the (3/4, 1/4) mixture
  const BellDecomposition mid = bell_decompose(rho_n(1.0, std::log(2.0)));
  CHECK(mid.w_minus == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(mid.w_plus == doctest::Approx(0.25).epsilon(1e-13));

  // asymptotically the two weights equalize
  const BellDecomposition late = bell_decompose(rho_n(1.0, 50.0));
  CHECK(late.w_minus == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(late.w_plus == doctest::Approx(0.5).epsilon(1e-13));

  // the weights are a distribution, and the proposition form holds
  for (double lt : {0.05, 0.4, 1.7}) {
    const BellDecomposition d = bell_decompose(rho_n(1.0, lt));
    CHECK(d.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.w_minus ==
          doctest::Approx(0.5 * (1.0 + std::exp(-lt))).epsilon(1e-13));
    CHECK(d.w_plus ==
          doctest::Approx(0.5 * (1.0 - std::exp(-lt))).epsilon(1e-13));
    CHECK(std::abs(d.w_phi_minus) < 1e-14);
    CHECK(std::abs(d.w_phi_plus) < 1e-14);

    // cross-module consistency: S(rho_N) is the binary entropy of w-
    CHECK(vn_entropy(rho_n(1.0, lt)) ==
          doctest::Approx(binary_entropy(d.w_minus)).epsilon(1e-12));
  }
}

TEST_CASE("ppt criterion flags the evolving state as entangled") {
  for (double lt : {0.01, 0.1, 1.0, 5.0}) {
    const SeparabilityResult r = ppt_test(rho_n(1.0, lt));
    CHECK_FALSE(r.separable_candidate);
    CHECK(r.min_eigval ==
          doctest::Approx(-0.5 * std::exp(-lt)).epsilon(1e-11));
  }

  // the negative eigenvalue survives until e^{-lambda t} underflows
  for (double lt : {10.0, 25.0, 35.0})
    CHECK(ppt_test(rho_n(1.0, lt)).min_eigval < 0.0);

  // numerically separable once e^{-lambda t} underflows the tolerance
  const SeparabilityResult late = ppt_test(rho_n(1.0, 50.0));
  CHECK(late.separable_candidate);
  CHECK(std::abs(late.min_eigval) < 1e-11);

  const DensityMatrix prod{tensor(quasispin::up(), quasispin::down())};
  const SeparabilityResult sep = ppt_test(prod);
  CHECK(sep.separable_candidate);
  CHECK(std::abs(sep.min_eigval) < 1e-12);
}

TEST_CASE("reduction criterion mirrors the ppt spectrum") {
  for (double lt : {0.05, 0.3, 1.2, 4.0}) {
    const DensityMatrix rho = rho_n(1.0, lt);
    const SeparabilityResult red = reduction_test(rho);
    const SeparabilityResult ppt = ppt_test(rho);
    CHECK(red.min_eigval == doctest::Approx(ppt.min_eigval).epsilon(1e-11));
    CHECK(red.separable_candidate == ppt.separable_candidate);
  }

  const DensityMatrix prod{tensor(quasispin::up(), quasispin::down())};
  CHECK(reduction_test(prod).separable_candidate);
  CHECK(reduction_test(prod).min_eigval >= -1e-12);
}

TEST_CASE("reduction and ppt verdicts agree on random bell mixtures") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 1000; ++rep) {
    const DensityMatrix rho = bell_mixture(rng.uniform01());
    const SeparabilityResult red = reduction_test(rho);
    const SeparabilityResult ppt = ppt_test(rho);
    CHECK(red.separable_candidate == ppt.separable_candidate);
  }
}

TEST_CASE("spin flip") {
  // the evolving state is spin-flip invariant
  for (double lt : {0.0, 0.4, 2.5}) {
    const CMatrix m = rho_n(1.0, lt).mat();
    CHECK(spin_flip(m).max_abs_diff(m) < 1e-15);
  }

  // involution on arbitrary hermitian matrices
  SplitMix64 rng(37);
  for (int rep = 0; rep < 50; ++rep) {
    const CMatrix m = random_hermitian4(rng);
    CHECK(spin_flip(spin_flip(m)).max_abs_diff(m) < 1e-14);
  }

  // flipping both spins of |up,up><up,up| gives |down,down><down,down|
  const CMatrix uu = tensor(quasispin::up(), quasispin::up());
  const CMatrix dd = tensor(quasispin::down(), quasispin::down());
  CHECK(spin_flip(uu).max_abs_diff(dd) < 1e-15);

  CHECK_THROWS_AS(spin_flip(CMatrix::identity(2)), std::invalid_argument);
}

TEST_CASE("concurrence of the evolving state") {
  CHECK(concurrence(rho_n(0.25, 0.0)) == doctest::Approx(1.0).epsilon(1e-13));

  CHECK(concurrence(rho_n(0.25, 0.55)) ==
        doctest::Approx(0.87153434999715787).epsilon(1e-12));

  // equal bell mixture is separable
  CHECK(concurrence(bell_mixture(0.5)) == doctest::Approx(0.0));

  // roots come from the state's own spectrum here: rho rho~ = rho^2
  for (double lt : {0.1, 0.8, 3.0}) {
    const DensityMatrix rho = rho_n(1.0, lt);
    const std::vector<double> roots = concurrence_roots(rho);
    const std::vector<double> evs = herm_eigvals(rho.mat());
    for (int i = 0; i < 4; ++i)
      CHECK(roots[i] == doctest::Approx(std::max(0.0, evs[i])).epsilon(1e-11));
    CHECK(concurrence(rho) == doctest::Approx(std::exp(-lt)).epsilon(1e-12));
  }
}

TEST_CASE("fully entangled fraction") {
  CHECK(fully_entangled_fraction(rho_n(0.25, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fully_entangled_fraction(rho_n(1.0, 50.0)) ==
        doctest::Approx(0.5).epsilon(1e-13));

  // C == 2f - 1 along the trajectory
  for (double lt = 0.0; lt <= 3.0; lt += 0.2) {
    const DensityMatrix rho = rho_n(1.0, lt);
    CHECK(concurrence(rho) ==
          doctest::Approx(2.0 * fully_entangled_fraction(rho) - 1.0)
              .epsilon(1e-11));
  }

  // defined for bell-diagonal states only
  const std::vector<Complex> k0{0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(fully_entangled_fraction(DensityMatrix{CMatrix::outer(k0, k0)}),
                  std::invalid_argument);
}

TEST_CASE("entanglement of formation") {
  CHECK(eof_from_concurrence(1.0) == doctest::Approx(1.0));
  CHECK(eof_from_concurrence(0.0) == doctest::Approx(0.0));

  // loss at the absorber time for the fitted mean decoherence strength
  const double loss = 1.0 - eof(rho_n(0.25, 0.55));
  CHECK(loss == doctest::Approx(0.18115158359003120).epsilon(1e-12));
  CHECK(loss == doctest::Approx(0.18).epsilon(0.06));

  // monotone in C
  double prev = -1.0;
  for (double c = 0.0; c <= 1.0; c += 0.01) {
    const double e = eof_from_concurrence(c);
    CHECK(e >= prev);
    prev = e;
  }

  // the bennett bound is saturated for this bell-diagonal family
  for (double lt : {0.1, 0.5, 1.5}) {
    const DensityMatrix rho = rho_n(1.0, lt);
    CHECK(eof(rho) ==
          doctest::Approx(
              eof_lower_bound_from_fraction(fully_entangled_fraction(rho)))
              .epsilon(1e-11));
  }
}

TEST_CASE("entanglement report") {
  // lambda = 0 keeps everything pristine
  const EntanglementReport clean =
      entanglement_report(2.0, KaonParams::with_lambda(0.0));
  CHECK(clean.loss_concurrence == doctest::Approx(0.0));
  CHECK(clean.loss_eof == doctest::Approx(0.0));
  CHECK(clean.entropy == doctest::Approx(0.0));
  CHECK(clean.zeta == 0.0);

  // upper-bound decoherence strength at the absorber time
  const EntanglementReport up =
      entanglement_report(0.55, KaonParams::with_lambda(0.59039586450823017));
  CHECK(up.loss_eof == doctest::Approx(0.37917038225326679).epsilon(1e-12));

  // loss identity 1 - C == zeta, exactly
  for (double lambda : {0.1, 0.25, 0.59})
    for (double t : {0.05, 0.55, 2.0}) {
      const EntanglementReport rep =
          entanglement_report(t, KaonParams::with_lambda(lambda));
      CHECK(std::abs(rep.loss_concurrence - rep.zeta) < 1e-12);
      CHECK(rep.concurrence ==
            doctest::Approx(2.0 * rep.fraction - 1.0).epsilon(1e-11));
    }

  // first-order loss coefficient at small zeta
  const double t_small = -std::log(0.99) / 0.25;  // zeta = 0.01
  const EntanglementReport small =
      entanglement_report(t_small, KaonParams::with_lambda(0.25));
  CHECK(small.zeta == doctest::Approx(0.01).epsilon(1e-12));
  const double ratio = small.loss_eof * std::log(2.0) / small.zeta;
  CHECK(ratio == doctest::Approx(0.99832663555467007).epsilon(1e-9));
  CHECK(std::abs(ratio - 1.0) <= 0.02);

  CHECK_THROWS_AS(entanglement_report(-0.5, KaonParams::with_lambda(0.1)),
                  std::invalid_argument);
}

TEST_CASE("sweep report") {
  const KaonParams p = KaonParams::with_lambda(0.25);

  const std::vector<EntanglementReport> single = sweep_report({0.0}, p);
  REQUIRE(single.size() == 1);
  CHECK(single[0].loss_concurrence == doctest::Approx(0.0));
  CHECK(single[0].loss_eof == doctest::Approx(0.0));

  // the 18% / 38% pair at the absorber time
  const KaonParams up = KaonParams::with_lambda(0.59039586450823017);
  CHECK(sweep_report({0.55}, p)[0].loss_eof ==
        doctest::Approx(0.18).epsilon(0.06));
  CHECK(sweep_report({0.55}, up)[0].loss_eof ==
        doctest::Approx(0.38).epsilon(0.03));

  // monotone loss over a dense grid
  std::vector<double> grid;
  for (double t = 0.0; t <= 5.0; t += 0.05) grid.push_back(t);
  const std::vector<EntanglementReport> sweep = sweep_report(grid, p);
  for (size_t i = 1; i < sweep.size(); ++i)
    CHECK(sweep[i].loss_eof >= sweep[i - 1].loss_eof - 1e-12);

  CHECK_THROWS_AS(sweep_report({1.0, 0.5}, p), std::invalid_argument);
}
