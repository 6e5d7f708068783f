#pragma once

#include <array>
#include <complex>
#include <initializer_list>
#include <vector>

// Dense complex matrix core for the two-level kaon system and its
// two-particle tensor space. Dimensions are fixed to 2 and 4; basis
// ordering is index 0 = K_S, 1 = K_L for one particle and
// (SS, SL, LS, LL) for two particles.

namespace kaondec {

using Complex = std::complex<double>;

// Hermiticity tolerance, one order below the integrator's target accuracy.
inline constexpr double kHermTol = 1e-12;
// Eigenvalue floor for positive-semidefiniteness checks.
inline constexpr double kPsdTol = -1e-10;

enum class Side { left, right };

class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int dim);
  CMatrix(int dim, std::initializer_list<Complex> entries);  // row-major
  CMatrix(int dim, const std::vector<Complex>& entries);

  static CMatrix identity(int dim);
  // |ket><bra| for vectors of length 2 or 4
  static CMatrix outer(const std::vector<Complex>& ket,
                       const std::vector<Complex>& bra);

  int dim() const { return dim_; }

  Complex& operator()(int r, int c) { return a_[r * dim_ + c]; }
  const Complex& operator()(int r, int c) const { return a_[r * dim_ + c]; }

  Complex trace() const;
  CMatrix adjoint() const;
  CMatrix transposed() const;
  CMatrix conjugated() const;

  // max elementwise |M - M^dagger|
  double hermiticity_error() const;
  bool is_hermitian(double tol = kHermTol) const {
    return hermiticity_error() <= tol;
  }
  double max_abs() const;
  double max_abs_diff(const CMatrix& other) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator-(CMatrix a) { return a *= Complex(-1.0, 0.0); }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  int dim_ = 0;
  std::array<Complex, 16> a_{};  // row-major, dim*dim entries used
};

// A positive-semidefinite Hermitian state with trace in (0, 1].
// Construction validates all three invariants; normalized() reports
// whether the trace has been rescaled to 1.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix mat);

  const CMatrix& mat() const { return mat_; }
  int dim() const { return mat_.dim(); }
  double trace_real() const { return trace_; }
  bool normalized() const;

 private:
  CMatrix mat_;
  double trace_ = 0.0;
};

// Quasispin projection and ladder operators: up = P_S, down = P_L,
// plus = P_SL, minus = P_LS, along with the Pauli matrices.
namespace quasispin {
const CMatrix& up();
const CMatrix& down();
const CMatrix& plus();
const CMatrix& minus();
const CMatrix& sigma_x();
const CMatrix& sigma_y();
const CMatrix& sigma_z();
const CMatrix& id2();
}  // namespace quasispin

// Kronecker product of two 2x2 matrices; the left factor is the
// left-moving particle slot: (a (x) b)[2i+k][2j+l] = a[i][j] b[k][l].
CMatrix tensor(const CMatrix& a, const CMatrix& b);

// Trace over the named subsystem of a 4x4 matrix, leaving a 2x2 one.
CMatrix partial_trace(const CMatrix& rho, Side traced_out);
DensityMatrix partial_trace(const DensityMatrix& rho, Side traced_out);

// Transposition applied to one tensor factor only.
CMatrix partial_transpose(const CMatrix& rho, Side side);
CMatrix partial_transpose(const DensityMatrix& rho, Side side);

// Real eigenvalues of a Hermitian matrix in decreasing order.
// Throws if the input is not Hermitian within kHermTol.
std::vector<double> herm_eigvals(const CMatrix& m);

// Full eigendecomposition m = V diag(values) V^dagger, values decreasing,
// eigenvectors as the columns of V. Cyclic complex Jacobi; exact enough
// for the 4x4 matrices this project lives in.
struct HermEigen {
  std::vector<double> values;
  CMatrix vectors;
};
HermEigen herm_eigen(const CMatrix& m);

// Hermitian PSD square root (eigenvalues clamped at 0 before the root).
CMatrix sqrt_psd(const CMatrix& m);

}  // namespace kaondec
