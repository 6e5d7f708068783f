#include "kaondec/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kaondec {

namespace {

void require_dim(int dim) {
  if (dim != 2 && dim != 4)
    throw std::invalid_argument("CMatrix: dimension must be 2 or 4, got " +
                                std::to_string(dim));
}

}  // namespace

CMatrix::CMatrix(int dim) : dim_(dim) { require_dim(dim); }

CMatrix::CMatrix(int dim, std::initializer_list<Complex> entries) : dim_(dim) {
  require_dim(dim);
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::invalid_argument("CMatrix: expected " +
                                std::to_string(dim * dim) + " entries, got " +
                                std::to_string(entries.size()));
  std::copy(entries.begin(), entries.end(), a_.begin());
}

CMatrix::CMatrix(int dim, const std::vector<Complex>& entries) : dim_(dim) {
  require_dim(dim);
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::invalid_argument("CMatrix: expected " +
                                std::to_string(dim * dim) + " entries, got " +
                                std::to_string(entries.size()));
  std::copy(entries.begin(), entries.end(), a_.begin());
}

CMatrix CMatrix::identity(int dim) {
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::outer(const std::vector<Complex>& ket,
                       const std::vector<Complex>& bra) {
  if (ket.size() != bra.size())
    throw std::invalid_argument("outer: ket/bra length mismatch");
  CMatrix m(static_cast<int>(ket.size()));
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
  return m;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

CMatrix CMatrix::transposed() const {
  CMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = (*this)(c, r);
  return m;
}

CMatrix CMatrix::conjugated() const {
  CMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(r, c));
  return m;
}

double CMatrix::hermiticity_error() const {
  double err = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      err = std::max(err, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return err;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(a_[i]));
  return m;
}

double CMatrix::max_abs_diff(const CMatrix& other) const {
  if (dim_ != other.dim_)
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < dim_ * dim_; ++i)
    m = std::max(m, std::abs(a_[i] - other.a_[i]));
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("matrix add: dim mismatch");
  for (int i = 0; i < dim_ * dim_; ++i) a_[i] += o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("matrix sub: dim mismatch");
  for (int i = 0; i < dim_ * dim_; ++i) a_[i] -= o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (int i = 0; i < dim_ * dim_; ++i) a_[i] *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("matrix mul: dim mismatch");
  CMatrix m(a.dim_);
  for (int r = 0; r < a.dim_; ++r)
    for (int k = 0; k < a.dim_; ++k) {
      const Complex ark = a(r, k);
      for (int c = 0; c < a.dim_; ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

DensityMatrix::DensityMatrix(CMatrix mat) : mat_(std::move(mat)) {
  if (mat_.dim() != 2 && mat_.dim() != 4)
    throw std::invalid_argument("DensityMatrix: dimension must be 2 or 4");
  const double herr = mat_.hermiticity_error();
  if (herr > kHermTol)
    throw std::invalid_argument(
        "DensityMatrix: not Hermitian (max deviation " + std::to_string(herr) +
        ")");
  const Complex tr = mat_.trace();
  if (std::abs(tr.imag()) > kHermTol)
    throw std::invalid_argument("DensityMatrix: trace has imaginary part");
  trace_ = tr.real();
  if (!(trace_ > 0.0) || trace_ > 1.0 + kHermTol)
    throw std::invalid_argument("DensityMatrix: trace " +
                                std::to_string(trace_) + " outside (0, 1]");
  for (double ev : herm_eigvals(mat_))
    if (ev < kPsdTol)
      throw std::invalid_argument(
          "DensityMatrix: negative eigenvalue " + std::to_string(ev));
}

bool DensityMatrix::normalized() const {
  return std::abs(trace_ - 1.0) <= kHermTol;
}

namespace quasispin {

const CMatrix& up() {
  static const CMatrix m(2, {1.0, 0.0, 0.0, 0.0});
  return m;
}
const CMatrix& down() {
  static const CMatrix m(2, {0.0, 0.0, 0.0, 1.0});
  return m;
}
const CMatrix& plus() {
  static const CMatrix m(2, {0.0, 1.0, 0.0, 0.0});
  return m;
}
const CMatrix& minus() {
  static const CMatrix m(2, {0.0, 0.0, 1.0, 0.0});
  return m;
}
const CMatrix& sigma_x() {
  static const CMatrix m(2, {0.0, 1.0, 1.0, 0.0});
  return m;
}
const CMatrix& sigma_y() {
  static const CMatrix m(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0});
  return m;
}
const CMatrix& sigma_z() {
  static const CMatrix m(2, {1.0, 0.0, 0.0, -1.0});
  return m;
}
const CMatrix& id2() {
  static const CMatrix m = CMatrix::identity(2);
  return m;
}

}  // namespace quasispin

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2)
    throw std::invalid_argument("tensor: both factors must be 2x2");
  CMatrix m(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

CMatrix partial_trace(const CMatrix& rho, Side traced_out) {
  if (rho.dim() != 4)
    throw std::invalid_argument("partial_trace: input must be 4x4");
  CMatrix m(2);
  if (traced_out == Side::right) {
    // keep the left factor: m[i][j] = sum_k rho[2i+k][2j+k]
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        m(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
  } else {
    // keep the right factor: m[k][l] = sum_i rho[2i+k][2i+l]
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) m(k, l) = rho(k, l) + rho(2 + k, 2 + l);
  }
  return m;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Side traced_out) {
  return DensityMatrix(partial_trace(rho.mat(), traced_out));
}

CMatrix partial_transpose(const CMatrix& rho, Side side) {
  if (rho.dim() != 4)
    throw std::invalid_argument("partial_transpose: input must be 4x4");
  CMatrix m(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          if (side == Side::left)
            m(2 * i + k, 2 * j + l) = rho(2 * j + k, 2 * i + l);
          else
            m(2 * i + k, 2 * j + l) = rho(2 * i + l, 2 * j + k);
        }
  return m;
}

CMatrix partial_transpose(const DensityMatrix& rho, Side side) {
  return partial_transpose(rho.mat(), side);
}

HermEigen herm_eigen(const CMatrix& m) {
  if (!m.is_hermitian())
    throw std::invalid_argument("herm_eigen: input is not Hermitian (max "
                                "deviation " +
                                std::to_string(m.hermiticity_error()) + ")");
  const int n = m.dim();
  // symmetrize away the sub-tolerance residual so the iteration sees an
  // exactly Hermitian matrix
  CMatrix a(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  CMatrix v = CMatrix::identity(n);

  const double scale = std::max(1.0, a.max_abs());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-16 * scale) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double abs_pq = std::abs(apq);
        if (abs_pq <= 1e-18 * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Unitary 2x2 rotation zeroing a(p,q); classic Jacobi with the
        // complex phase folded into the rotation.
        const Complex phase = apq / abs_pq;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * abs_pq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        CMatrix j = CMatrix::identity(n);
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s * phase;
        j(q, p) = -s * std::conj(phase);
        a = j.adjoint() * a * j;
        a(p, q) = a(q, p) = 0.0;  // exact zero by construction
        v = v * j;
      }
    }
  }

  HermEigen out;
  out.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  out.vectors = CMatrix(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> herm_eigvals(const CMatrix& m) {
  return herm_eigen(m).values;
}

CMatrix sqrt_psd(const CMatrix& m) {
  const HermEigen eg = herm_eigen(m);
  const int n = m.dim();
  CMatrix out(n);
  for (int k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, eg.values[k]));
    if (root == 0.0) continue;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out(r, c) += root * eg.vectors(r, k) * std::conj(eg.vectors(c, k));
  }
  return out;
}

}  // namespace kaondec
