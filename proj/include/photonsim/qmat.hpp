#pragma once

// Exact-size complex matrix algebra for the 2x2 (one-photon) and 4x4
// (two-photon) polarization density matrices, plus the Hermitian
// eigendecomposition needed for PSD checks and the matrix square root.

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

#include "photonsim/common.hpp"

namespace photonsim::qmat {

template <std::size_t N>
class Mat {
 public:
  Mat() { e_.fill(Complex{0.0, 0.0}); }

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    Mat m;
    std::size_t r = 0;
    for (const auto& row : rows) {
      std::size_t c = 0;
      for (const auto& v : row) m(r, c++) = v;
      ++r;
    }
    return m;
  }

  Complex& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

  Mat operator+(const Mat& o) const {
    Mat m;
    for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = e_[i] + o.e_[i];
    return m;
  }

  Mat operator-(const Mat& o) const {
    Mat m;
    for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = e_[i] - o.e_[i];
    return m;
  }

  Mat operator*(const Mat& o) const {
    Mat m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex a = (*this)(r, k);
        if (a == Complex{0.0, 0.0}) continue;
        for (std::size_t c = 0; c < N; ++c) m(r, c) += a * o(k, c);
      }
    return m;
  }

  Mat operator*(Complex s) const {
    Mat m;
    for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = e_[i] * s;
    return m;
  }

  friend Mat operator*(Complex s, const Mat& m) { return m * s; }

  Mat adjoint() const {
    Mat m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : e_) m = std::max(m, std::abs(v));
    return m;
  }

  double max_abs_diff(const Mat& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(e_[i] - o.e_[i]));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

 private:
  std::array<Complex, N * N> e_;
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <std::size_t N>
using Ket = std::array<Complex, N>;
using Ket2 = Ket<2>;
using Ket4 = Ket<4>;

template <std::size_t N>
Mat<N> hermitize(const Mat<N>& m) {
  return (m + m.adjoint()) * Complex{0.5, 0.0};
}

// Kronecker product in the fixed composite ordering; the first factor carries
// the slow (most significant) index.
Mat4 tensor(const Mat2& a, const Mat2& b);

// Real rotation by `angle` in the polarization plane.
Mat2 rotation2(double angle);

template <std::size_t N>
Ket<N> apply(const Mat<N>& m, const Ket<N>& k) {
  Ket<N> out{};
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out[r] += m(r, c) * k[c];
  return out;
}

template <std::size_t N>
Complex inner(const Ket<N>& a, const Ket<N>& b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
Mat<N> outer(const Ket<N>& k) {
  Mat<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) m(r, c) = k[r] * std::conj(k[c]);
  return m;
}

template <std::size_t N>
struct HermitianEigen {
  std::array<double, N> values;  // ascending
  Mat<N> vectors;                // columns are the matching eigenvectors
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Off-diagonal norm
// threshold 1e-14 (relative to scale), at most 100 sweeps; ample for N <= 4.
template <std::size_t N>
HermitianEigen<N> hermitian_eigen(const Mat<N>& input);

// Hermitian PSD square root: S with S*S = m. Rejects inputs that are
// non-Hermitian or indefinite beyond tolerance 1e-10.
template <std::size_t N>
Mat<N> psd_sqrt(const Mat<N>& m);

// A matrix that passed the density-matrix checks: Hermitian and unit trace to
// 1e-10, eigenvalues >= -1e-10.
template <std::size_t N>
class DensityMatrix {
 public:
  static DensityMatrix validate(const Mat<N>& m);
  static DensityMatrix from_ket(const Ket<N>& k);

  const Mat<N>& mat() const { return m_; }
  double purity() const;

 private:
  explicit DensityMatrix(const Mat<N>& m) : m_(m) {}
  Mat<N> m_;
};

using Density2 = DensityMatrix<2>;
using Density4 = DensityMatrix<4>;

template <std::size_t N>
DensityMatrix<N> validate_density(const Mat<N>& m) {
  return DensityMatrix<N>::validate(m);
}

template <std::size_t N>
double purity(const DensityMatrix<N>& rho) {
  return rho.purity();
}

extern template struct HermitianEigen<2>;
extern template struct HermitianEigen<4>;
extern template HermitianEigen<2> hermitian_eigen(const Mat2&);
extern template HermitianEigen<4> hermitian_eigen(const Mat4&);
extern template Mat2 psd_sqrt(const Mat2&);
extern template Mat4 psd_sqrt(const Mat4&);
extern template class DensityMatrix<2>;
extern template class DensityMatrix<4>;

}  // namespace photonsim::qmat
