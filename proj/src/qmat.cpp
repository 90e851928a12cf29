#include "photonsim/qmat.hpp"

#include <algorithm>
#include <cmath>

namespace photonsim::qmat {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-10;

template <std::size_t N>
double offdiag_norm(const Mat<N>& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

template <std::size_t N>
double hermiticity_defect(const Mat<N>& m) {
  return m.max_abs_diff(m.adjoint());
}

}  // namespace

Mat2 rotation2(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Mat2::from_rows({{c, -s}, {s, c}});
}

Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          m(i * 2 + k, j * 2 + l) = a(i, j) * b(k, l);
  return m;
}

template <std::size_t N>
HermitianEigen<N> hermitian_eigen(const Mat<N>& input) {
  Mat<N> a = hermitize(input);
  Mat<N> v = Mat<N>::identity();

  const double scale = std::max(1.0, a.frobenius());
  const double threshold = 1e-14 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (offdiag_norm(a) <= threshold) break;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= threshold / (N * N)) continue;

        // Unitary plane rotation zeroing a(p,q); the complex phase of a(p,q)
        // is absorbed so the remaining problem is the real Jacobi one.
        const Complex phase = apq / r;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        Mat<N> j = Mat<N>::identity();
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s * phase;
        j(q, p) = -s * std::conj(phase);

        a = j.adjoint() * a * j;
        v = v * j;
      }
    }
  }

  HermitianEigen<N> out;
  std::array<std::size_t, N> order{};
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&a](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  for (std::size_t i = 0; i < N; ++i) {
    out.values[i] = a(order[i], order[i]).real();
    for (std::size_t r = 0; r < N; ++r) out.vectors(r, i) = v(r, order[i]);
  }
  return out;
}

template <std::size_t N>
Mat<N> psd_sqrt(const Mat<N>& m) {
  const double defect = hermiticity_defect(m);
  if (defect > kHermTol) {
    throw ValidationError("NotHermitian", "psd_sqrt input exceeds Hermiticity tolerance",
                          defect);
  }
  auto eig = hermitian_eigen(m);
  Mat<N> d;
  for (std::size_t i = 0; i < N; ++i) {
    double lambda = eig.values[i];
    if (lambda < -kPsdTol) {
      throw ValidationError("NotPSD", "psd_sqrt input has a negative eigenvalue", lambda);
    }
    d(i, i) = std::sqrt(std::max(lambda, 0.0));
  }
  return hermitize(eig.vectors * d * eig.vectors.adjoint());
}

template <std::size_t N>
DensityMatrix<N> DensityMatrix<N>::validate(const Mat<N>& m) {
  const double defect = hermiticity_defect(m);
  if (defect > kHermTol) {
    throw ValidationError("NotHermitian", "density matrix is not Hermitian", defect);
  }
  const double trace_err = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_err > kTraceTol) {
    throw ValidationError("TraceNotOne", "density matrix trace differs from 1", trace_err);
  }
  const auto eig = hermitian_eigen(m);
  if (eig.values[0] < -kPsdTol) {
    throw ValidationError("NotPSD", "density matrix has a negative eigenvalue",
                          eig.values[0]);
  }
  return DensityMatrix<N>(hermitize(m));
}

template <std::size_t N>
DensityMatrix<N> DensityMatrix<N>::from_ket(const Ket<N>& k) {
  double norm2 = 0.0;
  for (const auto& v : k) norm2 += std::norm(v);
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw ValidationError("NotNormalized", "state ket is not unit norm",
                          std::abs(norm2 - 1.0));
  }
  return validate(outer(k));
}

template <std::size_t N>
double DensityMatrix<N>::purity() const {
  return (m_ * m_).trace().real();
}

template struct HermitianEigen<2>;
template struct HermitianEigen<4>;
template HermitianEigen<2> hermitian_eigen(const Mat2&);
template HermitianEigen<4> hermitian_eigen(const Mat4&);
template Mat2 psd_sqrt(const Mat2&);
template Mat4 psd_sqrt(const Mat4&);
template class DensityMatrix<2>;
template class DensityMatrix<4>;

}  // namespace photonsim::qmat
