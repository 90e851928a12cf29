#include "photonsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace photonsim::measure {

namespace {

using photonsim::Complex;
using qmat::Density2;
using qmat::Ket2;
using qmat::Mat2;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

template <std::size_t N>
double fidelity_impl(const qmat::DensityMatrix<N>& rho_in,
                     const qmat::DensityMatrix<N>& rho_out) {
  if (rho_in.purity() > 1.0 - 1e-9) {
    return clamp01((rho_out.mat() * rho_in.mat()).trace().real());
  }
  const auto s = qmat::psd_sqrt(rho_in.mat());
  const auto inner = qmat::psd_sqrt(s * rho_out.mat() * s);
  const double t = inner.trace().real();
  return clamp01(t * t);
}

}  // namespace

MeasurementBasis MeasurementBasis::from_ket(Complex a, Complex b) {
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("Domain", "measurement ket must be normalizable", norm);
  }
  return MeasurementBasis(Ket2{a / norm, b / norm});
}

MeasurementBasis MeasurementBasis::linear(double angle) {
  return from_ket(std::cos(angle), std::sin(angle));
}

MeasurementBasis MeasurementBasis::diagonal() {
  return linear(constants::pi / 4.0);
}

MeasurementBasis MeasurementBasis::right_circular() {
  return from_ket(Complex{1.0, 0.0}, Complex{0.0, 1.0});
}

qmat::Ket2 MeasurementBasis::orthogonal_ket() const {
  return Ket2{-std::conj(lambda_[1]), std::conj(lambda_[0])};
}

double MeasurementBasis::probability(const Density2& rho) const {
  return clamp01(qmat::inner(lambda_, qmat::apply(rho.mat(), lambda_)).real());
}

double visibility(const Density2& rho, const MeasurementBasis& b) {
  const auto perp = b.orthogonal_ket();
  const double p = qmat::inner(b.ket(), qmat::apply(rho.mat(), b.ket())).real();
  const double q = qmat::inner(perp, qmat::apply(rho.mat(), perp)).real();
  return std::abs(p - q);
}

double fringe_visibility(const Density2& rho) {
  return clamp01(2.0 * std::abs(rho.mat()(0, 1)));
}

StokesVector stokes(const Density2& rho) {
  const Mat2& m = rho.mat();
  const Complex hv = m(0, 1);
  const Complex vh = m(1, 0);
  return StokesVector{
      2.0 * m(0, 0).real() - 1.0,
      (hv + vh).real(),
      (Complex{0.0, 1.0} * (hv - vh)).real(),
  };
}

double degree_of_polarization(const Density2& rho) {
  const auto s = stokes(rho);
  return std::sqrt(s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3);
}

double fidelity(const Density2& rho_in, const Density2& rho_out) {
  return fidelity_impl(rho_in, rho_out);
}

double fidelity(const qmat::Density4& rho_in, const qmat::Density4& rho_out) {
  return fidelity_impl(rho_in, rho_out);
}

double trace_distance(const Density2& a, const Density2& b) {
  const auto eig = qmat::hermitian_eigen(a.mat() - b.mat());
  double sum = 0.0;
  for (double v : eig.values) sum += std::abs(v);
  return 0.5 * sum;
}

CountRecord sample_counts(const Density2& rho, const MeasurementBasis& b, std::uint64_t shots,
                          std::uint64_t seed, std::string basis_label) {
  if (shots < 1) {
    throw ValidationError("Domain", "shots must be at least 1", static_cast<double>(shots));
  }
  const double p = b.probability(rho);
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> dist(shots, p);
  CountRecord record;
  record.basis_label = std::move(basis_label);
  record.shots = shots;
  record.counts_primary = dist(rng);
  record.counts_secondary = shots - record.counts_primary;
  record.rng_seed = seed;
  return record;
}

double visibility_from_counts(const CountRecord& record) {
  const double nmax = static_cast<double>(std::max(record.counts_primary, record.counts_secondary));
  const double nmin = static_cast<double>(std::min(record.counts_primary, record.counts_secondary));
  if (nmax + nmin == 0.0) {
    throw ValidationError("Domain", "count record is empty", 0.0);
  }
  return (nmax - nmin) / (nmax + nmin);
}

std::string counts_to_text(std::span<const CountRecord> records) {
  std::ostringstream out;
  out << "# basis outcome count seed rng\n";
  for (const auto& r : records) {
    out << r.basis_label << " plus " << r.counts_primary << ' ' << r.rng_seed << ' '
        << r.rng_name << '\n';
    out << r.basis_label << " minus " << r.counts_secondary << ' ' << r.rng_seed << ' '
        << r.rng_name << '\n';
  }
  return out.str();
}

std::vector<CountRecord> counts_from_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<CountRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string basis, outcome, rng;
    std::uint64_t count = 0, seed = 0;
    if (!(row >> basis >> outcome >> count >> seed >> rng)) {
      throw ParseError("malformed count line: " + line);
    }
    auto it = std::find_if(records.begin(), records.end(),
                           [&basis](const CountRecord& r) { return r.basis_label == basis; });
    if (it == records.end()) {
      records.push_back(CountRecord{basis, 0, 0, 0, seed, rng});
      it = records.end() - 1;
    }
    if (outcome == "plus") {
      it->counts_primary = count;
    } else if (outcome == "minus") {
      it->counts_secondary = count;
    } else {
      throw ParseError("unknown outcome label: " + outcome);
    }
    it->shots = it->counts_primary + it->counts_secondary;
  }
  return records;
}

qmat::Density2 reconstruct(const TomographyProbabilities& probs) {
  const double s1 = 2.0 * probs.p_h - 1.0;
  const double s2 = 2.0 * probs.p_diag - 1.0;
  const double s3 = 2.0 * probs.p_rcirc - 1.0;
  Mat2 estimate = Mat2::from_rows({
      {0.5 * (1.0 + s1), 0.5 * Complex{s2, -s3}},
      {0.5 * Complex{s2, s3}, 0.5 * (1.0 - s1)},
  });
  auto eig = qmat::hermitian_eigen(estimate);
  if (eig.values[0] < 0.0) {
    // Clip at zero and renormalize; sampling noise can leave the PSD cone.
    Mat2 d;
    double total = 0.0;
    for (std::size_t i = 0; i < 2; ++i) total += std::max(eig.values[i], 0.0);
    for (std::size_t i = 0; i < 2; ++i) d(i, i) = std::max(eig.values[i], 0.0) / total;
    estimate = qmat::hermitize(eig.vectors * d * eig.vectors.adjoint());
  }
  return qmat::validate_density(estimate);
}

qmat::Density2 reconstruct(std::span<const CountRecord> records) {
  auto find = [&records](const char* label) -> const CountRecord& {
    for (const auto& r : records) {
      if (r.basis_label == label) return r;
    }
    throw ValidationError("MissingBasis",
                          std::string("tomography needs counts in basis ") + label, 0.0);
  };
  auto frequency = [](const CountRecord& r) {
    if (r.shots < 1) {
      throw ValidationError("Domain", "basis " + r.basis_label + " has no shots", 0.0);
    }
    return static_cast<double>(r.counts_primary) / static_cast<double>(r.shots);
  };
  return reconstruct(TomographyProbabilities{
      frequency(find("H")), frequency(find("45")), frequency(find("R"))});
}

}  // namespace photonsim::measure
