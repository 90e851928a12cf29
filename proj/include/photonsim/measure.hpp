#pragma once

// Measurement formalism: visibility, Stokes parameters, degree of
// polarization, fidelity, synthetic photon counting and single-qubit
// tomographic reconstruction.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "photonsim/qmat.hpp"

namespace photonsim::measure {

// An analyzer setting, described by its transmitted ket; the orthogonal
// outcome is implied.
class MeasurementBasis {
 public:
  static MeasurementBasis from_ket(Complex a, Complex b);
  static MeasurementBasis linear(double angle);
  static MeasurementBasis horizontal() { return linear(0.0); }
  static MeasurementBasis diagonal();        // 45 degrees
  static MeasurementBasis right_circular();  // (|H> + i|V>)/sqrt(2)

  const qmat::Ket2& ket() const { return lambda_; }
  qmat::Ket2 orthogonal_ket() const;
  double probability(const qmat::Density2& rho) const;  // <lambda| rho |lambda>

 private:
  explicit MeasurementBasis(qmat::Ket2 k) : lambda_(k) {}
  qmat::Ket2 lambda_;
};

// |<l|rho|l> - <l_perp|rho|l_perp>| for a fixed analyzer setting.
double visibility(const qmat::Density2& rho, const MeasurementBasis& b);

// Interference contrast maximized over the fringe phase of the equal-
// superposition analyzer family: 2|rho_01|. This is what a path- or
// polarizer-scanned fringe measurement reports.
double fringe_visibility(const qmat::Density2& rho);

struct StokesVector {
  double s1, s2, s3;
};

StokesVector stokes(const qmat::Density2& rho);
double degree_of_polarization(const qmat::Density2& rho);

// Tr(rho_out rho_in) when rho_in is pure; the mixed-state square-root formula
// otherwise. The two agree on pure inputs.
double fidelity(const qmat::Density2& rho_in, const qmat::Density2& rho_out);
double fidelity(const qmat::Density4& rho_in, const qmat::Density4& rho_out);

double trace_distance(const qmat::Density2& a, const qmat::Density2& b);

// One analyzer setting worth of synthetic photon counts.
struct CountRecord {
  std::string basis_label;        // "H", "45", "R", ...
  std::uint64_t shots = 0;
  std::uint64_t counts_primary = 0;    // transmitted outcome
  std::uint64_t counts_secondary = 0;  // orthogonal outcome
  std::uint64_t rng_seed = 0;
  std::string rng_name = "mt19937_64";
};

// Binomial draw with success probability <lambda|rho|lambda>; bit-reproducible
// for a fixed seed on a given platform.
CountRecord sample_counts(const qmat::Density2& rho, const MeasurementBasis& b,
                          std::uint64_t shots, std::uint64_t seed, std::string basis_label);

// (N_max - N_min) / (N_max + N_min).
double visibility_from_counts(const CountRecord& record);

// Flat text serialization: one "<basis> <outcome> <count> <seed> <rng>" line
// per analyzer outcome.
std::string counts_to_text(std::span<const CountRecord> records);
std::vector<CountRecord> counts_from_text(const std::string& text);

struct TomographyProbabilities {
  double p_h;      // transmission probability in the H analyzer
  double p_diag;   // 45-degree analyzer
  double p_rcirc;  // right-circular analyzer
};

// Linear Stokes inversion; the estimate is clipped to the PSD cone and
// renormalized when sampling noise pushes it outside.
qmat::Density2 reconstruct(const TomographyProbabilities& probs);

// Records must include the "H", "45" and "R" basis labels.
qmat::Density2 reconstruct(std::span<const CountRecord> records);

}  // namespace photonsim::measure
