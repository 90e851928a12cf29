#pragma once

// Single-photon channel engine. Optical elements become frequency-
// parameterized 2x2 operators; a polarization density matrix is evolved
// through N cavity passes by integrating K(omega) rho K(omega)^dag over the
// photon spectrum. Sequences whose elements share a common linear eigenbasis
// (and contain no attenuator) evolve in closed form through the coherence
// function; everything else goes through quadrature.

#include <variant>
#include <vector>

#include "photonsim/qmat.hpp"
#include "photonsim/spectra.hpp"

namespace photonsim::onephoton {

// Birefringent channel keyed by optical path difference (L * delta_n, meters).
// A negative opd models the same crystal with its axes swapped.
struct Birefringent {
  double opd = 0.0;
  double axis_angle = 0.0;  // radians
};

// Ideal achromatic exchange of the coupling eigenstates. A reflection maps
// |x2> -> +|x1>, a rotation maps |x2> -> -|x1>; measurement results do not
// depend on the choice.
struct Exchange {
  enum class Kind { reflection, rotation };
  Kind kind = Kind::reflection;
};

struct Rotator {
  double angle = 0.0;  // radians
};

// Frequency-independent amplitude filter on one eigenaxis; each traversal
// multiplies the arm amplitude by sqrt(transmission) so the detection
// probability scales as the transmission.
struct Attenuator {
  enum class Arm { first, second };
  double transmission = 1.0;
  Arm arm = Arm::first;
};

using Element = std::variant<Birefringent, Exchange, Rotator, Attenuator>;

qmat::Mat2 element_operator(const Element& e, double omega);

struct PassSequence {
  std::vector<Element> elements;  // applied in order on every pass
  int passes = 1;
};

struct EvolutionResult {
  qmat::Density2 rho;
  double survival;  // detection probability; 1 without attenuators
};

struct EvolveOptions {
  enum class Path { automatic, closed_form, quadrature };
  Path path = Path::automatic;
  std::size_t quadrature_nodes = 2001;
  // Re-evaluate at twice the node count and fail if the result moves by more
  // than 1e-7.
  bool check_convergence = true;
};

bool closed_form_eligible(const PassSequence& seq);

EvolutionResult evolve(const qmat::Density2& rho0, const PassSequence& seq,
                       const spectra::Spectrum& spectrum, const EvolveOptions& options = {});

// Effective single-crystal opd for a two-crystal pass: the sum without
// exchange control, the difference with it.
double effective_opd(double l1_opd, double l2_opd, bool qc);

// Copy of `base` with an exchange element appended after every element; this
// realizes the per-pass control structure for both the single-crystal and the
// slow-flip (two-crystal) cavities.
PassSequence with_exchange_control(const PassSequence& base, Exchange::Kind kind);

struct CurvePoint {
  int passes;
  double visibility;
};

// Fringe visibility (equal-superposition basis) after 1..n_max passes; with
// qc = true an exchange element is inserted after every element of the base
// sequence.
std::vector<CurvePoint> visibility_curve(const qmat::Density2& rho0, const PassSequence& base,
                                         const spectra::Spectrum& spectrum, int n_max, bool qc,
                                         Exchange::Kind kind = Exchange::Kind::reflection,
                                         const EvolveOptions& options = {});

}  // namespace photonsim::onephoton
