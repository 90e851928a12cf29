#include "photonsim/onephoton.hpp"

#include <cmath>
#include <optional>

#include "photonsim/measure.hpp"

namespace photonsim::onephoton {

namespace {

using photonsim::Complex;
using qmat::Density2;
using qmat::Mat2;
using constants::speed_of_light;

constexpr double kAngleTol = 1e-12;
constexpr double kConvergenceTol = 1e-7;

Mat2 matpow(Mat2 base, int n) {
  Mat2 acc = Mat2::identity();
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

void require_valid(const PassSequence& seq) {
  if (seq.passes < 0) {
    throw ValidationError("Domain", "pass count must be nonnegative",
                          static_cast<double>(seq.passes));
  }
  if (seq.passes > 0 && seq.elements.empty()) {
    throw ValidationError("Domain", "pass sequence must contain at least one element", 0.0);
  }
  for (const auto& e : seq.elements) {
    if (const auto* a = std::get_if<Attenuator>(&e)) {
      if (!(a->transmission > 0.0 && a->transmission <= 1.0)) {
        throw ValidationError("Domain", "attenuator transmission must lie in (0, 1]",
                              a->transmission);
      }
    }
    if (const auto* b = std::get_if<Birefringent>(&e)) {
      if (!std::isfinite(b->opd)) {
        throw ValidationError("Domain", "birefringent opd must be finite", b->opd);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Closed-form path
//
// In the frame of the common eigenbasis every element is either a diagonal
// phase diag(1, e^{i omega tau}) or a constant signed (anti)diagonal matrix.
// The per-pass product then reduces to C * diag(1, e^{i omega tau_net}) with C
// constant, up to global phases that cancel in rho -> K rho K^dag.
// ---------------------------------------------------------------------------

struct PassNormalForm {
  double frame_angle = 0.0;
  Mat2 constant = Mat2::identity();  // entries in {0, +-1}
  bool antidiagonal = false;
  double tau = 0.0;  // seconds
};

bool is_quarter_turn(double s, double c) { return std::abs(s) <= kAngleTol || std::abs(c) <= kAngleTol; }

std::optional<PassNormalForm> reduce_pass(const PassSequence& seq) {
  // Frame angle = axis of the first birefringent element, else 0.
  double frame = 0.0;
  for (const auto& e : seq.elements) {
    if (const auto* b = std::get_if<Birefringent>(&e)) {
      frame = b->axis_angle;
      break;
    }
  }

  PassNormalForm nf;
  nf.frame_angle = frame;

  auto left_multiply_constant = [&nf](const Mat2& u) {
    nf.constant = u * nf.constant;
    const bool diag_zero = std::abs(nf.constant(0, 0)) < 0.5 && std::abs(nf.constant(1, 1)) < 0.5;
    nf.antidiagonal = diag_zero;
  };

  auto left_multiply_phase = [&nf](double tau) {
    // diag(1, e^{i w s}) * C * diag(1, e^{i w tau}):
    //   C diagonal      -> C * diag(1, e^{i w (tau+s)})
    //   C antidiagonal  -> C * diag(1, e^{i w (tau-s)}) * e^{i w s}
    nf.tau += nf.antidiagonal ? -tau : tau;
  };

  for (const auto& e : seq.elements) {
    if (const auto* b = std::get_if<Birefringent>(&e)) {
      const double delta = b->axis_angle - frame;
      const double s2 = std::sin(2.0 * delta);
      const double c2 = std::cos(2.0 * delta);
      if (std::abs(s2) > kAngleTol) return std::nullopt;
      const double signed_opd = c2 > 0.0 ? b->opd : -b->opd;
      left_multiply_phase(signed_opd / speed_of_light);
    } else if (const auto* x = std::get_if<Exchange>(&e)) {
      if (x->kind == Exchange::Kind::reflection) {
        // A reflection exchanges the frame basis only when the frame is
        // axis-aligned; conjugated into the frame it becomes +-sigma_x.
        const double s2 = std::sin(2.0 * frame);
        const double c2 = std::cos(2.0 * frame);
        if (std::abs(s2) > kAngleTol) return std::nullopt;
        const double sign = c2 > 0.0 ? 1.0 : -1.0;
        left_multiply_constant(Mat2::from_rows({{0.0, sign}, {sign, 0.0}}));
      } else {
        // Rotations commute with the frame rotation.
        left_multiply_constant(Mat2::from_rows({{0.0, -1.0}, {1.0, 0.0}}));
      }
    } else if (const auto* r = std::get_if<Rotator>(&e)) {
      const double s = std::sin(r->angle);
      const double c = std::cos(r->angle);
      if (!is_quarter_turn(s, c)) return std::nullopt;
      const double sr = std::abs(s) <= kAngleTol ? 0.0 : (s > 0.0 ? 1.0 : -1.0);
      const double cr = std::abs(c) <= kAngleTol ? 0.0 : (c > 0.0 ? 1.0 : -1.0);
      left_multiply_constant(Mat2::from_rows({{cr, -sr}, {sr, cr}}));
    } else {
      return std::nullopt;  // attenuator
    }
  }
  return nf;
}

Mat2 coherence_law(const Mat2& rho, Complex f, Complex offdiag01_factor) {
  // rho01 picks up factor * conj(F), rho10 the conjugate.
  Mat2 out = rho;
  out(0, 1) = rho(0, 1) * offdiag01_factor * std::conj(f);
  out(1, 0) = rho(1, 0) * std::conj(offdiag01_factor) * f;
  return out;
}

EvolutionResult evolve_closed(const Density2& rho0, const PassSequence& seq,
                              const spectra::Spectrum& spectrum, const PassNormalForm& nf) {
  const int n = seq.passes;
  const Mat2 to_frame = qmat::rotation2(-nf.frame_angle);
  const Mat2 from_frame = qmat::rotation2(nf.frame_angle);
  const Mat2 rho_f = to_frame * rho0.mat() * from_frame;

  Mat2 out_f;
  if (!nf.antidiagonal) {
    const Complex c1 = nf.constant(0, 0);
    const Complex c2 = nf.constant(1, 1);
    const Complex factor = std::pow(c1 * std::conj(c2), n);
    out_f = coherence_law(rho_f, spectrum.coherence(n * nf.tau), factor);
  } else if (n % 2 == 0) {
    out_f = rho_f;
  } else {
    // One effective pass: K = C * diag(1, e^{i w tau}) with C antidiagonal.
    const Complex u = nf.constant(0, 1);
    const Complex v = nf.constant(1, 0);
    const Complex f = spectrum.coherence(nf.tau);
    Mat2 swapped;
    swapped(0, 0) = rho_f(1, 1);
    swapped(1, 1) = rho_f(0, 0);
    swapped(0, 1) = u * std::conj(v) * rho_f(1, 0) * f;
    swapped(1, 0) = std::conj(u) * v * rho_f(0, 1) * std::conj(f);
    out_f = swapped;
  }

  const Mat2 out = qmat::hermitize(from_frame * out_f * to_frame);
  return EvolutionResult{qmat::validate_density(out), 1.0};
}

// ---------------------------------------------------------------------------
// Quadrature path
// ---------------------------------------------------------------------------

Mat2 pass_operator(const PassSequence& seq, double omega) {
  Mat2 p = Mat2::identity();
  for (const auto& e : seq.elements) p = element_operator(e, omega) * p;
  return p;
}

struct QuadratureOutcome {
  Mat2 rho;
  double survival;
};

QuadratureOutcome evolve_quadrature_once(const Density2& rho0, const PassSequence& seq,
                                         const spectra::Spectrum& spectrum,
                                         std::size_t nodes) {
  const auto grid = spectrum.quadrature_grid(nodes);
  Mat2 acc;
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.omega.size(); ++i) {
    const Mat2 k = matpow(pass_operator(seq, grid.omega[i]), seq.passes);
    acc = acc + grid.weight[i] * (k * rho0.mat() * k.adjoint());
    mass += grid.weight[i];
  }
  if (grid.mono_weight > 0.0) {
    const Mat2 k = matpow(pass_operator(seq, grid.mono_omega), seq.passes);
    acc = acc + grid.mono_weight * (k * rho0.mat() * k.adjoint());
    mass += grid.mono_weight;
  }
  const double survival = acc.trace().real() / mass;
  if (!(survival > 0.0)) {
    throw NumericalError("evolution annihilated the state; survival is not positive");
  }
  const Mat2 normalized = qmat::hermitize(acc * Complex{1.0 / (survival * mass), 0.0});
  return QuadratureOutcome{normalized, survival};
}

EvolutionResult evolve_quadrature(const Density2& rho0, const PassSequence& seq,
                                  const spectra::Spectrum& spectrum,
                                  const EvolveOptions& options) {
  auto coarse = evolve_quadrature_once(rho0, seq, spectrum, options.quadrature_nodes);
  if (options.check_convergence) {
    auto fine = evolve_quadrature_once(rho0, seq, spectrum, 2 * options.quadrature_nodes);
    const double drift = std::max(coarse.rho.max_abs_diff(fine.rho),
                                  std::abs(coarse.survival - fine.survival));
    if (drift > kConvergenceTol) {
      throw NumericalError("spectral quadrature did not converge (drift " +
                           std::to_string(drift) + " when doubling nodes)");
    }
    coarse = fine;
  }
  return EvolutionResult{qmat::validate_density(coarse.rho), coarse.survival};
}

}  // namespace

qmat::Mat2 element_operator(const Element& e, double omega) {
  if (const auto* b = std::get_if<Birefringent>(&e)) {
    const double phase = omega * b->opd / speed_of_light;
    const Mat2 d = Mat2::from_rows({{1.0, 0.0}, {0.0, Complex{std::cos(phase), std::sin(phase)}}});
    if (b->axis_angle == 0.0) return d;
    return qmat::rotation2(b->axis_angle) * d * qmat::rotation2(-b->axis_angle);
  }
  if (const auto* x = std::get_if<Exchange>(&e)) {
    const double sign = x->kind == Exchange::Kind::reflection ? 1.0 : -1.0;
    return Mat2::from_rows({{0.0, sign}, {1.0, 0.0}});
  }
  if (const auto* r = std::get_if<Rotator>(&e)) {
    return qmat::rotation2(r->angle);
  }
  const auto& a = std::get<Attenuator>(e);
  const double amp = std::sqrt(a.transmission);
  if (a.arm == Attenuator::Arm::first) return Mat2::from_rows({{amp, 0.0}, {0.0, 1.0}});
  return Mat2::from_rows({{1.0, 0.0}, {0.0, amp}});
}

bool closed_form_eligible(const PassSequence& seq) {
  return reduce_pass(seq).has_value();
}

EvolutionResult evolve(const qmat::Density2& rho0, const PassSequence& seq,
                       const spectra::Spectrum& spectrum, const EvolveOptions& options) {
  require_valid(seq);
  if (seq.passes == 0) return EvolutionResult{rho0, 1.0};

  switch (options.path) {
    case EvolveOptions::Path::closed_form: {
      auto nf = reduce_pass(seq);
      if (!nf) {
        throw ValidationError("Domain",
                              "sequence has no common eigenbasis closed form; use quadrature",
                              0.0);
      }
      return evolve_closed(rho0, seq, spectrum, *nf);
    }
    case EvolveOptions::Path::quadrature:
      return evolve_quadrature(rho0, seq, spectrum, options);
    case EvolveOptions::Path::automatic:
    default: {
      auto nf = reduce_pass(seq);
      if (nf) return evolve_closed(rho0, seq, spectrum, *nf);
      return evolve_quadrature(rho0, seq, spectrum, options);
    }
  }
}

double effective_opd(double l1_opd, double l2_opd, bool qc) {
  return qc ? l1_opd - l2_opd : l1_opd + l2_opd;
}

PassSequence with_exchange_control(const PassSequence& base, Exchange::Kind kind) {
  PassSequence out;
  out.passes = base.passes;
  out.elements.reserve(base.elements.size() * 2);
  for (const auto& e : base.elements) {
    out.elements.push_back(e);
    out.elements.push_back(Exchange{kind});
  }
  return out;
}

std::vector<CurvePoint> visibility_curve(const qmat::Density2& rho0, const PassSequence& base,
                                         const spectra::Spectrum& spectrum, int n_max, bool qc,
                                         Exchange::Kind kind, const EvolveOptions& options) {
  if (n_max < 1) {
    throw ValidationError("Domain", "n_max must be at least 1", static_cast<double>(n_max));
  }
  PassSequence seq = qc ? with_exchange_control(base, kind) : base;
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    seq.passes = n;
    const auto result = evolve(rho0, seq, spectrum, options);
    curve.push_back(CurvePoint{n, measure::fringe_visibility(result.rho)});
  }
  return curve;
}

}  // namespace photonsim::onephoton
