#include "photonsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "photonsim/measure.hpp"
#include "photonsim/onephoton.hpp"
#include "photonsim/spectra.hpp"
#include "photonsim/twophoton.hpp"

namespace photonsim::scenario {

namespace {

using json = nlohmann::json;
using photonsim::Complex;
using qmat::Density2;
using qmat::Density4;
using qmat::Mat2;
using qmat::Mat4;

constexpr double kDegToRad = constants::pi / 180.0;

// ---------------------------------------------------------------------------
// Schema plumbing: units in key names, whitelisted dimensionless keys
// ---------------------------------------------------------------------------

const std::set<std::string>& unit_suffixes() {
  static const std::set<std::string> suffixes{"_nm",  "_um", "_m",         "_deg",
                                              "_rad", "_s",  "_rad_per_s"};
  return suffixes;
}

const std::set<std::string>& dimensionless_keys() {
  static const std::set<std::string> keys{
      "mono_fraction", "transmission", "passes", "attenuations_per_pass",
      "seed",          "quadrature_nodes", "shots", "matrix"};
  return keys;
}

bool has_unit_suffix(const std::string& key) {
  for (const auto& suffix : unit_suffixes()) {
    if (key.size() > suffix.size() &&
        key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return true;
    }
  }
  return false;
}

bool holds_numbers(const json& value) {
  if (value.is_number()) return true;
  if (value.is_array()) {
    for (const auto& v : value) {
      if (holds_numbers(v)) return true;
    }
  }
  return false;
}

void check_units(const json& node, const std::string& context) {
  if (!node.is_object()) return;
  for (const auto& [key, value] : node.items()) {
    if (value.is_object()) {
      check_units(value, key);
    } else if (value.is_array()) {
      for (const auto& v : value) check_units(v, key);
    }
    if (holds_numbers(value) && !has_unit_suffix(key) && !dimensionless_keys().count(key)) {
      throw ParseError("numeric key '" + key + "'" +
                       (context.empty() ? std::string{} : " in '" + context + "'") +
                       " has no unit suffix (expected e.g. _um, _nm, _deg)");
    }
  }
}

double require_number(const json& node, const std::string& key) {
  if (!node.contains(key) || !node.at(key).is_number()) {
    throw ParseError("missing or non-numeric field '" + key + "'");
  }
  return node.at(key).get<double>();
}

double number_or(const json& node, const std::string& key, double fallback) {
  if (!node.contains(key)) return fallback;
  if (!node.at(key).is_number()) {
    throw ParseError("field '" + key + "' must be a number");
  }
  return node.at(key).get<double>();
}

std::string string_or(const json& node, const std::string& key, const std::string& fallback) {
  if (!node.contains(key)) return fallback;
  if (!node.at(key).is_string()) {
    throw ParseError("field '" + key + "' must be a string");
  }
  return node.at(key).get<std::string>();
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

template <std::size_t N>
std::string dump_csv_impl(const qmat::Mat<N>& m) {
  std::ostringstream out;
  for (std::size_t c = 0; c < N; ++c) {
    out << (c == 0 ? "" : ",") << "re" << c << ",im" << c;
  }
  out << '\n';
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < N; ++c) {
      out << (c == 0 ? "" : ",") << format_full_precision(m(r, c).real()) << ','
          << format_full_precision(m(r, c).imag());
    }
    out << '\n';
  }
  return out.str();
}

template <std::size_t N>
std::string dump_json_impl(const qmat::Mat<N>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < N; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < N; ++c) {
      row.push_back(json{{"re", m(r, c).real()}, {"im", m(r, c).imag()}});
    }
    rows.push_back(std::move(row));
  }
  json doc{{"dim", N}, {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
      throw std::logic_error("csv row width mismatch");
    }
    rows_.push_back(std::move(cells));
  }

  std::string render() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      out << (i == 0 ? "" : ",") << columns_[i];
    }
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i == 0 ? "" : ",") << row[i];
      }
      out << '\n';
    }
    return out.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Shared parsing
// ---------------------------------------------------------------------------

spectra::Spectrum parse_spectrum(const json& node, const std::filesystem::path& base_dir) {
  if (!node.is_object()) {
    throw ParseError("'spectrum' must be an object");
  }
  if (node.contains("tabulated_file")) {
    const auto file = node.at("tabulated_file").get<std::string>();
    return spectra::Spectrum::load_tabulated(base_dir / file);
  }
  const double lambda0 = require_number(node, "lambda0_nm") * 1e-9;
  const double delta_lambda = require_number(node, "delta_lambda_nm") * 1e-9;
  const double mono = number_or(node, "mono_fraction", 0.0);
  return spectra::Spectrum::gaussian_from_bandwidth(lambda0, delta_lambda, mono);
}

template <std::size_t N>
qmat::Mat<N> parse_matrix_node(const json& node) {
  if (!node.is_array() || node.size() != N) {
    throw ParseError("explicit matrix must have " + std::to_string(N) + " rows");
  }
  qmat::Mat<N> m;
  for (std::size_t r = 0; r < N; ++r) {
    const auto& row = node.at(r);
    if (!row.is_array() || row.size() != N) {
      throw ParseError("explicit matrix must have " + std::to_string(N) + " columns");
    }
    for (std::size_t c = 0; c < N; ++c) {
      const auto& cell = row.at(c);
      if (cell.is_number()) {
        m(r, c) = cell.get<double>();
      } else if (cell.is_array() && cell.size() == 2) {
        m(r, c) = Complex{cell.at(0).get<double>(), cell.at(1).get<double>()};
      } else {
        throw ParseError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Density2 parse_one_photon_state(const json& node) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (node.is_string()) {
    const auto name = node.get<std::string>();
    if (name == "H") return Density2::from_ket({1.0, 0.0});
    if (name == "V") return Density2::from_ket({0.0, 1.0});
    if (name == "45") return Density2::from_ket({inv_sqrt2, inv_sqrt2});
    if (name == "-45") return Density2::from_ket({inv_sqrt2, -inv_sqrt2});
    if (name == "R") return Density2::from_ket({inv_sqrt2, Complex{0.0, inv_sqrt2}});
    if (name == "L") return Density2::from_ket({inv_sqrt2, Complex{0.0, -inv_sqrt2}});
    throw ParseError("unknown input_state '" + name + "' (use H, V, 45, -45, R, L)");
  }
  if (node.is_object() && node.contains("linear_deg")) {
    const double theta = node.at("linear_deg").get<double>() * kDegToRad;
    return Density2::from_ket({std::cos(theta), std::sin(theta)});
  }
  if (node.is_object() && node.contains("matrix")) {
    return qmat::validate_density(parse_matrix_node<2>(node.at("matrix")));
  }
  throw ParseError("input_state must be a named state, {linear_deg: ...} or {matrix: ...}");
}

onephoton::Element parse_element(const json& node) {
  const auto type = string_or(node, "type", "");
  if (type == "birefringent") {
    return onephoton::Birefringent{require_number(node, "opd_um") * 1e-6,
                                   number_or(node, "axis_angle_deg", 0.0) * kDegToRad};
  }
  if (type == "exchange") {
    const auto kind = string_or(node, "kind", "reflection");
    if (kind == "reflection") return onephoton::Exchange{onephoton::Exchange::Kind::reflection};
    if (kind == "rotation") return onephoton::Exchange{onephoton::Exchange::Kind::rotation};
    throw ParseError("exchange kind must be 'reflection' or 'rotation'");
  }
  if (type == "rotator") {
    return onephoton::Rotator{require_number(node, "angle_deg") * kDegToRad};
  }
  if (type == "attenuator") {
    const auto arm = string_or(node, "arm", "h");
    if (arm != "h" && arm != "v") throw ParseError("attenuator arm must be 'h' or 'v'");
    return onephoton::Attenuator{
        require_number(node, "transmission"),
        arm == "h" ? onephoton::Attenuator::Arm::first : onephoton::Attenuator::Arm::second};
  }
  throw ParseError("element type must be birefringent, exchange, rotator or attenuator");
}

onephoton::Exchange::Kind parse_exchange_kind(const json& doc) {
  const auto kind = string_or(doc, "exchange_kind", "reflection");
  if (kind == "reflection") return onephoton::Exchange::Kind::reflection;
  if (kind == "rotation") return onephoton::Exchange::Kind::rotation;
  throw ParseError("exchange_kind must be 'reflection' or 'rotation'");
}

enum class QcMode { off, on, both };

QcMode parse_qc(const json& doc) {
  if (!doc.contains("qc")) return QcMode::off;
  const auto& node = doc.at("qc");
  if (node.is_boolean()) return node.get<bool>() ? QcMode::on : QcMode::off;
  if (node.is_string()) {
    const auto s = node.get<std::string>();
    if (s == "on") return QcMode::on;
    if (s == "off") return QcMode::off;
    if (s == "both") return QcMode::both;
  }
  throw ParseError("qc must be true, false, 'on', 'off' or 'both'");
}

std::vector<std::string> parse_outputs(const json& doc,
                                       const std::set<std::string>& allowed) {
  if (!doc.contains("outputs") || !doc.at("outputs").is_array()) {
    throw ParseError("scenario needs an 'outputs' array");
  }
  std::vector<std::string> outputs;
  for (const auto& o : doc.at("outputs")) {
    const auto name = o.get<std::string>();
    if (!allowed.count(name)) {
      throw ParseError("output '" + name + "' is not available for this scenario kind");
    }
    outputs.push_back(name);
  }
  if (outputs.empty()) throw ParseError("'outputs' must not be empty");
  return outputs;
}

bool wants(const std::vector<std::string>& outputs, const std::string& name) {
  for (const auto& o : outputs) {
    if (o == name) return true;
  }
  return false;
}

std::vector<std::string> curve_column_names(const std::vector<std::string>& outputs) {
  std::vector<std::string> names;
  for (const auto& output : outputs) {
    if (output == "visibility") {
      names.push_back("V");
    } else if (output == "degree_of_polarization") {
      names.push_back("P");
    } else if (output == "survival") {
      names.push_back("survival");
    } else if (output == "purity") {
      names.push_back("purity");
    } else if (output == "fidelity") {
      names.push_back("fidelity");
    } else if (output == "stokes") {
      names.push_back("s1");
      names.push_back("s2");
      names.push_back("s3");
    }
  }
  return names;
}

// ---------------------------------------------------------------------------
// One-photon scenarios
// ---------------------------------------------------------------------------

struct OnePhotonSetup {
  spectra::Spectrum spectrum;
  Density2 input;
  onephoton::PassSequence base;
  int passes = 1;
  QcMode qc = QcMode::off;
  onephoton::Exchange::Kind exchange_kind = onephoton::Exchange::Kind::reflection;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::uint64_t shots = 1000000;
  onephoton::EvolveOptions evolve_options;
  // Cavity scenarios exchange after every element (the slow-flip layout);
  // the dissipative cavity has a single exchange at the recycling mirror.
  bool exchange_per_element = true;
};

const std::set<std::string>& one_photon_outputs() {
  static const std::set<std::string> allowed{
      "visibility", "degree_of_polarization", "survival",       "purity",
      "fidelity",   "stokes",                 "density_matrix", "density_matrix_json",
      "counts"};
  return allowed;
}

OnePhotonSetup parse_one_photon(const json& doc, const std::filesystem::path& base_dir,
                                const RunOptions& options, bool dissipative) {
  OnePhotonSetup setup{
      parse_spectrum(doc.at("spectrum"), base_dir),
      parse_one_photon_state(doc.at("input_state")),
      {},
      1,
      parse_qc(doc),
      parse_exchange_kind(doc),
      parse_outputs(doc, one_photon_outputs()),
      0,
      1000000,
      {},
  };
  const double passes = require_number(doc, "passes");
  if (passes < 1 || passes != std::floor(passes)) {
    throw ParseError("'passes' must be a positive integer");
  }
  setup.passes = static_cast<int>(passes);

  if (dissipative) {
    const double t = require_number(doc, "transmission");
    const auto arm = string_or(doc, "attenuator_arm", "h");
    if (arm != "h" && arm != "v") throw ParseError("attenuator_arm must be 'h' or 'v'");
    const double per_pass = number_or(doc, "attenuations_per_pass", 2.0);
    if (per_pass < 1 || per_pass != std::floor(per_pass)) {
      throw ParseError("'attenuations_per_pass' must be a positive integer");
    }
    const double opd = number_or(doc, "opd_um", 0.0) * 1e-6;
    if (opd != 0.0) setup.base.elements.push_back(onephoton::Birefringent{opd, 0.0});
    const onephoton::Attenuator atten{
        t, arm == "h" ? onephoton::Attenuator::Arm::first
                      : onephoton::Attenuator::Arm::second};
    for (int i = 0; i < static_cast<int>(per_pass); ++i) setup.base.elements.push_back(atten);
    setup.exchange_per_element = false;
  } else {
    if (!doc.contains("elements") || !doc.at("elements").is_array()) {
      throw ParseError("one_photon_cavity needs an 'elements' array");
    }
    for (const auto& e : doc.at("elements")) setup.base.elements.push_back(parse_element(e));
    if (setup.base.elements.empty()) throw ParseError("'elements' must not be empty");
  }
  setup.base.passes = 1;

  setup.seed = options.seed.value_or(static_cast<std::uint64_t>(number_or(doc, "seed", 0.0)));
  setup.shots = static_cast<std::uint64_t>(number_or(doc, "shots", 1000000.0));
  if (options.quadrature_nodes) {
    setup.evolve_options.quadrature_nodes = *options.quadrature_nodes;
  } else if (doc.contains("quadrature_nodes")) {
    setup.evolve_options.quadrature_nodes =
        static_cast<std::size_t>(require_number(doc, "quadrature_nodes"));
  }
  return setup;
}

struct ModeResult {
  std::vector<std::vector<std::string>> rows;  // one per pass count
  onephoton::EvolutionResult final_state;
};

ModeResult run_one_photon_mode(const OnePhotonSetup& setup, bool qc) {
  auto seq = setup.base;
  if (qc) {
    if (setup.exchange_per_element) {
      seq = onephoton::with_exchange_control(setup.base, setup.exchange_kind);
    } else {
      seq.elements.push_back(onephoton::Exchange{setup.exchange_kind});
    }
  }
  std::optional<onephoton::EvolutionResult> final_state;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(setup.passes));

  for (int n = 1; n <= setup.passes; ++n) {
    seq.passes = n;
    const auto result = onephoton::evolve(setup.input, seq, setup.spectrum,
                                          setup.evolve_options);
    std::vector<std::string> row;
    for (const auto& output : setup.outputs) {
      if (output == "visibility") {
        row.push_back(format_full_precision(measure::fringe_visibility(result.rho)));
      } else if (output == "degree_of_polarization") {
        row.push_back(format_full_precision(measure::degree_of_polarization(result.rho)));
      } else if (output == "survival") {
        row.push_back(format_full_precision(result.survival));
      } else if (output == "purity") {
        row.push_back(format_full_precision(result.rho.purity()));
      } else if (output == "fidelity") {
        row.push_back(format_full_precision(measure::fidelity(setup.input, result.rho)));
      } else if (output == "stokes") {
        const auto s = measure::stokes(result.rho);
        row.push_back(format_full_precision(s.s1));
        row.push_back(format_full_precision(s.s2));
        row.push_back(format_full_precision(s.s3));
      }
    }
    rows.push_back(std::move(row));
    if (n == setup.passes) final_state = result;
  }
  return ModeResult{std::move(rows), *final_state};
}

void emit_one_photon_artifacts(const OnePhotonSetup& setup, const ModeResult& mode, bool qc,
                               const std::string& label, const std::string& suffix,
                               std::vector<OutputFile>& files) {
  if (wants(setup.outputs, "density_matrix")) {
    files.push_back(OutputFile{label + "_rho" + suffix + ".csv",
                               dump_matrix_csv(mode.final_state.rho.mat())});
  }
  if (wants(setup.outputs, "density_matrix_json")) {
    files.push_back(OutputFile{label + "_rho" + suffix + ".json",
                               dump_matrix_json(mode.final_state.rho.mat())});
  }
  if (wants(setup.outputs, "counts")) {
    const std::uint64_t seed = setup.seed + (qc ? 1 : 0);
    const auto& rho = mode.final_state.rho;
    std::vector<measure::CountRecord> records = {
        measure::sample_counts(rho, measure::MeasurementBasis::horizontal(), setup.shots,
                               seed, "H"),
        measure::sample_counts(rho, measure::MeasurementBasis::diagonal(), setup.shots,
                               seed + 100, "45"),
        measure::sample_counts(rho, measure::MeasurementBasis::right_circular(), setup.shots,
                               seed + 200, "R"),
    };
    files.push_back(OutputFile{label + "_counts" + suffix + ".txt",
                               measure::counts_to_text(records)});
    files.push_back(OutputFile{label + "_rho_reconstructed" + suffix + ".csv",
                               dump_matrix_csv(measure::reconstruct(records).mat())});
  }
}

RunResult run_one_photon(const json& doc, const std::filesystem::path& base_dir,
                         const std::string& label, const RunOptions& options,
                         bool dissipative) {
  const auto setup = parse_one_photon(doc, base_dir, options, dissipative);

  std::vector<bool> modes;
  std::vector<std::string> suffixes;
  if (setup.qc == QcMode::both) {
    modes = {false, true};
    suffixes = {"_noqc", "_qc"};
  } else {
    modes = {setup.qc == QcMode::on};
    suffixes = {""};
  }

  const auto value_columns = curve_column_names(setup.outputs);
  std::vector<std::string> columns{"N"};
  for (std::size_t m = 0; m < modes.size(); ++m) {
    for (const auto& name : value_columns) columns.push_back(name + suffixes[m]);
  }
  CsvTable table(columns);

  std::vector<ModeResult> results;
  results.reserve(modes.size());
  for (bool qc : modes) results.push_back(run_one_photon_mode(setup, qc));

  for (int n = 1; n <= setup.passes; ++n) {
    std::vector<std::string> row{std::to_string(n)};
    for (const auto& mode : results) {
      const auto& cells = mode.rows[static_cast<std::size_t>(n - 1)];
      row.insert(row.end(), cells.begin(), cells.end());
    }
    table.add_row(std::move(row));
  }

  RunResult out;
  out.label = label;
  if (!value_columns.empty()) {
    out.files.push_back(OutputFile{label + "_curve.csv", table.render()});
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    emit_one_photon_artifacts(setup, results[m], modes[m], label, suffixes[m], out.files);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-photon scenarios
// ---------------------------------------------------------------------------

const std::set<std::string>& two_photon_outputs() {
  static const std::set<std::string> allowed{"purity", "fidelity", "fidelity_tuned",
                                             "density_matrix", "density_matrix_json"};
  return allowed;
}

struct TwoPhotonSetup {
  twophoton::JointSpectrum joint;
  std::vector<twophoton::BellKind> states;
  double opd_l = 0.0;
  double opd_r = 0.0;
  double theta_l_offset = 0.0;  // radians; theta_l = theta_r + offset in sweeps
  std::vector<double> theta_r_values;
  std::optional<double> fixed_theta_l;
  std::vector<std::string> outputs;
  twophoton::EvolveTwoOptions evolve_options;
};

twophoton::BellKind parse_bell(const std::string& name) {
  if (name == "phi_plus") return twophoton::BellKind::phi_plus;
  if (name == "phi_minus") return twophoton::BellKind::phi_minus;
  if (name == "psi_plus") return twophoton::BellKind::psi_plus;
  if (name == "psi_minus") return twophoton::BellKind::psi_minus;
  throw ParseError("unknown Bell state '" + name +
                   "' (use phi_plus, phi_minus, psi_plus, psi_minus)");
}

TwoPhotonSetup parse_two_photon(const json& doc, const RunOptions& options) {
  if (!doc.contains("joint_spectrum") || !doc.at("joint_spectrum").is_object()) {
    throw ParseError("two_photon needs a 'joint_spectrum' object");
  }
  const auto& js = doc.at("joint_spectrum");
  const double lambda_d = require_number(js, "daughter_lambda0_nm") * 1e-9;
  const double delta_d = require_number(js, "daughter_delta_lambda_nm") * 1e-9;
  auto daughter = spectra::Spectrum::gaussian_from_bandwidth(lambda_d, delta_d, 0.0);
  double pump_omega0 = 2.0 * daughter.carrier_omega();
  if (js.contains("pump_lambda0_nm")) {
    pump_omega0 = 2.0 * constants::pi * constants::speed_of_light /
                  (require_number(js, "pump_lambda0_nm") * 1e-9);
  }

  TwoPhotonSetup setup{
      twophoton::JointSpectrum(pump_omega0, std::move(daughter)),
      {},
      require_number(doc, "opd_l_um") * 1e-6,
      require_number(doc, "opd_r_um") * 1e-6,
      0.0,
      {},
      std::nullopt,
      parse_outputs(doc, two_photon_outputs()),
      {},
  };

  const auto& state_node = doc.at("input_state");
  if (state_node.is_string()) {
    setup.states.push_back(parse_bell(state_node.get<std::string>()));
  } else if (state_node.is_array()) {
    for (const auto& s : state_node) setup.states.push_back(parse_bell(s.get<std::string>()));
  } else {
    throw ParseError("two_photon input_state must be a Bell-state name or list of them");
  }

  if (doc.contains("theta_r_sweep_deg")) {
    for (const auto& v : doc.at("theta_r_sweep_deg")) {
      setup.theta_r_values.push_back(v.get<double>() * kDegToRad);
    }
    if (setup.theta_r_values.empty()) throw ParseError("'theta_r_sweep_deg' must not be empty");
    setup.theta_l_offset = require_number(doc, "theta_l_offset_deg") * kDegToRad;
  } else {
    setup.theta_r_values.push_back(number_or(doc, "theta_r_deg", 0.0) * kDegToRad);
    setup.fixed_theta_l = number_or(doc, "theta_l_deg", 0.0) * kDegToRad;
  }

  if (options.quadrature_nodes) {
    setup.evolve_options.quadrature_nodes = *options.quadrature_nodes;
  } else if (doc.contains("quadrature_nodes")) {
    setup.evolve_options.quadrature_nodes =
        static_cast<std::size_t>(require_number(doc, "quadrature_nodes"));
  }
  return setup;
}

// Fidelity maximized over the free relative phase of the input Bell family;
// reported alongside the raw value so the deterministic pump phase can be
// separated from genuine decoherence.
double tuned_bell_fidelity(twophoton::BellKind kind, const Density4& rho) {
  const bool phi = kind == twophoton::BellKind::phi_plus ||
                   kind == twophoton::BellKind::phi_minus;
  const std::size_t a = phi ? 0 : 1;
  const std::size_t b = phi ? 3 : 2;
  const double populations = 0.5 * (rho.mat()(a, a).real() + rho.mat()(b, b).real());
  return populations + std::abs(rho.mat()(a, b));
}

RunResult run_two_photon(const json& doc, const std::string& label,
                         const RunOptions& options) {
  const auto setup = parse_two_photon(doc, options);

  std::vector<std::string> columns{"state", "theta_l_deg", "theta_r_deg"};
  for (const auto& output : setup.outputs) {
    if (output == "purity" || output == "fidelity" || output == "fidelity_tuned") {
      columns.push_back(output);
    }
  }
  CsvTable table(columns);

  RunResult out;
  out.label = label;

  for (const auto kind : setup.states) {
    const auto input = twophoton::bell(kind);
    for (std::size_t i = 0; i < setup.theta_r_values.size(); ++i) {
      const double theta_r = setup.theta_r_values[i];
      const double theta_l =
          setup.fixed_theta_l ? *setup.fixed_theta_l : theta_r + setup.theta_l_offset;
      const twophoton::TwoPhotonConfig cfg{setup.opd_l, setup.opd_r, theta_l, theta_r,
                                           setup.joint};
      const auto rho = twophoton::evolve_two(input, cfg, setup.evolve_options);

      std::vector<std::string> row{twophoton::to_string(kind),
                                   format_full_precision(theta_l / kDegToRad),
                                   format_full_precision(theta_r / kDegToRad)};
      for (const auto& output : setup.outputs) {
        if (output == "purity") {
          row.push_back(format_full_precision(rho.purity()));
        } else if (output == "fidelity") {
          row.push_back(format_full_precision(measure::fidelity(input, rho)));
        } else if (output == "fidelity_tuned") {
          row.push_back(format_full_precision(tuned_bell_fidelity(kind, rho)));
        }
      }
      table.add_row(std::move(row));

      const std::string tag =
          std::string("_") + twophoton::to_string(kind) +
          (setup.theta_r_values.size() > 1 ? "_" + std::to_string(i) : std::string{});
      if (wants(setup.outputs, "density_matrix")) {
        out.files.push_back(OutputFile{label + "_rho" + tag + ".csv",
                                       dump_matrix_csv(rho.mat())});
      }
      if (wants(setup.outputs, "density_matrix_json")) {
        out.files.push_back(OutputFile{label + "_rho" + tag + ".json",
                                       dump_matrix_json(rho.mat())});
      }
    }
  }

  out.files.insert(out.files.begin(), OutputFile{label + "_curve.csv", table.render()});
  return out;
}

}  // namespace

std::string format_full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_matrix_csv(const Mat2& m) { return dump_csv_impl(m); }
std::string dump_matrix_csv(const Mat4& m) { return dump_csv_impl(m); }
std::string dump_matrix_json(const Mat2& m) { return dump_json_impl(m); }
std::string dump_matrix_json(const Mat4& m) { return dump_json_impl(m); }

MatrixRows parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix dump");
  MatrixRows rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> values;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() % 2 != 0) throw ParseError("matrix dump row has odd cell count");
    std::vector<Complex> row;
    for (std::size_t i = 0; i < values.size(); i += 2) {
      row.push_back(Complex{values[i], values[i + 1]});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixRows parse_matrix_json(const std::string& text) {
  const auto doc = json::parse(text);
  MatrixRows rows;
  for (const auto& row_node : doc.at("rows")) {
    std::vector<Complex> row;
    for (const auto& cell : row_node) {
      row.push_back(Complex{cell.at("re").get<double>(), cell.at("im").get<double>()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

RunResult dispatch(const std::string& json_text, const std::filesystem::path& base_dir,
                   const std::string& default_label, const RunOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario root must be a JSON object");
  check_units(doc, "");

  const auto label = string_or(doc, "label", default_label);
  const auto kind = string_or(doc, "kind", "");
  if (kind == "one_photon_cavity") {
    return run_one_photon(doc, base_dir, label, options, false);
  }
  if (kind == "one_photon_dissipative") {
    return run_one_photon(doc, base_dir, label, options, true);
  }
  if (kind == "two_photon") {
    return run_two_photon(doc, label, options);
  }
  throw ParseError("unknown scenario kind '" + kind +
                   "' (use one_photon_cavity, one_photon_dissipative or two_photon)");
}

}  // namespace

RunResult run_text(const std::string& json_text, const std::string& default_label,
                   const RunOptions& options) {
  return dispatch(json_text, std::filesystem::current_path(), default_label, options);
}

RunResult run_file(const std::filesystem::path& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto base_dir =
      path.has_parent_path() ? path.parent_path() : std::filesystem::current_path();
  return dispatch(buffer.str(), base_dir, path.stem().string(), options);
}

}  // namespace photonsim::scenario
