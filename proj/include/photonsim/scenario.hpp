#pragma once

// Scenario runner: loads JSON experiment descriptions, dispatches to the one-
// and two-photon engines, and renders curve tables and density-matrix dumps
// as text artifacts. Numeric scenario keys must carry a unit suffix in their
// name (opd_um, lambda0_nm, ...); dimensionless counts and fractions come
// from a fixed whitelist.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "photonsim/qmat.hpp"

namespace photonsim::scenario {

struct RunOptions {
  std::optional<std::uint64_t> seed;           // overrides the scenario seed
  std::optional<std::size_t> quadrature_nodes; // overrides the default 2001
};

struct OutputFile {
  std::string name;
  std::string contents;
};

struct RunResult {
  std::string label;
  std::vector<OutputFile> files;
};

RunResult run_file(const std::filesystem::path& path, const RunOptions& options = {});
RunResult run_text(const std::string& json_text, const std::string& default_label,
                   const RunOptions& options = {});

// Density-matrix dumps: re/im column pairs, row-major, 17 significant digits.
std::string dump_matrix_csv(const qmat::Mat2& m);
std::string dump_matrix_csv(const qmat::Mat4& m);
std::string dump_matrix_json(const qmat::Mat2& m);
std::string dump_matrix_json(const qmat::Mat4& m);

using MatrixRows = std::vector<std::vector<Complex>>;
MatrixRows parse_matrix_csv(const std::string& text);
MatrixRows parse_matrix_json(const std::string& text);

std::string format_full_precision(double v);

}  // namespace photonsim::scenario
