#pragma once

// On-disk formats: dataset CSV, problem JSON, kernel CSV + sidecar JSON,
// model JSON, alignment trace JSON lines.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cokern/alignment.hpp"
#include "cokern/kernel.hpp"
#include "cokern/lce.hpp"
#include "cokern/svm.hpp"

namespace cokern::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// 17 significant digits; parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Writes to a sibling temp file and renames it over `path`.
void atomic_write(const fs::path& path, const std::string& contents);
std::string read_file(const fs::path& path);

std::string checksum_hex(std::uint64_t v);
std::uint64_t parse_checksum_hex(const std::string& s);
std::uint64_t fnv1a(std::string_view bytes);

// Dataset: header `label,theta_0,...,theta_{2n-1}`.
std::string dataset_to_csv(const Dataset& d);
/// Provenance fields other than n and the label counts are left at zero.
Dataset dataset_from_csv(const std::string& text);
Dataset read_dataset(const fs::path& path);

json graph_to_json(const CouplingGraph& g);
CouplingGraph graph_from_json(const json& j);
/// Edge-list graph file: {"n": N, "edges": [[a, b], ...]}.
CouplingGraph read_graph_file(const fs::path& path);

json problem_to_json(const LceProblem& p);
LceProblem problem_from_json(const json& j);

json kernel_config_to_json(const KernelConfig& c);
KernelConfig kernel_config_from_json(const json& j);

std::string kernel_to_csv(const KernelMatrix& k);
json kernel_sidecar(const KernelMatrix& k, bool include_timing);
/// Writes <stem>.csv and <stem>.json.
void write_kernel(const fs::path& stem, const KernelMatrix& k, bool include_timing);
/// Reads <stem>.csv and its sidecar.
KernelMatrix read_kernel(const fs::path& stem);
/// Checksum of the matrix file contents.
std::uint64_t kernel_checksum(const KernelMatrix& k);

json model_to_json(const SvmModel& m, std::uint64_t train_dataset_checksum);
SvmModel model_from_json(const json& j);

json trace_record(const AlignmentStep& s, bool include_timing);

}  // namespace cokern::io
