#include "cokern/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cokern::io {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ValidationError("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

void atomic_write(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw ValidationError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string checksum_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_checksum_hex(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ValidationError("bad checksum '" + s + "'");
  return v;
}

// ---------------------------------------------------------------- CSV

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

}  // namespace

std::string dataset_to_csv(const Dataset& d) {
  std::string out = "label";
  for (int i = 0; i < 2 * d.n; ++i) out += ",theta_" + std::to_string(i);
  out += '\n';
  for (const auto& p : d.points) {
    out += p.label > 0 ? "1" : "-1";
    for (double t : p.theta) {
      out += ',';
      out += format_double(t);
    }
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ValidationError("dataset file is empty");
  const auto header = split(lines[0], ',');
  if (header.empty() || header[0] != "label" || header.size() < 3 || (header.size() - 1) % 2 != 0) {
    throw ValidationError("dataset header must be label,theta_0,...,theta_{2n-1}");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "theta_" + std::to_string(i - 1)) throw ValidationError("unexpected dataset column '" + std::string(header[i]) + "'");
  }
  Dataset d;
  d.n = static_cast<int>((header.size() - 1) / 2);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size()) throw ValidationError("dataset row " + std::to_string(r) + " has wrong column count");
    DataPoint p;
    const double label = parse_double(cells[0]);
    if (label != 1.0 && label != -1.0) throw ValidationError("dataset row " + std::to_string(r) + " has label other than +-1");
    p.label = label > 0 ? 1 : -1;
    for (std::size_t c = 1; c < cells.size(); ++c) p.theta.push_back(parse_double(cells[c]));
    (p.label > 0 ? d.count_plus : d.count_minus)++;
    d.points.push_back(std::move(p));
  }
  d.validate();
  return d;
}

Dataset read_dataset(const fs::path& path) { return dataset_from_csv(read_file(path)); }

// ---------------------------------------------------------------- JSON

json graph_to_json(const CouplingGraph& g) {
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return {{"n", g.num_vertices()}, {"edges", edges}};
}

CouplingGraph graph_from_json(const json& j) {
  try {
    std::vector<CouplingGraph::Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("edges must be [a, b] pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return CouplingGraph(j.at("n").get<int>(), std::move(edges));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed graph: ") + e.what());
  }
}

CouplingGraph read_graph_file(const fs::path& path) {
  try {
    return graph_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse graph file " + path.string() + ": " + e.what());
  }
}

json problem_to_json(const LceProblem& p) {
  return {{"graph", graph_to_json(p.graph)},
          {"c_plus", p.c_plus},
          {"c_minus", p.c_minus},
          {"seed", p.seed},
          {"stabilizer_generators", [&] {
             json g = json::array();
             for (const auto& s : p.stabilizer.generators) g.push_back(s.to_string());
             return g;
           }()}};
}

LceProblem problem_from_json(const json& j) {
  try {
    return make_problem(graph_from_json(j.at("graph")), j.at("c_plus").get<std::vector<double>>(),
                        j.at("c_minus").get<std::vector<double>>(), j.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed problem file: ") + e.what());
  }
}

json kernel_config_to_json(const KernelConfig& c) {
  return {{"mode", to_string(c.mode)},  {"shots", c.shots},        {"p_dep", c.p_dep},
          {"stretches", c.stretches},   {"side", to_string(c.side)}, {"lambda", c.lambda},
          {"seed", c.seed},             {"psd_policy", to_string(c.psd_policy)}};
}

KernelConfig kernel_config_from_json(const json& j) {
  try {
    KernelConfig c;
    c.mode = parse_kernel_mode(j.at("mode").get<std::string>());
    c.shots = j.at("shots").get<int>();
    c.p_dep = j.at("p_dep").get<double>();
    c.stretches = j.at("stretches").get<std::vector<double>>();
    c.side = parse_side(j.at("side").get<std::string>());
    c.lambda = j.at("lambda").get<std::vector<double>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.psd_policy = parse_psd_policy(j.value("psd_policy", std::string("clip")));
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed kernel config: ") + e.what());
  }
}

std::string kernel_to_csv(const KernelMatrix& k) {
  std::string out;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      if (j) out += ',';
      out += format_double(k.values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::uint64_t kernel_checksum(const KernelMatrix& k) { return fnv1a(kernel_to_csv(k)); }

json kernel_sidecar(const KernelMatrix& k, bool include_timing) {
  json j{{"rows", k.rows()},
         {"cols", k.cols()},
         {"row_dataset_checksum", checksum_hex(k.row_checksum)},
         {"col_dataset_checksum", checksum_hex(k.col_checksum)},
         {"matrix_checksum", checksum_hex(kernel_checksum(k))},
         {"config", kernel_config_to_json(k.config)},
         {"flags",
          {{"square_training", k.square_training},
           {"symmetrized", k.symmetrized},
           {"psd_repaired", k.psd_repaired},
           {"clamped_entries", k.clamped_entries}}},
         {"min_eigenvalue", k.min_eigenvalue ? json(*k.min_eigenvalue) : json(nullptr)}};
  if (include_timing) j["timing"] = {{"seconds", k.seconds}};
  return j;
}

void write_kernel(const fs::path& stem, const KernelMatrix& k, bool include_timing) {
  fs::path csv = stem, side = stem;
  csv += ".csv";
  side += ".json";
  atomic_write(csv, kernel_to_csv(k));
  atomic_write(side, kernel_sidecar(k, include_timing).dump(2) + "\n");
}

KernelMatrix read_kernel(const fs::path& stem) {
  fs::path csv = stem, side = stem;
  csv += ".csv";
  side += ".json";
  KernelMatrix k;
  json meta;
  try {
    meta = json::parse(read_file(side));
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse kernel sidecar " + side.string() + ": " + e.what());
  }
  const auto text = read_file(csv);
  const auto lines = lines_of(text);
  Eigen::Index rows = 0, cols = 0;
  try {
    rows = meta.at("rows").get<Eigen::Index>();
    cols = meta.at("cols").get<Eigen::Index>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed kernel sidecar " + side.string() + ": " + e.what());
  }
  if (rows < 0 || cols < 0) throw ValidationError("kernel sidecar has negative dimensions");
  if (static_cast<Eigen::Index>(lines.size()) != rows) throw ValidationError("kernel CSV row count does not match sidecar");
  k.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto cells = split(lines[static_cast<std::size_t>(i)], ',');
    if (static_cast<Eigen::Index>(cells.size()) != cols) throw ValidationError("kernel CSV column count does not match sidecar");
    for (Eigen::Index j = 0; j < cols; ++j) k.values(i, j) = parse_double(cells[static_cast<std::size_t>(j)]);
  }
  try {
    k.row_checksum = parse_checksum_hex(meta.at("row_dataset_checksum").get<std::string>());
    k.col_checksum = parse_checksum_hex(meta.at("col_dataset_checksum").get<std::string>());
    k.config = kernel_config_from_json(meta.at("config"));
    const auto& f = meta.at("flags");
    k.square_training = f.at("square_training").get<bool>();
    k.symmetrized = f.at("symmetrized").get<bool>();
    k.psd_repaired = f.at("psd_repaired").get<bool>();
    k.clamped_entries = f.at("clamped_entries").get<int>();
    if (!meta.at("min_eigenvalue").is_null()) k.min_eigenvalue = meta.at("min_eigenvalue").get<double>();
    if (parse_checksum_hex(meta.at("matrix_checksum").get<std::string>()) != fnv1a(text)) {
      throw ValidationError("kernel matrix " + csv.string() + " does not match its sidecar checksum");
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed kernel sidecar " + side.string() + ": " + e.what());
  }
  return k;
}

json model_to_json(const SvmModel& m, std::uint64_t train_dataset_checksum) {
  return {{"alpha", m.alpha},
          {"b", m.b},
          {"C", m.C},
          {"labels", m.labels},
          {"support", m.support},
          {"degenerate", m.degenerate},
          {"warning", m.warning},
          {"training_kernel_checksum", checksum_hex(m.kernel_checksum)},
          {"training_dataset_checksum", checksum_hex(train_dataset_checksum)}};
}

SvmModel model_from_json(const json& j) {
  try {
    SvmModel m;
    m.alpha = j.at("alpha").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.C = j.at("C").get<double>();
    m.labels = j.at("labels").get<std::vector<int>>();
    m.support = j.at("support").get<std::vector<int>>();
    m.degenerate = j.value("degenerate", false);
    m.warning = j.value("warning", std::string());
    m.kernel_checksum = parse_checksum_hex(j.at("training_kernel_checksum").get<std::string>());
    if (m.alpha.size() != m.labels.size()) throw ValidationError("model alpha and labels differ in length");
    for (int s : m.support)
      if (s < 0 || static_cast<std::size_t>(s) >= m.alpha.size()) throw ValidationError("support index out of range");
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

json trace_record(const AlignmentStep& s, bool include_timing) {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  json j{{"step", s.step},
         {"lambda", s.lambda},
         {"cost", s.cost},
         {"lambda_plus", opt(s.lambda_plus)},
         {"lambda_minus", opt(s.lambda_minus)},
         {"f_plus", opt(s.f_plus)},
         {"f_minus", opt(s.f_minus)},
         {"a_i", opt(s.gain_a)},
         {"c_i", opt(s.gain_c)},
         {"delta", opt(s.delta)}};
  if (include_timing) j["wall_time"] = s.seconds;
  return j;
}

}  // namespace cokern::io
