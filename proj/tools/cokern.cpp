// cokern: command-line driver for the covariant-kernel workbench.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cokern/alignment.hpp"
#include "cokern/analysis.hpp"
#include "cokern/fourier.hpp"
#include "cokern/group.hpp"
#include "cokern/io.hpp"
#include "cokern/kernel.hpp"
#include "cokern/lce.hpp"
#include "cokern/rng.hpp"
#include "cokern/statevector.hpp"
#include "cokern/svm.hpp"

namespace {

using namespace cokern;
using io::json;
namespace fs = std::filesystem;

constexpr double kHalfPi = 1.5707963267948966;

// Flat experiment configuration. Keys absent from the file keep the defaults below.
struct Config {
  json raw = json::object();

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!raw.contains(key) || raw.at(key).is_null()) return fallback;
    try {
      return raw.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  }
  bool has(const std::string& key) const { return raw.contains(key) && !raw.at(key).is_null(); }

  std::vector<double> angles(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    if (raw.at(key).is_number()) return {raw.at(key).get<double>()};
    return get<std::vector<double>>(key, fallback);
  }

  std::uint64_t seed() const { return get<std::uint64_t>("seed", 0); }
  std::uint64_t named_seed(const std::string& key) const { return get<std::uint64_t>(key, seed()); }
};

const std::vector<std::string> kKnownKeys{
    "graph", "n", "graph_file", "epsilon", "train_per_label", "test_per_label", "mode", "shots", "p_dep",
    "stretches", "side", "lambda", "psd_policy", "spsa_steps", "spsa_a", "spsa_c", "spsa_A", "spsa_sigma",
    "spsa_gamma", "lambda0", "objective", "C", "seed", "data_seed", "shot_seed", "spsa_seed", "threads", "out",
    "timing", "dlog_p", "dlog_g", "dlog_k", "dlog_s", "dlog_train", "group", "fiducial"};

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Config c;
  if (!path.empty()) {
    try {
      c.raw = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
      throw ValidationError("cannot parse config " + path + ": " + e.what());
    }
    if (!c.raw.is_object()) throw ValidationError("config must be a JSON object");
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    try {
      c.raw[key] = json::parse(value);
    } catch (const json::exception&) {
      c.raw[key] = value;
    }
  }
  for (const auto& [key, _] : c.raw.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }
  return c;
}

CouplingGraph graph_from_config(const Config& c) {
  if (c.has("graph_file")) {
    const fs::path p = c.get<std::string>("graph_file", "");
    if (!fs::exists(p)) throw ValidationError("graph file " + p.string() + " does not exist");
    return io::read_graph_file(p);
  }
  const int n = c.get<int>("n", 5);
  if (n < 1 || n > kDefaultQubitCap) throw ValidationError("n must lie in [1, " + std::to_string(kDefaultQubitCap) + "]");
  return CouplingGraph::builtin(c.get<std::string>("graph", "path"), n);
}

KernelConfig kernel_config(const Config& c, int threads) {
  KernelConfig k;
  k.mode = parse_kernel_mode(c.get<std::string>("mode", "exact"));
  k.shots = c.get<int>("shots", 8192);
  k.p_dep = c.get<double>("p_dep", 0.0);
  k.stretches = c.get<std::vector<double>>("stretches", {1.0, 1.3});
  k.side = parse_side(c.get<std::string>("side", "left"));
  k.lambda = c.angles("lambda", {kHalfPi});
  k.psd_policy = parse_psd_policy(c.get<std::string>("psd_policy", "clip"));
  k.seed = c.named_seed("shot_seed");
  k.threads = threads > 0 ? threads : c.get<int>("threads", 1);
  k.validate();
  return k;
}

SpsaConfig spsa_config(const Config& c) {
  SpsaConfig s;
  s.steps = c.get<int>("spsa_steps", 21);
  s.a = c.get<double>("spsa_a", 0.1);
  s.c = c.get<double>("spsa_c", 0.1);
  s.A = c.get<double>("spsa_A", 0.0);
  s.sigma = c.get<double>("spsa_sigma", 0.602);
  s.gamma = c.get<double>("spsa_gamma", 0.101);
  s.lambda0 = c.angles("lambda0", {0.1});
  s.seed = c.named_seed("spsa_seed");
  s.validate();
  return s;
}

SvmOptions svm_options(const Config& c) {
  SvmOptions o;
  o.C = c.get<double>("C", 1.0);
  if (!(o.C > 0.0)) throw ValidationError("C must be positive");
  return o;
}

fs::path require_file(const std::string& what, const std::string& path) {
  if (path.empty()) throw ValidationError("missing --" + what);
  if (!fs::exists(path)) throw ValidationError(what + " file " + path + " does not exist");
  return path;
}

fs::path require_kernel(const std::string& what, const std::string& stem) {
  if (stem.empty()) throw ValidationError("missing --" + what);
  for (const char* ext : {".csv", ".json"}) {
    fs::path p = stem;
    p += ext;
    if (!fs::exists(p)) throw ValidationError(what + " file " + p.string() + " does not exist");
  }
  return stem;
}

// Graph for kernel work: the problem file wins, then the config.
CouplingGraph resolve_graph(const Config& c, const std::string& problem_path) {
  if (!problem_path.empty()) {
    try {
      return io::problem_from_json(json::parse(io::read_file(require_file("problem", problem_path)))).graph;
    } catch (const json::exception& e) {
      throw ValidationError("cannot parse problem file: " + std::string(e.what()));
    }
  }
  return graph_from_config(c);
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& s : cells) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out + '\n';
}

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  std::string out = "out";
  bool timing = false;
  std::vector<std::string> set;

  Config load() {
    Config c = load_config(config, set);
    if (seed_given) c.raw["seed"] = seed;
    if (!c.has("out") || out != "out") c.raw["out"] = out;
    if (c.get<bool>("timing", false)) timing = true;
    return c;
  }
  fs::path dir(const Config& c) const { return c.get<std::string>("out", out); }
};

// ---------------------------------------------------------------- commands

int cmd_gen_lce(Common& common) {
  const Config c = common.load();
  const auto graph = graph_from_config(c);
  const double eps = c.get<double>("epsilon", 0.01);
  const int m_train = c.get<int>("train_per_label", 10);
  const int m_test = c.get<int>("test_per_label", 50);
  if (m_train < 1 || m_test < 1) throw ValidationError("per-label counts must be >= 1");
  if (!(eps >= 0.0)) throw ValidationError("epsilon must be non-negative");
  const auto seed = c.named_seed("data_seed");

  const auto problem = new_problem(graph, seed);
  const auto train = generate_dataset(problem, m_train, eps, derive_seed(seed, {stream::kTrain}));
  const auto test = generate_dataset(problem, m_test, eps, derive_seed(seed, {stream::kTest}));
  const auto dir = common.dir(c);
  io::atomic_write(dir / "problem.json", io::problem_to_json(problem).dump(2) + "\n");
  io::atomic_write(dir / "train.csv", io::dataset_to_csv(train));
  io::atomic_write(dir / "test.csv", io::dataset_to_csv(test));
  std::printf("gen-lce: n=%d edges=%zu train=%zu test=%zu epsilon=%g seed=%llu -> %s\n", graph.num_vertices(),
              graph.edges().size(), train.size(), test.size(), eps, static_cast<unsigned long long>(seed),
              dir.string().c_str());
  return 0;
}

int cmd_kernel(Common& common, const std::string& rows_path, std::string cols_path, const std::string& problem,
               const std::string& name) {
  const Config c = common.load();
  const auto rows = io::read_dataset(require_file("rows", rows_path));
  if (cols_path.empty()) cols_path = rows_path;
  const auto cols = io::read_dataset(require_file("cols", cols_path));
  const auto graph = resolve_graph(c, problem);
  const auto cfg = kernel_config(c, common.threads);
  const auto stem = common.dir(c) / name;
  for (const std::string& input : {rows_path, cols_path}) {
    std::error_code ec;
    for (const char* ext : {".csv", ".json"})
      if (fs::equivalent(fs::path(stem.string() + ext), input, ec)) {
        throw ValidationError("kernel output " + stem.string() + ext + " would overwrite input " + input +
                              "; choose another --name or --out");
      }
  }
  const auto K = build_kernel_matrix(rows, cols, graph, cfg);
  io::write_kernel(stem, K, common.timing);
  std::printf("kernel: %lldx%lld mode=%s%s -> %s.csv\n", static_cast<long long>(K.rows()),
              static_cast<long long>(K.cols()), to_string(cfg.mode).c_str(), K.psd_repaired ? " (psd-repaired)" : "",
              stem.string().c_str());
  return 0;
}

double accuracy_at(const Dataset& train, const Dataset& test, const CouplingGraph& g, KernelConfig cfg,
                   const std::vector<double>& lambda, const SvmOptions& svm) {
  cfg.lambda = lambda;
  const auto ktr = build_kernel_matrix(train, train, g, cfg);
  const auto kte = build_kernel_matrix(test, train, g, cfg);
  const auto [model, rep] = solve_dual(ktr.values, train.labels(), svm);
  const auto pred = predict(model, kte.values);
  return classification_metrics(pred, test.labels(), decision_values(model, kte.values)).accuracy;
}

int cmd_align(Common& common, const std::string& train_path, const std::string& test_path,
              const std::string& problem) {
  const Config c = common.load();
  const auto train = io::read_dataset(require_file("train", train_path));
  std::optional<Dataset> test;
  if (!test_path.empty()) test = io::read_dataset(require_file("test", test_path));
  const auto graph = resolve_graph(c, problem);
  const auto kcfg = kernel_config(c, common.threads);
  const auto scfg = spsa_config(c);
  AlignmentOptions opt;
  opt.objective = parse_alignment_objective(c.get<std::string>("objective", "weighted"));
  opt.svm = svm_options(c);

  const auto dir = common.dir(c);
  auto write_trace = [&](const AlignmentTrace& t) {
    std::string lines, cost = "step,lambda,cost\n", acc = "step,lambda,accuracy\n";
    for (const auto& s : t.steps) {
      lines += io::trace_record(s, common.timing).dump() + "\n";
      cost += csv_line({std::to_string(s.step), io::format_double(s.lambda[0]), io::format_double(s.cost)});
      if (test) {
        acc += csv_line({std::to_string(s.step), io::format_double(s.lambda[0]),
                         io::format_double(accuracy_at(train, *test, graph, kcfg, s.lambda, opt.svm))});
      }
    }
    io::atomic_write(dir / "trace.jsonl", lines);
    io::atomic_write(dir / "cost_vs_step.csv", cost);
    if (test) io::atomic_write(dir / "accuracy_vs_step.csv", acc);
  };

  AlignmentTrace trace;
  try {
    trace = align(train, graph, kcfg, scfg, opt);
  } catch (const AlignmentAborted& e) {
    write_trace(e.partial());
    throw;
  }
  write_trace(trace);
  json lam{{"lambda_star", trace.lambda_star},
           {"steps", scfg.steps},
           {"objective", to_string(opt.objective)},
           {"final_cost", trace.steps.back().cost}};
  io::atomic_write(dir / "lambda.json", lam.dump(2) + "\n");
  std::printf("align: %d steps, lambda* =", scfg.steps);
  for (double l : trace.lambda_star) std::printf(" %.17g", l);
  std::printf(", cost %.6g -> %.6g\n", trace.steps.front().cost, trace.steps.back().cost);
  return 0;
}

void check_training_kernel(const KernelMatrix& K, const Dataset& train) {
  const auto sum = dataset_checksum(train);
  if (K.rows() != K.cols() || K.row_checksum != sum || K.col_checksum != sum) {
    throw ValidationError("training kernel was not built from this training set (checksum mismatch)");
  }
}

int cmd_train(Common& common, const std::string& kernel_stem, const std::string& train_path) {
  const Config c = common.load();
  const auto train = io::read_dataset(require_file("train", train_path));
  auto K = io::read_kernel(require_kernel("kernel", kernel_stem));
  check_training_kernel(K, train);
  const auto y = train.labels();
  auto [model, rep] = solve_dual(K.values, y, svm_options(c));
  model.kernel_checksum = io::kernel_checksum(K);
  json out = io::model_to_json(model, dataset_checksum(train));
  out["objective"] = rep.objective;
  out["iterations"] = rep.iterations;
  out["max_kkt_violation"] = rep.max_kkt_violation;
  io::atomic_write(common.dir(c) / "model.json", out.dump(2) + "\n");
  if (model.degenerate) std::fprintf(stderr, "warning: %s\n", model.warning.c_str());
  std::printf("train: %zu points, %zu support vectors, F* = %.10g, b = %.10g\n", y.size(), model.support.size(),
              rep.objective, model.b);
  return 0;
}

struct LoadedModel {
  SvmModel model;
  std::uint64_t train_checksum;
};

LoadedModel load_model(const std::string& path) {
  try {
    const json j = json::parse(io::read_file(require_file("model", path)));
    return {io::model_from_json(j), io::parse_checksum_hex(j.at("training_dataset_checksum").get<std::string>())};
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse model file: " + std::string(e.what()));
  }
}

KernelMatrix load_query_kernel(const std::string& stem, const LoadedModel& lm, const std::string& test_path,
                               std::optional<Dataset>& test) {
  auto K = io::read_kernel(require_kernel("kernel", stem));
  if (K.col_checksum != lm.train_checksum || static_cast<std::size_t>(K.cols()) != lm.model.alpha.size()) {
    throw ValidationError("kernel columns do not match the model's training set (checksum mismatch)");
  }
  if (!test_path.empty()) {
    test = io::read_dataset(require_file("test", test_path));
    if (K.row_checksum != dataset_checksum(*test)) {
      throw ValidationError("kernel rows do not match the supplied test set (checksum mismatch)");
    }
  }
  return K;
}

int cmd_predict(Common& common, const std::string& model_path, const std::string& kernel_stem,
                const std::string& test_path) {
  const Config c = common.load();
  const auto lm = load_model(model_path);
  std::optional<Dataset> test;
  const auto K = load_query_kernel(kernel_stem, lm, test_path, test);
  const auto dv = decision_values(lm.model, K.values);
  const auto labels = predict(lm.model, K.values);
  std::string out = "index,decision_value,label\n";
  for (std::size_t i = 0; i < dv.size(); ++i)
    out += csv_line({std::to_string(i), io::format_double(dv[i]), std::to_string(labels[i])});
  io::atomic_write(common.dir(c) / "predictions.csv", out);
  if (test) {
    const auto m = classification_metrics(labels, test->labels(), dv);
    std::printf("predict: %zu points, accuracy %.6g\n", dv.size(), m.accuracy);
  } else {
    std::printf("predict: %zu points\n", dv.size());
  }
  return 0;
}

std::vector<double> depolarize(const std::vector<double>& p, double rate) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = (1 - rate) * p[i] + rate / double(p.size());
  return out;
}

int cmd_diagnose(Common& common, const std::string& kernel_stem, const std::string& train_path,
                 const std::string& model_path, const std::string& test_kernel, const std::string& test_path,
                 const std::string& problem, std::vector<std::pair<int, int>> pairs) {
  const Config c = common.load();
  const auto train = io::read_dataset(require_file("train", train_path));
  const auto K = io::read_kernel(require_kernel("kernel", kernel_stem));
  check_training_kernel(K, train);
  const auto y = train.labels();
  const auto geo = geometry_metrics(K.values, y);
  json metrics{{"hs_distance", geo.hs_distance},
               {"variance_plus", geo.variance_plus},
               {"variance_minus", geo.variance_minus},
               {"min_eigenvalue", min_eigenvalue(0.5 * (K.values + K.values.transpose()))},
               {"kernel_mode", to_string(K.config.mode)}};

  if (!model_path.empty() || !test_kernel.empty()) {
    if (model_path.empty() || test_kernel.empty() || test_path.empty()) {
      throw ValidationError("accuracy needs --model, --test-kernel and --test together");
    }
    const auto lm = load_model(model_path);
    if (lm.train_checksum != dataset_checksum(train)) throw ValidationError("model was trained on a different set");
    std::optional<Dataset> test;
    const auto Kt = load_query_kernel(test_kernel, lm, test_path, test);
    const auto dv = decision_values(lm.model, Kt.values);
    const auto m = classification_metrics(predict(lm.model, Kt.values), test->labels(), dv);
    metrics["accuracy"] = m.accuracy;
    metrics["decision_values"] = m.decision_values;
    metrics["misclassified"] = m.misclassified;
  }

  // Hamming-weight histograms of the kernel circuit for chosen training pairs:
  // the noiseless outcome next to the depolarized one at each stretch.
  if (pairs.empty() && train.size() >= 2) pairs.emplace_back(0, static_cast<int>(train.size()) - 1);
  const auto graph = resolve_graph(c, problem);
  if (graph.num_vertices() != train.n) throw ValidationError("graph size does not match the dataset");
  const auto& kc = K.config;
  std::string hist = "pair_i,pair_j,weight,ideal";
  for (double s : kc.stretches) hist += ",stretch_" + io::format_double(s);
  hist += '\n';
  json tvd = json::array();
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= train.size() || static_cast<std::size_t>(j) >= train.size()) {
      throw ValidationError("pair index out of range");
    }
    const auto x = datum_to_unitaries(train.points[static_cast<std::size_t>(i)].theta);
    const auto z = datum_to_unitaries(train.points[static_cast<std::size_t>(j)].theta);
    const auto ideal = outcome_distribution(kernel_circuit_state(x, z, graph, kc.lambda, kc.side));
    const auto h_ideal = hamming_weight_distribution(ideal, train.n);
    std::vector<std::vector<double>> h_noisy;
    json row{{"pair", {i, j}}, {"kernel", h_ideal[0]}};
    for (double s : kc.stretches) {
      const auto noisy = depolarize(ideal, kc.p_dep * s);
      h_noisy.push_back(hamming_weight_distribution(noisy, train.n));
      row["tvd_stretch_" + io::format_double(s)] = total_variation_distance(ideal, noisy);
    }
    tvd.push_back(row);
    for (int w = 0; w <= train.n; ++w) {
      hist += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(w) + "," +
              io::format_double(h_ideal[static_cast<std::size_t>(w)]);
      for (const auto& h : h_noisy) hist += "," + io::format_double(h[static_cast<std::size_t>(w)]);
      hist += '\n';
    }
  }
  metrics["tvd"] = tvd;
  const auto dir = common.dir(c);
  io::atomic_write(dir / "metrics.json", metrics.dump(2) + "\n");
  io::atomic_write(dir / "hamming.csv", hist);
  std::printf("diagnose: HS distance %.6g, variances +%.6g / -%.6g", geo.hs_distance, geo.variance_plus,
              geo.variance_minus);
  if (metrics.contains("accuracy")) std::printf(", accuracy %.6g", metrics["accuracy"].get<double>());
  std::printf("\n");
  return 0;
}

int cmd_dlog_demo(Common& common) {
  const Config c = common.load();
  const auto p = c.get<std::uint64_t>("dlog_p", 7);
  const auto g = c.get<std::uint64_t>("dlog_g", 3);
  const int k = c.get<int>("dlog_k", 1);
  const auto s = c.get<std::uint64_t>("dlog_s", 0);
  const ZpStarGroup grp(p, g, k);
  const auto order = grp.order();
  const int m = c.get<int>("dlog_train", static_cast<int>(order));
  if (m < 1) throw ValidationError("dlog_train must be >= 1");

  std::vector<std::uint64_t> xs(order);
  std::iota(xs.begin(), xs.end(), 1);
  Rng rng = make_rng(c.named_seed("data_seed"), {stream::kTrain});
  std::shuffle(xs.begin(), xs.end(), rng);
  auto label = [&](std::uint64_t x) {
    const auto v = dlog_brute(grp, x);
    return (v + order - s % order) % order <= (p - 3) / 2 ? 1 : -1;
  };
  // With dlog_train >= p - 1 the whole group is both training and test set.
  const bool full = static_cast<std::uint64_t>(m) >= order;
  std::vector<std::uint64_t> tr(xs.begin(), full ? xs.end() : xs.begin() + m);
  std::vector<std::uint64_t> te = full ? tr : std::vector<std::uint64_t>(xs.begin() + m, xs.end());
  auto gram = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    Eigen::MatrixXd K(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) K(Eigen::Index(i), Eigen::Index(j)) = dlog_kernel_entry(grp, a[i], b[j]);
    return K;
  };
  std::vector<int> ytr, yte;
  for (auto x : tr) ytr.push_back(label(x));
  for (auto x : te) yte.push_back(label(x));
  const auto [model, rep] = solve_dual(gram(tr, tr), ytr, svm_options(c));
  auto accuracy = [&](const std::vector<std::uint64_t>& pts, const std::vector<int>& truth) {
    const auto K = gram(pts, tr);
    return classification_metrics(predict(model, K), truth, decision_values(model, K)).accuracy;
  };
  const double acc_tr = accuracy(tr, ytr);
  const double acc_te = te.empty() ? 0.0 : accuracy(te, yte);
  json out{{"p", p}, {"g", g}, {"k", k}, {"s", s}, {"train_size", tr.size()}, {"test_size", te.size()},
           {"train_accuracy", acc_tr}, {"test_accuracy", acc_te}, {"F_star", rep.objective}};
  if (k == 0) {
    out["warning"] = "k = 0: the fiducial is a basis state and the kernel is the identity; expect chance-level test accuracy";
    std::fprintf(stderr, "warning: %s\n", out["warning"].get<std::string>().c_str());
  }
  if (model.degenerate) out["model_warning"] = model.warning;
  io::atomic_write(common.dir(c) / "dlog.json", out.dump(2) + "\n");
  std::printf("dlog-demo: p=%llu g=%llu k=%d  train accuracy %.4f  test accuracy %.4f\n",
              static_cast<unsigned long long>(p), static_cast<unsigned long long>(g), k, acc_tr, acc_te);
  return 0;
}

std::uint64_t smallest_generator(std::uint64_t p) {
  for (std::uint64_t g = 2; g < p; ++g) {
    std::uint64_t x = 1, ord = 0;
    do {
      x = x * g % p;
      ++ord;
    } while (x != 1);
    if (ord == p - 1) return g;
  }
  return 1;  // p = 2
}

int cmd_fourier_check(Common& common) {
  const Config c = common.load();
  const auto group = c.get<std::string>("group", "Z5");
  const auto fid = c.get<std::string>("fiducial", "uniform");
  FiniteGroupModel gm;
  std::optional<ZpStarGroup> zp;
  int subset_k = -1;
  if (fid.rfind("subset:", 0) == 0) {
    try {
      subset_k = std::stoi(fid.substr(7));
    } catch (const std::exception&) {
      throw ValidationError("bad fiducial '" + fid + "'");
    }
  } else if (fid != "uniform" && fid != "random") {
    throw ValidationError("fiducial must be uniform, random or subset:K");
  }
  auto parse_size = [&](std::size_t prefix) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(group.substr(prefix), &used);
      if (used + prefix != group.size()) throw ValidationError("");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("unsupported group '" + group + "' (use Zm or ZstarP)");
    }
  };
  if (group.rfind("Zstar", 0) == 0) {
    const int p = parse_size(5);
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw ValidationError("ZstarP needs an odd prime P");
    zp.emplace(static_cast<std::uint64_t>(p), smallest_generator(static_cast<std::uint64_t>(p)),
               std::max(subset_k, 0));
    gm = zp_star_group_model(*zp);
  } else if (group.rfind("Z", 0) == 0) {
    gm = cyclic_group_model(parse_size(1));
    if (subset_k >= 0) throw ValidationError("subset fiducials need a ZstarP group");
  } else {
    throw ValidationError("unsupported group '" + group + "' (use Zm or ZstarP)");
  }

  const int d = gm.rep_dim();
  Eigen::VectorXcd psi;
  if (subset_k >= 0) {
    psi = subset_fiducial(*zp);
  } else if (fid == "uniform") {
    psi = Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(double(d)));
  } else {
    Rng rng = make_rng(c.seed(), {stream::kProblem});
    std::normal_distribution<double> N;
    psi.resize(d);
    for (int i = 0; i < d; ++i) psi(i) = {N(rng), N(rng)};
    psi.normalize();
  }
  const auto coeffs = kernel_fourier_coefficients(gm, psi);
  const auto back = fourier_invert(coeffs, gm);
  const auto direct = kernel_function_direct(gm, psi);
  double err = 0.0, dlog_err = 0.0;
  json rows = json::array();
  for (int gi = 0; gi < gm.order(); ++gi) {
    const auto i = static_cast<std::size_t>(gi);
    err = std::max(err, std::abs(back[i] - direct[i]));
    json r{{"element", gi}, {"direct", direct[i]}, {"reconstructed", back[i]}};
    if (subset_k >= 0) {
      const double ref = dlog_kernel_entry(*zp, 1, static_cast<std::uint64_t>(gi + 1));
      dlog_err = std::max(dlog_err, std::abs(back[i] - ref));
      r["element"] = gi + 1;
      r["dlog_kernel"] = ref;
    }
    rows.push_back(r);
  }
  json out{{"group", group}, {"fiducial", fid}, {"max_error", err}, {"values", rows}};
  if (subset_k >= 0) out["max_dlog_error"] = dlog_err;
  io::atomic_write(common.dir(c) / "fourier.json", out.dump(2) + "\n");
  std::printf("fourier-check: %s fiducial=%s max reconstruction error %.3e", group.c_str(), fid.c_str(), err);
  if (subset_k >= 0) std::printf(", max deviation from subset kernel %.3e", dlog_err);
  std::printf("\n");
  if (err > 1e-9 || dlog_err > 1e-9) {
    std::fprintf(stderr, "error: reconstruction error above 1e-9\n");
    return 2;
  }
  return 0;
}

std::vector<std::pair<int, int>> parse_pairs(const std::vector<std::string>& specs) {
  std::vector<std::pair<int, int>> out;
  for (const auto& s : specs) {
    const auto comma = s.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(s);
      out.emplace_back(std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ValidationError("--pair expects I,J; got '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariant quantum kernel workbench"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t s) {
          common.seed = s;
          common.seed_given = true;
        },
        "Master seed (overrides the config)");
    sub->add_option("--threads", common.threads, "Worker threads for kernel builds")->check(CLI::PositiveNumber);
    sub->add_option("--out", common.out, "Output directory");
    sub->add_flag("--timing", common.timing, "Record wall-clock timings in outputs");
    sub->add_option("--set", common.set, "Override a config key: key=value");
  };

  std::string rows, cols, problem, name = "kernel", train, test, model, kernel, test_kernel;
  std::vector<std::string> pairs;

  auto* gen = app.add_subcommand("gen-lce", "Generate a labeling-cosets-with-error problem and datasets");
  add_common(gen);
  auto* kern = app.add_subcommand("kernel", "Build a kernel matrix between two datasets");
  add_common(kern);
  kern->add_option("--rows", rows, "Row dataset CSV")->required();
  kern->add_option("--cols", cols, "Column dataset CSV (defaults to --rows)");
  kern->add_option("--problem", problem, "Problem JSON supplying the graph");
  kern->add_option("--name", name, "Output file stem");
  auto* al = app.add_subcommand("align", "Kernel alignment by SPSA");
  add_common(al);
  al->add_option("--train", train, "Training dataset CSV")->required();
  al->add_option("--test", test, "Test dataset CSV for accuracy-vs-step");
  al->add_option("--problem", problem, "Problem JSON supplying the graph");
  auto* tr = app.add_subcommand("train", "Train an SVM on a training kernel");
  add_common(tr);
  tr->add_option("--kernel", kernel, "Training kernel stem")->required();
  tr->add_option("--train", train, "Training dataset CSV")->required();
  auto* pr = app.add_subcommand("predict", "Classify with a trained model");
  add_common(pr);
  pr->add_option("--model", model, "Model JSON")->required();
  pr->add_option("--kernel", kernel, "Query-by-training kernel stem")->required();
  pr->add_option("--test", test, "Query dataset CSV (checksum check and accuracy)");
  auto* dg = app.add_subcommand("diagnose", "Geometry, accuracy and Hamming-weight diagnostics");
  add_common(dg);
  dg->add_option("--kernel", kernel, "Training kernel stem")->required();
  dg->add_option("--train", train, "Training dataset CSV")->required();
  dg->add_option("--model", model, "Model JSON");
  dg->add_option("--test-kernel", test_kernel, "Test-by-training kernel stem");
  dg->add_option("--test", test, "Test dataset CSV");
  dg->add_option("--problem", problem, "Problem JSON supplying the graph");
  dg->add_option("--pair", pairs, "Training pair I,J for Hamming histograms");
  auto* dl = app.add_subcommand("dlog-demo", "SVM on the discrete-log kernel over Z*_p");
  add_common(dl);
  auto* fc = app.add_subcommand("fourier-check", "Fourier inversion round trip on a small group");
  add_common(fc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_lce(common);
    if (kern->parsed()) return cmd_kernel(common, rows, cols, problem, name);
    if (al->parsed()) return cmd_align(common, train, test, problem);
    if (tr->parsed()) return cmd_train(common, kernel, train);
    if (pr->parsed()) return cmd_predict(common, model, kernel, test);
    if (dg->parsed()) return cmd_diagnose(common, kernel, train, model, test_kernel, test, problem, parse_pairs(pairs));
    if (dl->parsed()) return cmd_dlog_demo(common);
    if (fc->parsed()) return cmd_fourier_check(common);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
