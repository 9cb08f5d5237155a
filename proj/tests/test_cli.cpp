#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cokern/io.hpp"

using namespace cokern;
namespace fs = std::filesystem;
using io::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cokern_test_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI with stdout and stderr captured to log; returns the exit status.
int run(const std::string& args, const std::string& log = "last.log") {
  const std::string cmd = std::string("\"") + COKERN_CLI + "\" " + args + " > \"" + (workdir() / log).string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& sub) { return (workdir() / sub).string(); }

std::string slurp(const fs::path& p) { return io::read_file(p); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) v.push_back(l);
  return v;
}

void write_config(const std::string& name, const json& j) { io::atomic_write(workdir() / name, j.dump()); }

// Shared fixture: generated data, exact kernels and a trained model.
struct Pipeline {
  Pipeline() {
    write_config("lce.json", json{{"graph", "path"}, {"n", 5}, {"train_per_label", 10}, {"test_per_label", 5}});
    const auto cfg = out("lce.json");
    REQUIRE(run("gen-lce --config " + cfg + " --seed 7 --out " + out("data"), "gen.log") == 0);
    REQUIRE(run("kernel --config " + cfg + " --seed 7 --out " + out("k") + " --rows " + out("data/train.csv") +
                " --problem " + out("data/problem.json") + " --name train") == 0);
    REQUIRE(run("kernel --config " + cfg + " --seed 7 --out " + out("k") + " --rows " + out("data/test.csv") +
                " --cols " + out("data/train.csv") + " --problem " + out("data/problem.json") + " --name test") == 0);
    REQUIRE(run("train --seed 7 --out " + out("m") + " --kernel " + out("k/train") + " --train " + out("data/train.csv")) == 0);
  }
};

const Pipeline& pipeline() {
  static const Pipeline p;
  return p;
}

}  // namespace

TEST_CASE("gen-lce output shape and determinism") {
  pipeline();
  const auto train = slurp(out("data/train.csv"));
  const auto rows = lines(train);
  REQUIRE(rows.size() == 21);
  for (const auto& r : rows) CHECK(std::count(r.begin(), r.end(), ',') == 10);
  CHECK(io::read_dataset(out("data/train.csv")).count_minus == 10);
  CHECK(slurp(workdir() / "gen.log").find("epsilon=0.01 ") != std::string::npos);

  REQUIRE(run("gen-lce --config " + out("lce.json") + " --seed 7 --out " + out("data2")) == 0);
  for (const char* f : {"train.csv", "test.csv", "problem.json"})
    CHECK(slurp(workdir() / "data" / f) == slurp(workdir() / "data2" / f));
  REQUIRE(run("gen-lce --config " + out("lce.json") + " --seed 8 --out " + out("data3")) == 0);
  CHECK(slurp(out("data/train.csv")) != slurp(out("data3/train.csv")));
}

TEST_CASE("exact kernel files") {
  pipeline();
  const auto K = io::read_kernel(out("k/train"));
  REQUIRE(K.rows() == 20);
  REQUIRE(K.cols() == 20);
  for (Eigen::Index i = 0; i < 20; ++i) CHECK(K(i, i) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((K.values - K.values.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  const auto side = json::parse(slurp(out("k/train.json")));
  CHECK(side.at("config").at("mode") == "exact");
  CHECK_FALSE(side.contains("timing"));

  REQUIRE(run("kernel --config " + out("lce.json") + " --seed 7 --out " + out("k2") + " --rows " +
              out("data/train.csv") + " --problem " + out("data/problem.json") + " --name train") == 0);
  CHECK(slurp(out("k/train.csv")) == slurp(out("k2/train.csv")));
  CHECK(slurp(out("k/train.json")) == slurp(out("k2/train.json")));
}

TEST_CASE("mitigated kernel provenance") {
  pipeline();
  REQUIRE(run("kernel --config " + out("lce.json") + " --set mode=mitigated --set p_dep=0.1 --seed 3 --out " +
              out("km") + " --rows " + out("data/train.csv") + " --problem " + out("data/problem.json")) == 0);
  const auto side = json::parse(slurp(out("km/kernel.json")));
  const auto& cfg = side.at("config");
  CHECK(cfg.at("mode") == "mitigated");
  CHECK(cfg.at("shots") == 8192);
  CHECK(cfg.at("stretches") == json::array({1.0, 1.3}));
  CHECK(cfg.at("p_dep") == 0.1);
  const auto K = io::read_kernel(out("km/kernel"));
  CHECK(side.at("flags").at("square_training") == true);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K.values).eigenvalues().minCoeff() >= -1e-9);
  REQUIRE(run("kernel --config " + out("lce.json") + " --set mode=mitigated --set p_dep=0.1 --seed 3 --out " +
              out("km") + " --rows " + out("data/test.csv") + " --cols " + out("data/train.csv") + " --problem " +
              out("data/problem.json") + " --name rect") == 0);
  const auto R = io::read_kernel(out("km/rect"));
  CHECK_FALSE(R.psd_repaired);
  CHECK(R.values.minCoeff() >= 0.0);
  CHECK(R.values.maxCoeff() <= 1.0);
  REQUIRE(run("kernel --config " + out("lce.json") + " --set mode=mitigated --set p_dep=0.1 --seed 3 --timing --out " +
              out("km2") + " --rows " + out("data/train.csv") + " --problem " + out("data/problem.json")) == 0);
  CHECK(json::parse(slurp(out("km2/kernel.json"))).contains("timing"));
  CHECK(slurp(out("km/kernel.csv")) == slurp(out("km2/kernel.csv")));
}

TEST_CASE("train and predict reach perfect accuracy") {
  pipeline();
  const auto model = json::parse(slurp(out("m/model.json")));
  CHECK(model.at("alpha").size() == 20);
  REQUIRE(run("predict --out " + out("p") + " --model " + out("m/model.json") + " --kernel " + out("k/test") +
              " --test " + out("data/test.csv"), "predict.log") == 0);
  const auto rows = lines(slurp(out("p/predictions.csv")));
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "index,decision_value,label");
  const auto test = io::read_dataset(out("data/test.csv"));
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& r = rows[i + 1];
    CHECK(std::stoi(r.substr(r.rfind(',') + 1)) == test.points[i].label);
  }
  CHECK(slurp(workdir() / "predict.log").find("accuracy 1") != std::string::npos);
}

TEST_CASE("checksum mismatches are rejected") {
  pipeline();
  // Test kernel in place of the training kernel.
  CHECK(run("train --out " + out("bad") + " --kernel " + out("k/test") + " --train " + out("data/train.csv")) == 1);
  // Training kernel used as a query kernel with the wrong test file.
  CHECK(run("predict --out " + out("bad") + " --model " + out("m/model.json") + " --kernel " + out("k/train") +
            " --test " + out("data/test.csv")) == 1);
  CHECK(run("predict --out " + out("bad") + " --model " + out("m/model.json") + " --kernel " + out("k/nope")) == 1);
  CHECK(run("gen-lce --set bogus=1 --out " + out("bad")) == 1);
  const auto before = slurp(out("data/train.csv"));
  CHECK(run("kernel --out " + out("data") + " --rows " + out("data/train.csv") + " --problem " +
            out("data/problem.json") + " --name train") == 1);
  CHECK(slurp(out("data/train.csv")) == before);
  CHECK_FALSE(fs::exists(out("bad/predictions.csv")));
}

TEST_CASE("align with zero steps") {
  pipeline();
  REQUIRE(run("align --set spsa_steps=0 --seed 2 --out " + out("a0") + " --train " + out("data/train.csv") +
              " --problem " + out("data/problem.json")) == 0);
  const auto trace = lines(slurp(out("a0/trace.jsonl")));
  REQUIRE(trace.size() == 1);
  const auto rec = json::parse(trace[0]);
  CHECK(rec.at("step") == 0);
  CHECK(rec.at("lambda") == json::array({0.1}));
  CHECK(rec.at("f_plus").is_null());
}

TEST_CASE("align trace is reproducible") {
  pipeline();
  const std::string args = "align --set spsa_steps=3 --seed 2 --train " + out("data/train.csv") + " --test " +
                           out("data/test.csv") + " --problem " + out("data/problem.json") + " --out ";
  REQUIRE(run(args + out("a1")) == 0);
  REQUIRE(run(args + out("a2")) == 0);
  CHECK(lines(slurp(out("a1/trace.jsonl"))).size() == 4);
  CHECK(slurp(out("a1/trace.jsonl")) == slurp(out("a2/trace.jsonl")));
  CHECK(lines(slurp(out("a1/accuracy_vs_step.csv"))).size() == 5);
  CHECK(json::parse(slurp(out("a1/lambda.json"))).contains("lambda_star"));
}

TEST_CASE("diagnose") {
  pipeline();
  REQUIRE(run("diagnose --out " + out("dg") + " --kernel " + out("k/train") + " --train " + out("data/train.csv") +
              " --model " + out("m/model.json") + " --test-kernel " + out("k/test") + " --test " +
              out("data/test.csv") + " --problem " + out("data/problem.json") + " --pair 0,1") == 0);
  const auto m = json::parse(slurp(out("dg/metrics.json")));
  CHECK(m.at("accuracy") == 1.0);
  CHECK(m.at("hs_distance").get<double>() > 0.0);
  CHECK(fs::exists(out("dg/hamming.csv")));
}

TEST_CASE("dlog-demo") {
  REQUIRE(run("dlog-demo --set dlog_p=7 --set dlog_g=3 --set dlog_k=2 --out " + out("dl")) == 0);
  const auto j = json::parse(slurp(out("dl/dlog.json")));
  CHECK(j.at("train_accuracy") == 1.0);
  CHECK(j.at("test_accuracy") == 1.0);
  CHECK_FALSE(j.contains("warning"));
  REQUIRE(run("dlog-demo --set dlog_k=0 --out " + out("dl0"), "dl0.log") == 0);
  CHECK(json::parse(slurp(out("dl0/dlog.json"))).contains("warning"));
  CHECK(slurp(workdir() / "dl0.log").find("warning") != std::string::npos);
  CHECK(run("dlog-demo --set dlog_p=8 --out " + out("dlbad")) == 1);
}

TEST_CASE("fourier-check") {
  REQUIRE(run("fourier-check --set group=Z5 --out " + out("f1")) == 0);
  CHECK(json::parse(slurp(out("f1/fourier.json"))).at("max_error").get<double>() < 1e-9);
  REQUIRE(run("fourier-check --set group=Zstar7 --set fiducial=random --seed 4 --out " + out("f2")) == 0);
  CHECK(json::parse(slurp(out("f2/fourier.json"))).at("max_error").get<double>() < 1e-9);
  REQUIRE(run("fourier-check --set group=Zstar7 --set fiducial=subset:1 --out " + out("f3")) == 0);
  CHECK(run("fourier-check --set group=Q8 --out " + out("f4")) == 1);
  CHECK(run("fourier-check --set group=Z5 --set fiducial=subset:1 --out " + out("f5")) == 1);
}

TEST_CASE("usage errors") {
  CHECK(run("") != 0);
  CHECK(run("no-such-command") != 0);
  CHECK(run("kernel --out " + out("x")) != 0);
}
