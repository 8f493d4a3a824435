#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "sufset_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(SUFSET_CLI_PATH) + " " + args + " > " + (kDir / "stdout.txt").string() +
                          " 2> " + (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = kDir / name;
  std::ofstream(p) << body;
  return p;
}

struct Fixture {
  Fixture() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
};

const char* kSmall = R"({
  "schema_version": 1,
  "scenario": {"N": 200, "J": 10, "K": 2, "consideration_size": 5, "R": 10,
               "beta_true": [1.0, -0.5], "seed": 9},
  "replications": 2
})";

}  // namespace

TEST_CASE_FIXTURE(Fixture, "generate, build-sets and estimate") {
  const fs::path cfg = write_config("small.json", kSmall);
  const fs::path data = kDir / "data";
  REQUIRE(run("--config " + cfg.string() + " --out " + data.string() + " generate") == 0);
  CHECK(fs::exists(data / "dataset.jsonl"));
  CHECK(fs::exists(data / "oracle.jsonl"));
  const std::string dataset = slurp(data / "dataset.jsonl");
  CHECK(dataset.find("consideration") == std::string::npos);
  CHECK(dataset.find("beta") == std::string::npos);

  // Same seed, same bytes; a different seed changes the data.
  const fs::path again = kDir / "again";
  REQUIRE(run("--config " + cfg.string() + " --out " + again.string() + " generate") == 0);
  CHECK(slurp(again / "dataset.jsonl") == dataset);
  REQUIRE(run("--config " + cfg.string() + " --seed 10 --out " + again.string() + " generate") == 0);
  CHECK(slurp(again / "dataset.jsonl") != dataset);

  REQUIRE(run("--config " + cfg.string() + " --out " + data.string() + " build-sets") == 0);
  const std::string sets = slurp(data / "sets.jsonl");
  CHECK(std::count(sets.begin(), sets.end(), '\n') == 200);

  REQUIRE(run("--config " + cfg.string() + " --out " + data.string() + " estimate") == 0);
  const std::string with_oracle = slurp(data / "estimate.txt");
  CHECK(with_oracle.find("beta_hat ") == 0);
  CHECK(with_oracle.find("converged true") != std::string::npos);
  CHECK(with_oracle.find("\nbias ") != std::string::npos);
  CHECK(with_oracle.find("oracle unavailable") == std::string::npos);

  REQUIRE(run("--config " + cfg.string() + " --out " + data.string() + " estimate --no-oracle") == 0);
  const std::string without = slurp(data / "estimate.txt");
  CHECK(without.find("bias oracle unavailable") != std::string::npos);

  // A dataset copied without its sidecar behaves the same way.
  const fs::path lone = kDir / "lone";
  fs::create_directories(lone);
  fs::copy_file(data / "dataset.jsonl", lone / "dataset.jsonl");
  REQUIRE(run("--config " + cfg.string() + " --out " + lone.string() + " estimate") == 0);
  CHECK(slurp(lone / "estimate.txt").find("bias oracle unavailable") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "experiment and compare") {
  const fs::path cfg = write_config("exp.json", R"({
    "schema_version": 1,
    "scenario": {"N": 200, "J": 10, "K": 2, "consideration_size": 10, "R": 0,
                 "beta_true": [1.0, -0.5], "seed": 4},
    "protocol": {"kind": "random_sample", "sample_size": 4},
    "replications": 2,
    "sweep": {"parameter": "sample_size", "values": [3, 6]},
    "output_path": "results/sweep.csv",
    "compare": [
      {"protocol": {"kind": "random_sample", "sample_size": 4}, "correction": "none"},
      {"protocol": {"kind": "importance_sample", "draws": 5}, "correction": "known_importance"}
    ]
  })");
  REQUIRE(run("--config " + cfg.string() + " --out " + kDir.string() + " --threads 2 experiment") == 0);
  const std::string csv = slurp(kDir / "sweep.csv");
  CHECK(csv.rfind("sweep_value,coef_index,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  REQUIRE(run("--config " + cfg.string() + " --out " + kDir.string() + " compare") == 0);
  const std::string cmp = slurp(kDir / "compare.csv");
  CHECK(cmp.find("random_sample,none,0,") != std::string::npos);
  CHECK(cmp.find("importance_sample,known_importance,1,") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "errors give nonzero exits") {
  const fs::path unknown = write_config("unknown.json", R"({"schema_version": 1, "replicatons": 2})");
  CHECK(run("--config " + unknown.string() + " experiment") == 2);
  CHECK(slurp(kDir / "stderr.txt").find("replicatons") != std::string::npos);

  const fs::path exact = write_config("exact.json", R"({"schema_version": 1, "correction": "exact_replacement"})");
  CHECK(run("--config " + exact.string() + " experiment") == 2);

  std::ofstream(kDir / "broken.jsonl") << R"({"record":"header","schema_version":1,"N":1,"J":2,"K":1,"R":0})" << '\n'
                                       << R"({"individual_id":0,"instance":0,"attributes":[[0.0],[1.0]]})" << '\n';
  CHECK(run("estimate --data " + (kDir / "broken.jsonl").string()) == 3);
  CHECK(slurp(kDir / "stderr.txt").find("line 2") != std::string::npos);

  CHECK(run("") != 0);
  CHECK(run("frobnicate") != 0);
}
