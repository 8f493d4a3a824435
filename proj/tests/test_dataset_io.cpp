#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "sufset/dataset_io.hpp"
#include "sufset/errors.hpp"

using namespace sufset;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "sufset_test_dataset_io";
  fs::create_directories(dir);
  return dir / name;
}

ChoiceHistory sample_history() {
  ScenarioConfig c;
  c.N = 6;
  c.J = 7;
  c.K = 2;
  c.beta_true = {0.8, -1.1};
  c.consideration_size = 4;
  c.R = 3;
  c.attribute_drift_sigma = 0.4;
  c.behavior_drift_delta = 0.2;
  c.consideration_churn = 0.3;
  c.seed = 12;
  return simulate_history(build_population(c), c);
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("dataset and oracle round trip exactly") {
  const ChoiceHistory h = sample_history();
  const fs::path data = scratch("rt.jsonl");
  const fs::path oracle = scratch("rt_oracle.jsonl");
  write_dataset(h, data);
  write_oracle(h, oracle);
  const ChoiceHistory back = read_dataset(data, oracle);

  CHECK(back.N == h.N);
  CHECK(back.J == h.J);
  CHECK(back.K == h.K);
  CHECK(back.R == h.R);
  REQUIRE(back.individuals.size() == h.individuals.size());
  for (std::size_t n = 0; n < h.individuals.size(); ++n) {
    const auto& a = h.individuals[n];
    const auto& b = back.individuals[n];
    CHECK(a.id == b.id);
    REQUIRE(a.instances.size() == b.instances.size());
    for (std::size_t r = 0; r < a.instances.size(); ++r) {
      CHECK(a.instances[r].index == b.instances[r].index);
      CHECK(a.instances[r].chosen == b.instances[r].chosen);
      CHECK(a.instances[r].attributes == b.instances[r].attributes);
      CHECK(a.instances[r].consideration == b.instances[r].consideration);
      CHECK(a.instances[r].beta == b.instances[r].beta);
    }
  }
  REQUIRE(back.oracle.has_value());
  CHECK(back.oracle->beta_true == h.oracle->beta_true);
  CHECK(back.oracle->consideration_sets == h.oracle->consideration_sets);
  CHECK(back.oracle->consideration_churn == h.oracle->consideration_churn);
}

TEST_CASE("public file holds no oracle information") {
  const ChoiceHistory h = sample_history();
  const fs::path data = scratch("public.jsonl");
  write_dataset(h, data);
  std::ifstream in(data);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("consideration") == std::string::npos);
  CHECK(text.find("beta") == std::string::npos);

  const ChoiceHistory back = read_dataset(data, scratch("no_such_sidecar.jsonl"));
  CHECK_FALSE(back.oracle.has_value());
  CHECK(back.individuals[0].instances[0].consideration.empty());
}

TEST_CASE("missing field is reported with its name and line") {
  const fs::path path = scratch("missing.jsonl");
  write_lines(path, {R"({"record":"header","schema_version":1,"N":1,"J":2,"K":1,"R":0})",
                     R"({"individual_id":0,"instance":1,"attributes":[[0.0],[1.0]]})"});
  try {
    read_dataset(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("chosen_alt") != std::string::npos);
  }

  write_lines(path, {R"({"record":"header","schema_version":1,"J":2,"K":1,"R":0})"});
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("'N'"), ParseError);
}

TEST_CASE("malformed records") {
  const fs::path path = scratch("bad.jsonl");
  const std::string header = R"({"record":"header","schema_version":1,"N":1,"J":2,"K":1,"R":0})";

  write_lines(path, {header, "{not json"});
  CHECK_THROWS_AS(read_dataset(path), ParseError);

  write_lines(path, {header, R"({"individual_id":0,"instance":1,"chosen_alt":0,"attributes":[[0.0]]})"});
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("line 2"), ParseError);

  write_lines(path, {header, R"({"individual_id":0,"instance":1,"chosen_alt":5,"attributes":[[0.0],[1.0]]})"});
  CHECK_THROWS_AS(read_dataset(path), ParseError);

  write_lines(path, {header});
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("instances"), ParseError);

  write_lines(path, {R"({"record":"header","schema_version":9,"N":1,"J":2,"K":1,"R":0})"});
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("schema_version"), ParseError);
}
