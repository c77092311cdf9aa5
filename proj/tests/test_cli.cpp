#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "vextrace/sampled_field.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace vextrace;

namespace {

const char* cli_path() { return VEXTRACE_CLI_PATH; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path sandbox(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vextrace_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json norm_job_constant(double value, int cells) {
  const SampledField u = SampledField::midpoint(
      {0.0}, {1.0}, {cells}, [value](std::span<const double>) { return value; });
  const SampledField p =
      SampledField::on_grid_of(u, [](std::span<const double>) { return 2.0; });
  return {{"u", u.to_json()}, {"p", p.to_json()}};
}

}  // namespace

TEST_CASE("cli norm: constant and zero fields") {
  const fs::path dir = sandbox("norm");
  spit(dir / "job.json", norm_job_constant(3.25, 50).dump());
  CHECK(run_cli("norm --config " + (dir / "job.json").string() + " --out " + dir.string()) == 0);
  const json rep = json::parse(slurp(dir / "norm_report.json"));
  CHECK(rep.at("luxemburg_norm").get<double>() == doctest::Approx(3.25).epsilon(1e-10));
  CHECK(rep.at("seed").get<unsigned long long>() == 0);
  CHECK(rep.contains("config"));

  spit(dir / "zero.json", norm_job_constant(0.0, 50).dump());
  CHECK(run_cli("norm --config " + (dir / "zero.json").string() + " --out " + dir.string()) == 0);
  const json zrep = json::parse(slurp(dir / "norm_report.json"));
  CHECK(zrep.at("luxemburg_norm").get<double>() == 0.0);
}

TEST_CASE("cli norm: golden regression, byte for byte") {
  const fs::path dir = sandbox("norm_golden");
  // The pinned fixture: u(x) = x + 1/4 with p(x) = 2 + x/2 on 40 midpoint cells.
  const SampledField u = SampledField::midpoint(
      {0.0}, {1.0}, {40}, [](std::span<const double> x) { return x[0] + 0.25; });
  const SampledField p = SampledField::on_grid_of(
      u, [](std::span<const double> x) { return 2.0 + 0.5 * x[0]; });
  const SampledField du = SampledField::on_grid_of(u, [](std::span<const double>) { return 1.0; });
  const json job = {{"u", u.to_json()}, {"p", p.to_json()}, {"grad", {du.to_json()}}};
  spit(dir / "job.json", job.dump());

  const std::string a = dir.string() + "/a", b = dir.string() + "/b";
  CHECK(run_cli("norm --config " + (dir / "job.json").string() + " --out " + a) == 0);
  CHECK(run_cli("norm --config " + (dir / "job.json").string() + " --out " + b) == 0);
  const std::string ra = slurp(fs::path(a) / "norm_report.json");
  CHECK(ra == slurp(fs::path(b) / "norm_report.json"));  // deterministic

  const fs::path golden = fs::path(VEXTRACE_GOLDEN_DIR) / "norm_report.json";
  REQUIRE_MESSAGE(fs::exists(golden), "golden file missing; regenerate with tools/vextrace");
  CHECK(ra == slurp(golden));
}

TEST_CASE("cli constants: table rows and rejection") {
  const fs::path dir = sandbox("constants");
  spit(dir / "pairs.json", json{{"pairs", {{5, 2.0}}}}.dump());
  CHECK(run_cli("constants --config " + (dir / "pairs.json").string() + " --out " +
                dir.string()) == 0);
  const std::string csv = slurp(dir / "constants.csv");
  CHECK(csv.find("5,2,") != std::string::npos);
  const json rep = json::parse(slurp(dir / "constants.json"));
  CHECK(rep.at("tables").at(0).at("G0").at("value").get<double>() > 0.0);

  // Determinism: two runs byte-identical.
  const std::string again = dir.string() + "/again";
  CHECK(run_cli("constants --config " + (dir / "pairs.json").string() + " --out " + again) == 0);
  CHECK(csv == slurp(fs::path(again) / "constants.csv"));

  // p >= N rejected with exit 2.
  spit(dir / "bad.json", json{{"pairs", {{3, 3.0}}}}.dump());
  CHECK(run_cli("constants --config " + (dir / "bad.json").string() + " --out " +
                dir.string()) == 2);
}

TEST_CASE("cli theorem42 exit codes") {
  const fs::path dir = sandbox("theorem42");
  using namespace vextrace::fixtures;

  spit(dir / "case1.json", config_dtp().to_json().dump());
  CHECK(run_cli("theorem42 --config " + (dir / "case1.json").string() + " --out " +
                dir.string()) == 0);
  const json rep = json::parse(slurp(dir / "verdict.json"));
  CHECK(rep.at("verdict").at("case").get<int>() == 1);
  CHECK(rep.at("verdict").at("pass").get<bool>());

  spit(dir / "degenerate.json", base_config(6, 2.0).to_json().dump());
  CHECK(run_cli("theorem42 --config " + (dir / "degenerate.json").string() + " --out " +
                dir.string()) == 1);

  spit(dir / "n3.json", base_config(3, 2.0).to_json().dump());
  CHECK(run_cli("theorem42 --config " + (dir / "n3.json").string() + " --out " +
                dir.string()) == 2);
}

TEST_CASE("cli verify-expansions: pass, fault injection, condition numbers" *
          doctest::timeout(600)) {
  const fs::path dir = sandbox("verify");
  using namespace vextrace::fixtures;
  ProblemConfig c = base_config(6, 2.0);
  c.epsilon_grid = log_grid(1e-3, 1e-1, 10);
  json cfg = c.to_json();
  cfg["kinds"] = {"gradient", "boundary"};
  spit(dir / "flat.json", cfg.dump());
  CHECK(run_cli("verify-expansions --config " + (dir / "flat.json").string() + " --out " +
                dir.string() + " --tol 1e-9") == 0);
  const json rep = json::parse(slurp(dir / "expansion_report.json"));
  CHECK(rep.at("passed").get<bool>());
  for (const auto& k : rep.at("kinds"))
    CHECK(k.at("fit").at("condition_number").get<double>() > 0.0);
  CHECK(fs::exists(dir / "expansion_samples_gradient.csv"));

  // Deliberately corrupted closed forms must fail with exit 1.
  CHECK(run_cli("verify-expansions --config " + (dir / "flat.json").string() + " --out " +
                dir.string() + " --tol 1e-9 --inject-closed-form-error 0.5") == 1);
}

TEST_CASE("cli fermi-check") {
  const fs::path dir = sandbox("fermi");
  using namespace vextrace::fixtures;
  const GeometrySpec g = GeometrySpec::from_psi(4, paraboloid(3, 1.0));
  spit(dir / "geo.json", json{{"geometry", g.to_json()}}.dump());
  CHECK(run_cli("fermi-check --config " + (dir / "geo.json").string() + " --out " +
                dir.string()) == 0);
  const json rep = json::parse(slurp(dir / "fermi_report.json"));
  CHECK(rep.at("jacobian_order").get<double>() >= 1.9);
  CHECK(rep.at("metric_order").get<double>() >= 1.9);
  CHECK(rep.at("normal_unit_deviation").get<double>() <= 1e-12);
}

TEST_CASE("cli rejects malformed input with exit 2") {
  const fs::path dir = sandbox("malformed");
  spit(dir / "garbage.json", "{ not json");
  CHECK(run_cli("norm --config " + (dir / "garbage.json").string() + " --out " +
                dir.string()) == 2);
  CHECK(run_cli("theorem42 --config /definitely/missing.json --out " + dir.string()) == 2);
}
