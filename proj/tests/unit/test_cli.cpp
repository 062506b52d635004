#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "orthojoint/csv.hpp"
#include "orthojoint/model_file.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = orthojoint::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("orthojoint_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("synth, train, eval and predict pipeline") {
    TempDir tmp;
    const std::string data = tmp / "data.csv", model = tmp / "model.json", report = tmp / "report.json",
                      evalj = tmp / "eval.json", preds = tmp / "preds.csv";
    REQUIRE(cli({"synth", "--seed", "7", "--n-per-cell", "6", "--classes", "4", "--dim", "5", "--out", data}).code == 0);
    const orthojoint::Dataset d = orthojoint::load_csv(data);
    CHECK(d.size() == 48);

    REQUIRE(cli({"train", "--data", data, "--model", model, "--out", report, "--per-class-train", "4", "--seed",
                 "7", "--lambda3", "1e6"})
                .code == 0);
    const auto rep = orthojoint::read_json_file(report);
    CHECK(rep.at("n_train").get<int>() == 32);
    CHECK(rep.contains("config"));
    CHECK(rep.at("seed").get<int>() == 7);

    REQUIRE(cli({"eval", "--data", data, "--model", model, "--out", evalj, "--per-class-train", "4", "--seed", "7"})
                .code == 0);
    const auto ev = orthojoint::read_json_file(evalj);
    CHECK(ev.at("n").get<int>() == 16);
    CHECK(ev.contains("config"));

    REQUIRE(cli({"predict", "--data", data, "--model", model, "--out", preds}).code == 0);
    const std::string p = slurp(preds);
    CHECK(p.rfind("row_id,gender_pred,age_pred\n", 0) == 0);
    CHECK(std::count(p.begin(), p.end(), '\n') == 49);
  }

  TEST_CASE("coupling does not worsen held-out error, and the angle is near 90 degrees") {
    TempDir tmp;
    const std::string data = tmp / "data.csv", m0 = tmp / "m0.json", m6 = tmp / "m6.json";
    REQUIRE(cli({"synth", "--seed", "3", "--out", data}).code == 0);
    REQUIRE(cli({"train", "--data", data, "--model", m0, "--out", tmp / "r0.json", "--lambda3", "0",
                 "--per-class-train", "5", "--seed", "3"})
                .code == 0);
    REQUIRE(cli({"train", "--data", data, "--model", m6, "--out", tmp / "r6.json", "--lambda3", "1e6",
                 "--per-class-train", "5", "--seed", "3"})
                .code == 0);
    auto eval_mae = [&](const std::string& model) {
      const Run r = cli({"eval", "--data", data, "--model", model, "--per-class-train", "5", "--seed", "3"});
      REQUIRE(r.code == 0);
      return std::stod(nlohmann::json::parse(r.out).at("age_mae").get<std::string>());
    };
    CHECK(eval_mae(m6) <= eval_mae(m0));

    const Run a = cli({"angle", "--model", m6});
    REQUIRE(a.code == 0);
    const auto pos = a.out.find("theta_deg=");
    REQUIRE(pos != std::string::npos);
    const double theta = std::stod(a.out.substr(pos + 10));
    CHECK(std::abs(theta - 90.0) <= 6.0);
  }

  TEST_CASE("config file sits between defaults and flags") {
    TempDir tmp;
    const std::string data = tmp / "data.csv", cfg = tmp / "cfg.json", model = tmp / "m.json";
    REQUIRE(cli({"synth", "--seed", "1", "--n-per-cell", "3", "--classes", "3", "--dim", "3", "--out", data}).code == 0);
    std::ofstream(cfg) << R"({"lambda1": 2.5, "lambda3": 7, "ordinal": "kdlor"})";
    REQUIRE(cli({"train", "--data", data, "--model", model, "--config", cfg, "--lambda3", "9", "--out",
                 tmp / "r.json"})
                .code == 0);
    const orthojoint::ModelFile mf = orthojoint::load_model(model);
    CHECK(mf.config.lambda1 == 2.5);
    CHECK(mf.config.lambda3 == 9.0);
    CHECK(mf.config.lambda2 == 1.0);
    CHECK(mf.config.ordinal_method == orthojoint::OrdinalMethod::Kdlor);
  }

  TEST_CASE("gridsearch writes the score table") {
    TempDir tmp;
    const std::string data = tmp / "data.csv", table = tmp / "scores.csv";
    REQUIRE(cli({"synth", "--seed", "2", "--n-per-cell", "4", "--classes", "3", "--dim", "3", "--out", data}).code == 0);
    const Run r = cli({"gridsearch", "--data", data, "--lambda3", "1,1000", "--folds", "2", "--out", table});
    REQUIRE(r.code == 0);
    const std::string t = slurp(table);
    CHECK(t.rfind("lambda1,lambda2,lambda3,fold,acc,mae,cos_angle\n", 0) == 0);
    CHECK(std::count(t.begin(), t.end(), '\n') == 5);
    CHECK(nlohmann::json::parse(r.out).contains("best"));
  }

  TEST_CASE("errors are single coded lines") {
    TempDir tmp;
    Run r = cli({"train", "--data", tmp / "missing.csv", "--model", tmp / "m.json"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: IoError: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

    r = cli({"train", "--model", tmp / "m.json"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: InvalidConfig: ", 0) == 0);

    r = cli({"train", "--bogus"});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: Usage: ", 0) == 0);

    r = cli({});
    CHECK(r.code == 2);

    const std::string data = tmp / "d.csv";
    REQUIRE(cli({"synth", "--n-per-cell", "2", "--classes", "3", "--dim", "2", "--out", data}).code == 0);
    r = cli({"train", "--data", data, "--model", tmp / "m.json", "--lambda1", "abc"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: InvalidConfig: ", 0) == 0);
    r = cli({"train", "--data", data, "--model", tmp / "m.json", "--per-class-train", "2"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: InsufficientSamples: ", 0) == 0);
  }
}
