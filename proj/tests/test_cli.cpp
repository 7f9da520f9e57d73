#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "dimrate/config.hpp"
#include "dimrate/errors.hpp"
#include "dimrate/experiment.hpp"

using namespace dimrate;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dimrate-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(DIMRATE_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(Config, IdrEmpiricalDefaults) {
  const auto cfg = parse_config("experiment = idr-empirical\nprocess = piecewise:0.5\n");
  EXPECT_EQ(cfg.experiment, ExperimentKind::idr_empirical);
  EXPECT_EQ(cfg.m_grid, (std::vector<std::int64_t>{4, 8, 16, 32, 64}));
  EXPECT_EQ(cfg.n, 1000000u);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_EQ(cfg.output, fs::path("dimrate-out"));
  ASSERT_TRUE(cfg.process.has_value());
  EXPECT_EQ(cfg.process->family, ProcessFamily::piecewise);
  EXPECT_DOUBLE_EQ(cfg.process->piecewise.fresh_probability, 0.5);
}

TEST(Config, ExplicitValues) {
  const auto cfg = parse_config(
      "experiment = rd-curve\nprocess = ar1:0.5\nd_grid = 0.5, 0.1, 0.01\nseeds = 7..9\noutput = out\n");
  EXPECT_EQ(cfg.d_grid, (std::vector<double>{0.5, 0.1, 0.01}));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{7, 8, 9}));
  EXPECT_EQ(cfg.output, fs::path("out"));
}

TEST(Config, Errors) {
  EXPECT_NE(config_error("experiment = rd-curve\nprocess = flat\nfoo = 1\nbar = 2\n").find("unknown keys: foo, bar"),
            std::string::npos);
  EXPECT_NE(config_error("experiment = rd-curve\nexperiment = rd-curve\nprocess = flat\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(config_error("process = flat\n").find("experiment"), std::string::npos);
  EXPECT_NE(config_error("experiment = guess\n").find("guess"), std::string::npos);
  EXPECT_NE(config_error("experiment = idr-empirical\n").find("process"), std::string::npos);
  EXPECT_NE(config_error("experiment = rd-curve\nprocess = piecewise:0.5\n").find("Gaussian"), std::string::npos);
  EXPECT_NE(config_error("experiment = idr-empirical\nprocess = flat\nn = -3\n"), "no error");
  EXPECT_NE(config_error("experiment = idr-empirical\nprocess = flat\nm_grid = 0,4\n"), "no error");
  EXPECT_NO_THROW(parse_config("experiment = verify-all\n"));
  EXPECT_NO_THROW(parse_config("experiment = lemma4-check\n"));
}

TEST(Config, ProcessDescriptors) {
  EXPECT_DOUBLE_EQ(parse_process("flat:2").model->total_power(), 2.0);
  EXPECT_DOUBLE_EQ(parse_process("band:0.25").model->level(), 2.0);
  EXPECT_DOUBLE_EQ(parse_process("band:0.25:3").model->level(), 3.0);
  EXPECT_DOUBLE_EQ(parse_process("ar1:0.5").model->total_power(), 4.0 / 3.0);
  EXPECT_TRUE(parse_process("atoms:0.25").model->has_atoms());
  EXPECT_EQ(parse_process("table:1,3,3,1").model->cell_values().size(), 4u);
  EXPECT_EQ(parse_process("periodic:4").period, 4u);
  const auto iid = parse_process("iid-uniform");
  EXPECT_EQ(iid.family, ProcessFamily::piecewise);
  EXPECT_DOUBLE_EQ(iid.piecewise.fresh_probability, 1.0);
  const auto pwl = parse_process("piecewise:0.25:pwl:0/1,1/3");
  EXPECT_FALSE(pwl.piecewise.innovation.is_uniform());
  for (const char* bad : {"", "wave:1", "band", "band:0.9", "ar1:1.5", "piecewise:2", "periodic:0", "table:1,2"}) {
    EXPECT_THROW(parse_process(bad), ConfigError) << bad;
  }
}

TEST(Config, ModelFileIsResolvedAgainstConfigDirectory) {
  const auto dir = fresh_dir("model");
  std::ofstream(dir / "spec.txt") << "kind = ar1\ncoefficient = 0.5\ninnovation_variance = 1\n";
  const auto d = parse_process("model:spec.txt", dir);
  EXPECT_EQ(d.model->kind(), SpectrumKind::ar1);
  EXPECT_THROW(parse_process("model:missing.txt", dir), ConfigError);
  fs::remove_all(dir);
}

TEST(Config, DefaultContextOrder) {
  EXPECT_EQ(default_context_order(parse_process("periodic:4")), 4u);
  EXPECT_EQ(default_context_order(parse_process("iid-uniform")), 0u);
  EXPECT_EQ(default_context_order(parse_process("piecewise:0.5")), 1u);
  EXPECT_EQ(default_context_order(parse_process("flat")), 0u);
  EXPECT_EQ(default_context_order(parse_process("ar1:0.5")), 1u);
}

TEST(Experiment, RdCurveArtifactsAndManifest) {
  const auto dir = fresh_dir("rd");
  auto cfg = parse_config("experiment = rd-curve\nprocess = band:0.25\n");
  cfg.output = dir;
  std::ostringstream log;
  const auto r = run_experiment(cfg, log);
  EXPECT_EQ(r.exit_status, exit_pass);
  ASSERT_TRUE(fs::exists(dir / "rd.csv"));
  ASSERT_TRUE(fs::exists(dir / "rd_fit.csv"));
  const auto m = manifest(dir);
  EXPECT_EQ(m["status"], "pass");
  EXPECT_EQ(m["experiment"], "rd-curve");
  EXPECT_TRUE(m.contains("finished_at"));
  EXPECT_EQ(slurp(dir / "rd.csv").rfind("D,neg_log_D,R,kappa,ratio,slope\n", 0), 0u);
  fs::remove_all(dir);
}

TEST(Experiment, IdrEmpiricalIsDeterministic) {
  const auto a = fresh_dir("idr-a");
  const auto b = fresh_dir("idr-b");
  auto cfg = parse_config("experiment = idr-empirical\nprocess = piecewise:0.5\nn = 20000\nseeds = 1,2\nj = 1\n");
  std::ostringstream log;
  cfg.output = a;
  ASSERT_EQ(run_experiment(cfg, log).exit_status, exit_pass);
  cfg.output = b;
  ASSERT_EQ(run_experiment(cfg, log).exit_status, exit_pass);
  EXPECT_EQ(slurp(a / "idr.csv"), slurp(b / "idr.csv"));
  EXPECT_EQ(slurp(a / "idr_fit.csv"), slurp(b / "idr_fit.csv"));
  EXPECT_EQ(manifest(a)["seeds"], nlohmann::json::array({1, 2}));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, FailureIsRecordedInManifest) {
  const auto dir = fresh_dir("fail");
  auto cfg = parse_config("experiment = idr-empirical\nprocess = band:0.25\nn = 10000\nseeds = 1,2\n");
  cfg.output = dir;
  std::ostringstream log;
  try {
    run_experiment(cfg, log);
    FAIL() << "expected embedding failure";
  } catch (const NumericalError& e) {
    EXPECT_EQ(exit_status_for(e), exit_numerical_error);
  }
  const auto m = manifest(dir);
  EXPECT_EQ(m["status"], "error");
  EXPECT_EQ(m["error"], "embedding failed");
  fs::remove_all(dir);
}

TEST(Experiment, ExitStatusMapping) {
  EXPECT_EQ(exit_status_for(ConfigError("x")), exit_config_error);
  EXPECT_EQ(exit_status_for(std::invalid_argument("x")), exit_config_error);
  EXPECT_EQ(exit_status_for(NumericalError("x")), exit_numerical_error);
  EXPECT_EQ(exit_status_for(std::runtime_error("x")), exit_numerical_error);
}

TEST(Tool, ExitCodes) {
  const auto dir = fresh_dir("tool");
  EXPECT_EQ(run_tool("print-schema"), 0);
  EXPECT_EQ(run_tool(""), 2);
  EXPECT_EQ(run_tool("run " + (dir / "missing.cfg").string()), 2);

  std::ofstream(dir / "good.cfg") << "experiment = rd-curve\nprocess = ar1:0.5\n";
  EXPECT_EQ(run_tool("run " + (dir / "good.cfg").string() + " -o " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "rd.csv"));

  std::ofstream(dir / "bad.cfg") << "experiment = rd-curve\nprocess = ar1:0.5\ncolour = blue\n";
  EXPECT_EQ(run_tool("run " + (dir / "bad.cfg").string()), 2);

  std::ofstream(dir / "numerical.cfg") << "experiment = idr-empirical\nprocess = band:0.25\nn = 10000\nseeds = 1,2\n";
  EXPECT_EQ(run_tool("run " + (dir / "numerical.cfg").string() + " -o " + (dir / "num").string()), 3);

  EXPECT_EQ(run_tool("verify -c 1"), 0);
  EXPECT_EQ(run_tool("verify -c 2"), 1);
  EXPECT_EQ(run_tool("verify -c 12"), 2);
  fs::remove_all(dir);
}
