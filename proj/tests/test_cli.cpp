#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "radau/cli.hpp"
#include "radau/io.hpp"

using namespace radau;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "radau_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults mirror the benchmark setup") {
  const RunConfig cfg;
  CHECK(cfg.h == 0.05);
  CHECK(cfg.depth == 5);
  CHECK(cfg.width == 100);
  CHECK(cfg.iterations == 100000);
  CHECK(cfg.w_f == 1.0);
  CHECK(cfg.w_g == 1.0);
  CHECK(cfg.w_s == 1.0);
  CHECK(cfg.t0 == 0.0);
  CHECK(cfg.t_end == 1.0);
  CHECK_NOTHROW(validate([] {
    RunConfig c;
    c.mode = "solve";
    return c;
  }()));
}

TEST_CASE("range validation names the offending key") {
  RunConfig cfg;
  cfg.mode = "solve";
  cfg.h = 0.0;
  CHECK_THROWS_WITH_AS(validate(cfg), "config: h must be positive", std::invalid_argument);

  cfg.h = 0.05;
  cfg.stages = 11;
  CHECK_THROWS_WITH_AS(validate(cfg), "config: stages must be in [1, 10]", std::invalid_argument);

  cfg.stages = 3;
  cfg.iterations = 0;
  CHECK_THROWS_WITH_AS(validate(cfg), "config: opt.iterations must be >= 1",
                       std::invalid_argument);
}

TEST_CASE("unknown keys and malformed values are rejected by name") {
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(apply_key_value(cfg, "net.wdith", "100"),
                       "config: unknown key 'net.wdith'", std::invalid_argument);
  CHECK_THROWS_WITH_AS(apply_key_value(cfg, "h", "fast"),
                       "config: invalid value 'fast' for key 'h'", std::invalid_argument);
}

TEST_CASE("config file parsing with comments and sections") {
  const fs::path dir = fresh_dir("cfgfile");
  const fs::path file = dir / "run.cfg";
  write_text_file(file,
                  "# study setup\n"
                  "problem = pendulum\n"
                  "problem.m = 2.0\n"
                  "stages=2   # two stages\n"
                  "net.width = 10\n"
                  "opt.iterations = 500\n"
                  "study.orders = 2,3\n"
                  "train.warm_start = true\n");
  RunConfig cfg;
  apply_config_file(cfg, file.string());
  CHECK(cfg.problem == "pendulum");
  CHECK(cfg.problem_params.at("m") == 2.0);
  CHECK(cfg.stages == 2);
  CHECK(cfg.width == 10);
  CHECK(cfg.iterations == 500);
  CHECK(cfg.orders == std::vector<int>{2, 3});
  CHECK(cfg.warm_start);

  write_text_file(file, "stages\n");
  RunConfig cfg2;
  CHECK_THROWS_AS(apply_config_file(cfg2, file.string()), std::invalid_argument);
}

TEST_CASE("flags take precedence over the config file") {
  const fs::path dir = fresh_dir("precedence");
  write_text_file(dir / "run.cfg", "stages=2\nnet.width=7\n");
  const fs::path out = dir / "out";
  const int rc = run_cli({"tableau", "--config", (dir / "run.cfg").string(), "--stages", "3",
                          "--out", out.string()});
  CHECK(rc == exit_ok);
  const std::string manifest = read_text_file(out / "manifest.json");
  CHECK(manifest.find("\"stages\": \"3\"") != std::string::npos);
  CHECK(manifest.find("\"net.width\": \"7\"") != std::string::npos);
}

TEST_CASE("tableau mode writes the table and residual report") {
  const fs::path out = fresh_dir("tab") / "out";
  RunConfig cfg;
  cfg.mode = "tableau";
  cfg.stages = 2;
  cfg.out = out.string();
  CHECK(dispatch(cfg) == exit_ok);

  const std::string csv = read_text_file(out / "tableau.csv");
  CHECK(csv.rfind("c,a_1,a_2,b\n", 0) == 0);
  CHECK(csv.find("0.75,0.25,0.25") != std::string::npos);  // stiffly accurate last row
  CHECK(csv.find("# order=3") != std::string::npos);

  cfg.format = "json";
  CHECK(dispatch(cfg) == exit_ok);
  const std::string js = read_text_file(out / "tableau.json");
  CHECK(js.find("\"order\": 3") != std::string::npos);
}

TEST_CASE("invalid problem name exits with the config code and lists valid names") {
  const fs::path out = fresh_dir("badproblem") / "out";
  const int rc = run_cli({"solve", "--problem", "lorenz", "--out", out.string()});
  CHECK(rc == exit_config_error);
}

TEST_CASE("unknown mode is a config error") {
  RunConfig cfg;
  cfg.mode = "simulate";
  CHECK(dispatch(cfg) == exit_config_error);
}

TEST_CASE("solve reruns are byte-identical") {
  const fs::path dir = fresh_dir("solvedet");
  RunConfig cfg;
  cfg.mode = "solve";
  cfg.problem = "pendulum";
  cfg.stages = 2;
  cfg.t_end = 0.25;

  cfg.out = (dir / "a").string();
  CHECK(dispatch(cfg) == exit_ok);
  cfg.out = (dir / "b").string();
  CHECK(dispatch(cfg) == exit_ok);
  CHECK(read_text_file(dir / "a" / "trajectory.csv") ==
        read_text_file(dir / "b" / "trajectory.csv"));
}

TEST_CASE("train writes trajectory, history, checkpoints, manifest") {
  const fs::path out = fresh_dir("train") / "out";
  RunConfig cfg;
  cfg.mode = "train";
  cfg.problem = "hessenberg";
  cfg.stages = 2;
  cfg.t_end = 0.1;
  cfg.width = 8;
  cfg.depth = 1;
  cfg.iterations = 60;
  cfg.history_stride = 20;
  cfg.out = out.string();
  CHECK(dispatch(cfg) == exit_ok);

  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "history.csv"));
  CHECK(fs::exists(out / "segment_000.json"));
  CHECK(fs::exists(out / "segment_001.json"));
  CHECK(fs::exists(out / "manifest.json"));

  const std::string traj = read_text_file(out / "trajectory.csv");
  CHECK(traj.rfind("t,y1,y2,y3,y4,z1,ae_y1,ae_y2,ae_y3,ae_y4,ae_z1\n", 0) == 0);
  const std::string hist = read_text_file(out / "history.csv");
  CHECK(hist.rfind("segment,iteration,lf,lg,ls,total,best_total\n", 0) == 0);
}

TEST_CASE("training abort maps to its own exit code") {
  const fs::path out = fresh_dir("abort") / "out";
  RunConfig cfg;
  cfg.mode = "train";
  cfg.problem = "hessenberg";
  cfg.stages = 2;
  cfg.t_end = 0.05;
  cfg.width = 8;
  cfg.depth = 1;
  cfg.iterations = 40;
  cfg.lr = 1e150;
  cfg.out = out.string();
  CHECK(dispatch(cfg) == exit_training_abort);
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("study mode emits the long-format CSV, summary and per-run manifests") {
  const fs::path out = fresh_dir("study") / "out";
  RunConfig cfg;
  cfg.mode = "study";
  cfg.problem = "hessenberg";
  cfg.orders = {2, 3};
  cfg.study_seeds = {0};
  cfg.t_end = 0.1;
  cfg.width = 8;
  cfg.depth = 1;
  cfg.iterations = 30;
  cfg.history_stride = 10;
  cfg.out = out.string();
  CHECK(dispatch(cfg) == exit_ok);

  const std::string csv = read_text_file(out / "study.csv");
  CHECK(csv.rfind("problem,v,order,variable,segment_t,mae,seed\n", 0) == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "run_v2_seed0.json"));
  CHECK(fs::exists(out / "run_v3_seed0.json"));
}

TEST_CASE("config hash is stable and sensitive") {
  RunConfig a, b;
  a.mode = b.mode = "solve";
  CHECK(config_hash(a) == config_hash(b));
  b.h = 0.025;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("cli --param feeds problem parameters") {
  const fs::path out = fresh_dir("param") / "out";
  const int rc = run_cli({"solve", "--problem", "pendulum", "--stages", "2", "--tend", "0.1",
                          "--param", "m=2", "--param", "lambda=0.5", "--out", out.string()});
  CHECK(rc == exit_ok);
  const std::string manifest = read_text_file(out / "manifest.json");
  CHECK(manifest.find("\"problem.m\": \"2\"") != std::string::npos);
  CHECK(manifest.find("\"problem.lambda\": \"0.5\"") != std::string::npos);
}
