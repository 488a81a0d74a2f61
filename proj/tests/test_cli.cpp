// End-to-end tests of the CLI binary named by DICKMAN_CLI_PATH.
#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_root;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = "\"" + g_cli + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = g_root / name;
  std::ofstream f(p, std::ios::binary);
  f << body;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("").exit_code != 0);
  CHECK(run("density").exit_code == 2);  // --config required
}

TEST_CASE("classify emits the verdict record") {
  auto cfg = write_config(
      "classify1.json", R"({"mu":{"c":1,"a":[0,1]},"p":{"c":1,"b":[1,1]}})");
  auto r = run("classify --config " + cfg.string() + " --out " +
               (g_root / "cls1").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"kind\":\"dickman\"") != std::string::npos);
  CHECK(r.output.find("\"theta\":1.0") != std::string::npos);
  const std::string rec =
      read_file(g_root / "cls1" / "classify-1" / "verdict.json");
  CHECK(rec.find("\"L\": 1.0") != std::string::npos);

  // scheme form goes through the shuffle classifier
  auto cfg2 =
      write_config("classify2.json", R"({"scheme":{"kind":"ratio","ratios":[0.5,1]}})");
  auto r2 = run("classify --config " + cfg2.string() + " --out " +
                (g_root / "cls2").string());
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("\"theta\":2.0") != std::string::npos);
  CHECK(r2.output.find("\"L\":0.5") != std::string::npos);
}

TEST_CASE("density table holds the closed-form row at x = 2") {
  auto cfg = write_config("density1.json", R"({"theta":1,"x_max":3})");
  auto r = run("density --config " + cfg.string() + " --out " +
               (g_root / "den1").string());
  CHECK(r.exit_code == 0);
  const std::string csv =
      read_file(g_root / "den1" / "density-1" / "density.csv");
  CHECK(csv.rfind("x,rho,p,F\n", 0) == 0);
  CHECK(csv.find("\n2,0.30685281") != std::string::npos);
}

TEST_CASE("validation failures exit 2 and name the offender") {
  auto missing = write_config(
      "sim_missing.json",
      R"({"model":{"kind":"truncated_poisson","theta0":1},"n_grid":[100]})");
  auto r1 = run("simulate --config " + missing.string() + " --out " +
                (g_root / "v1").string());
  CHECK(r1.exit_code == 2);
  CHECK(r1.output.find("replicates") != std::string::npos);

  auto unknown = write_config("den_unknown.json", R"({"theta":1,"xmax":3})");
  auto r2 = run("density --config " + unknown.string() + " --out " +
                (g_root / "v2").string());
  CHECK(r2.exit_code == 2);
  CHECK(r2.output.find("unknown key") != std::string::npos);
  CHECK(r2.output.find("xmax") != std::string::npos);

  auto badjson = write_config("bad.json", "{not json");
  auto r3 = run("density --config " + badjson.string() + " --out " +
                (g_root / "v3").string());
  CHECK(r3.exit_code == 2);
  CHECK(r3.output.find("parse") != std::string::npos);
}

TEST_CASE("capability refusals exit 3") {
  auto cfg = write_config("smooth_big.json", R"({"n_limit":200000000,"s":2})");
  auto r = run("smooth --config " + cfg.string() + " --out " +
               (g_root / "cap1").string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("capability") != std::string::npos);
}

TEST_CASE("smooth record carries the census") {
  auto cfg = write_config("smooth1.json", R"({"n_limit":10000,"s":2.0})");
  auto r = run("smooth --config " + cfg.string() + " --out " +
               (g_root / "sm1").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"psi\":3716") != std::string::npos);
  CHECK(r.output.find("\"y\":100") != std::string::npos);
  const std::string rec = read_file(g_root / "sm1" / "smooth-1" / "smooth.json");
  CHECK(rec.find("\"psi\": 3716") != std::string::npos);
}

TEST_CASE("sample batch with truncation accounting") {
  auto cfg = write_config("sample1.json", R"({"theta":1,"count":1000})");
  auto r = run("sample --config " + cfg.string() + " --out " +
               (g_root / "sam1").string() + " --seed 5");
  CHECK(r.exit_code == 0);
  const fs::path dir = g_root / "sam1" / "sample-5";
  const std::string csv = read_file(dir / "samples.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1001);
  const std::string rec = read_file(dir / "batch.json");
  CHECK(rec.find("bias_bound") != std::string::npos);

  // a different seed produces a different batch
  auto r2 = run("sample --config " + cfg.string() + " --out " +
                (g_root / "sam2").string() + " --seed 6");
  CHECK(r2.exit_code == 0);
  CHECK(read_file(g_root / "sam2" / "sample-6" / "samples.csv") != csv);
}

TEST_CASE("inversions run emits totals and the model mean") {
  auto cfg = write_config(
      "inv1.json", R"({"scheme":{"kind":"top"},"n":100,"replicates":200})");
  auto r = run("inversions --config " + cfg.string() + " --out " +
               (g_root / "inv1").string());
  CHECK(r.exit_code == 0);
  const fs::path dir = g_root / "inv1" / "inversions-1";
  const std::string csv = read_file(dir / "inversions.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
  const std::string rec = read_file(dir / "run.json");
  CHECK(rec.find("mean_model") != std::string::npos);
  CHECK(rec.find("mean_observed") != std::string::npos);
}

TEST_CASE("simulate outputs are byte-identical across threads and manifest reruns") {
  auto cfg = write_config(
      "sim1.json",
      R"({"model":{"kind":"truncated_poisson","theta0":1.5},)"
      R"("n_grid":[200,2000],"replicates":500})");
  auto r1 = run("simulate --config " + cfg.string() + " --out " +
                (g_root / "s1").string() + " --seed 42 --threads 1");
  CHECK(r1.exit_code == 0);
  auto r2 = run("simulate --config " + cfg.string() + " --out " +
                (g_root / "s2").string() + " --seed 42 --threads 2");
  CHECK(r2.exit_code == 0);

  const fs::path d1 = g_root / "s1" / "simulate-42";
  const fs::path d2 = g_root / "s2" / "simulate-42";
  const std::string points = read_file(d1 / "points.csv");
  CHECK(points == read_file(d2 / "points.csv"));
  const std::string samples = read_file(d1 / "samples.csv");
  CHECK(samples == read_file(d2 / "samples.csv"));
  CHECK(points.rfind("n,m_n,mean,variance,model_variance,ks,w1\n", 0) == 0);

  // rerun from the manifest, seed carried by the manifest itself
  auto r3 = run("simulate --config " + (d1 / "manifest.json").string() +
                " --out " + (g_root / "s3").string() + " --threads 2");
  CHECK(r3.exit_code == 0);
  const fs::path d3 = g_root / "s3" / "simulate-42";
  CHECK(points == read_file(d3 / "points.csv"));
  CHECK(samples == read_file(d3 / "samples.csv"));

  // manifest for another subcommand is rejected
  auto r4 = run("density --config " + (d1 / "manifest.json").string() +
                " --out " + (g_root / "s4").string());
  CHECK(r4.exit_code == 2);

  // output directories are append-only
  auto r5 = run("simulate --config " + cfg.string() + " --out " +
                (g_root / "s1").string() + " --seed 42 --threads 1");
  CHECK(r5.exit_code == 2);
  CHECK(r5.output.find("exists") != std::string::npos);
}

int main(int argc, char** argv) {
  const char* cli = std::getenv("DICKMAN_CLI_PATH");
  if (!cli || !*cli) {
    std::fprintf(stderr, "DICKMAN_CLI_PATH is not set\n");
    return 1;
  }
  g_cli = cli;
  g_root = fs::temp_directory_path() /
           ("dickman-cli-test-" + std::to_string(::getpid()));
  std::error_code ec;
  fs::remove_all(g_root, ec);
  fs::create_directories(g_root);
  doctest::Context ctx(argc, argv);
  const int rc = ctx.run();
  fs::remove_all(g_root, ec);
  return rc;
}
