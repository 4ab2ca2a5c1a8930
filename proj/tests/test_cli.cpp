// End-to-end tests of the command-line binary: exit-code contract,
// determinism of emitted files, and the documented report lines.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "noisyor_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path log = work_dir() / ("log" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(NOISYOR_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream out;
  out << in.rdbuf();
  result.output = out.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string at(const fs::path& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("generate: deterministic files, manifests, family rejection") {
  const RunResult first = run(
      "generate --inputs 6 --outputs 4 --fanin 2 --weights 1/2 "
      "--subclass one-weight-value --seed 1 --out " + at("g1.net"));
  CHECK(first.exit_code == 0);
  const RunResult second = run(
      "generate --inputs 6 --outputs 4 --fanin 2 --weights 1/2 "
      "--subclass one-weight-value --seed 1 --out " + at("g2.net"));
  CHECK(second.exit_code == 0);
  CHECK(slurp(at("g1.net")) == slurp(at("g2.net")));
  CHECK(fs::exists(at("g1.net") + ".manifest.json"));

  const RunResult other = run(
      "generate --inputs 6 --outputs 4 --fanin 2 --weights 1/2 "
      "--subclass one-weight-value --seed 2 --out " + at("g3.net"));
  CHECK(other.exit_code == 0);
  CHECK(slurp(at("g1.net")) != slurp(at("g3.net")));

  // weight 1 encodes a non-edge and is not a legal family value
  const RunResult bad = run(
      "generate --inputs 3 --outputs 2 --fanin 1 --weights 1 --seed 1 --out " +
      at("bad.net"));
  CHECK(bad.exit_code == 2);

  const RunResult with_family = run(
      "generate --inputs 4 --outputs 2 --fanin 2 --weights 1/4,1/2 --seed 6 "
      "--out " + at("gf.net") + " --family-out " + at("gf.family"));
  CHECK(with_family.exit_code == 0);
  const std::string family = slurp(at("gf.family"));
  CHECK(family.find("\"fan_in_k\": 2") != std::string::npos);
  CHECK(family.find("\"1/4\"") != std::string::npos);
  CHECK(family.find("\"subclass\": \"general\"") != std::string::npos);
}

TEST_CASE("sample: determinism and the all-zero bias") {
  REQUIRE(run("generate --inputs 5 --outputs 3 --fanin 2 --weights 1/2,1/4 "
              "--seed 3 --out " + at("s.net")).exit_code == 0);
  const RunResult a =
      run("sample --net " + at("s.net") + " --bias 1/3 --count 200 --seed 7 --out " +
          at("a.samples"));
  const RunResult b =
      run("sample --net " + at("s.net") + " --bias 1/3 --count 200 --seed 7 --out " +
          at("b.samples"));
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp(at("a.samples")) == slurp(at("b.samples")));

  const RunResult degenerate =
      run("sample --net " + at("s.net") + " --bias 1 --count 50 --seed 7 --out " +
          at("z.samples"));
  CHECK(degenerate.exit_code == 0);
  std::istringstream lines(slurp(at("z.samples")));
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (!line.empty()) CHECK(line == "000");
  }

  CHECK(run("sample --net missing.net --bias 1/3 --count 5 --seed 1 --out " +
            at("x.samples")).exit_code == 2);
  CHECK(run("sample --net " + at("s.net") + " --bias 3/2 --count 5 --seed 1 --out " +
            at("x.samples")).exit_code == 2);
}

TEST_CASE("reconstruct: simulation round trip and degenerate data") {
  REQUIRE(run("generate --inputs 6 --outputs 4 --fanin 2 --weights 1/2 "
              "--subclass one-weight-value --seed 11 --out " + at("t.net"))
              .exit_code == 0);
  const RunResult sim = run(
      "reconstruct --m 6 --fanin 2 --weights 1/2 --subclass one-weight-value "
      "--bias 1/3 --oracle structural --target " + at("t.net") + " --out " +
      at("rec.net") + " --report " + at("rec.report"));
  CHECK(sim.exit_code == 0);
  CHECK(sim.output.find("equivalent: true") != std::string::npos);
  CHECK(run("verify equiv " + at("t.net") + " " + at("rec.net")).exit_code == 0);

  // seq_count within the closed-form budget 6*4*2^4*1
  const std::string report = slurp(at("rec.report"));
  const size_t pos = report.find("seq_count: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stoul(report.substr(pos + 11)) <= 384);

  // distributional oracle drives the same recovery
  const RunResult dist = run(
      "reconstruct --m 6 --fanin 2 --weights 1/2 --subclass one-weight-value "
      "--bias 1/3 --oracle distributional --target " + at("t.net") + " --out " +
      at("rec2.net"));
  CHECK(dist.exit_code == 0);
  CHECK(dist.output.find("equivalent: true") != std::string::npos);

  // statistical mode at bias 1 is an explicit degenerate-data error
  REQUIRE(run("sample --net " + at("t.net") + " --bias 1 --count 100 --seed 5 "
              "--out " + at("deg.samples")).exit_code == 0);
  const RunResult degenerate = run(
      "reconstruct --samples " + at("deg.samples") +
      " --m 6 --fanin 2 --weights 1/2 --subclass one-weight-value --bias 1 "
      "--alpha 0.05 --delta 0.05 --oracle statistical --out " + at("rec3.net"));
  CHECK(degenerate.exit_code == 2);
}

TEST_CASE("reconstruct: learning from a sample file") {
  REQUIRE(run("generate --inputs 4 --outputs 3 --fanin 2 --weights 1/2 "
              "--subclass one-weight-value --seed 5 --out " + at("lt.net"))
              .exit_code == 0);
  // alpha 0.05 at delta 0.1 needs ~40k draws per the sizing rule
  REQUIRE(run("sample --net " + at("lt.net") + " --bias 2/5 --count 50000 "
              "--seed 13 --out " + at("lt.samples")).exit_code == 0);
  const RunResult learn = run(
      "reconstruct --samples " + at("lt.samples") +
      " --m 4 --fanin 2 --weights 1/2 --subclass one-weight-value --bias 2/5 "
      "--alpha 0.05 --delta 0.1 --oracle statistical --target " + at("lt.net") +
      " --out " + at("lrec.net"));
  CHECK(learn.exit_code == 0);
  CHECK(learn.output.find("regime: guaranteed") != std::string::npos);
  CHECK(learn.output.find("equivalent: true") != std::string::npos);
}

TEST_CASE("analyze: bound, poly, unique, counterexample") {
  const RunResult bound = run("analyze bound --d 1 --r 1 --c 1 --alpha 0.1");
  CHECK(bound.exit_code == 0);
  CHECK(bound.output.find("measure_bound: 0.4") != std::string::npos);
  CHECK(bound.output.find("crossing_count_bound: 1") != std::string::npos);

  REQUIRE(run("generate --inputs 3 --outputs 2 --fanin 2 --weights 1/2 "
              "--seed 9 --out " + at("p.net")).exit_code == 0);
  const RunResult poly = run("analyze poly --net " + at("p.net") + " --outputs ''");
  CHECK(poly.exit_code == 0);
  CHECK(poly.output.find("coefficients: 1\n") != std::string::npos);

  const RunResult unique = run(
      "analyze unique --m 4 --n 2 --fanin 2 --weights 1/2 "
      "--subclass one-weight-value");
  CHECK(unique.exit_code == 0);
  CHECK(unique.output.find("verdict: HOLDS") != std::string::npos);

  const RunResult cx = run(
      "analyze counterexample --weights 3 --max-inputs 3 --out-a " + at("cxa.net") +
      " --out-b " + at("cxb.net"));
  CHECK(cx.exit_code == 0);
  CHECK(cx.output.find("verdict: found") != std::string::npos);
  CHECK(cx.output.find("verified: true") != std::string::npos);
  CHECK(run("verify equiv " + at("cxa.net") + " " + at("cxb.net")).exit_code == 1);
  const RunResult dist = run("verify dist " + at("cxa.net") + " " + at("cxb.net") +
                             " --bias 2/7 --max-subset 2");
  CHECK(dist.exit_code == 0);
  CHECK(dist.output.find("max_separation: 0") != std::string::npos);

  const RunResult none = run("analyze counterexample --weights 1 --max-inputs 3");
  CHECK(none.exit_code == 1);
  CHECK(none.output.find("verdict: none-found") != std::string::npos);
}

TEST_CASE("verify: exit-code contract") {
  REQUIRE(run("generate --inputs 4 --outputs 2 --fanin 2 --weights 1/3 "
              "--seed 21 --out " + at("v1.net")).exit_code == 0);
  fs::copy_file(at("v1.net"), at("v1copy.net"),
                fs::copy_options::overwrite_existing);
  CHECK(run("verify equiv " + at("v1.net") + " " + at("v1copy.net")).exit_code == 0);
  CHECK(run("verify equiv " + at("v1.net") + " missing.net").exit_code == 2);
  const RunResult self_dist = run("verify dist " + at("v1.net") + " " +
                                  at("v1copy.net") + " --bias 1/2");
  CHECK(self_dist.exit_code == 0);
}

TEST_CASE("manifests describe re-runnable commands") {
  REQUIRE(run("generate --inputs 5 --outputs 3 --fanin 2 --weights 1/4,1/2 "
              "--seed 31 --out " + at("m1.net")).exit_code == 0);
  const std::string manifest = slurp(at("m1.net") + ".manifest.json");
  CHECK(manifest.find("\"command\": \"generate\"") != std::string::npos);
  CHECK(manifest.find("\"seed\": 31") != std::string::npos);
  CHECK(manifest.find("fnv1a64") != std::string::npos);

  // replaying the recorded flags reproduces the artifact byte for byte
  REQUIRE(run("generate --inputs 5 --outputs 3 --fanin 2 --weights 1/4,1/2 "
              "--seed 31 --out " + at("m2.net")).exit_code == 0);
  CHECK(slurp(at("m1.net")) == slurp(at("m2.net")));
}
