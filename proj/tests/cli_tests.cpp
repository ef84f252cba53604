// End-to-end tests that drive the installed command surface of the tool.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kWorkDir = "/tmp/loccode_cli_tests";

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(LOCCODE_CLI_PATH) + " " + args + " 2>" + kWorkDir + "/stderr.txt";
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::size_t got = fread(buffer, 1, sizeof buffer, pipe)) result.out.append(buffer, got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

struct Setup {
  Setup() { std::filesystem::create_directories(kWorkDir); }
} setup;

}  // namespace

TEST_CASE("build parity writes a one-row file and prints metadata") {
  auto r = run_cli("build parity --n 3 -o " + kWorkDir + "/p3.pchk");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "n=3 k=2 d=2/3\n");
  CHECK(read_file(kWorkDir + "/p3.pchk") == "PCHK n=3 rows=1\n111\n");
}

TEST_CASE("build tensor from shorthand factors") {
  auto r = run_cli("build tensor --a parity3 --b parity3 -o " + kWorkDir + "/t.pchk");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "n=9 k=4 d=4/9\n");
}

TEST_CASE("build ldpc is byte-deterministic per seed") {
  auto r1 = run_cli("build ldpc --n 16 --rows 5 --row-weight 4 --seed 7 -o " + kWorkDir + "/l1.pchk");
  auto r2 = run_cli("build ldpc --n 16 --rows 5 --row-weight 4 --seed 7 -o " + kWorkDir + "/l2.pchk");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(read_file(kWorkDir + "/l1.pchk") == read_file(kWorkDir + "/l2.pchk"));
}

TEST_CASE("build rejects bad parameters with exit 2") {
  CHECK(run_cli("build parity --n 1").exit_code == 2);
  CHECK(run_cli("build frobnicate --n 4").exit_code == 2);
}

TEST_CASE("build reports exit 3 when the distance budget is exceeded") {
  auto r = run_cli("build ldpc --n 60 --rows 10 --row-weight 3 --seed 1 --budget 4 -o " +
                   kWorkDir + "/big.pchk");
  CHECK(r.exit_code == 3);
  CHECK(r.out.rfind("n=60", 0) == 0);  // metadata still printed, distance missing
}

TEST_CASE("nest folds a two-level chain and prints the query identity") {
  write_file(kWorkDir + "/chain2.txt",
             "LEVEL 1 code=parity3 tester=full delta=2/3 kappa=1/1\n"
             "LEVEL 2 code=parity6 tester=parity delta=1/3 kappa=6/1\n");
  auto r = run_cli("nest --chain " + kWorkDir + "/chain2.txt -o " + kWorkDir + "/nested.pchk");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("TOTAL n=6 dimension=4") != std::string::npos);
  CHECK(read_file(kWorkDir + "/nested.pchk") == "PCHK n=6 rows=3\n111111\n111000\n000111\n");

  // the printed bound line is the sum of the per-level contributions
  std::istringstream lines(r.out);
  std::string line, bound_line;
  long long total_from_levels = 0, n1 = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("LEVEL", 0) == 0) {
      auto t_at = line.find(" t=");
      auto q_at = line.find(" tester_q=");
      long long t = std::stoll(line.substr(t_at + 3));
      long long q = std::stoll(line.substr(q_at + 10));
      total_from_levels += t * q;
      if (line[6] == '1') n1 = 3;
    }
    if (line.rfind("queries = ", 0) == 0) bound_line = line;
  }
  std::ostringstream expect;
  expect << "queries = n1 + sum t_j*q_j = " << n1 << " + " << total_from_levels << " = "
         << (n1 + total_from_levels);
  CHECK(bound_line == expect.str());
}

TEST_CASE("nest rejects decreasing block lengths with exit 2") {
  write_file(kWorkDir + "/chain_bad.txt",
             "LEVEL 1 code=parity6 tester=full delta=1/3 kappa=1/1\n"
             "LEVEL 2 code=parity3 tester=parity delta=2/3 kappa=3/1\n");
  CHECK(run_cli("nest --chain " + kWorkDir + "/chain_bad.txt").exit_code == 2);
}

TEST_CASE("verify full-corrector within its radius passes") {
  auto r = run_cli("verify --procedure full-corrector --code hamming3 --csv " + kWorkDir +
                   "/verify.csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("kind,code,", 0) == 0);
  CHECK(r.out.find("completeness,hamming3,7,4,") != std::string::npos);
  CHECK(r.out.find("soundness,hamming3,7,4,") != std::string::npos);
  CHECK(read_file(kWorkDir + "/verify.csv").find("soundness") != std::string::npos);
}

TEST_CASE("verify fails with a counterexample beyond the radius") {
  auto r = run_cli("verify --procedure full-corrector --code parity3 --radius 1/1");
  CHECK(r.exit_code == 1);
  CHECK(read_file(kWorkDir + "/stderr.txt").find("counterexample") != std::string::npos);
}

TEST_CASE("verify nested corrector via a chain") {
  write_file(kWorkDir + "/chain_t.txt",
             "LEVEL 1 code=parity3 tester=full delta=2/3 kappa=1/1\n"
             "LEVEL 2 code=tensor:parity3:parity3 tester=tensor delta=4/9 kappa=3/2\n");
  auto r = run_cli("verify --procedure nested-corrector --chain " + kWorkDir + "/chain_t.txt");
  CHECK(r.exit_code == 0);
}

TEST_CASE("verify a parity tester loaded from a .pchk file path") {
  // the nested.pchk written earlier carries a redundant presented row; the
  // sampling tester must use all three rows as presented
  auto r = run_cli("verify --procedure parity-tester --code " + kWorkDir +
                   "/nested.pchk --kappa-threshold 2/1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("testability," + kWorkDir + "/nested.pchk,6,4,") != std::string::npos);
  CHECK(run_cli("verify --procedure parity-tester --code " + kWorkDir +
                "/nested.pchk --kappa-threshold 5/2")
            .exit_code == 1);
}

TEST_CASE("verify full tester on a file path") {
  auto r = run_cli("verify --procedure full-tester --code " + kWorkDir + "/p3.pchk");
  CHECK(r.exit_code == 0);
}

TEST_CASE("simulate with a plain code uses its full-read corrector") {
  auto r = run_cli("simulate --code hamming3 --model uniform --weight 1 --trials 20 --seed 3");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // weight-1 corruption of a distance-3 code: never silently wrong
    CHECK(line.find(",1,0,1,0,7") != std::string::npos);  // weight,corrected?,bot?,wrong?,q
  }
  CHECK(rows == 20);
}

TEST_CASE("verify testers against a kappa threshold") {
  CHECK(run_cli("verify --procedure tensor-tester --code tensor:parity3:parity3 "
                "--kappa-threshold 3/2")
            .exit_code == 0);
  CHECK(run_cli("verify --procedure tensor-tester --code tensor:parity3:parity3 "
                "--kappa-threshold 2/1")
            .exit_code == 1);
}

TEST_CASE("verify --mc prints a Clopper-Pearson interval") {
  auto r = run_cli("verify --procedure full-corrector --code hamming3 --mc --samples 500");
  CHECK(r.exit_code == 0);
  CHECK(read_file(kWorkDir + "/stderr.txt").find("cp99=[") != std::string::npos);
}

TEST_CASE("params --gv") {
  auto r = run_cli("params --gv 0 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("gv: eps=0\n") != std::string::npos);
  auto infeasible = run_cli("params --gv 0.9 0.5");
  CHECK(infeasible.out.find("infeasible pair") != std::string::npos);
}

TEST_CASE("params --dellm prints the block-length column") {
  auto r = run_cli("params --dellm 1/3 --levels 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("asymptotic constants = ") != std::string::npos);
  CHECK(r.out.find("j=1 n_j=") != std::string::npos);
  CHECK(r.out.find("j=2 n_j=") != std::string::npos);
}

TEST_CASE("params --family with shrunk constants") {
  write_file(kWorkDir + "/constants.json",
             R"({"c_p": "1/100000000000000000", "c_n": "1/100000000000000000000000000"})");
  auto r = run_cli("params --family 2^40 --constants " + kWorkDir + "/constants.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find(" m=") != std::string::npos);
  // ratio column carries the exact power-term ratio; at j=2 it is p(p^2+1)
  CHECK(r.out.find("j=2 n_j=") != std::string::npos);
  CHECK(r.out.find("ratio=30/1") != std::string::npos);  // p=3 under these constants
}

TEST_CASE("params --headline evaluates the displayed formulas") {
  auto r = run_cli("params --headline 2^16 --q 1 --kappa 1 --eps 0.25");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("iterated: queries=") != std::string::npos);
  CHECK(r.out.find("boosted: queries=") != std::string::npos);
  CHECK(r.out.find("explicit: queries=") != std::string::npos);
}

TEST_CASE("simulate: weight 0 always corrects; bytes are seed- and thread-stable") {
  write_file(kWorkDir + "/chain_sim.txt",
             "LEVEL 1 code=parity3 tester=full delta=2/3 kappa=1/1\n"
             "LEVEL 2 code=tensor:parity3:parity3 tester=tensor delta=4/9 kappa=3/2\n");
  std::string base = "simulate --chain " + kWorkDir + "/chain_sim.txt --trials 40 --seed 11 ";

  auto zero = run_cli(base + "--model uniform --weight 0");
  CHECK(zero.exit_code == 0);
  std::istringstream lines(zero.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "trial,weight,corrected,bot,wrong,queries");
  while (std::getline(lines, line)) {
    CHECK(line.find(",0,1,0,0,") != std::string::npos);  // corrected, no bot, no wrong
  }

  auto a = run_cli(base + "--model block --weight 2 --threads 1");
  auto b = run_cli(base + "--model block --weight 2 --threads 4");
  auto c = run_cli(base + "--model block --weight 2 --threads 8");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);

  auto rerun = run_cli(base + "--model block --weight 2 --threads 4");
  CHECK(rerun.out == b.out);
}

TEST_CASE("simulate validates the model") {
  CHECK(run_cli("simulate --code parity3 --model sideways --weight 1").exit_code == 2);
  CHECK(run_cli("simulate --model uniform --weight 1").exit_code == 2);
}
