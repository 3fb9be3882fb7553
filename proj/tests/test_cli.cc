#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"
#include "stg2/instance_io.h"
#include "support/fixtures.h"

using namespace stg2;
using namespace stg2::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(STG2_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("stg2_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("solve and verify the five-node fixture") {
  TempDir dir;
  write_file(dir / "five_node.stg2", kFiveNodeText);
  Run s = run("solve " + (dir / "five_node.stg2") + " --out " + (dir / "five_node.sol"));
  CHECK(s.code == 0);
  CHECK(s.out.find("status=feasible\n") != std::string::npos);
  CHECK(s.out.find("\nobjective=") != std::string::npos);
  CHECK(s.out.find("reuse_hit_rate=") != std::string::npos);
  CHECK(s.out.find("time_level2=") != std::string::npos);

  Run v = run("verify " + (dir / "five_node.stg2") + " " + (dir / "five_node.sol"));
  CHECK(v.code == 0);
  CHECK(v.out.find("feasible=1") != std::string::npos);

  // Swap the wavelength of the lightpath over CD and DE.
  std::string sol = read_file(dir / "five_node.sol");
  size_t pos = sol.find("LP 3 1 4 6");
  REQUIRE(pos != std::string::npos);
  sol.replace(pos, 10, "LP 3 0 4 6");
  write_file(dir / "bad.sol", sol);
  Run bad = run("verify " + (dir / "five_node.stg2") + " " + (dir / "bad.sol"));
  CHECK(bad.code != 0);
  CHECK(bad.out.find("[wavelength-assignment]") != std::string::npos);
}

TEST_CASE("parallel solve reports per-iteration counts") {
  TempDir dir;
  Run g = run("generate --seed 3 --nodes 10 --links 16 --demands 20 "
              "--volumes 1,2,10 --out " +
              (dir / "g.stg2"));
  REQUIRE(g.code == 0);
  Run s = run("solve " + (dir / "g.stg2") + " --threads 4 --cs 2 --cr 4");
  CHECK(s.code == 0);
  CHECK(s.out.find("iteration.1.planned=") != std::string::npos);
  CHECK(s.out.find("iteration.1.blocked=") != std::string::npos);
}

TEST_CASE("generate is deterministic") {
  TempDir dir;
  CHECK(run("generate --seed 7 --out " + (dir / "a.stg2")).code == 0);
  CHECK(run("generate --seed 7 --out " + (dir / "b.stg2")).code == 0);
  CHECK(read_file(dir / "a.stg2") == read_file(dir / "b.stg2"));
  Run out = run("generate --seed 7");
  CHECK(out.out == read_file(dir / "a.stg2"));
  CHECK(run("generate --nodes 5 --links 3").code == 4);
}

TEST_CASE("bench prints one row per seed and thread count") {
  Run b = run("bench --seeds 3 --threads 1,4 --nodes 8 --links 12 "
              "--demands 10 --volumes 1,2,10");
  CHECK(b.code == 0);
  CHECK(count_lines(b.out) == 7);
  CHECK(b.out.rfind("seed threads objective time_total time_level2", 0) == 0);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run("solve " + (dir / "missing.stg2")).code == 4);
  write_file(dir / "bad.stg2", "NETWORK 2 1 1 1 100 10\nLINK 0 0 0 5\n");
  CHECK(run("solve " + (dir / "bad.stg2")).code == 4);
  CHECK(run("solve").code == 4);
  CHECK(run("frobnicate").code == 4);

  write_file(dir / "ring.stg2",
             "NETWORK 4 4 1 4 100 1000\n"
             "LINK 0 0 1 100\nLINK 1 1 2 100\nLINK 2 2 3 100\nLINK 3 3 0 100\n"
             "DEMAND 0 0 2 10\n");
  Run inf = run("solve " + (dir / "ring.stg2"));
  CHECK(inf.code == 2);
  CHECK(inf.out.find("blocking_demand=0") != std::string::npos);

  CHECK(run("generate --seed 1 --volumes 1,2,10 --out " + (dir / "big.stg2"))
            .code == 0);
  Run t = run("solve " + (dir / "big.stg2") + " --time-limit 0.001");
  CHECK(t.code == 3);
  CHECK(t.out.find("status=timeout") != std::string::npos);
}
