#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "geots/dataset_io.hpp"
#include "support.hpp"

// End-to-end checks against the installed command line surface.

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GEOTS_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "geots_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli usage errors exit with code 2") {
  CHECK(run_cli("query --kind nonsense") == 2);
  CHECK(run_cli("ingest --data /definitely/not/there.csv") == 2);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("cli pipeline: synthesize, build, query, bench") {
  TempDir dir;
  const auto base = testsupport::random_walk_dataset(150, 24, 90);
  geots::write_dataset_csv(base, dir.file("base.csv"));

  CHECK(run_cli("ingest --data " + dir.file("base.csv")) == 0);
  CHECK(run_cli("synthesize --data " + dir.file("base.csv") + " --factor 2 --seed 3 --out " +
                dir.file("big.csv")) == 0);
  CHECK(run_cli("build --data " + dir.file("big.csv") +
                " --index sbtsr --segments 6 --k-mbts 8 --out " + dir.file("big.idx")) == 0);
  CHECK(run_cli("query --data " + dir.file("big.csv") + " --index-file " + dir.file("big.idx") +
                " --kind rr --rho-pct 30 --eps-pct 10 --delta 4 --query-id 17") == 0);
  CHECK(run_cli("bench --data " + dir.file("big.csv") + " --index-file " + dir.file("big.idx") +
                " --kind rr --rho-pct 30 --eps-pct 7.5 --delta 5 --queries 20 "
                "--workload-seed 7 --verify --out " +
                dir.file("report.csv") + " --json " + dir.file("report.json")) == 0);

  // the report lands with one row per query plus the echo header
  std::ifstream report(dir.file("report.csv"));
  std::size_t lines = 0;
  std::string line;
  while (std::getline(report, line)) ++lines;
  CHECK(lines == 22);

  CHECK(run_cli("verify --data " + dir.file("base.csv") +
                " --kind all --queries 5 --rho-pct 30 --eps-pct 7.5 --delta 4 --k 5") == 0);
}

TEST_CASE("cli rejects corrupt index files with a usage error") {
  TempDir dir;
  const auto base = testsupport::random_walk_dataset(50, 8, 91);
  geots::write_dataset_csv(base, dir.file("d.csv"));
  {
    std::ofstream bad(dir.file("bad.idx"), std::ios::binary);
    bad << "garbage";
  }
  CHECK(run_cli("query --data " + dir.file("d.csv") + " --index-file " + dir.file("bad.idx") +
                " --kind rr --rho 1 --eps 1 --delta 1 --query-id 0") == 2);
}
