// End-to-end tests of the btl executable; the binary path comes from the
// build system.
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(BTL_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "btl_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = temp_dir() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

std::vector<std::vector<std::string>> parse_grid(const std::string& text, int header_lines) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> grid;
  int skipped = 0;
  while (std::getline(in, line)) {
    if (skipped < header_lines) {
      ++skipped;
      continue;
    }
    std::istringstream ls(line);
    std::vector<std::string> row;
    std::string cell;
    while (ls >> cell) row.push_back(cell);
    if (!row.empty()) grid.push_back(std::move(row));
  }
  return grid;
}

// The 9x5x8 example file with its three blocking lines.
std::string example_tensor_file() {
  std::ostringstream out;
  out << "dims: 9 5 8\n"
      << "blocking 1: 2 3 4\n"
      << "blocking 2: 3 2\n"
      << "blocking 3: 2 2 2 2\n";
  for (int k = 1; k <= 360; ++k) {
    out << k;
    out << (k % 10 == 0 ? '\n' : ' ');
  }
  return write_file("example_958.txt", out.str());
}

}  // namespace

TEST_CASE("shuffle prints the perfect shuffle vector") {
  const RunResult r = run_cli("shuffle 2 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "1 4 2 5 3 6\n");
}

TEST_CASE("verify exits zero on success and one on failure") {
  const RunResult ok = run_cli("verify --seed 5");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("result: PASS") != std::string::npos);

  const RunResult again = run_cli("verify --seed 5");
  CHECK(again.output == ok.output);

  const RunResult bad = run_cli("verify --seed 5 --corrupt-pm");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("result: FAIL") != std::string::npos);
}

TEST_CASE("usage errors exit with code two") {
  CHECK(run_cli("no-such-command").exit_code == 2);
  CHECK(run_cli("unfold --r 1 --c 2").exit_code == 2);       // missing files
  CHECK(run_cli("contract --p 1 --q 1 --f 0 missing.txt also_missing.txt out.txt").exit_code ==
        2);
}

TEST_CASE("unfold writes the matrix as rows of scalars") {
  const std::string in = write_file("mat23.txt", "dims: 2 3\n1 2 3 4 5 6\n");
  const std::string out = (temp_dir() / "mat23_unfolded.txt").string();
  const RunResult r = run_cli("unfold --r 1 --c 2 " + in + " " + out);
  REQUIRE(r.exit_code == 0);
  std::ifstream f(out);
  std::stringstream text;
  text << f.rdbuf();
  CHECK(text.str() == "1 3 5\n2 4 6\n");
}

TEST_CASE("unfold rejects a bad spec with exit two") {
  const std::string in = write_file("mat23b.txt", "dims: 2 3\n1 2 3 4 5 6\n");
  const std::string out = (temp_dir() / "bad.txt").string();
  CHECK(run_cli("unfold --r 1 --c 1 " + in + " " + out).exit_code == 2);
}

TEST_CASE("block-unfold emits the block grid header") {
  const std::string in = example_tensor_file();
  const std::string out = (temp_dir() / "blocked.txt").string();
  const RunResult r = run_cli("block-unfold --r 1 --c \"2 3\" " + in + " " + out);
  REQUIRE(r.exit_code == 0);
  std::ifstream f(out);
  std::string line1;
  std::string line2;
  std::getline(f, line1);
  std::getline(f, line2);
  CHECK(line1 == "rows: 2 3 4");
  CHECK(line2 == "cols: 6 4 6 4 6 4 6 4");
  int rows = 0;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 9);
}

TEST_CASE("contract computes a matrix product end to end") {
  const std::string f = write_file("f23.txt", "dims: 2 3\n1 2 3 4 5 6\n");
  const std::string g = write_file("g32.txt", "dims: 3 2\n1 0 2 0 1 3\n");
  const std::string out = (temp_dir() / "h22.txt").string();
  for (const char* method : {"naive", "unfolded", "blocked"}) {
    const RunResult r = run_cli("contract --p \"1 2\" --q \"1 2\" --f 1 --method " +
                                std::string(method) + " " + f + " " + g + " " + out);
    REQUIRE(r.exit_code == 0);
    std::ifstream h(out);
    std::string dims_line;
    std::getline(h, dims_line);
    CHECK(dims_line == "dims: 2 2");
    // method "blocked" writes the inherited single-block blocking lines
    std::string next;
    std::getline(h, next);
    if (std::string(method) == "blocked") {
      CHECK(next == "blocking 1: 2");
      std::getline(h, next);
      CHECK(next == "blocking 2: 2");
      std::getline(h, next);
    }
    // A = [[1,3,5],[2,4,6]], B = [[1,0],[0,1],[2,3]] in column-major reading:

    // vec(A) = 1 2 3 4 5 6 -> A(i,j) listed column-first; the product is
    // H = A*B with H(1,1)=1+10=11, H(2,1)=2+12=14, H(1,2)=3+15=18, H(2,2)=4+18=22.
    std::istringstream values(next);
    std::vector<double> got;
    double v = 0;
    while (values >> v) got.push_back(v);
    REQUIRE(got.size() == 4);
    CHECK(got[0] == 11);
    CHECK(got[1] == 14);
    CHECK(got[2] == 18);
    CHECK(got[3] == 22);
  }
}

TEST_CASE("figure shows the split and reassembled block") {
  const std::string in = example_tensor_file();

  const RunResult plain = run_cli("figure --mode 1 " + in);
  REQUIRE(plain.exit_code == 0);
  CHECK(plain.output.find("mode-1 unfolding: 9 x 40") != std::string::npos);
  const auto grid = parse_grid(plain.output, 2);
  REQUIRE(grid.size() == 9);
  REQUIRE(grid[0].size() == 40);
  // columns that contain the 311 block, as maximal runs
  std::vector<int> cols;
  for (int j = 0; j < 40; ++j) {
    for (int i = 0; i < 9; ++i) {
      if (grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == "311") {
        cols.push_back(j);
        break;
      }
    }
  }
  REQUIRE(!cols.empty());
  int runs = 1;
  for (std::size_t k = 1; k < cols.size(); ++k) {
    if (cols[k] != cols[k - 1] + 1) ++runs;
  }
  CHECK(runs >= 2);

  const RunResult blocked = run_cli("figure --mode 1 --block " + in);
  REQUIRE(blocked.exit_code == 0);
  CHECK(blocked.output.find("rows: 2 3 4") != std::string::npos);
  const auto bgrid = parse_grid(blocked.output, 3);
  REQUIRE(bgrid.size() == 9);
  int min_row = 9, max_row = -1, min_col = 40, max_col = -1, count = 0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 40; ++j) {
      if (bgrid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == "311") {
        ++count;
        min_row = std::min(min_row, i);
        max_row = std::max(max_row, i);
        min_col = std::min(min_col, j);
        max_col = std::max(max_col, j);
      }
    }
  }
  CHECK(count == 24);
  CHECK((max_row - min_row + 1) * (max_col - min_col + 1) == count);

  // a file without blocking lines is a usage error
  const std::string bare = write_file("bare.txt", "dims: 2 2\n1 2 3 4\n");
  CHECK(run_cli("figure --mode 1 " + bare).exit_code == 2);
}

TEST_CASE("bench prints one CSV row per size and method") {
  const std::string spec = write_file("bench_spec.txt", "# size blocks\n4 2\n6 3\n");
  const RunResult r = run_cli("bench --spec " + spec);
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.output);
  std::string line;
  std::getline(in, line);
  CHECK(line == "size,method,seconds");
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].rfind("4,naive,", 0) == 0);
  CHECK(rows[1].rfind("4,unfolded,", 0) == 0);
  CHECK(rows[2].rfind("4,blocked,", 0) == 0);
  CHECK(rows[3].rfind("6,naive,", 0) == 0);

  // the row set (size, method) is stable run to run; only the times vary
  auto keys = [](const RunResult& res) {
    std::istringstream is(res.output);
    std::string row;
    std::vector<std::string> out;
    while (std::getline(is, row)) {
      const auto last_comma = row.rfind(',');
      if (last_comma != std::string::npos) out.push_back(row.substr(0, last_comma));
    }
    return out;
  };
  const RunResult again = run_cli("bench --spec " + spec);
  CHECK(keys(r) == keys(again));

  const std::string bad = write_file("bench_bad.txt", "5 2\n");
  CHECK(run_cli("bench --spec " + bad).exit_code == 2);
}
