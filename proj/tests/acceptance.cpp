// Acceptance suite: drives every top-level correctness property at desk
// scale and prints one pass/fail line per criterion. Exit code 0 iff all
// criteria hold.

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "btl/blocking.hpp"
#include "btl/figure.hpp"
#include "btl/verify.hpp"

namespace {

using namespace btl;

struct Criterion {
  std::string label;
  bool passed = false;
  std::string note;
};

const CheckResult& find(const std::vector<CheckResult>& results, const char* name) {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw std::runtime_error(std::string("missing check: ") + name);
}

bool all_passed(const std::vector<CheckResult>& results, const std::vector<const char*>& names,
                std::string& note) {
  bool ok = true;
  int instances = 0;
  for (const char* name : names) {
    const CheckResult& r = find(results, name);
    instances += r.instances;
    if (!r.passed) {
      ok = false;
      if (note.empty()) note = r.name + ": " + r.detail;
    }
  }
  if (ok) note = std::to_string(instances) + " instances";
  return ok;
}

// Criterion 8 asserts on the rendered text itself: parse the label grid back
// out of the ASCII block map.
std::vector<std::vector<std::string>> parse_labels(const std::string& text, int header_lines) {
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

Criterion check_contiguity_from_text() {
  Criterion crit;
  crit.label = "figure output splits block 311 plainly and reassembles it blocked";

  const Shape n({9, 5, 8});
  const Blocking m(n, {{2, 3, 4}, {3, 2}, {2, 2, 2, 2}});

  const auto plain = parse_labels(render_block_map(n, m, 1, false), 2);
  if (plain.size() != 9 || plain[0].size() != 40) {
    crit.note = "plain map is not 9 x 40";
    return crit;
  }
  std::vector<int> cols;
  for (int j = 0; j < 40; ++j) {
    for (int i = 0; i < 9; ++i) {
      if (plain[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == "311") {
        cols.push_back(j);
        break;
      }
    }
  }
  int runs = cols.empty() ? 0 : 1;
  for (std::size_t k = 1; k < cols.size(); ++k) {
    if (cols[k] != cols[k - 1] + 1) ++runs;
  }
  if (runs < 2) {
    crit.note = "block 311 occupies a single column range in the plain unfolding";
    return crit;
  }

  const std::string blocked_text = render_block_map(n, m, 1, true);
  if (blocked_text.find("rows: 2 3 4") == std::string::npos ||
      blocked_text.find("cols: 6 4 6 4 6 4 6 4") == std::string::npos) {
    crit.note = "block-grid header is wrong";
    return crit;
  }
  const auto blocked = parse_labels(blocked_text, 3);
  int min_row = 9, max_row = -1, min_col = 40, max_col = -1, count = 0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 40; ++j) {
      if (blocked[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == "311") {
        ++count;
        min_row = std::min(min_row, i);
        max_row = std::max(max_row, i);
        min_col = std::min(min_col, j);
        max_col = std::max(max_col, j);
      }
    }
  }
  if (count != 24 || (max_row - min_row + 1) != 4 || (max_col - min_col + 1) != 6) {
    crit.note = "block 311 is not one contiguous 4 x 6 rectangle after block unfolding";
    return crit;
  }
  crit.passed = true;
  crit.note = "split into " + std::to_string(runs) + " ranges, rejoined as 4 x 6";
  return crit;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 20260810;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);

  VerifyOptions options;
  options.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<CheckResult> results = run_verification(options);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  std::vector<Criterion> criteria;

  {
    Criterion c;
    c.label = "P_M reproduces the blocked vec bit-exactly on >=500 random blockings";
    c.passed = all_passed(results,
                          {checks::kBlockVecPermutation, checks::kStepwiseBlockVec,
                           checks::kEntryDecomposition},
                          c.note);
    if (c.passed && elapsed.count() >= 30.0) {
      c.passed = false;
      c.note = "suite took " + std::to_string(elapsed.count()) + "s, budget is 30s";
    } else if (c.passed) {
      std::ostringstream time_note;
      time_note.setf(std::ios::fixed);
      time_note.precision(2);
      time_note << c.note << ", full suite in " << elapsed.count() << "s";
      c.note = time_note.str();
    }
    criteria.push_back(std::move(c));
  }
  {
    Criterion c;
    c.label = "uniform-blocking shortcut equals the general P_M on >=200 instances";
    c.passed = all_passed(results, {checks::kUniformShortcut}, c.note);
    criteria.push_back(std::move(c));
  }
  {
    Criterion c;
    c.label = "block unfoldings are blockwise unfoldings, including the 9x5x8 grid";
    c.passed =
        all_passed(results, {checks::kBlockUnfoldBlocks, checks::kBlockGridGeometry}, c.note);
    criteria.push_back(std::move(c));
  }
  {
    Criterion c;
    c.label = "contraction routes agree within 1e-12 and the block recipe matches";
    c.passed = all_passed(results, {checks::kContractionRoutes, checks::kBlockRecipe}, c.note);
    criteria.push_back(std::move(c));
  }
  {
    Criterion c;
    c.label = "multilinear product forms agree within 1e-12 incl. exact identity case";
    c.passed = all_passed(results, {checks::kMultilinearForms}, c.note);
    criteria.push_back(std::move(c));
  }
  {
    Criterion c;
    c.label = "shuffle calculus matches the dense permutation oracle bit-exactly";
    c.passed = all_passed(results,
                          {checks::kTransposeShuffle, checks::kShuffleSwapsKron,
                           checks::kBlockedKronRegroup, checks::kMiddlePairSwap,
                           checks::kAdjacentSwap, checks::kModeToFront,
                           checks::kShuffleVectorForm, checks::kComposeOracle,
                           checks::kKronOracle, checks::kDirectSumOracle},
                          c.note);
    criteria.push_back(std::move(c));
  }
  {
    Criterion c;
    c.label = "rank-1 structure: unfoldings are rank 1 and kron forms line up";
    c.passed = all_passed(results, {checks::kRank1Structure}, c.note);
    criteria.push_back(std::move(c));
  }
  criteria.push_back(check_contiguity_from_text());

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const Criterion& c = criteria[k];
    if (!c.passed) ++failures;
    std::printf("[%s] criterion %zu: %s (%s)\n", c.passed ? "PASS" : "FAIL", k + 1,
                c.label.c_str(), c.note.c_str());
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed (seed %llu)\n", criteria.size(),
                static_cast<unsigned long long>(seed));
  } else {
    std::printf("acceptance: %d of %zu criteria FAILED (seed %llu)\n", failures, criteria.size(),
                static_cast<unsigned long long>(seed));
  }
  return failures == 0 ? 0 : 1;
}
