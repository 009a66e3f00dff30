#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace btl {

/// Names of the individual checks, for callers that pick results apart.
namespace checks {
inline constexpr const char* kTransposeShuffle = "matrix-transpose vec is a perfect shuffle";
inline constexpr const char* kShuffleSwapsKron = "perfect shuffle swaps kronecker factors";
inline constexpr const char* kBlockedKronRegroup = "shuffle regroups a blocked kronecker factor";
inline constexpr const char* kMiddlePairSwap = "order-4 middle-pair mode swap permutation";
inline constexpr const char* kAdjacentSwap = "adjacent-mode swap permutation";
inline constexpr const char* kModeToFront = "mode-to-front permutation";
inline constexpr const char* kShuffleVectorForm = "perfect shuffle vector form";
inline constexpr const char* kComposeOracle = "permutation compose = matrix product";
inline constexpr const char* kKronOracle = "permutation kron = matrix kron";
inline constexpr const char* kDirectSumOracle = "permutation direct sum = block diagonal";
inline constexpr const char* kBlockVecPermutation = "blocked vec equals P_M applied to vec";
inline constexpr const char* kStepwiseBlockVec = "stepwise factors reach the blocked vec";
inline constexpr const char* kEntryDecomposition = "entry = (block, offset) decomposition";
inline constexpr const char* kUniformShortcut = "uniform-blocking P_M shortcut";
inline constexpr const char* kBlockUnfoldBlocks = "block unfolding blocks = unfoldings of blocks";
inline constexpr const char* kBlockGridGeometry = "block unfolding grid geometry (9x5x8 case)";
inline constexpr const char* kContractionRoutes = "contraction: naive = unfolded = blocked";
inline constexpr const char* kBlockRecipe = "blocked contraction per-block recipe";
inline constexpr const char* kMultilinearForms = "multilinear product: all forms agree";
inline constexpr const char* kRank1Structure = "rank-1 unfoldings and kronecker structure";
inline constexpr const char* kContiguity = "block contiguity in plain vs block unfolding";
}  // namespace checks

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Test hook: injects an off-by-one fault into every built P_M so the
  /// blocked-vec check must fail (negative control for the harness itself).
  bool corrupt_pm = false;
};

struct CheckResult {
  std::string name;
  int instances = 0;
  bool passed = false;
  std::string detail;  // first failure, empty when passed
};

/// Runs the whole randomized property suite. Deterministic given the seed.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

std::string format_report(const VerifyOptions& options, const std::vector<CheckResult>& results);

int count_failures(const std::vector<CheckResult>& results);

}  // namespace btl
