#pragma once

// The decreasing-arity tree: the root has L children, a node at level j has
// L-j children, and the L! leaves at level L carry the value 1.
//
// Values are never stored.  Each node is identified by a 64-bit digest of
// its path from the root, and its value is a hash of that digest, so any
// traversal order (or a replay by an oracle) sees the same realization.

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pathscape {

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

struct TreeParams {
  int dim = 1;
  double root_value = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

struct TreeNode {
  std::uint64_t digest = 0;
  int level = 0;
  double value = 0.0;
};

class TreeRun {
 public:
  explicit TreeRun(const TreeParams& params);

  /// A realization with hand-picked values, addressed by child-index paths
  /// from the root.  Nodes left unassigned get value 0, which blocks them.
  static TreeRun with_values(int L, double x,
                             const std::vector<std::pair<std::vector<int>, double>>& values,
                             std::uint64_t node_budget = kDefaultNodeBudget);

  const TreeParams& params() const noexcept { return params_; }
  int dim() const noexcept { return params_.dim; }

  TreeNode root() const noexcept;
  /// Child `index` of `parent`, 0 <= index < L - parent.level.
  TreeNode child(const TreeNode& parent, int index) const;

 private:
  TreeParams params_;
  std::shared_ptr<const std::unordered_map<std::uint64_t, double>> table_;
};

/// Exact Θ by pruned depth-first search.  Each open prefix entered costs one
/// unit of budget; the expected number is about (2-x)^L.  Throws
/// BudgetExceeded when the budget runs out.
std::uint64_t sample_theta_tree(const TreeRun& run);
std::uint64_t sample_theta_tree(const TreeParams& params);

/// True iff Θ >= 1; stops at the first open root-to-leaf path.
bool tree_path_exists(const TreeRun& run);

struct AliveFront {
  int level = 0;
  std::vector<TreeNode> nodes;  // open prefixes; each value exceeds the root value
};

/// Open prefixes at level k, built level by level.  Throws BudgetExceeded if
/// the fronts together exceed the node budget.
AliveFront alive_front(const TreeRun& run, int k);

/// Θ_k = Σ over open level-k prefixes σ of (L-k)(1-x_σ)^{L-k-1}.  0 <= k < L.
double theta_k_tree(const TreeRun& run, int k);
double theta_k_tree(const TreeParams& params, int k);

/// Reference Θ by walking all L! root-to-leaf paths of the same realization.
/// L <= 9.
std::uint64_t enumerate_tree_paths_oracle(const TreeRun& run);

/// Θ for `samples` realizations seeded derive_seed(seed, i), in replica
/// order.  Propagates BudgetExceeded.
std::vector<std::uint64_t> sample_theta_tree_mc(int L, double x, std::uint64_t samples, std::uint64_t seed,
                                                std::uint64_t budget, unsigned threads);

struct ExistenceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;       // realizations that finished
  std::uint64_t successes = 0;
  std::uint64_t budget_hits = 0;   // realizations abandoned; not in the estimate
};

/// Fraction of realizations with an open path.  Replica i uses seed
/// derive_seed(seed, i).
ExistenceEstimate tree_existence_mc(int L, double x, std::uint64_t samples, std::uint64_t seed,
                                    std::uint64_t budget, unsigned threads);

}  // namespace pathscape
