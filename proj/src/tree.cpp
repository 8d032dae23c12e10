#include "pathscape/tree.hpp"

#include <cmath>
#include <numeric>

#include "pathscape/errors.hpp"
#include "pathscape/parallel.hpp"
#include "pathscape/rng.hpp"

namespace pathscape {
namespace {

constexpr std::uint64_t kValueSalt = 0xD1B54A32D192ED03ULL;

std::uint64_t child_digest(std::uint64_t parent, int index) {
  return mix64(parent + kGoldenGamma * static_cast<std::uint64_t>(index + 1));
}

void check_params(const TreeParams& p) {
  require(p.dim >= 1 && p.dim <= 1000, "tree dimension must lie in [1, 1000]");
  require(p.root_value >= 0.0 && p.root_value <= 1.0, "root value must lie in [0,1]");
  require(p.node_budget > 0, "node budget must be positive");
}

class Visitor {
 public:
  explicit Visitor(const TreeRun& run) : run_(run), budget_(run.params().node_budget) {}

  void enter() {
    if (++visited_ > budget_) throw BudgetExceeded("tree search exceeded the node budget", budget_);
  }

  std::uint64_t count(const TreeNode& node) {
    enter();
    if (node.level == run_.dim()) return 1;
    std::uint64_t total = 0;
    const int arity = run_.dim() - node.level;
    for (int i = 0; i < arity; ++i) {
      const TreeNode c = run_.child(node, i);
      if (node.value < c.value) {
        if (__builtin_add_overflow(total, count(c), &total))
          throw CountOverflow("open-path count exceeds 64 bits");
      }
    }
    return total;
  }

  bool reaches_leaf(const TreeNode& node) {
    enter();
    if (node.level == run_.dim()) return true;
    const int arity = run_.dim() - node.level;
    for (int i = 0; i < arity; ++i) {
      const TreeNode c = run_.child(node, i);
      if (node.value < c.value && reaches_leaf(c)) return true;
    }
    return false;
  }

 private:
  const TreeRun& run_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
};

}  // namespace

TreeRun::TreeRun(const TreeParams& params) : params_(params) { check_params(params_); }

TreeRun TreeRun::with_values(int L, double x,
                             const std::vector<std::pair<std::vector<int>, double>>& values,
                             std::uint64_t node_budget) {
  TreeRun run(TreeParams{L, x, 0, node_budget});
  auto table = std::make_shared<std::unordered_map<std::uint64_t, double>>();
  for (const auto& [path, value] : values) {
    require(!path.empty() && static_cast<int>(path.size()) < L, "assigned paths must end above the leaves");
    require(value >= 0.0 && value <= 1.0, "node values must lie in [0,1]");
    TreeNode node = run.root();
    for (std::size_t j = 0; j < path.size(); ++j) {
      require(path[j] >= 0 && path[j] < L - static_cast<int>(j), "child index out of range");
      node.digest = child_digest(node.digest, path[j]);
    }
    (*table)[node.digest] = value;
  }
  run.table_ = std::move(table);
  return run;
}

TreeNode TreeRun::root() const noexcept { return TreeNode{mix64(params_.seed), 0, params_.root_value}; }

TreeNode TreeRun::child(const TreeNode& parent, int index) const {
  if (index < 0 || index >= params_.dim - parent.level) throw DomainError("child index out of range");
  TreeNode c{child_digest(parent.digest, index), parent.level + 1, 1.0};
  if (c.level == params_.dim) return c;
  if (table_) {
    const auto it = table_->find(c.digest);
    c.value = it == table_->end() ? 0.0 : it->second;
  } else {
    c.value = to_unit_interval(mix64(c.digest ^ kValueSalt));
  }
  return c;
}

std::uint64_t sample_theta_tree(const TreeRun& run) {
  Visitor v(run);
  return v.count(run.root());
}

std::uint64_t sample_theta_tree(const TreeParams& params) { return sample_theta_tree(TreeRun(params)); }

bool tree_path_exists(const TreeRun& run) {
  Visitor v(run);
  return v.reaches_leaf(run.root());
}

AliveFront alive_front(const TreeRun& run, int k) {
  require(k >= 0 && k <= run.dim(), "level must lie in [0, L]");
  const std::uint64_t budget = run.params().node_budget;
  std::uint64_t used = 1;
  std::vector<TreeNode> front{run.root()};
  for (int level = 0; level < k; ++level) {
    std::vector<TreeNode> next;
    const int arity = run.dim() - level;
    for (const TreeNode& node : front) {
      for (int i = 0; i < arity; ++i) {
        const TreeNode c = run.child(node, i);
        if (!(node.value < c.value)) continue;
        if (++used > budget) throw BudgetExceeded("alive front exceeded the node budget", budget);
        next.push_back(c);
      }
    }
    front = std::move(next);
  }
  return AliveFront{k, std::move(front)};
}

double theta_k_tree(const TreeRun& run, int k) {
  const int L = run.dim();
  require(k >= 0 && k < L, "theta_k on the tree needs 0 <= k < L");
  const AliveFront front = alive_front(run, k);
  double total = 0.0;
  for (const TreeNode& node : front.nodes) total += std::pow(1.0 - node.value, L - k - 1);
  return (L - k) * total;
}

double theta_k_tree(const TreeParams& params, int k) { return theta_k_tree(TreeRun(params), k); }

std::uint64_t enumerate_tree_paths_oracle(const TreeRun& run) {
  const int L = run.dim();
  require(L <= 9, "tree path enumeration is limited to L <= 9");
  // Odometer over index sequences (i_0, …, i_{L-1}) with i_j < L - j.
  std::vector<int> idx(L, 0);
  std::uint64_t count = 0;
  for (;;) {
    TreeNode node = run.root();
    bool open = true;
    for (int j = 0; j < L; ++j) {
      const TreeNode c = run.child(node, idx[j]);
      if (!(node.value < c.value)) {
        open = false;
        break;
      }
      node = c;
    }
    count += open ? 1 : 0;
    int j = L - 1;
    while (j >= 0 && ++idx[j] == L - j) idx[j--] = 0;
    if (j < 0) break;
  }
  return count;
}

std::vector<std::uint64_t> sample_theta_tree_mc(int L, double x, std::uint64_t samples, std::uint64_t seed,
                                                std::uint64_t budget, unsigned threads) {
  require(samples >= 1, "sample count must be at least 1");
  check_params(TreeParams{L, x, seed, budget});
  return replicate<std::uint64_t>(samples, threads, [&](std::size_t i) {
    return sample_theta_tree(TreeParams{L, x, derive_seed(seed, i), budget});
  });
}

ExistenceEstimate tree_existence_mc(int L, double x, std::uint64_t samples, std::uint64_t seed,
                                    std::uint64_t budget, unsigned threads) {
  require(samples >= 1, "sample count must be at least 1");
  check_params(TreeParams{L, x, seed, budget});
  // 0 = no path, 1 = path, 2 = budget exhausted
  const auto outcome = replicate<int>(samples, threads, [&](std::size_t i) {
    try {
      return tree_path_exists(TreeRun(TreeParams{L, x, derive_seed(seed, i), budget})) ? 1 : 0;
    } catch (const BudgetExceeded&) {
      return 2;
    }
  });
  ExistenceEstimate est;
  for (int o : outcome) {
    if (o == 2) {
      ++est.budget_hits;
    } else {
      ++est.samples;
      est.successes += static_cast<std::uint64_t>(o);
    }
  }
  if (est.samples > 0) {
    const double n = static_cast<double>(est.samples);
    est.estimate = static_cast<double>(est.successes) / n;
    est.std_error = est.samples > 1 ? std::sqrt(est.estimate * (1.0 - est.estimate) / (n - 1.0)) : 0.0;
  }
  return est;
}

}  // namespace pathscape
