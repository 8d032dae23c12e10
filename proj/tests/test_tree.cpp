#include <cmath>

#include "doctest.h"
#include "pathscape/errors.hpp"
#include "pathscape/moments.hpp"
#include "pathscape/recursion.hpp"
#include "pathscape/rng.hpp"
#include "pathscape/stats.hpp"
#include "pathscape/tree.hpp"

using namespace pathscape;

namespace {

// Four children of the root; the open branches continue 0.59 -> 0.66 -> 0.81
// and 0.01 -> 0.22 -> 0.47, plus the dead end 0.90 -> 0.95.
TreeRun figure_tree() {
  return TreeRun::with_values(4, 0.0,
                              {{{0}, 0.59},
                               {{1}, 0.90},
                               {{2}, 0.01},
                               {{3}, 0.83},
                               {{0, 0}, 0.66},
                               {{0, 1}, 0.40},
                               {{0, 2}, 0.12},
                               {{1, 0}, 0.95},
                               {{1, 1}, 0.31},
                               {{1, 2}, 0.77},
                               {{2, 0}, 0.22},
                               {{3, 0}, 0.52},
                               {{3, 1}, 0.08},
                               {{3, 2}, 0.36},
                               {{0, 0, 0}, 0.81},
                               {{0, 0, 1}, 0.29},
                               {{1, 0, 0}, 0.44},
                               {{1, 0, 1}, 0.61},
                               {{2, 0, 0}, 0.47},
                               {{2, 0, 1}, 0.05}});
}

TreeParams params(int L, double x, std::uint64_t seed) { return TreeParams{L, x, seed}; }

}  // namespace

TEST_CASE("single bond") {
  CHECK(sample_theta_tree(params(1, 0.0, 1)) == 1);
  CHECK(sample_theta_tree(params(1, 0.999, 1)) == 1);
  CHECK(sample_theta_tree(params(1, 1.0, 1)) == 0);
  CHECK(tree_path_exists(TreeRun(params(1, 0.3, 1))));
}

TEST_CASE("small hand-built tree") {
  const auto run = figure_tree();
  CHECK(sample_theta_tree(run) == 2);
  CHECK(enumerate_tree_paths_oracle(run) == 2);
  CHECK(tree_path_exists(run));
  CHECK(theta_k_tree(run, 1) == doctest::Approx(3 * (0.41 * 0.41 + 0.1 * 0.1 + 0.99 * 0.99 + 0.17 * 0.17)).epsilon(1e-12));
  CHECK(std::abs(theta_k_tree(run, 1) - 3.56) < 0.005);
  CHECK(theta_k_tree(run, 2) == doctest::Approx(2.34).epsilon(1e-12));
  CHECK(theta_k_tree(run, 3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(alive_front(run, 1).nodes.size() == 4);
  CHECK(alive_front(run, 2).nodes.size() == 3);
  CHECK(alive_front(run, 3).nodes.size() == 2);
  CHECK(alive_front(run, 4).nodes.size() == 2);
}

TEST_CASE("realizations are reproducible") {
  const TreeRun a(params(6, 0.1, 42)), b(params(6, 0.1, 42)), c(params(6, 0.1, 43));
  const auto ca = a.child(a.child(a.root(), 2), 1);
  const auto cb = b.child(b.child(b.root(), 2), 1);
  const auto cc = c.child(c.child(c.root(), 2), 1);
  CHECK(ca.value == cb.value);
  CHECK(ca.digest == cb.digest);
  CHECK(ca.value != cc.value);
  CHECK(ca.level == 2);
  CHECK(a.child(a.child(a.child(a.child(a.child(a.child(a.root(), 0), 0), 0), 0), 0), 0).value == 1.0);
  CHECK_THROWS_AS(a.child(a.root(), 6), DomainError);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(TreeRun(params(0, 0.0, 1)), DomainError);
  CHECK_THROWS_AS(TreeRun(params(1001, 0.0, 1)), DomainError);
  CHECK_THROWS_AS(TreeRun(params(3, -0.1, 1)), DomainError);
  CHECK_THROWS_AS(theta_k_tree(params(5, 0.0, 1), 5), DomainError);
  CHECK_THROWS_AS(enumerate_tree_paths_oracle(TreeRun(params(10, 0.0, 1))), DomainError);
}

TEST_CASE("pruned search equals full enumeration") {
  for (int L = 1; L <= 7; ++L) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const TreeRun run(params(L, 0.03 * double(s % 4), derive_seed(L, s)));
      const auto theta = sample_theta_tree(run);
      REQUIRE(theta == enumerate_tree_paths_oracle(run));
      REQUIRE(tree_path_exists(run) == (theta > 0));
    }
  }
}

TEST_CASE("budget exhaustion is an error, not a zero") {
  TreeParams p{20, 0.0, 5, 1000};
  CHECK_THROWS_AS(sample_theta_tree(p), BudgetExceeded);
  CHECK_THROWS_AS(alive_front(TreeRun(p), 12), BudgetExceeded);
  CHECK_THROWS_AS(sample_theta_tree_mc(20, 0.0, 4, 1, 1000, 1), BudgetExceeded);
  // a blocked root costs one unit and returns zero
  TreeParams blocked{20, 1.0, 5, 2};
  CHECK(sample_theta_tree(blocked) == 0);
}

TEST_CASE("theta_0 is the first moment formula") {
  for (double x : {0.0, 0.1, 0.5}) {
    CHECK(theta_k_tree(params(9, x, 3), 0) == doctest::Approx(expected_paths(9, x)).epsilon(1e-14));
  }
}

TEST_CASE("raising the root value never adds paths") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::uint64_t prev = UINT64_MAX;
    for (double x : {0.0, 0.05, 0.2, 0.5, 0.9}) {
      const auto now = sample_theta_tree(params(8, x, derive_seed(11, s)));
      REQUIRE(now <= prev);
      prev = now;
    }
  }
}

TEST_CASE("Monte Carlo first and second moments") {
  struct Case {
    int L;
    double x;
  };
  for (const Case c : {Case{8, 0.2}, Case{12, 0.1}}) {
    const auto t = sample_theta_tree_mc(c.L, c.x, 20000, 100 + c.L, kDefaultNodeBudget, 1);
    std::vector<double> v(t.begin(), t.end()), sq;
    for (double a : v) sq.push_back(a * a);
    const auto m = moment_summary(v);
    const auto m2 = moment_summary(sq);
    CHECK(within_se(m.mean, expected_paths(c.L, c.x), m.se_mean));
    CHECK(within_se(m2.mean, second_moment_tree(c.L, c.x), m2.se_mean));
  }
}

TEST_CASE("theta_k is a martingale in k") {
  constexpr int L = 10, n = 20000;
  const double x = 0.1;
  for (int k : {1, 3, 6, 9}) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = theta_k_tree(params(L, x, derive_seed(300 + k, i)), k);
    const auto m = moment_summary(v);
    CHECK(within_se(m.mean, expected_paths(L, x), m.se_mean));
  }
}

TEST_CASE("conditional variance matches E[theta^2] - E[theta_k^2]") {
  constexpr int L = 8, k = 2, n = 40000;
  const double x = 0.1;
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) {
    const double t = theta_k_tree(params(L, x, derive_seed(77, i)), k);
    sq[i] = t * t;
  }
  const auto m = moment_summary(sq);
  CHECK(within_se(m.mean, second_moment_tree(L, x) - cond_var_tree(L, x, k), m.se_mean));
}

TEST_CASE("existence probability against the recursion") {
  const auto est = tree_existence_mc(14, 0.1, 4000, 9, kDefaultNodeBudget, 1);
  CHECK(est.budget_hits == 0);
  CHECK(est.samples == 4000);
  CHECK(within_se(est.estimate, existence_prob(14, 1024).at(0.1), est.std_error));

  const auto none = tree_existence_mc(5, 1.0, 100, 9, kDefaultNodeBudget, 1);
  CHECK(none.estimate == 0.0);
  const auto all = tree_existence_mc(1, 0.5, 100, 9, kDefaultNodeBudget, 1);
  CHECK(all.estimate == 1.0);

  const auto capped = tree_existence_mc(22, 0.0, 5, 9, 50, 1);
  CHECK(capped.budget_hits + capped.samples == 5);
}

TEST_CASE("replicas do not depend on the thread count") {
  CHECK(sample_theta_tree_mc(10, 0.1, 500, 4, kDefaultNodeBudget, 1) ==
        sample_theta_tree_mc(10, 0.1, 500, 4, kDefaultNodeBudget, 4));
}
