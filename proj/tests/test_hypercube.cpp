#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "pathscape/errors.hpp"
#include "pathscape/hypercube.hpp"
#include "pathscape/moments.hpp"
#include "pathscape/rng.hpp"
#include "pathscape/stats.hpp"

using namespace pathscape;

namespace {

HypercubeLandscape square(double x, double v01, double v10) {
  return hypercube_from_values(2, x, {0.0, v01, v10, 1.0});
}

// All ordered k-prefixes of distinct coordinates, counted per end node.
std::vector<std::uint64_t> prefix_counts_brute(const HypercubeLandscape& land, int k) {
  std::vector<std::uint64_t> counts(land.fitness.size(), 0);
  std::vector<int> bits(land.dim);
  std::iota(bits.begin(), bits.end(), 0);
  // every permutation of L bits; a prefix is counted once per (L-k)! completions
  std::uint64_t completions = 1;
  for (int i = 2; i <= land.dim - k; ++i) completions *= i;
  do {
    std::uint32_t node = 0;
    bool open = true;
    for (int j = 0; j < k && open; ++j) {
      const std::uint32_t next = node | (1u << bits[j]);
      open = land.fitness[node] < land.fitness[next];
      node = next;
    }
    if (open) counts[node] += 1;
  } while (std::next_permutation(bits.begin(), bits.end()));
  for (auto& c : counts) c /= completions;
  return counts;
}

std::vector<std::uint64_t> suffix_counts_brute(const HypercubeLandscape& land, int k) {
  std::vector<std::uint64_t> counts(land.fitness.size(), 0);
  std::vector<int> bits(land.dim);
  std::iota(bits.begin(), bits.end(), 0);
  std::uint64_t completions = 1;
  for (int i = 2; i <= land.dim - k; ++i) completions *= i;
  const std::uint32_t top = land.top();
  do {
    // walk down from the top clearing bits; values must decrease
    std::uint32_t node = top;
    bool open = true;
    for (int j = 0; j < k && open; ++j) {
      const std::uint32_t next = node & ~(1u << bits[j]);
      open = land.fitness[next] < land.fitness[node];
      node = next;
    }
    if (open) counts[node] += 1;
  } while (std::next_permutation(bits.begin(), bits.end()));
  for (auto& c : counts) c /= completions;
  return counts;
}

double lfact(int n) { return std::lgamma(n + 1.0); }

}  // namespace

TEST_CASE("corners are fixed and generation is reproducible") {
  const auto one = generate_hypercube(1, 0.0, 99);
  CHECK(one.fitness == std::vector<double>{0.0, 1.0});

  const auto a = generate_hypercube(3, 0.5, 7);
  const auto b = generate_hypercube(3, 0.5, 7);
  const auto c = generate_hypercube(3, 0.5, 8);
  CHECK(a.fitness == b.fitness);
  CHECK(a.fitness != c.fitness);
  CHECK(a.fitness.front() == 0.5);
  CHECK(a.fitness.back() == 1.0);
  for (double v : a.fitness) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("interior values follow the stream in ascending bitmask order") {
  const auto land = generate_hypercube(4, 0.1, 1234);
  SplitMix64 rng(1234);
  for (std::size_t mask = 1; mask + 1 < land.fitness.size(); ++mask) CHECK(land.fitness[mask] == rng.uniform());
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(generate_hypercube(0, 0.0, 1), DomainError);
  CHECK_THROWS_AS(generate_hypercube(25, 0.0, 1), DomainError);
  CHECK_THROWS_AS(generate_hypercube(3, 1.5, 1), DomainError);
  const auto land = generate_hypercube(9, 0.0, 1);
  CHECK_THROWS_AS(enumerate_paths_oracle(land), DomainError);
  CHECK_THROWS_AS(level_counts(land, 10, false), DomainError);
  CHECK_THROWS_AS(theta_k_hypercube(generate_hypercube(6, 0.0, 1), 3), DomainError);
}

TEST_CASE("hand-enumerated squares") {
  CHECK(count_open_paths(square(0.0, 0.3, 0.7)) == 2);
  CHECK(count_open_paths(square(0.5, 0.3, 0.7)) == 1);
  CHECK(enumerate_paths_oracle(square(0.0, 0.3, 0.7)) == 2);
  CHECK(enumerate_paths_oracle(square(0.5, 0.3, 0.7)) == 1);
  // ties block
  CHECK(count_open_paths(square(0.3, 0.3, 0.3)) == 0);
}

TEST_CASE("levels increasing along every path gives L! paths") {
  std::vector<double> f(8);
  for (std::uint32_t m = 0; m < 8; ++m) f[m] = 0.1 * std::popcount(m) + 0.01 * m;
  const auto land = hypercube_from_values(3, 0.0, f);
  CHECK(count_open_paths(land) == 6);
  CHECK(enumerate_paths_oracle(land) == 6);
}

TEST_CASE("DP equals enumeration of all L! orders") {
  for (int L = 2; L <= 7; ++L) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto land = generate_hypercube(L, 0.0, derive_seed(L, s));
      REQUIRE(count_open_paths(land) == enumerate_paths_oracle(land));
    }
  }
}

TEST_CASE("path_exists agrees with the count") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const int L = 1 + int(s % 10);
    const auto land = generate_hypercube(L, 0.05 * double(s % 7), derive_seed(77, s));
    REQUIRE(path_exists(land) == (count_open_paths(land) >= 1));
  }
  CHECK(path_exists(generate_hypercube(1, 0.2, 1)));
  // every interior value below x blocks the first step
  std::vector<double> f(16, 0.1);
  CHECK_FALSE(path_exists(hypercube_from_values(4, 0.5, f)));
}

TEST_CASE("raising the origin value never adds paths") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto land = generate_hypercube(8, 0.0, derive_seed(5, s));
    std::uint64_t prev = count_open_paths(land);
    for (double x : {0.1, 0.3, 0.6, 0.9}) {
      land.fitness[0] = x;
      land.origin_value = x;
      const std::uint64_t now = count_open_paths(land);
      REQUIRE(now <= prev);
      prev = now;
    }
  }
}

TEST_CASE("relabeling coordinates leaves the count unchanged") {
  std::mt19937_64 gen(3);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto land = generate_hypercube(9, 0.0, derive_seed(6, s));
    std::vector<int> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    REQUIRE(count_open_paths(permute_coordinates(land, perm)) == count_open_paths(land));
  }
}

TEST_CASE("overflow is reported, not wrapped") {
  for (int L : {20, 21}) {
    std::vector<double> f(std::size_t{1} << L);
    for (std::uint32_t m = 0; m < f.size(); ++m) f[m] = double(std::popcount(m)) / (L + 1);
    const auto land = hypercube_from_values(L, 0.0, std::move(f));
    if (L == 20) {
      CHECK(count_open_paths(land) == 2432902008176640000ULL);  // 20!
    } else {
      CHECK_THROWS_AS(count_open_paths(land), CountOverflow);
    }
  }
}

TEST_CASE("level counts") {
  const auto land = generate_hypercube(6, 0.3, 42);
  const auto zero = level_counts(land, 0, false);
  CHECK(zero.nodes == std::vector<std::uint32_t>{0});
  CHECK(zero.counts == std::vector<std::uint64_t>{1});

  const auto one = level_counts(land, 1, false);
  std::size_t expected = 0;
  for (int b = 0; b < 6; ++b) expected += land.fitness[1u << b] > 0.3;
  CHECK(one.nodes.size() == expected);
  for (std::size_t i = 0; i < one.nodes.size(); ++i) {
    CHECK(land.fitness[one.nodes[i]] > 0.3);
    CHECK(one.counts[i] == 1);
  }

  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto l6 = generate_hypercube(6, 0.0, derive_seed(9, s));
    for (int k = 0; k <= 6; ++k) {
      const auto brute = prefix_counts_brute(l6, k);
      const auto dp = level_counts(l6, k, false);
      std::vector<std::uint64_t> dense(l6.fitness.size(), 0);
      for (std::size_t i = 0; i < dp.nodes.size(); ++i) {
        dense[dp.nodes[i]] = dp.counts[i];
        REQUIRE(dp.counts[i] <= std::uint64_t(std::tgamma(k + 1.0) + 0.5));
      }
      REQUIRE(dense == brute);
      const auto brute_top = suffix_counts_brute(l6, k);
      const auto dp_top = level_counts(l6, k, true);
      std::vector<std::uint64_t> dense_top(l6.fitness.size(), 0);
      for (std::size_t i = 0; i < dp_top.nodes.size(); ++i) dense_top[dp_top.nodes[i]] = dp_top.counts[i];
      REQUIRE(dense_top == brute_top);
    }
  }
}

TEST_CASE("theta_k boundary values") {
  for (double x : {0.0, 0.2, 0.7}) {
    const auto land = generate_hypercube(9, x, 11);
    CHECK(theta_k_hypercube(land, 0) == doctest::Approx(9 * std::pow(1 - x, 8)).epsilon(1e-14));
    CHECK(theta_k_factorized(land, 0) == doctest::Approx(std::pow(1 - x, 8)).epsilon(1e-14));
  }
  // level-1 values all above every level-(L-1) value: indicator kills all terms
  std::vector<double> f(32);
  for (std::uint32_t m = 0; m < 32; ++m) {
    const int c = std::popcount(m);
    f[m] = c == 1 ? 0.9 : (c == 4 ? 0.5 : 0.7);
  }
  const auto land = hypercube_from_values(5, 0.0, f);
  CHECK(theta_k_hypercube(land, 1) == 0.0);
}

TEST_CASE("theta_k never exceeds L times the factorized form") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const int L = 5 + int(s % 8);
    const auto land = generate_hypercube(L, 0.02 * double(s % 5), derive_seed(13, s));
    for (int k = 0; 2 * k < L; ++k)
      REQUIRE(theta_k_hypercube(land, k) <= L * theta_k_factorized(land, k) * (1 + 1e-12) + 1e-300);
  }
}

TEST_CASE("tower property: E[theta_k] = L(1-x)^{L-1}") {
  constexpr int L = 12, k = 2, n = 10000;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = theta_k_hypercube(generate_hypercube(L, 0.0, derive_seed(2024, i)), k);
  const auto m = moment_summary(v);
  CHECK(within_se(m.mean, 12.0, m.se_mean));
}

TEST_CASE("factorized form has the closed-form mean") {
  constexpr int L = 14, k = 2, n = 10000;
  const double x = 1.0 / L;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = theta_k_factorized(generate_hypercube(L, x, derive_seed(2025, i)), k);
  const auto m = moment_summary(v);
  // one side: L!/(L-k)! prefixes, each open with weight (1-x)^{L-k-1} m!/(m+k)!, m = L-2k-1
  const double log_c = lfact(L) + lfact(L - 2 * k - 1) - lfact(L - k) - lfact(L - k - 1);
  const double expected = std::exp(2 * log_c) * std::pow(1 - x, L - k - 1);
  CHECK(expected == doctest::Approx(1.2124).epsilon(1e-3));
  CHECK(within_se(m.mean, expected, m.se_mean));
}

TEST_CASE("Monte Carlo mean of theta on the hypercube") {
  const auto t = sample_theta_hypercube(12, 0.1, 20000, 555, 1);
  std::vector<double> v(t.begin(), t.end());
  const auto m = moment_summary(v);
  CHECK(within_se(m.mean, expected_paths(12, 0.1), m.se_mean));
  CHECK(sample_theta_hypercube(10, 0.1, 300, 8, 1) == sample_theta_hypercube(10, 0.1, 300, 8, 3));
}
