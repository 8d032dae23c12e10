#include "pathscape/hypercube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "pathscape/errors.hpp"
#include "pathscape/parallel.hpp"
#include "pathscape/rng.hpp"

namespace pathscape {
namespace {

void check_origin(double x) {
  require(x >= 0.0 && x <= 1.0, "origin value must lie in [0,1]");
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw CountOverflow("open-path count exceeds 64 bits");
  return out;
}

// n[mask] for every mask with popcount <= max_level, counting open paths
// from the origin.  Entries above max_level are left at zero.
std::vector<std::uint64_t> counts_from_origin(const HypercubeLandscape& land, int max_level) {
  const std::size_t size = land.fitness.size();
  std::vector<std::uint64_t> n(size, 0);
  n[0] = 1;
  const auto& f = land.fitness;
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    if (std::popcount(mask) > max_level) continue;
    const double v = f[mask];
    std::uint64_t total = 0;
    for (std::uint32_t bits = mask; bits; bits &= bits - 1) {
      const std::uint32_t prev = mask ^ (bits & -bits);
      if (n[prev] != 0 && f[prev] < v) total = checked_add(total, n[prev]);
    }
    n[mask] = total;
  }
  return n;
}

// m[mask] for popcount >= dim - max_level: open paths from mask to the top.
std::vector<std::uint64_t> counts_to_top(const HypercubeLandscape& land, int max_level) {
  const std::size_t size = land.fitness.size();
  const std::uint32_t top = land.top();
  std::vector<std::uint64_t> m(size, 0);
  m[top] = 1;
  const auto& f = land.fitness;
  for (std::uint32_t mask = top; mask-- > 0;) {
    if (land.dim - std::popcount(mask) > max_level) continue;
    const double v = f[mask];
    std::uint64_t total = 0;
    for (std::uint32_t free = top & ~mask; free; free &= free - 1) {
      const std::uint32_t next = mask | (free & -free);
      if (m[next] != 0 && v < f[next]) total = checked_add(total, m[next]);
    }
    m[mask] = total;
  }
  return m;
}

void check_half_level(const HypercubeLandscape& land, int k) {
  require(k >= 0 && 2 * k < land.dim, "theta_k on the hypercube needs 0 <= 2k < L");
}

}  // namespace

HypercubeLandscape generate_hypercube(int L, double x, std::uint64_t seed, int dim_cap) {
  require(L >= 1 && L <= dim_cap, "dimension must lie in [1, " + std::to_string(dim_cap) + "]");
  check_origin(x);
  HypercubeLandscape land{L, x, std::vector<double>(std::size_t{1} << L)};
  SplitMix64 rng(seed);
  for (std::size_t mask = 1; mask + 1 < land.fitness.size(); ++mask) land.fitness[mask] = rng.uniform();
  land.fitness.front() = x;
  land.fitness.back() = 1.0;
  return land;
}

HypercubeLandscape hypercube_from_values(int L, double x, std::vector<double> fitness) {
  require(L >= 1 && L <= 30, "dimension out of range");
  check_origin(x);
  require(fitness.size() == (std::size_t{1} << L), "fitness array must have 2^L entries");
  for (double v : fitness) require(v >= 0.0 && v <= 1.0, "fitness values must lie in [0,1]");
  fitness.front() = x;
  fitness.back() = 1.0;
  return HypercubeLandscape{L, x, std::move(fitness)};
}

std::uint64_t count_open_paths(const HypercubeLandscape& land) {
  return counts_from_origin(land, land.dim)[land.top()];
}

bool path_exists(const HypercubeLandscape& land) {
  const std::uint32_t top = land.top();
  const auto& f = land.fitness;
  // A node is marked once it has been entered; a marked node either leads to
  // the top (and the search has ended) or is a dead end.
  std::vector<bool> seen(land.fitness.size(), false);
  std::vector<std::uint32_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::uint32_t node = stack.back();
    stack.pop_back();
    if (node == top) return true;
    for (std::uint32_t free = top & ~node; free; free &= free - 1) {
      const std::uint32_t next = node | (free & -free);
      if (!seen[next] && f[node] < f[next]) {
        seen[next] = true;
        stack.push_back(next);
      }
    }
  }
  return false;
}

LevelCounts level_counts(const HypercubeLandscape& land, int k, bool from_top) {
  require(k >= 0 && k <= land.dim, "level must lie in [0, L]");
  LevelCounts out{k, from_top, {}, {}};
  const auto counts = from_top ? counts_to_top(land, k) : counts_from_origin(land, k);
  const int level = from_top ? land.dim - k : k;
  for (std::uint32_t mask = 0; mask < counts.size(); ++mask) {
    if (std::popcount(mask) == level && counts[mask] != 0) {
      out.nodes.push_back(mask);
      out.counts.push_back(counts[mask]);
    }
  }
  return out;
}

double theta_k_hypercube(const HypercubeLandscape& land, int k) {
  check_half_level(land, k);
  const LevelCounts low = level_counts(land, k, false);
  const LevelCounts high = level_counts(land, k, true);
  const int gap = land.dim - 2 * k;
  const auto& f = land.fitness;
  double total = 0.0;
  for (std::size_t i = 0; i < low.nodes.size(); ++i) {
    const std::uint32_t sigma = low.nodes[i];
    const double xs = f[sigma];
    double inner = 0.0;
    for (std::size_t j = 0; j < high.nodes.size(); ++j) {
      const std::uint32_t tau = high.nodes[j];
      if ((sigma & ~tau) != 0) continue;
      // 1 - y_τ - x_σ with y_τ = 1 - f_τ
      const double room = f[tau] - xs;
      if (room < 0.0) continue;
      inner += static_cast<double>(high.counts[j]) * std::pow(room, gap - 1);
    }
    total += static_cast<double>(low.counts[i]) * inner;
  }
  return gap * total;
}

double theta_k_factorized(const HypercubeLandscape& land, int k) {
  check_half_level(land, k);
  const LevelCounts low = level_counts(land, k, false);
  const LevelCounts high = level_counts(land, k, true);
  const int e = land.dim - 2 * k - 1;
  double a = 0.0;
  for (std::size_t i = 0; i < low.nodes.size(); ++i)
    a += static_cast<double>(low.counts[i]) * std::pow(1.0 - land.fitness[low.nodes[i]], e);
  double b = 0.0;
  for (std::size_t j = 0; j < high.nodes.size(); ++j)
    b += static_cast<double>(high.counts[j]) * std::pow(land.fitness[high.nodes[j]], e);
  return a * b;
}

std::uint64_t enumerate_paths_oracle(const HypercubeLandscape& land) {
  require(land.dim <= 8, "path enumeration is limited to L <= 8");
  std::vector<int> order(land.dim);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t count = 0;
  do {
    std::uint32_t node = 0;
    bool open = true;
    for (int bit : order) {
      const std::uint32_t next = node | (std::uint32_t{1} << bit);
      if (!(land.fitness[node] < land.fitness[next])) {
        open = false;
        break;
      }
      node = next;
    }
    count += open ? 1 : 0;
  } while (std::next_permutation(order.begin(), order.end()));
  return count;
}

std::vector<std::uint64_t> sample_theta_hypercube(int L, double x, std::uint64_t samples, std::uint64_t seed,
                                                  unsigned threads) {
  require(samples >= 1, "sample count must be at least 1");
  return replicate<std::uint64_t>(samples, threads, [&](std::size_t i) {
    return count_open_paths(generate_hypercube(L, x, derive_seed(seed, i)));
  });
}

HypercubeLandscape permute_coordinates(const HypercubeLandscape& land, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == land.dim, "permutation length must equal L");
  std::vector<int> check(perm);
  std::sort(check.begin(), check.end());
  for (int i = 0; i < land.dim; ++i) require(check[i] == i, "not a permutation");
  HypercubeLandscape out{land.dim, land.origin_value, std::vector<double>(land.fitness.size())};
  for (std::uint32_t mask = 0; mask < land.fitness.size(); ++mask) {
    std::uint32_t image = 0;
    for (int i = 0; i < land.dim; ++i)
      if (mask >> i & 1u) image |= std::uint32_t{1} << perm[i];
    out.fitness[image] = land.fitness[mask];
  }
  return out;
}

}  // namespace pathscape
