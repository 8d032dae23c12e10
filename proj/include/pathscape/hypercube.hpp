#pragma once

// House-of-Cards landscapes on {0,1}^L.
//
// A node is a bitmask; its level is the popcount.  A path flips one zero bit
// to one per step and is open when the node values strictly increase along
// it.  Ties block.

#include <cstdint>
#include <vector>

namespace pathscape {

inline constexpr int kDefaultDimCap = 24;

struct HypercubeLandscape {
  int dim = 0;
  double origin_value = 0.0;
  std::vector<double> fitness;  // indexed by bitmask, size 2^dim

  std::uint32_t top() const noexcept { return (std::uint32_t{1} << dim) - 1; }
};

/// Interior values are consumed from SplitMix64(seed) in ascending bitmask
/// order, one draw per node 1 .. 2^L-2.  That order is part of the
/// reproducibility contract.
HypercubeLandscape generate_hypercube(int L, double x, std::uint64_t seed,
                                      int dim_cap = kDefaultDimCap);

/// Builds a landscape from explicit values.  `fitness` must have 2^L entries;
/// the two corners are overwritten with x and 1.
HypercubeLandscape hypercube_from_values(int L, double x, std::vector<double> fitness);

/// Θ: number of open paths from the origin to the top corner.
/// Throws CountOverflow if the count leaves 64 bits.
std::uint64_t count_open_paths(const HypercubeLandscape& land);

/// Depth-first search that stops at the first complete open path.
bool path_exists(const HypercubeLandscape& land);

struct LevelCounts {
  int level = 0;          // k
  bool from_top = false;  // true: nodes at level L-k counted from the top
  std::vector<std::uint32_t> nodes;
  std::vector<std::uint64_t> counts;  // n_σ (or m_τ), parallel to nodes
};

/// From the origin: n_σ for |σ| = k, the number of open paths 0…0 → σ.
/// From the top: m_τ for |τ| = L-k, the number of open paths τ → 1…1
/// (equivalently paths from the top in the values y = 1 - fitness).
/// Only nodes with a nonzero count are listed, in ascending bitmask order.
LevelCounts level_counts(const HypercubeLandscape& land, int k, bool from_top);

/// Θ_k: expectation of Θ given the values on the first k and last k levels.
/// Requires 0 <= 2k < L.
double theta_k_hypercube(const HypercubeLandscape& land, int k);

/// (Σ_σ n_σ (1-x_σ)^{L-2k-1}) · (Σ_τ m_τ (1-y_τ)^{L-2k-1}).  Bounds
/// theta_k_hypercube / L from above.
double theta_k_factorized(const HypercubeLandscape& land, int k);

/// Reference count by walking all L! coordinate orders.  L <= 8.
std::uint64_t enumerate_paths_oracle(const HypercubeLandscape& land);

/// Θ for `samples` independent landscapes; replica i is generated from
/// derive_seed(seed, i).  The result is in replica order.
std::vector<std::uint64_t> sample_theta_hypercube(int L, double x, std::uint64_t samples, std::uint64_t seed,
                                                  unsigned threads);

/// The same landscape with coordinates relabeled: bit i of a node moves to
/// bit perm[i].
HypercubeLandscape permute_coordinates(const HypercubeLandscape& land,
                                       const std::vector<int>& perm);

}  // namespace pathscape
