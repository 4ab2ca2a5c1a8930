#pragma once

// Shared test scaffolding: seeded generators plus the brute-force oracles the
// assertions are frozen against. Everything here is deliberately independent
// of the library's own algorithms (permutation search instead of signature
// multisets, pairwise grouping instead of map-based partitioning).

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "noisyor/distribution.hpp"
#include "noisyor/network.hpp"
#include "noisyor/rng.hpp"

namespace noisyor::testing {

/// mpq_class(a, b) does not reduce; every computed fraction goes through
/// here so exact comparisons see canonical forms.
inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::vector<Rational> weight_pool() {
  return {Rational(0),     Rational(1, 4), Rational(1, 3), Rational(1, 2),
          Rational(3, 5),  Rational(2, 3), Rational(3, 4), Rational(5, 6)};
}

/// Random family with fan-in <= max_k and 1..max_l weight values from the
/// pool, all tags general unless forced.
inline NetworkFamily random_family(SplitMix64& rng, int max_k, int max_l,
                                   Subclass subclass = Subclass::kGeneral) {
  NetworkFamily fam;
  fam.fan_in_k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_k)));
  const auto pool = weight_pool();
  const int l = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_l)));
  std::vector<int> picks(pool.size());
  std::iota(picks.begin(), picks.end(), 0);
  for (int t = 0; t < l; ++t) {
    std::swap(picks[t], picks[t + static_cast<int>(rng.below(picks.size() - t))]);
  }
  picks.resize(static_cast<size_t>(l));
  std::sort(picks.begin(), picks.end());
  for (int idx : picks) fam.weight_values.push_back(pool[static_cast<size_t>(idx)]);
  fam.subclass = subclass;
  if (subclass == Subclass::kOneWeightValue) fam.weight_values.resize(1);
  if (subclass == Subclass::kTwoValueWeakStrong && fam.weight_values.size() != 2) {
    fam.weight_values = {pool[1], pool[6]};
  }
  return fam;
}

/// Exhaustive permutation search; the independent ground truth for
/// structural equivalence at m <= 8.
inline bool equivalent_by_permutation_search(const NoisyOrNetwork& a,
                                             const NoisyOrNetwork& b) {
  if (a.num_inputs() != b.num_inputs() || a.num_outputs() != b.num_outputs()) {
    return false;
  }
  const int m = a.num_inputs();
  std::vector<int> perm(static_cast<size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool match = true;
    for (int i = 0; i < m && match; ++i) {
      match = compare_signatures(a.input_signature(i),
                                 b.input_signature(perm[static_cast<size_t>(i)])) == 0;
    }
    if (match) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Quadratic pairwise grouping; the independent ground truth for basic
/// blocks.
inline std::vector<std::vector<int>> blocks_by_pairwise_comparison(
    const NoisyOrNetwork& net) {
  const int m = net.num_inputs();
  std::vector<int> assigned(static_cast<size_t>(m), -1);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < m; ++i) {
    if (assigned[static_cast<size_t>(i)] >= 0) continue;
    groups.push_back({i});
    assigned[static_cast<size_t>(i)] = static_cast<int>(groups.size()) - 1;
    for (int t = i + 1; t < m; ++t) {
      if (assigned[static_cast<size_t>(t)] >= 0) continue;
      if (compare_signatures(net.input_signature(i), net.input_signature(t)) == 0) {
        groups.back().push_back(t);
        assigned[static_cast<size_t>(t)] = assigned[static_cast<size_t>(i)];
      }
    }
  }
  return groups;
}

/// Marginal of a brute-force joint: probability that every output in Y is 0.
inline Rational joint_marginal_all_zero(const std::vector<Rational>& joint,
                                        const std::vector<int>& Y) {
  std::uint32_t mask = 0;
  for (int j : Y) mask |= std::uint32_t{1} << j;
  Rational total(0);
  for (size_t pattern = 0; pattern < joint.size(); ++pattern) {
    if ((pattern & mask) == 0) total += joint[pattern];
  }
  return total;
}

inline std::vector<int> random_sorted_subset(SplitMix64& rng, int n, int max_size) {
  std::vector<int> all(static_cast<size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  const int size = static_cast<int>(rng.below(static_cast<std::uint64_t>(
      std::min(max_size, n) + 1)));
  for (int t = 0; t < size; ++t) {
    std::swap(all[static_cast<size_t>(t)],
              all[static_cast<size_t>(t) + rng.below(all.size() - t)]);
  }
  all.resize(static_cast<size_t>(size));
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<int> all_outputs(const NoisyOrNetwork& net) {
  std::vector<int> outputs(static_cast<size_t>(net.num_outputs()));
  std::iota(outputs.begin(), outputs.end(), 0);
  return outputs;
}

}  // namespace noisyor::testing
