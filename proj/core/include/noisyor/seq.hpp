#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "noisyor/distribution.hpp"
#include "noisyor/network.hpp"
#include "noisyor/sampler.hpp"

namespace noisyor {

/// A subnetwork equivalence query: a proposed induced subnetwork for the
/// target's outputs `outputs` (sorted). The candidate's outputs correspond
/// positionally to `outputs`; its inputs are only the ones relevant to them.
struct SeqQuery {
  std::vector<int> outputs;
  NoisyOrNetwork candidate;
};

/// Per-query statistical budget plus the consumed-resources counters.
struct SeqBudget {
  double alpha = 0;
  double delta_per_query = 0;
  std::size_t sample_size = 0;
};

/// Smallest N such that 2^subset_count_exponent * 2 * exp(-2 N (alpha/4)^2)
/// <= delta_per_query, i.e. every subset-zero frequency of a table over that
/// many outputs is within alpha/4 of its mean with probability >=
/// 1 - delta_per_query (Hoeffding + union bound).
std::size_t required_sample_size(double alpha, double delta_per_query,
                                 int subset_count_exponent);

/// Common oracle contract. ask() validates the query shape, enforces the
/// oracle's output cap, and maintains the budget counters; counters are
/// atomic so concurrent querying stays linearizable.
class SeqOracle {
 public:
  virtual ~SeqOracle() = default;

  bool ask(const SeqQuery& query);

  virtual int max_query_outputs() const = 0;

  /// Exact oracles never answer YES for two different candidates of one
  /// enumeration round, so callers may stop at the first YES; the
  /// sample-driven oracle is not exact.
  virtual bool exact() const { return true; }

  /// Mismatch score of the most recent ask(): 0 for a perfect match,
  /// +infinity for an exact-oracle NO, and the worst table deviation for the
  /// sample-driven oracle. Lets drivers prefer the closest accepted
  /// candidate. Meaningful for sequential querying only.
  double last_mismatch() const { return last_mismatch_; }

  std::uint64_t queries_asked() const { return queries_asked_.load(); }
  std::uint64_t samples_consumed() const { return samples_consumed_.load(); }
  /// Largest |outputs| seen so far; tests assert the k+1 query-size bound.
  int largest_query_seen() const { return largest_query_seen_.load(); }

 protected:
  /// How far the candidate is from the observed/derived truth.
  virtual double mismatch(const SeqQuery& query) = 0;
  /// Whether a mismatch score counts as YES; exact oracles accept only 0.
  virtual bool accepts(double score) const { return score == 0; }
  void consume_samples(std::uint64_t n) { samples_consumed_ += n; }

 private:
  std::atomic<std::uint64_t> queries_asked_{0};
  std::atomic<std::uint64_t> samples_consumed_{0};
  std::atomic<int> largest_query_seen_{0};
  double last_mismatch_ = 0;
};

/// Ground-truth oracle: YES iff the candidate is structurally equivalent to
/// the target's induced subnetwork. Simulation/testing only.
class StructuralSeqOracle : public SeqOracle {
 public:
  explicit StructuralSeqOracle(NoisyOrNetwork target);
  int max_query_outputs() const override { return target_.num_outputs(); }

 protected:
  double mismatch(const SeqQuery& query) override;

 private:
  NoisyOrNetwork target_;
};

/// Exact-distribution oracle: YES iff the candidate's subset-zero table at
/// the given bias equals the target's exactly. At a bad bias, or in a family
/// without unique polynomials, this may answer YES for structurally
/// different candidates; that is what distributional indistinguishability
/// means.
class DistributionalSeqOracle : public SeqOracle {
 public:
  DistributionalSeqOracle(NoisyOrNetwork target, BiasSetting bias,
                          int max_outputs);
  int max_query_outputs() const override { return max_outputs_; }

 protected:
  double mismatch(const SeqQuery& query) override;

 private:
  NoisyOrNetwork target_;
  BiasSetting bias_;
  int max_outputs_;
};

/// Sample-driven oracle: YES iff every empirical subset-zero frequency of
/// the data restricted to the query outputs is within alpha/2 of the
/// candidate's exact value. When the bias is alpha-good for the family and
/// every frequency is within alpha/4 of its mean, the answer matches the
/// structural ground truth.
class StatisticalSeqOracle : public SeqOracle {
 public:
  /// Reuse mode: one fixed observation set shared by all queries.
  StatisticalSeqOracle(const SampleSet& data, BiasSetting bias, SeqBudget budget,
                       int max_outputs);
  /// Reuse mode over a compacted observation set.
  StatisticalSeqOracle(const SampleSummary& summary, BiasSetting bias,
                       SeqBudget budget, int max_outputs);
  /// Fresh mode: draws budget.sample_size new target samples per query,
  /// deterministically from the given seed.
  StatisticalSeqOracle(NoisyOrNetwork target, BiasSetting bias, SeqBudget budget,
                       int max_outputs, std::uint64_t seed);

  int max_query_outputs() const override { return max_outputs_; }
  bool exact() const override { return false; }
  const SeqBudget& budget() const { return budget_; }

 protected:
  double mismatch(const SeqQuery& query) override;
  bool accepts(double score) const override { return score <= budget_.alpha / 2; }

 private:
  std::vector<double> reuse_table(const std::vector<int>& outputs);

  const SampleSet* data_ = nullptr;  // reuse mode without bins
  NoisyOrNetwork target_;            // fresh mode
  bool fresh_ = false;
  BiasSetting bias_;
  SeqBudget budget_;
  int max_outputs_;
  std::uint64_t seed_ = 0;
  std::atomic<std::uint64_t> fresh_queries_{0};
  // reuse mode: the draws binned by full output pattern (when narrow
  // enough), so per-query tables are O(2^n) marginalizations
  std::vector<std::uint64_t> full_bins_;
  std::uint64_t reuse_count_ = 0;
  // fallback cache of per-output-set tables
  std::map<std::vector<int>, std::vector<double>> table_cache_;
};

}  // namespace noisyor
