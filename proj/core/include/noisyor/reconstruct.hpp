#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisyor/network.hpp"
#include "noisyor/sampler.hpp"
#include "noisyor/seq.hpp"

namespace noisyor {

enum class AlgorithmVariant { kSimple, kBasicBlock };

struct ReconstructionConfig {
  int num_inputs = 0;   // m is given configuration; inputs never seen
                        // connected are emitted as disconnected padding
  int num_outputs = 0;  // n
  NetworkFamily family;
  Rational bias;  // known input bias; used by the sample-driven path
  double alpha = 0;
  double delta = 0;
  std::uint64_t max_queries = 0;  // 0: unlimited
  AlgorithmVariant variant = AlgorithmVariant::kBasicBlock;
};

struct OutputTrace {
  int output = 0;
  int block_rounds = 0;
  std::uint64_t candidates_tried = 0;
  std::vector<std::string> committed_edges;  // "input@weight" per new edge
  std::vector<std::string> notes;
};

struct ReconstructionReport {
  NoisyOrNetwork recovered;
  std::uint64_t seq_count = 0;
  std::uint64_t samples_used = 0;
  int largest_query_outputs = 0;
  std::vector<OutputTrace> trace;
  std::vector<std::string> warnings;
  double wall_time_ms = 0;
  /// True when the family carries the reconstruction guarantee
  /// (one-weight-value); false marks a best-effort run.
  bool guaranteed_regime = false;
};

/// Worst-case SEQ count of the basic-block algorithm: m * n * k^(2k) * l^k.
std::uint64_t worst_case_query_bound(int num_inputs, int num_outputs, int fan_in_k,
                                     int num_weight_values);

class NoCandidateAccepted : public std::runtime_error {
 public:
  explicit NoCandidateAccepted(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised when accepted answers imply more connections than a block has
/// inputs — a statistical-oracle failure surfaced instead of repaired.
class InconsistentCounts : public std::runtime_error {
 public:
  explicit InconsistentCounts(const std::string& what)
      : std::runtime_error(what) {}
};

class DegenerateData : public std::runtime_error {
 public:
  explicit DegenerateData(const std::string& what) : std::runtime_error(what) {}
};

class QueryBudgetExceeded : public std::runtime_error {
 public:
  explicit QueryBudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// Baseline incremental recovery: wires each output in turn by querying full
/// prefix networks. Queries grow to n outputs, so this variant is only
/// meant for exact oracles at small sizes.
ReconstructionReport reconstruct_simple(SeqOracle& oracle,
                                        const ReconstructionConfig& cfg);

/// Block-based recovery: each output is wired by resolving every named
/// basic block inside the subnetwork of its <= k naming outputs, then a
/// single-output round that pins connections from previously unseen inputs.
/// No query exceeds k+1 outputs.
ReconstructionReport reconstruct(SeqOracle& oracle, const ReconstructionConfig& cfg);

/// Sample-only learning: sizes the per-query budget from (alpha, delta),
/// runs the block algorithm against the statistical oracle over the given
/// observations, and labels the report with the guarantee regime.
ReconstructionReport end_to_end_learn(const SampleSet& samples,
                                      const ReconstructionConfig& cfg);

/// Same, over a compacted observation set (large N without materialized
/// draws).
ReconstructionReport end_to_end_learn(const SampleSummary& summary,
                                      const ReconstructionConfig& cfg);

}  // namespace noisyor
