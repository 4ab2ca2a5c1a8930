#include "noisyor/seq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace noisyor {

namespace {
constexpr double kNoMatch = std::numeric_limits<double>::infinity();
}

std::size_t required_sample_size(double alpha, double delta_per_query,
                                 int subset_count_exponent) {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be > 0");
  if (!(delta_per_query > 0 && delta_per_query < 1)) {
    throw std::invalid_argument("delta_per_query must lie in (0,1)");
  }
  if (subset_count_exponent < 0) {
    throw std::invalid_argument("subset count exponent must be >= 0");
  }
  const double n = (8.0 / (alpha * alpha)) *
                   (std::log(2.0) * (subset_count_exponent + 1) -
                    std::log(delta_per_query));
  return static_cast<std::size_t>(std::ceil(n));
}

bool SeqOracle::ask(const SeqQuery& query) {
  if (query.outputs.empty()) throw std::invalid_argument("empty query output set");
  for (size_t t = 0; t < query.outputs.size(); ++t) {
    if (t > 0 && query.outputs[t] <= query.outputs[t - 1]) {
      throw std::invalid_argument("query outputs must be sorted and unique");
    }
  }
  if (static_cast<int>(query.outputs.size()) != query.candidate.num_outputs()) {
    throw std::invalid_argument("candidate outputs must match the query set");
  }
  if (static_cast<int>(query.outputs.size()) > max_query_outputs()) {
    throw std::invalid_argument("query exceeds the oracle's output cap");
  }
  ++queries_asked_;
  int seen = largest_query_seen_.load();
  const int now = static_cast<int>(query.outputs.size());
  while (seen < now && !largest_query_seen_.compare_exchange_weak(seen, now)) {
  }
  last_mismatch_ = mismatch(query);
  return accepts(last_mismatch_);
}

StructuralSeqOracle::StructuralSeqOracle(NoisyOrNetwork target)
    : target_(std::move(target)) {}

double StructuralSeqOracle::mismatch(const SeqQuery& query) {
  if (query.outputs.back() >= target_.num_outputs()) {
    throw std::out_of_range("query output index");
  }
  const InducedSubnetwork induced = induced_subnetwork(target_, query.outputs);
  return structurally_equivalent(query.candidate, induced.net) ? 0 : kNoMatch;
}

DistributionalSeqOracle::DistributionalSeqOracle(NoisyOrNetwork target,
                                                 BiasSetting bias, int max_outputs)
    : target_(std::move(target)), bias_(std::move(bias)), max_outputs_(max_outputs) {}

double DistributionalSeqOracle::mismatch(const SeqQuery& query) {
  if (query.outputs.back() >= target_.num_outputs()) {
    throw std::out_of_range("query output index");
  }
  const InducedSubnetwork induced = induced_subnetwork(target_, query.outputs);
  std::vector<int> positions(query.outputs.size());
  for (size_t t = 0; t < query.outputs.size(); ++t) {
    positions[t] = static_cast<int>(t);
  }
  const bool same = subset_zero_table(query.candidate, positions, bias_) ==
                    subset_zero_table(induced.net, positions, bias_);
  return same ? 0 : kNoMatch;
}

StatisticalSeqOracle::StatisticalSeqOracle(const SampleSet& data, BiasSetting bias,
                                           SeqBudget budget, int max_outputs)
    : fresh_(false),
      bias_(std::move(bias)),
      budget_(budget),
      max_outputs_(max_outputs) {
  if (data.size() < budget.sample_size) {
    throw std::invalid_argument("insufficient samples: have " +
                                std::to_string(data.size()) + ", need " +
                                std::to_string(budget.sample_size));
  }
  consume_samples(data.size());
  reuse_count_ = data.size();
  if (data.num_outputs <= 16) {
    full_bins_ = SampleSummary::from_samples(data).pattern_counts;
  } else {
    data_ = &data;
  }
}

StatisticalSeqOracle::StatisticalSeqOracle(const SampleSummary& summary,
                                           BiasSetting bias, SeqBudget budget,
                                           int max_outputs)
    : fresh_(false),
      bias_(std::move(bias)),
      budget_(budget),
      max_outputs_(max_outputs) {
  if (summary.count < budget.sample_size) {
    throw std::invalid_argument("insufficient samples: have " +
                                std::to_string(summary.count) + ", need " +
                                std::to_string(budget.sample_size));
  }
  consume_samples(summary.count);
  reuse_count_ = summary.count;
  full_bins_ = summary.pattern_counts;
}

StatisticalSeqOracle::StatisticalSeqOracle(NoisyOrNetwork target, BiasSetting bias,
                                           SeqBudget budget, int max_outputs,
                                           std::uint64_t seed)
    : target_(std::move(target)),
      fresh_(true),
      bias_(std::move(bias)),
      budget_(budget),
      max_outputs_(max_outputs),
      seed_(seed) {
  if (budget.sample_size == 0) {
    throw std::invalid_argument("fresh-sample mode needs a positive sample size");
  }
}

std::vector<double> StatisticalSeqOracle::reuse_table(
    const std::vector<int>& outputs) {
  if (full_bins_.empty()) {
    auto it = table_cache_.find(outputs);
    if (it == table_cache_.end()) {
      it = table_cache_
               .emplace(outputs, empirical_subset_zero_table(*data_, outputs))
               .first;
    }
    return it->second;
  }
  // Marginalize the full-pattern bins down to the queried outputs, then the
  // usual subset-sum for all-zero counts.
  const size_t size = size_t{1} << outputs.size();
  std::vector<std::uint64_t> bins(size, 0);
  for (std::uint32_t full = 0; full < full_bins_.size(); ++full) {
    std::uint32_t restricted = 0;
    for (size_t b = 0; b < outputs.size(); ++b) {
      if (full >> outputs[b] & 1) restricted |= std::uint32_t{1} << b;
    }
    bins[restricted] += full_bins_[full];
  }
  for (size_t b = 0; b < outputs.size(); ++b) {
    for (size_t u = 0; u < size; ++u) {
      if (u >> b & 1) bins[u] += bins[u ^ (size_t{1} << b)];
    }
  }
  std::vector<double> table(size);
  for (size_t s = 0; s < size; ++s) {
    table[s] = static_cast<double>(bins[(size - 1) ^ s]) /
               static_cast<double>(reuse_count_);
  }
  return table;
}

double StatisticalSeqOracle::mismatch(const SeqQuery& query) {
  std::vector<double> empirical;
  if (fresh_) {
    const std::uint64_t index = fresh_queries_++;
    const SampleSet batch =
        sample(target_, bias_, budget_.sample_size,
               SplitMix64::substream(seed_, index).next());
    consume_samples(budget_.sample_size);
    empirical = empirical_subset_zero_table(batch, query.outputs);
  } else {
    empirical = reuse_table(query.outputs);
  }

  std::vector<int> positions(query.outputs.size());
  for (size_t t = 0; t < query.outputs.size(); ++t) {
    positions[t] = static_cast<int>(t);
  }
  const std::vector<Rational> exact =
      subset_zero_table(query.candidate, positions, bias_);
  double worst = 0;
  for (size_t s = 0; s < exact.size(); ++s) {
    worst = std::max(worst, std::abs(empirical[s] - to_double(exact[s])));
  }
  return worst;
}

}  // namespace noisyor
