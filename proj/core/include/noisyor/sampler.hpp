#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noisyor/network.hpp"
#include "noisyor/rng.hpp"

namespace noisyor {

struct BiasSetting;

/// A batch of observed output vectors. Only outputs are recorded; the hidden
/// input values and edge noise are discarded at draw time.
struct SampleSet {
  int num_outputs = 0;
  Rational bias;
  std::optional<std::uint64_t> seed;
  std::vector<std::vector<std::uint8_t>> draws;

  std::size_t size() const { return draws.size(); }
};

/// One generative draw: each input is 0 with probability p; each edge whose
/// input fired is independently suppressed with probability eta; an output
/// is 1 iff some firing edge survived. Edge noise is drawn lazily, which is
/// invisible in distribution (suppressed edges of silent inputs never matter).
std::vector<std::uint8_t> draw(const NoisyOrNetwork& net, const BiasSetting& bias,
                               SplitMix64& rng);

/// Allocation-free variant for tight sampling loops.
void draw_into(const NoisyOrNetwork& net, double p_zero, SplitMix64& rng,
               std::vector<std::uint8_t>& out);

/// N independent draws, deterministic per seed. Draw i uses the independent
/// substream SplitMix64::substream(seed, i), so the result is identical no
/// matter how draws are scheduled.
SampleSet sample(const NoisyOrNetwork& net, const BiasSetting& bias,
                 std::size_t count, std::uint64_t seed);

/// Lossless compaction of a sample set for narrow networks: counts per full
/// output pattern (bit j of the index = value of output j). Sufficient for
/// every subset-zero frequency, and small enough for very large N.
struct SampleSummary {
  int num_outputs = 0;
  Rational bias;
  std::optional<std::uint64_t> seed;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> pattern_counts;  // size 2^num_outputs

  static SampleSummary from_samples(const SampleSet& samples);
};

/// Streams `count` draws (bit-identical to sample() with the same seed)
/// directly into pattern counts. Requires num_outputs <= 20.
SampleSummary sample_summary(const NoisyOrNetwork& net, const BiasSetting& bias,
                             std::uint64_t count, std::uint64_t seed);

/// Fraction of draws whose outputs in S are all zero, for every S subset of
/// Y (same mask indexing as subset_zero_table). Throws std::invalid_argument
/// on an empty sample set.
std::vector<double> empirical_subset_zero_table(const SampleSet& samples,
                                                const std::vector<int>& Y);

/// Sample file: one JSON header line {"num_outputs","count","bias","seed"},
/// then one '0'/'1' record per draw.
std::string write_sample_text(const SampleSet& samples);
SampleSet read_sample_text(const std::string& text);

}  // namespace noisyor
