#pragma once

#include <vector>

#include "noisyor/network.hpp"
#include "noisyor/rational.hpp"

namespace noisyor {

/// Common bias: each hidden input is 0 with probability p, independently.
struct BiasSetting {
  Rational p;

  BiasSetting() = default;
  explicit BiasSetting(Rational bias);
};

/// Runtime caps on the exponential enumerations; tests pin these explicitly.
struct EvalLimits {
  int brute_force_max_inputs = 20;
  int brute_force_max_outputs = 16;
  int pattern_max_free_outputs = 20;  // pattern_probability enumerates 2^(#ones)
  int subset_table_max_outputs = 20;
};

/// Probability that every output in Y is simultaneously 0:
///   prod_i ( p + (1-p) * prod_{j in T_i cap Y} eta_ij ).
/// Inputs not connected to Y contribute factor 1. Y must be sorted unique.
Rational all_zero_probability(const NoisyOrNetwork& net, const std::vector<int>& Y,
                              const BiasSetting& bias);

/// Double fast path of all_zero_probability (documented tolerance vs the
/// exact path: 1e-12 at desk scale).
double all_zero_probability_double(const NoisyOrNetwork& net,
                                   const std::vector<int>& Y, double p);

/// Probability of one full output pattern, by inclusion-exclusion over the
/// all-zero probabilities of supersets of the pattern's zero set. Rejects
/// patterns whose 1-positions would force more than 2^pattern_max_free_outputs
/// terms.
Rational pattern_probability(const NoisyOrNetwork& net,
                             const std::vector<uint8_t>& pattern,
                             const BiasSetting& bias,
                             const EvalLimits& limits = EvalLimits{});

/// Exact joint over all 2^n output patterns, by direct summation over all
/// 2^m hidden-input assignments. Entry index encodes the pattern with bit j
/// = value of output j. This is the module's independent oracle; it shares
/// no code path with all_zero_probability / pattern_probability.
std::vector<Rational> brute_force_joint(const NoisyOrNetwork& net,
                                        const BiasSetting& bias,
                                        const EvalLimits& limits = EvalLimits{});

/// all_zero_probability for every subset of Y; result[mask] is the value for
/// the subset selecting Y[b] for each set bit b of mask. result[0] == 1.
std::vector<Rational> subset_zero_table(const NoisyOrNetwork& net,
                                        const std::vector<int>& Y,
                                        const BiasSetting& bias,
                                        const EvalLimits& limits = EvalLimits{});

/// Double fast path of subset_zero_table.
std::vector<double> subset_zero_table_double(const NoisyOrNetwork& net,
                                             const std::vector<int>& Y, double p,
                                             const EvalLimits& limits = EvalLimits{});

}  // namespace noisyor
