#include "noisyor/distribution.hpp"

#include <algorithm>
#include <stdexcept>

namespace noisyor {

BiasSetting::BiasSetting(Rational bias) : p(std::move(bias)) {
  p.canonicalize();  // exact comparisons downstream need reduced form
  if (p < 0 || p > 1) throw std::invalid_argument("bias must lie in [0,1]");
}

namespace {

void check_output_set(const NoisyOrNetwork& net, const std::vector<int>& Y) {
  for (size_t i = 0; i < Y.size(); ++i) {
    if (Y[i] < 0 || Y[i] >= net.num_outputs()) {
      throw std::out_of_range("output index in Y");
    }
    if (i > 0 && Y[i] <= Y[i - 1]) {
      throw std::invalid_argument("Y must be sorted and duplicate-free");
    }
  }
}

}  // namespace

Rational all_zero_probability(const NoisyOrNetwork& net, const std::vector<int>& Y,
                              const BiasSetting& bias) {
  check_output_set(net, Y);
  const Rational& p = bias.p;
  const Rational one_minus_p = 1 - p;
  Rational result(1);
  for (int i = 0; i < net.num_inputs(); ++i) {
    const Signature sig = net.restricted_signature(i, Y);
    if (sig.empty()) continue;
    Rational suppress(1);
    for (const Edge& e : sig) suppress *= e.weight;
    result *= p + one_minus_p * suppress;
  }
  return result;
}

double all_zero_probability_double(const NoisyOrNetwork& net,
                                   const std::vector<int>& Y, double p) {
  check_output_set(net, Y);
  double result = 1.0;
  for (int i = 0; i < net.num_inputs(); ++i) {
    const Signature sig = net.restricted_signature(i, Y);
    if (sig.empty()) continue;
    double suppress = 1.0;
    for (const Edge& e : sig) suppress *= to_double(e.weight);
    result *= p + (1.0 - p) * suppress;
  }
  return result;
}

Rational pattern_probability(const NoisyOrNetwork& net,
                             const std::vector<uint8_t>& pattern,
                             const BiasSetting& bias, const EvalLimits& limits) {
  const int n = net.num_outputs();
  if (static_cast<int>(pattern.size()) != n) {
    throw std::invalid_argument("pattern length must equal num_outputs");
  }
  std::vector<int> zeros, ones;
  for (int j = 0; j < n; ++j) {
    (pattern[j] == 0 ? zeros : ones).push_back(j);
  }
  if (static_cast<int>(ones.size()) > limits.pattern_max_free_outputs) {
    throw std::runtime_error("pattern enumeration limit exceeded: 2^" +
                             std::to_string(ones.size()) + " terms");
  }

  // Pr[pattern] = sum over supersets T of the zero set, T = zeros + U for
  // U subset of ones, of (-1)^|U| * Pr[all of T zero].
  Rational total(0);
  const std::uint64_t subsets = std::uint64_t{1} << ones.size();
  for (std::uint64_t u = 0; u < subsets; ++u) {
    std::vector<int> T = zeros;
    int bits = 0;
    for (size_t b = 0; b < ones.size(); ++b) {
      if (u >> b & 1) {
        T.push_back(ones[b]);
        ++bits;
      }
    }
    std::sort(T.begin(), T.end());
    const Rational term = all_zero_probability(net, T, bias);
    if (bits % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

std::vector<Rational> brute_force_joint(const NoisyOrNetwork& net,
                                        const BiasSetting& bias,
                                        const EvalLimits& limits) {
  const int m = net.num_inputs();
  const int n = net.num_outputs();
  if (m > limits.brute_force_max_inputs) {
    throw std::runtime_error("brute force input limit exceeded");
  }
  if (n > limits.brute_force_max_outputs) {
    throw std::runtime_error("brute force output limit exceeded");
  }

  const Rational& p = bias.p;
  const Rational q = 1 - p;
  const size_t pattern_count = size_t{1} << n;
  std::vector<Rational> joint(pattern_count, Rational(0));

  // Depth-first walk over the 2^m hidden assignments. The stack tracks, per
  // output, the conditional probability of that output being 0 given the
  // inputs fixed so far (inputs set to 1 multiply their edge weights in).
  std::vector<Rational> zero_prob(static_cast<size_t>(n), Rational(1));
  std::vector<Rational> conditional;  // scratch for the per-leaf joint
  conditional.reserve(pattern_count);

  // Recursive walk over input indices, carrying the assignment-prefix
  // probability.
  auto walk = [&](auto&& self, int input, const Rational& prefix_prob) -> void {
    if (input == m) {
      // Outputs are independent given the full assignment; expand the
      // product distribution over all patterns.
      conditional.assign(1, prefix_prob);
      for (int j = 0; j < n; ++j) {
        const size_t sz = conditional.size();
        conditional.resize(sz * 2);
        for (size_t t = 0; t < sz; ++t) {
          conditional[sz + t] = conditional[t] * (1 - zero_prob[j]);
          conditional[t] *= zero_prob[j];
        }
      }
      for (size_t pat = 0; pat < pattern_count; ++pat) joint[pat] += conditional[pat];
      return;
    }
    // X_input = 0: no effect on outputs.
    if (p != 0) self(self, input + 1, prefix_prob * p);
    // X_input = 1: each edge multiplies its suppression weight in.
    if (q != 0) {
      const Signature& sig = net.input_signature(input);
      std::vector<Rational> saved;
      saved.reserve(sig.size());
      for (const Edge& e : sig) {
        saved.push_back(zero_prob[e.output]);
        zero_prob[e.output] *= e.weight;
      }
      self(self, input + 1, prefix_prob * q);
      for (size_t t = 0; t < sig.size(); ++t) zero_prob[sig[t].output] = saved[t];
    }
  };
  walk(walk, 0, Rational(1));
  return joint;
}

std::vector<Rational> subset_zero_table(const NoisyOrNetwork& net,
                                        const std::vector<int>& Y,
                                        const BiasSetting& bias,
                                        const EvalLimits& limits) {
  check_output_set(net, Y);
  if (static_cast<int>(Y.size()) > limits.subset_table_max_outputs) {
    throw std::runtime_error("subset table limit exceeded");
  }
  const size_t size = size_t{1} << Y.size();
  std::vector<Rational> table(size);
  for (size_t mask = 0; mask < size; ++mask) {
    std::vector<int> subset;
    for (size_t b = 0; b < Y.size(); ++b) {
      if (mask >> b & 1) subset.push_back(Y[b]);
    }
    table[mask] = all_zero_probability(net, subset, bias);
  }
  return table;
}

std::vector<double> subset_zero_table_double(const NoisyOrNetwork& net,
                                             const std::vector<int>& Y, double p,
                                             const EvalLimits& limits) {
  check_output_set(net, Y);
  if (static_cast<int>(Y.size()) > limits.subset_table_max_outputs) {
    throw std::runtime_error("subset table limit exceeded");
  }
  const size_t size = size_t{1} << Y.size();
  std::vector<double> table(size);
  for (size_t mask = 0; mask < size; ++mask) {
    std::vector<int> subset;
    for (size_t b = 0; b < Y.size(); ++b) {
      if (mask >> b & 1) subset.push_back(Y[b]);
    }
    table[mask] = all_zero_probability_double(net, subset, p);
  }
  return table;
}

}  // namespace noisyor
