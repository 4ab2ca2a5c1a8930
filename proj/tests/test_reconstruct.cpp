#include <doctest.h>

#include <functional>
#include <limits>
#include <map>
#include <set>

#include "noisyor/polynomial.hpp"
#include "noisyor/reconstruct.hpp"
#include "support.hpp"

using namespace noisyor;
using noisyor::testing::all_outputs;
using noisyor::testing::joint_marginal_all_zero;
using noisyor::testing::random_family;

namespace {

NetworkFamily one_weight(int k, const Rational& w) {
  NetworkFamily fam;
  fam.fan_in_k = k;
  fam.weight_values = {w};
  fam.subclass = Subclass::kOneWeightValue;
  return fam;
}

ReconstructionConfig config_for(const NetworkFamily& fam, int m, int n) {
  ReconstructionConfig cfg;
  cfg.num_inputs = m;
  cfg.num_outputs = n;
  cfg.family = fam;
  cfg.bias = Rational(1, 3);
  return cfg;
}

// Min over non-equivalent class pairs of the largest subset gap at one bias.
double min_separation_at(const FamilyPolynomialTable& table, double p) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < table.classes.size(); ++a) {
    for (size_t b = a + 1; b < table.classes.size(); ++b) {
      double gap = 0;
      for (size_t s = 0; s < table.subset_masks.size(); ++s) {
        gap = std::max(gap, std::abs(table.polynomials[a][s].evaluate(p) -
                                     table.polynomials[b][s].evaluate(p)));
      }
      best = std::min(best, gap);
    }
  }
  return best;
}

// Scripted oracle for driving the failure paths.
class MockSeqOracle : public SeqOracle {
 public:
  explicit MockSeqOracle(std::function<bool(const SeqQuery&)> script)
      : script_(std::move(script)) {}
  int max_query_outputs() const override { return 1 << 20; }

 protected:
  double mismatch(const SeqQuery& query) override {
    return script_(query) ? 0 : std::numeric_limits<double>::infinity();
  }

 private:
  std::function<bool(const SeqQuery&)> script_;
};

void check_committed_edges_survived(const ReconstructionReport& report) {
  // Monotone progress: the edges committed for output j at step j are
  // exactly the final network's edges into output j.
  for (const OutputTrace& t : report.trace) {
    std::vector<std::string> now;
    for (int i = 0; i < report.recovered.num_inputs(); ++i) {
      if (const auto w = report.recovered.weight(i, t.output)) {
        now.push_back(std::to_string(i) + "@" + rational_to_string(*w));
      }
    }
    CHECK(now == t.committed_edges);
  }
}

}  // namespace

TEST_CASE("simple variant: single output, two parents") {
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  NoisyOrNetwork target(4, 1);
  target.add_edge(0, 0, Rational(1, 2));
  target.add_edge(1, 0, Rational(1, 2));
  StructuralSeqOracle oracle(target);
  const ReconstructionReport report =
      reconstruct_simple(oracle, config_for(fam, 4, 1));
  CHECK(report.recovered.parents(0).size() == 2);
  for (int i : report.recovered.parents(0)) {
    CHECK(*report.recovered.weight(i, 0) == Rational(1, 2));
  }
  CHECK(structurally_equivalent(report.recovered, target));
}

TEST_CASE("simple variant: empty target costs one query per output") {
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  const NoisyOrNetwork target(5, 3);
  StructuralSeqOracle oracle(target);
  const ReconstructionReport report =
      reconstruct_simple(oracle, config_for(fam, 5, 3));
  CHECK(report.recovered.edge_count() == 0);
  CHECK(report.seq_count == 3);  // the empty wiring is the first candidate
}

TEST_CASE("simple variant recovers random small targets") {
  int runs = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SplitMix64 rng(seed);
    const NetworkFamily fam = one_weight(
        1 + static_cast<int>(rng.below(2)), Rational(1, 2));
    const int m = 2 + static_cast<int>(rng.below(5));
    const int n = 1 + static_cast<int>(rng.below(4));
    const NoisyOrNetwork target = random_network(fam, m, n, seed * 5 + 1);
    StructuralSeqOracle oracle(target);
    const ReconstructionReport report =
        reconstruct_simple(oracle, config_for(fam, m, n));
    CHECK(structurally_equivalent(report.recovered, target));
    check_committed_edges_survived(report);
    ++runs;
  }
  CHECK(runs == 40);
}

TEST_CASE("block variant recovers random targets across families") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    SplitMix64 rng(seed + 7);
    NetworkFamily fam = random_family(rng, 3, 2);
    const int m = 2 + static_cast<int>(rng.below(9));
    const int n = 1 + static_cast<int>(rng.below(8));
    const NoisyOrNetwork target = random_network(fam, m, n, seed * 11 + 3);
    StructuralSeqOracle oracle(target);
    const ReconstructionReport report = reconstruct(oracle, config_for(fam, m, n));

    CHECK(structurally_equivalent(report.recovered, target));
    CHECK(report.largest_query_outputs <= fam.fan_in_k + 1);
    if (fam.fan_in_k >= 2) {
      // At k = 1 the k^(2k) factor collapses to 1 and cannot cover a
      // YES/NO enumeration per block, so the closed-form bound only binds
      // from k = 2 up.
      CHECK(report.seq_count <=
            worst_case_query_bound(m, n, fam.fan_in_k, fam.num_weight_values()));
    }
    check_committed_edges_survived(report);
  }
}

TEST_CASE("block variant is exhaustive over tiny one-weight families") {
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{
           {3, 2}, {4, 2}, {4, 3}, {5, 2}, {6, 2}}) {
    const std::vector<NoisyOrNetwork> targets = enumerate_family_classes(fam, m, n);
    for (const NoisyOrNetwork& target : targets) {
      StructuralSeqOracle oracle(target);
      const ReconstructionReport report = reconstruct(oracle, config_for(fam, m, n));
      CHECK(structurally_equivalent(report.recovered, target));
    }
  }
}

TEST_CASE("both variants agree up to equivalence") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    SplitMix64 rng(seed + 100);
    NetworkFamily fam = random_family(rng, 2, 2);
    const NoisyOrNetwork target = random_network(fam, 5, 3, seed * 17);
    StructuralSeqOracle oracle_a(target);
    StructuralSeqOracle oracle_b(target);
    const ReconstructionReport simple =
        reconstruct_simple(oracle_a, config_for(fam, 5, 3));
    const ReconstructionReport block = reconstruct(oracle_b, config_for(fam, 5, 3));
    CHECK(structurally_equivalent(simple.recovered, block.recovered));
  }
}

TEST_CASE("block splitting stays within l+1 children per output") {
  SplitMix64 rng(9);
  NetworkFamily fam = random_family(rng, 3, 3);
  const NoisyOrNetwork target = random_network(fam, 9, 6, 123);
  const int l = fam.num_weight_values();

  // Replay prefixes of the target itself: blocks at j+1 refine blocks at j.
  for (int j = 0; j < 5; ++j) {
    std::vector<int> prefix_outputs;
    for (int t = 0; t <= j; ++t) prefix_outputs.push_back(t);
    NoisyOrNetwork prev(9, 6), next(9, 6);
    for (int i = 0; i < 9; ++i) {
      for (const Edge& e : target.input_signature(i)) {
        if (e.output < j) prev.add_edge(i, e.output, e.weight);
        if (e.output <= j) next.add_edge(i, e.output, e.weight);
      }
    }
    const BasicBlockPartition before = basic_blocks(prev);
    const BasicBlockPartition after = basic_blocks(next);
    for (const BasicBlock& parent : before.blocks) {
      const std::set<int> members(parent.inputs.begin(), parent.inputs.end());
      int children = 0;
      for (const BasicBlock& child : after.blocks) {
        if (members.count(child.inputs.front())) ++children;
      }
      CHECK(children <= l + 1);
    }
  }
}

TEST_CASE("recovered networks match the target distribution exactly") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitMix64 rng(seed + 55);
    NetworkFamily fam = random_family(rng, 2, 2);
    const int m = 4 + static_cast<int>(rng.below(4));
    const int n = 2 + static_cast<int>(rng.below(3));
    const NoisyOrNetwork target = random_network(fam, m, n, seed * 29);
    StructuralSeqOracle oracle(target);
    const ReconstructionReport report = reconstruct(oracle, config_for(fam, m, n));

    // Subset-zero tables at 10 biases over small output subsets...
    SplitMix64 prng(seed);
    for (int t = 0; t < 10; ++t) {
      const BiasSetting bias{noisyor::testing::frac(static_cast<long>(prng.below(97)), 96)};
      const std::vector<int> Y =
          noisyor::testing::random_sorted_subset(prng, n, fam.fan_in_k + 1);
      CHECK(subset_zero_table(report.recovered, Y, bias) ==
            subset_zero_table(target, Y, bias));
    }
    // ...and full joint equality while n stays enumerable.
    const BiasSetting bias{Rational(3, 11)};
    CHECK(brute_force_joint(report.recovered, bias) ==
          brute_force_joint(target, bias));
  }
}

TEST_CASE("failure paths are typed and surfaced") {
  // Target outside the family: three parents but the family caps fan-in at 2.
  NoisyOrNetwork wide(4, 1);
  wide.add_edge(0, 0, Rational(1, 2));
  wide.add_edge(1, 0, Rational(1, 2));
  wide.add_edge(2, 0, Rational(1, 2));
  StructuralSeqOracle oracle(wide);
  CHECK_THROWS_AS(
      reconstruct(oracle, config_for(one_weight(2, Rational(1, 2)), 4, 1)),
      NoCandidateAccepted);

  // Wrong weight set: candidates never match.
  NoisyOrNetwork off(2, 1);
  off.add_edge(0, 0, Rational(1, 3));
  StructuralSeqOracle oracle2(off);
  CHECK_THROWS_AS(
      reconstruct(oracle2, config_for(one_weight(2, Rational(1, 2)), 2, 1)),
      NoCandidateAccepted);

  // Query budget cuts the run short.
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  const NoisyOrNetwork target = random_network(fam, 6, 4, 2);
  StructuralSeqOracle oracle3(target);
  ReconstructionConfig tight = config_for(fam, 6, 4);
  tight.max_queries = 1;
  CHECK_THROWS_AS(reconstruct(oracle3, tight), QueryBudgetExceeded);
}

TEST_CASE("inconsistent statistical answers are surfaced, not repaired") {
  // Script: output 0 gets one parent; output 1 gets two fresh parents; for
  // output 2 the first block round claims one connection and the second
  // block round claims both of its inputs, overcommitting the fan-in of 2.
  const Rational w(1, 2);
  auto parents_of_last = [](const NoisyOrNetwork& net) {
    return net.parents(net.num_outputs() - 1);
  };
  MockSeqOracle oracle([&](const SeqQuery& q) -> bool {
    const std::vector<int>& ys = q.outputs;
    const std::vector<int> last = parents_of_last(q.candidate);
    if (ys == std::vector<int>{0}) return last.size() == 1;
    if (ys == std::vector<int>{0, 1}) {
      // block round while wiring output 1: block {input0} stays unconnected,
      // two fresh inputs appear
      return !q.candidate.connected(0, 1) && last.size() == 2;
    }
    if (ys == std::vector<int>{1}) return last.size() == 2;
    if (ys == std::vector<int>{2}) return last.size() == 2;
    if (ys == std::vector<int>{0, 2}) return q.candidate.connected(0, 1);
    if (ys == std::vector<int>{1, 2}) {
      // claim both block inputs, overcommitting the fan-in
      return q.candidate.num_inputs() >= 2 && q.candidate.connected(0, 1) &&
             q.candidate.connected(1, 1);
    }
    return false;
  });

  NetworkFamily fam;
  fam.fan_in_k = 2;
  fam.weight_values = {w};
  ReconstructionConfig cfg;
  cfg.num_inputs = 5;
  cfg.num_outputs = 3;
  cfg.family = fam;
  cfg.bias = Rational(1, 2);
  CHECK_THROWS_AS(reconstruct(oracle, cfg), InconsistentCounts);
}

TEST_CASE("end to end: degenerate bias and sample starvation are rejected") {
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  const NoisyOrNetwork target = random_network(fam, 4, 3, 31);
  ReconstructionConfig cfg = config_for(fam, 4, 3);
  cfg.alpha = 0.05;
  cfg.delta = 0.05;

  SampleSet degenerate = sample(target, BiasSetting{Rational(1)}, 100, 1);
  ReconstructionConfig bad = cfg;
  bad.bias = Rational(1);
  CHECK_THROWS_AS(end_to_end_learn(degenerate, bad), DegenerateData);

  const SampleSet tiny = sample(target, BiasSetting{Rational(1, 3)}, 10, 1);
  CHECK_THROWS_AS(end_to_end_learn(tiny, cfg), std::invalid_argument);
}

TEST_CASE("end to end: a desk-scale run recovers the structure from samples") {
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  const int m = 4, n = 3;
  const NoisyOrNetwork target = random_network(fam, m, n, 77);
  const Rational p(2, 5);

  // alpha from the family's separation profile at the query scale (m, k+1).
  const FamilyPolynomialTable table = family_polynomial_table(fam, m, n, n);
  const double at_p = min_separation_at(table, to_double(p));
  REQUIRE(at_p > 1e-3);
  const double alpha = at_p * 0.9;

  ReconstructionConfig cfg = config_for(fam, m, n);
  cfg.bias = p;
  cfg.alpha = alpha;
  cfg.delta = 0.05;

  const std::uint64_t bound = worst_case_query_bound(m, n, 2, 1);
  const std::size_t needed =
      required_sample_size(alpha, 0.05 / (2.0 * static_cast<double>(bound)), 3);
  const SampleSet data = sample(target, BiasSetting{p}, needed, 2024);
  const ReconstructionReport report = end_to_end_learn(data, cfg);
  CHECK(report.guaranteed_regime);
  CHECK(structurally_equivalent(report.recovered, target));
  CHECK(report.samples_used == needed);
  CHECK(report.seq_count <= bound);
}

TEST_CASE("all three oracles drive the same reconstruction") {
  const NetworkFamily fam = one_weight(2, Rational(1, 2));
  const int m = 5, n = 3;
  const NoisyOrNetwork target = random_network(fam, m, n, 3);
  const Rational p(2, 5);
  ReconstructionConfig cfg = config_for(fam, m, n);
  cfg.bias = p;

  StructuralSeqOracle structural(target);
  const NoisyOrNetwork from_structural = reconstruct(structural, cfg).recovered;

  DistributionalSeqOracle distributional(target, BiasSetting{p}, 3);
  const NoisyOrNetwork from_distributional =
      reconstruct(distributional, cfg).recovered;

  const FamilyPolynomialTable table = family_polynomial_table(fam, m, 3, 3);
  const double alpha = 0.9 * min_separation_at(table, to_double(p));
  REQUIRE(alpha > 0);
  cfg.alpha = alpha;
  cfg.delta = 0.02;
  const std::uint64_t bound = worst_case_query_bound(m, n, 2, 1);
  const std::size_t needed =
      required_sample_size(alpha, 0.02 / (2.0 * static_cast<double>(bound)), 3);
  const SampleSet data = sample(target, BiasSetting{p}, needed, 5);
  const NoisyOrNetwork from_samples = end_to_end_learn(data, cfg).recovered;

  CHECK(structurally_equivalent(from_structural, target));
  CHECK(structurally_equivalent(from_distributional, target));
  CHECK(structurally_equivalent(from_samples, target));
}
