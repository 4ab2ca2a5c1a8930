#include "noisyor/network.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "noisyor/rng.hpp"

namespace noisyor {

bool operator==(const Edge& a, const Edge& b) {
  return a.output == b.output && a.weight == b.weight;
}

int compare_signatures(const Signature& a, const Signature& b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i].output != b[i].output) return a[i].output < b[i].output ? -1 : 1;
    const int c = cmp(a[i].weight, b[i].weight);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

NoisyOrNetwork::NoisyOrNetwork(int num_inputs, int num_outputs)
    : num_outputs_(num_outputs) {
  if (num_inputs < 0 || num_outputs < 0) {
    throw std::out_of_range("network dimensions must be non-negative");
  }
  rows_.resize(static_cast<size_t>(num_inputs));
}

void NoisyOrNetwork::add_edge(int input, int output, const Rational& weight_in) {
  if (input < 0 || input >= num_inputs()) throw std::out_of_range("input index");
  if (output < 0 || output >= num_outputs_) throw std::out_of_range("output index");
  Rational weight = weight_in;
  weight.canonicalize();
  if (weight < 0 || weight >= 1) {
    throw std::invalid_argument("edge weight must lie in [0,1); 1 means no edge");
  }
  auto& row = rows_[input];
  auto it = std::lower_bound(row.begin(), row.end(), output,
                             [](const Edge& e, int j) { return e.output < j; });
  if (it != row.end() && it->output == output) {
    throw std::invalid_argument("duplicate edge");
  }
  row.insert(it, Edge{output, weight});
}

bool NoisyOrNetwork::connected(int input, int output) const {
  return weight(input, output).has_value();
}

std::optional<Rational> NoisyOrNetwork::weight(int input, int output) const {
  if (input < 0 || input >= num_inputs()) throw std::out_of_range("input index");
  if (output < 0 || output >= num_outputs_) throw std::out_of_range("output index");
  const auto& row = rows_[input];
  auto it = std::lower_bound(row.begin(), row.end(), output,
                             [](const Edge& e, int j) { return e.output < j; });
  if (it != row.end() && it->output == output) return it->weight;
  return std::nullopt;
}

std::vector<int> NoisyOrNetwork::influenced_outputs(int input) const {
  std::vector<int> out;
  out.reserve(rows_[input].size());
  for (const Edge& e : rows_[input]) out.push_back(e.output);
  return out;
}

std::vector<int> NoisyOrNetwork::parents(int output) const {
  std::vector<int> result;
  for (int i = 0; i < num_inputs(); ++i) {
    if (connected(i, output)) result.push_back(i);
  }
  return result;
}

int NoisyOrNetwork::max_fan_in() const {
  std::vector<int> degree(static_cast<size_t>(num_outputs_), 0);
  for (const auto& row : rows_) {
    for (const Edge& e : row) ++degree[e.output];
  }
  int best = 0;
  for (int d : degree) best = std::max(best, d);
  return best;
}

int NoisyOrNetwork::edge_count() const {
  int total = 0;
  for (const auto& row : rows_) total += static_cast<int>(row.size());
  return total;
}

Signature NoisyOrNetwork::restricted_signature(int input,
                                               const std::vector<int>& outputs) const {
  Signature sig;
  for (const Edge& e : rows_[input]) {
    if (std::binary_search(outputs.begin(), outputs.end(), e.output)) {
      sig.push_back(e);
    }
  }
  return sig;
}

std::vector<Signature> NoisyOrNetwork::canonical_signatures() const {
  std::vector<Signature> sigs = rows_;
  std::sort(sigs.begin(), sigs.end(), [](const Signature& a, const Signature& b) {
    return compare_signatures(a, b) < 0;
  });
  return sigs;
}

std::string NoisyOrNetwork::canonical_key() const {
  std::ostringstream out;
  out << num_inputs() << "x" << num_outputs_;
  for (const Signature& sig : canonical_signatures()) {
    out << "|";
    for (const Edge& e : sig) {
      out << e.output << ":" << rational_to_string(e.weight) << ",";
    }
  }
  return out.str();
}

bool operator==(const NoisyOrNetwork& a, const NoisyOrNetwork& b) {
  if (a.num_inputs() != b.num_inputs() || a.num_outputs() != b.num_outputs()) {
    return false;
  }
  for (int i = 0; i < a.num_inputs(); ++i) {
    if (!(a.input_signature(i) == b.input_signature(i))) return false;
  }
  return true;
}

std::string subclass_to_string(Subclass s) {
  switch (s) {
    case Subclass::kGeneral: return "general";
    case Subclass::kOneWeightValue: return "one-weight-value";
    case Subclass::kPerOutputWeight: return "per-output-weight";
    case Subclass::kPerInputWeight: return "per-input-weight";
    case Subclass::kTwoValueWeakStrong: return "two-value-weak-strong";
  }
  throw std::logic_error("unknown subclass");
}

Subclass subclass_from_string(const std::string& s) {
  if (s == "general") return Subclass::kGeneral;
  if (s == "one-weight-value") return Subclass::kOneWeightValue;
  if (s == "per-output-weight") return Subclass::kPerOutputWeight;
  if (s == "per-input-weight") return Subclass::kPerInputWeight;
  if (s == "two-value-weak-strong") return Subclass::kTwoValueWeakStrong;
  throw std::invalid_argument("unknown subclass tag: '" + s + "'");
}

void NetworkFamily::check() const {
  if (fan_in_k < 1) throw std::invalid_argument("fan-in bound must be >= 1");
  if (weight_values.empty()) throw std::invalid_argument("weight set is empty");
  for (const Rational& a : weight_values) {
    if (a < 0 || a >= 1) {
      throw std::invalid_argument("weight value " + rational_to_string(a) +
                                  " outside [0,1); 1 encodes a non-edge");
    }
  }
  if (!std::is_sorted(weight_values.begin(), weight_values.end())) {
    throw std::invalid_argument("weight values must be sorted ascending");
  }
  if (std::adjacent_find(weight_values.begin(), weight_values.end()) !=
      weight_values.end()) {
    throw std::invalid_argument("duplicate weight value");
  }
  if (beta) {
    if (*beta <= 0) throw std::invalid_argument("beta must be positive");
    for (const Rational& a : weight_values) {
      Rational t = a / *beta;
      if (t.get_den() != 1) {
        throw std::invalid_argument("weight " + rational_to_string(a) +
                                    " is not a natural multiple of beta");
      }
    }
  }
  if (subclass == Subclass::kTwoValueWeakStrong && weight_values.size() != 2) {
    throw std::invalid_argument("two-value-weak-strong needs exactly 2 weight values");
  }
}

ValidationReport validate(const NoisyOrNetwork& net, const NetworkFamily& fam) {
  ValidationReport report;
  auto flag = [&report](const std::string& msg) {
    report.ok = false;
    report.violations.push_back(msg);
  };

  const std::set<Rational> allowed(fam.weight_values.begin(), fam.weight_values.end());
  std::set<Rational> used;
  for (int i = 0; i < net.num_inputs(); ++i) {
    for (const Edge& e : net.input_signature(i)) {
      used.insert(e.weight);
      if (!allowed.count(e.weight)) {
        flag("weight not in A: eta(" + std::to_string(i) + "," +
             std::to_string(e.output) + ") = " + rational_to_string(e.weight));
      }
    }
  }

  if (fam.subclass == Subclass::kTwoValueWeakStrong) {
    // All pairs connected; the fan-in bound applies to strong (smaller
    // value) edges per output.
    const Rational strong = fam.weight_values.front();
    for (int j = 0; j < net.num_outputs(); ++j) {
      int strong_count = 0;
      for (int i = 0; i < net.num_inputs(); ++i) {
        const auto w = net.weight(i, j);
        if (!w) {
          flag("two-value-weak-strong requires every pair connected; missing (" +
               std::to_string(i) + "," + std::to_string(j) + ")");
        } else if (*w == strong) {
          ++strong_count;
        }
      }
      if (strong_count > fam.fan_in_k) {
        flag("strong-edge fan-in exceeded at output " + std::to_string(j) + ": " +
             std::to_string(strong_count) + " > " + std::to_string(fam.fan_in_k));
      }
    }
  } else {
    for (int j = 0; j < net.num_outputs(); ++j) {
      const int deg = static_cast<int>(net.parents(j).size());
      if (deg > fam.fan_in_k) {
        flag("fan-in exceeded at output " + std::to_string(j) + ": " +
             std::to_string(deg) + " > " + std::to_string(fam.fan_in_k));
      }
    }
  }

  switch (fam.subclass) {
    case Subclass::kOneWeightValue:
      if (used.size() > 1) {
        flag("one-weight-value network uses " + std::to_string(used.size()) +
             " distinct weights");
      }
      break;
    case Subclass::kPerOutputWeight:
      for (int j = 0; j < net.num_outputs(); ++j) {
        std::set<Rational> per;
        for (int i : net.parents(j)) per.insert(*net.weight(i, j));
        if (per.size() > 1) {
          flag("per-output-weight violated at output " + std::to_string(j));
        }
      }
      break;
    case Subclass::kPerInputWeight:
      for (int i = 0; i < net.num_inputs(); ++i) {
        std::set<Rational> per;
        for (const Edge& e : net.input_signature(i)) per.insert(e.weight);
        if (per.size() > 1) {
          flag("per-input-weight violated at input " + std::to_string(i));
        }
      }
      break;
    case Subclass::kGeneral:
    case Subclass::kTwoValueWeakStrong:
      break;
  }
  return report;
}

bool structurally_equivalent(const NoisyOrNetwork& a, const NoisyOrNetwork& b) {
  if (a.num_outputs() != b.num_outputs()) return false;
  if (a.num_inputs() != b.num_inputs()) return false;
  return a.canonical_signatures() == b.canonical_signatures();
}

BasicBlockPartition basic_blocks(const NoisyOrNetwork& net) {
  std::map<Signature, std::vector<int>,
           decltype([](const Signature& x, const Signature& y) {
             return compare_signatures(x, y) < 0;
           })>
      groups;
  for (int i = 0; i < net.num_inputs(); ++i) {
    groups[net.input_signature(i)].push_back(i);
  }
  BasicBlockPartition partition;
  for (auto& [sig, inputs] : groups) {
    partition.blocks.push_back(BasicBlock{std::move(inputs), sig});
  }
  return partition;
}

std::string NameLiteral::to_string() const {
  if (positive) {
    return "+" + std::to_string(output) + "@" + rational_to_string(weight);
  }
  return "-" + std::to_string(output);
}

std::string BlockName::to_string() const {
  std::string s;
  for (size_t i = 0; i < literals.size(); ++i) {
    if (i) s += " ";
    s += literals[i].to_string();
  }
  return s;
}

std::vector<int> name_intersection(const NoisyOrNetwork& net, const BlockName& name) {
  std::vector<int> result;
  for (int i = 0; i < net.num_inputs(); ++i) {
    bool keep = true;
    for (const NameLiteral& lit : name.literals) {
      const auto w = net.weight(i, lit.output);
      if (lit.positive ? !(w && *w == lit.weight) : w.has_value()) {
        keep = false;
        break;
      }
    }
    if (keep) result.push_back(i);
  }
  return result;
}

BlockName block_name(const NoisyOrNetwork& net, const std::vector<int>& block) {
  if (block.empty()) throw std::invalid_argument("empty input set is not a block");
  const Signature& sig = net.input_signature(block.front());
  if (sig.empty()) {
    throw std::invalid_argument("disconnected block has no short name");
  }
  for (int i : block) {
    if (i < 0 || i >= net.num_inputs()) throw std::out_of_range("input index");
    if (compare_signatures(net.input_signature(i), sig) != 0) {
      throw std::invalid_argument("input set is not a basic block");
    }
  }
  std::vector<char> in_block(static_cast<size_t>(net.num_inputs()), 0);
  for (int i : block) in_block[i] = 1;
  for (int i = 0; i < net.num_inputs(); ++i) {
    if (!in_block[i] && compare_signatures(net.input_signature(i), sig) == 0) {
      throw std::invalid_argument("input set is not a basic block");
    }
  }

  // Candidate literals, one per output: positive with the block's weight for
  // influenced outputs, negative otherwise.
  std::vector<NameLiteral> candidates;
  candidates.reserve(static_cast<size_t>(net.num_outputs()));
  {
    size_t edge_pos = 0;
    for (int j = 0; j < net.num_outputs(); ++j) {
      if (edge_pos < sig.size() && sig[edge_pos].output == j) {
        candidates.push_back(NameLiteral{j, true, sig[edge_pos].weight});
        ++edge_pos;
      } else {
        candidates.push_back(NameLiteral{j, false, Rational()});
      }
    }
  }

  auto matches = [&net](int input, const NameLiteral& lit) {
    const auto w = net.weight(input, lit.output);
    return lit.positive ? (w && *w == lit.weight) : !w.has_value();
  };

  BlockName name;
  std::vector<int> current;
  std::vector<char> taken(candidates.size(), 0);

  // First literal must be positive so the intersection starts bounded by the
  // fan-in; pick the tightest one, ties to the lowest output index.
  {
    int best = -1;
    size_t best_size = 0;
    for (size_t c = 0; c < candidates.size(); ++c) {
      if (!candidates[c].positive) continue;
      size_t size = 0;
      for (int i = 0; i < net.num_inputs(); ++i) {
        if (matches(i, candidates[c])) ++size;
      }
      if (best < 0 || size < best_size) {
        best = static_cast<int>(c);
        best_size = size;
      }
    }
    taken[best] = 1;
    name.literals.push_back(candidates[best]);
    for (int i = 0; i < net.num_inputs(); ++i) {
      if (matches(i, candidates[best])) current.push_back(i);
    }
  }

  while (current.size() != block.size()) {
    int best = -1;
    size_t best_size = current.size();
    for (size_t c = 0; c < candidates.size(); ++c) {
      if (taken[c]) continue;
      size_t size = 0;
      for (int i : current) {
        if (matches(i, candidates[c])) ++size;
      }
      if (size < best_size) {  // strict shrink required
        best = static_cast<int>(c);
        best_size = size;
      }
    }
    if (best < 0) throw std::logic_error("block name construction stalled");
    taken[best] = 1;
    name.literals.push_back(candidates[best]);
    std::vector<int> next;
    for (int i : current) {
      if (matches(i, candidates[best])) next.push_back(i);
    }
    current = std::move(next);
  }
  return name;
}

void compute_block_names(const NoisyOrNetwork& net, BasicBlockPartition& partition) {
  partition.names.assign(partition.blocks.size(), std::nullopt);
  for (size_t b = 0; b < partition.blocks.size(); ++b) {
    if (!partition.blocks[b].signature.empty()) {
      partition.names[b] = block_name(net, partition.blocks[b].inputs);
    }
  }
}

InducedSubnetwork induced_subnetwork(const NoisyOrNetwork& net,
                                     const std::vector<int>& outputs) {
  std::vector<int> sorted = outputs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int j : sorted) {
    if (j < 0 || j >= net.num_outputs()) throw std::out_of_range("output index");
  }

  std::vector<int> kept_inputs;
  for (int i = 0; i < net.num_inputs(); ++i) {
    if (!net.restricted_signature(i, sorted).empty()) kept_inputs.push_back(i);
  }

  InducedSubnetwork result;
  result.input_map = kept_inputs;
  result.output_map = sorted;
  result.net = NoisyOrNetwork(static_cast<int>(kept_inputs.size()),
                              static_cast<int>(sorted.size()));
  for (size_t ii = 0; ii < kept_inputs.size(); ++ii) {
    for (size_t jj = 0; jj < sorted.size(); ++jj) {
      const auto w = net.weight(kept_inputs[ii], sorted[jj]);
      if (w) result.net.add_edge(static_cast<int>(ii), static_cast<int>(jj), *w);
    }
  }
  return result;
}

namespace {

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int t = 1; t <= k; ++t) {
    result = result * static_cast<std::uint64_t>(n - k + t) /
             static_cast<std::uint64_t>(t);
  }
  return result;
}

// Lexicographic unranking of a size-s subset of {0..m-1}.
std::vector<int> unrank_subset(std::uint64_t rank, int m, int s) {
  std::vector<int> subset;
  subset.reserve(static_cast<size_t>(s));
  int a = 0;
  for (int remaining = s; remaining > 0; --remaining) {
    while (true) {
      const std::uint64_t with_a = binom(m - a - 1, remaining - 1);
      if (rank < with_a) break;
      rank -= with_a;
      ++a;
    }
    subset.push_back(a);
    ++a;
  }
  return subset;
}

// Uniform over all subsets of {0..m-1} of size <= k.
std::vector<int> random_bounded_subset(SplitMix64& rng, int m, int k) {
  std::uint64_t total = 0;
  for (int s = 0; s <= k; ++s) total += binom(m, s);
  std::uint64_t r = rng.below(total);
  for (int s = 0; s <= k; ++s) {
    const std::uint64_t count = binom(m, s);
    if (r < count) return unrank_subset(r, m, s);
    r -= count;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

NoisyOrNetwork random_network(const NetworkFamily& fam, int num_inputs,
                              int num_outputs, std::uint64_t seed) {
  fam.check();
  if (num_inputs < 1 || num_outputs < 1) {
    throw std::invalid_argument("network needs at least one input and output");
  }
  const int k = std::min(fam.fan_in_k, num_inputs);
  const auto& values = fam.weight_values;
  SplitMix64 rng(seed);
  NoisyOrNetwork net(num_inputs, num_outputs);

  if (fam.subclass == Subclass::kTwoValueWeakStrong) {
    const Rational& strong = values[0];
    const Rational& weak = values[1];
    for (int j = 0; j < num_outputs; ++j) {
      const std::vector<int> strong_inputs = random_bounded_subset(rng, num_inputs, k);
      for (int i = 0; i < num_inputs; ++i) {
        const bool is_strong = std::binary_search(strong_inputs.begin(),
                                                  strong_inputs.end(), i);
        net.add_edge(i, j, is_strong ? strong : weak);
      }
    }
    return net;
  }

  const Rational shared_value =
      values[values.size() == 1 ? 0 : static_cast<size_t>(rng.below(values.size()))];
  std::vector<std::vector<int>> parents(static_cast<size_t>(num_outputs));
  for (int j = 0; j < num_outputs; ++j) {
    parents[j] = random_bounded_subset(rng, num_inputs, k);
  }

  switch (fam.subclass) {
    case Subclass::kGeneral:
      for (int j = 0; j < num_outputs; ++j) {
        for (int i : parents[j]) {
          net.add_edge(i, j, values[static_cast<size_t>(rng.below(values.size()))]);
        }
      }
      break;
    case Subclass::kOneWeightValue:
      for (int j = 0; j < num_outputs; ++j) {
        for (int i : parents[j]) net.add_edge(i, j, shared_value);
      }
      break;
    case Subclass::kPerOutputWeight:
      for (int j = 0; j < num_outputs; ++j) {
        const Rational w = values[static_cast<size_t>(rng.below(values.size()))];
        for (int i : parents[j]) net.add_edge(i, j, w);
      }
      break;
    case Subclass::kPerInputWeight: {
      std::vector<Rational> per_input(static_cast<size_t>(num_inputs));
      for (int i = 0; i < num_inputs; ++i) {
        per_input[i] = values[static_cast<size_t>(rng.below(values.size()))];
      }
      for (int j = 0; j < num_outputs; ++j) {
        for (int i : parents[j]) net.add_edge(i, j, per_input[i]);
      }
      break;
    }
    case Subclass::kTwoValueWeakStrong:
      throw std::logic_error("handled above");
  }
  return net;
}

}  // namespace noisyor
