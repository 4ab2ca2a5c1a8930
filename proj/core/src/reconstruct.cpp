#include "noisyor/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <sstream>

namespace noisyor {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

/// All nondecreasing weight-index tuples of size min_size..max_size, ordered
/// by size then lexicographically.
std::vector<std::vector<int>> weight_multisets(int num_values, int min_size,
                                               int max_size) {
  std::vector<std::vector<int>> result;
  for (int size = min_size; size <= max_size; ++size) {
    std::vector<int> tuple(static_cast<size_t>(size), 0);
    while (true) {
      result.push_back(tuple);
      int pos = size - 1;
      while (pos >= 0 && tuple[static_cast<size_t>(pos)] == num_values - 1) --pos;
      if (pos < 0) break;
      const int next = tuple[static_cast<size_t>(pos)] + 1;
      for (int t = pos; t < size; ++t) tuple[static_cast<size_t>(t)] = next;
    }
  }
  return result;
}

struct RunState {
  SeqOracle* oracle = nullptr;
  std::uint64_t asked = 0;
  std::uint64_t max_queries = 0;
  int largest_query = 0;

  bool ask(const SeqQuery& query) {
    if (max_queries && asked + 1 > max_queries) {
      throw QueryBudgetExceeded("query budget exhausted after " +
                                std::to_string(asked) + " queries");
    }
    ++asked;
    largest_query = std::max(largest_query, static_cast<int>(query.outputs.size()));
    return oracle->ask(query);
  }
};

std::string outputs_to_string(const std::vector<int>& outputs) {
  std::ostringstream out;
  out << "{";
  for (size_t t = 0; t < outputs.size(); ++t) {
    if (t) out << ",";
    out << outputs[t];
  }
  out << "}";
  return out.str();
}

// ---- basic-block algorithm ------------------------------------------------

// Inputs of the prefix grouped by full signature; named blocks grouped by
// their name's output set so one enumeration round serves all of them.
struct Round {
  std::vector<int> name_outputs;      // sorted, <= k of them
  std::vector<size_t> block_indices;  // indices into the partition
};

struct BlockCounts {
  // weight-value index -> number of the block's inputs connected to the new
  // output with that weight
  std::map<int, int> per_weight;
  int total() const {
    int sum = 0;
    for (const auto& [w, c] : per_weight) sum += c;
    return sum;
  }
};

// Extension of the induced subnetwork by one output: per signature class a
// weight multiset for the class inputs that connect, plus a multiset of
// fresh inputs.
struct SubnetClasses {
  std::vector<Signature> signatures;       // canonical order
  std::vector<std::vector<int>> members;   // subnet input indices, ascending
};

SubnetClasses group_subnet_inputs(const NoisyOrNetwork& subnet) {
  std::map<Signature, std::vector<int>,
           decltype([](const Signature& x, const Signature& y) {
             return compare_signatures(x, y) < 0;
           })>
      groups;
  for (int i = 0; i < subnet.num_inputs(); ++i) {
    groups[subnet.input_signature(i)].push_back(i);
  }
  SubnetClasses classes;
  for (auto& [sig, members] : groups) {
    classes.signatures.push_back(sig);
    classes.members.push_back(std::move(members));
  }
  return classes;
}

NoisyOrNetwork build_extension_candidate(const NoisyOrNetwork& subnet,
                                         const SubnetClasses& classes,
                                         const std::vector<std::vector<int>>& chosen,
                                         const std::vector<int>& fresh,
                                         const std::vector<Rational>& values) {
  const int base = subnet.num_inputs();
  const int new_output = subnet.num_outputs();
  NoisyOrNetwork candidate(base + static_cast<int>(fresh.size()), new_output + 1);
  for (int i = 0; i < base; ++i) {
    for (const Edge& e : subnet.input_signature(i)) {
      candidate.add_edge(i, e.output, e.weight);
    }
  }
  for (size_t c = 0; c < chosen.size(); ++c) {
    for (size_t t = 0; t < chosen[c].size(); ++t) {
      candidate.add_edge(classes.members[c][t], new_output,
                         values[static_cast<size_t>(chosen[c][t])]);
    }
  }
  for (size_t t = 0; t < fresh.size(); ++t) {
    candidate.add_edge(base + static_cast<int>(t), new_output,
                       values[static_cast<size_t>(fresh[t])]);
  }
  return candidate;
}

}  // namespace

std::uint64_t worst_case_query_bound(int num_inputs, int num_outputs, int fan_in_k,
                                     int num_weight_values) {
  std::uint64_t bound = saturating_mul(static_cast<std::uint64_t>(num_inputs),
                                       static_cast<std::uint64_t>(num_outputs));
  for (int t = 0; t < 2 * fan_in_k; ++t) {
    bound = saturating_mul(bound, static_cast<std::uint64_t>(fan_in_k));
  }
  for (int t = 0; t < fan_in_k; ++t) {
    bound = saturating_mul(bound, static_cast<std::uint64_t>(num_weight_values));
  }
  return bound;
}

ReconstructionReport reconstruct_simple(SeqOracle& oracle,
                                        const ReconstructionConfig& cfg) {
  cfg.family.check();
  const auto start = Clock::now();
  const int m = cfg.num_inputs;
  const int n = cfg.num_outputs;
  const int k = std::min(cfg.family.fan_in_k, m);
  const auto& values = cfg.family.weight_values;

  RunState state{&oracle, 0, cfg.max_queries, 0};
  ReconstructionReport report;
  NoisyOrNetwork prefix(m, n);

  for (int j = 0; j < n; ++j) {
    OutputTrace trace;
    trace.output = j;
    std::vector<int> query_outputs(static_cast<size_t>(j) + 1);
    for (int t = 0; t <= j; ++t) query_outputs[static_cast<size_t>(t)] = t;

    bool committed = false;
    // Parent sets by size then lexicographic; weight tuples odometer-style in
    // the canonical order of A.
    for (int size = 0; size <= k && !committed; ++size) {
      std::vector<int> subset(static_cast<size_t>(size));
      for (int t = 0; t < size; ++t) subset[static_cast<size_t>(t)] = t;
      while (!committed) {
        std::vector<int> weight_pick(static_cast<size_t>(size), 0);
        while (!committed) {
          NoisyOrNetwork candidate_full = prefix;
          for (int t = 0; t < size; ++t) {
            candidate_full.add_edge(
                subset[static_cast<size_t>(t)], j,
                values[static_cast<size_t>(weight_pick[static_cast<size_t>(t)])]);
          }
          const InducedSubnetwork induced =
              induced_subnetwork(candidate_full, query_outputs);
          ++trace.candidates_tried;
          if (state.ask(SeqQuery{query_outputs, induced.net})) {
            prefix = std::move(candidate_full);
            committed = true;
            for (int i = 0; i < m; ++i) {
              if (const auto w = prefix.weight(i, j)) {
                trace.committed_edges.push_back(std::to_string(i) + "@" +
                                                rational_to_string(*w));
              }
            }
            break;
          }
          // next weight tuple
          int pos = size - 1;
          while (pos >= 0 &&
                 weight_pick[static_cast<size_t>(pos)] ==
                     static_cast<int>(values.size()) - 1) {
            --pos;
          }
          if (pos < 0) break;
          ++weight_pick[static_cast<size_t>(pos)];
          for (int t = pos + 1; t < size; ++t) weight_pick[static_cast<size_t>(t)] = 0;
        }
        if (committed || size == 0) break;
        // next subset of this size, lexicographic
        int pos = size - 1;
        while (pos >= 0 && subset[static_cast<size_t>(pos)] == m - size + pos) --pos;
        if (pos < 0) break;
        ++subset[static_cast<size_t>(pos)];
        for (int t = pos + 1; t < size; ++t) {
          subset[static_cast<size_t>(t)] = subset[static_cast<size_t>(t - 1)] + 1;
        }
      }
    }
    if (!committed) {
      throw NoCandidateAccepted("no candidate accepted for output " +
                                std::to_string(j));
    }
    report.trace.push_back(std::move(trace));
  }

  report.recovered = std::move(prefix);
  report.seq_count = state.asked;
  report.largest_query_outputs = state.largest_query;
  report.samples_used = oracle.samples_consumed();
  report.guaranteed_regime = cfg.family.subclass == Subclass::kOneWeightValue;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

ReconstructionReport reconstruct(SeqOracle& oracle, const ReconstructionConfig& cfg) {
  cfg.family.check();
  const auto start = Clock::now();
  const int m = cfg.num_inputs;
  const int n = cfg.num_outputs;
  const int k = std::min(cfg.family.fan_in_k, m);
  const auto& values = cfg.family.weight_values;
  const int num_values = static_cast<int>(values.size());
  const bool scan_all = !oracle.exact();

  RunState state{&oracle, 0, cfg.max_queries, 0};
  ReconstructionReport report;
  NoisyOrNetwork prefix(m, n);

  for (int j = 0; j < n; ++j) {
    OutputTrace trace;
    trace.output = j;

    BasicBlockPartition partition = basic_blocks(prefix);
    std::vector<int> disconnected;  // inputs with no committed connection yet
    std::vector<Round> rounds;
    {
      std::map<std::vector<int>, std::vector<size_t>> by_name_outputs;
      for (size_t b = 0; b < partition.blocks.size(); ++b) {
        if (partition.blocks[b].signature.empty()) {
          disconnected = partition.blocks[b].inputs;
          continue;
        }
        const BlockName name = block_name(prefix, partition.blocks[b].inputs);
        std::vector<int> name_outputs;
        for (const NameLiteral& lit : name.literals) name_outputs.push_back(lit.output);
        std::sort(name_outputs.begin(), name_outputs.end());
        name_outputs.erase(std::unique(name_outputs.begin(), name_outputs.end()),
                           name_outputs.end());
        by_name_outputs[name_outputs].push_back(b);
      }
      for (auto& [outputs, blocks] : by_name_outputs) {
        rounds.push_back(Round{outputs, blocks});
      }
    }

    // Single-output round first: the total weight multiset of the new
    // output's parents. Every parent is visible in any induced subnetwork
    // containing the output, so this total prunes the block rounds below.
    std::vector<int> total_multiset;  // ascending weight indices
    {
      bool accepted = false;
      int yes_count = 0;
      double best_score = std::numeric_limits<double>::infinity();
      for (const std::vector<int>& multiset :
           weight_multisets(num_values, 0, std::min(k, m))) {
        NoisyOrNetwork candidate(static_cast<int>(multiset.size()), 1);
        for (size_t t = 0; t < multiset.size(); ++t) {
          candidate.add_edge(static_cast<int>(t), 0,
                             values[static_cast<size_t>(multiset[t])]);
        }
        ++trace.candidates_tried;
        if (state.ask(SeqQuery{{j}, candidate})) {
          ++yes_count;
          const double score = oracle.last_mismatch();
          if (!accepted || score < best_score) {
            accepted = true;
            best_score = score;
            total_multiset = multiset;
          }
          if (!scan_all) break;
        }
      }
      if (!accepted) {
        throw NoCandidateAccepted("no parent multiset accepted for output " +
                                  std::to_string(j));
      }
      if (yes_count > 1) {
        report.warnings.push_back(
            "output " + std::to_string(j) + ", single-output round: " +
            std::to_string(yes_count) +
            " candidates accepted; committed the closest fit");
      }
    }

    std::vector<int> total_count_per_weight(static_cast<size_t>(num_values), 0);
    for (int widx : total_multiset) ++total_count_per_weight[static_cast<size_t>(widx)];

    std::map<size_t, BlockCounts> counts;  // partition block index -> counts
    std::vector<int> attributed(static_cast<size_t>(num_values), 0);
    auto attributed_total = [&attributed] {
      int sum = 0;
      for (int c : attributed) sum += c;
      return sum;
    };

    for (const Round& round : rounds) {
      if (attributed_total() == static_cast<int>(total_multiset.size())) {
        // Everything is already accounted for; the remaining blocks cannot
        // hold further connections.
        for (size_t b : round.block_indices) counts[b] = BlockCounts{};
        continue;
      }
      ++trace.block_rounds;
      const InducedSubnetwork induced = induced_subnetwork(prefix, round.name_outputs);
      const SubnetClasses classes = group_subnet_inputs(induced.net);
      const size_t num_classes = classes.signatures.size();
      const int max_fresh_possible = m - induced.net.num_inputs();

      std::vector<int> query_outputs = round.name_outputs;
      query_outputs.push_back(j);

      bool accepted = false;
      bool stop = false;
      int yes_count = 0;
      double best_score = std::numeric_limits<double>::infinity();
      std::vector<std::vector<int>> accepted_choice;
      std::vector<std::vector<int>> current(num_classes);
      std::vector<int> unused = total_count_per_weight;  // T minus chosen so far

      // Depth-first over per-class sub-multisets of the learned total; the
      // leftover of the total is forced to be the fresh part.
      auto explore = [&](auto&& self, size_t c) -> void {
        if (stop) return;
        if (c == num_classes) {
          std::vector<int> fresh;
          for (int w = 0; w < num_values; ++w) {
            fresh.insert(fresh.end(), static_cast<size_t>(unused[w]), w);
          }
          if (static_cast<int>(fresh.size()) > max_fresh_possible) return;
          const NoisyOrNetwork candidate = build_extension_candidate(
              induced.net, classes, current, fresh, values);
          ++trace.candidates_tried;
          if (state.ask(SeqQuery{query_outputs, candidate})) {
            ++yes_count;
            const double score = oracle.last_mismatch();
            if (!accepted || score < best_score) {
              accepted = true;
              best_score = score;
              accepted_choice = current;
            }
            if (!scan_all) stop = true;
          }
          return;
        }
        const int class_size = static_cast<int>(classes.members[c].size());
        for (const std::vector<int>& choice :
             weight_multisets(num_values, 0, std::min(class_size, k))) {
          bool fits = true;
          for (int widx : choice) {
            if (--unused[static_cast<size_t>(widx)] < 0) fits = false;
          }
          if (fits) {
            current[c] = choice;
            self(self, c + 1);
          }
          for (int widx : choice) ++unused[static_cast<size_t>(widx)];
          if (stop) return;
        }
      };
      explore(explore, 0);

      if (!accepted) {
        throw NoCandidateAccepted("no extension accepted for output " +
                                  std::to_string(j) + " on subnetwork " +
                                  outputs_to_string(round.name_outputs));
      }
      if (yes_count > 1) {
        report.warnings.push_back("output " + std::to_string(j) +
                                  ", subnetwork " +
                                  outputs_to_string(round.name_outputs) + ": " +
                                  std::to_string(yes_count) +
                                  " candidates accepted; committed the closest fit");
      }

      // Read off the committed blocks' connection counts from the accepted
      // extension: a block named over these outputs is exactly the class
      // with its restricted signature.
      for (size_t b : round.block_indices) {
        const BasicBlock& block = partition.blocks[b];
        Signature restricted;
        for (const Edge& e : block.signature) {
          const auto pos = std::lower_bound(round.name_outputs.begin(),
                                            round.name_outputs.end(), e.output);
          if (pos != round.name_outputs.end() && *pos == e.output) {
            restricted.push_back(Edge{
                static_cast<int>(pos - round.name_outputs.begin()), e.weight});
          }
        }
        size_t class_index = num_classes;
        for (size_t c = 0; c < num_classes; ++c) {
          if (compare_signatures(classes.signatures[c], restricted) == 0) {
            class_index = c;
            break;
          }
        }
        if (class_index == num_classes) {
          throw std::logic_error("block class missing from its own subnetwork");
        }
        BlockCounts bc;
        for (int widx : accepted_choice[class_index]) ++bc.per_weight[widx];
        if (bc.total() > static_cast<int>(block.inputs.size())) {
          throw InconsistentCounts(
              "accepted extension connects more inputs than block size at output " +
              std::to_string(j));
        }
        for (const auto& [widx, cnt] : bc.per_weight) {
          attributed[static_cast<size_t>(widx)] += cnt;
          if (attributed[static_cast<size_t>(widx)] >
              total_count_per_weight[static_cast<size_t>(widx)]) {
            throw InconsistentCounts(
                "block rounds attribute more connections than the accepted "
                "total at output " +
                std::to_string(j));
          }
        }
        counts[b] = std::move(bc);
      }
    }

    // Whatever the block rounds did not claim comes from previously unseen
    // inputs.
    std::vector<int> fresh_multiset;
    for (int w = 0; w < num_values; ++w) {
      const int extra =
          total_count_per_weight[static_cast<size_t>(w)] - attributed[static_cast<size_t>(w)];
      fresh_multiset.insert(fresh_multiset.end(), static_cast<size_t>(extra), w);
    }
    if (static_cast<int>(fresh_multiset.size()) >
        static_cast<int>(disconnected.size())) {
      throw InconsistentCounts("more fresh parents than unseen inputs at output " +
                               std::to_string(j));
    }

    // Commit: weights in canonical order onto the lowest input indices of
    // each block, fresh parents onto the lowest unseen inputs.
    for (const auto& [b, bc] : counts) {
      const std::vector<int>& members = partition.blocks[b].inputs;
      size_t next = 0;
      for (const auto& [widx, cnt] : bc.per_weight) {
        for (int t = 0; t < cnt; ++t) {
          prefix.add_edge(members[next++], j, values[static_cast<size_t>(widx)]);
        }
      }
    }
    {
      size_t next = 0;
      std::vector<int> sorted_fresh = fresh_multiset;
      std::sort(sorted_fresh.begin(), sorted_fresh.end());
      for (int widx : sorted_fresh) {
        prefix.add_edge(disconnected[next++], j, values[static_cast<size_t>(widx)]);
      }
    }
    for (int i = 0; i < m; ++i) {
      if (const auto w = prefix.weight(i, j)) {
        trace.committed_edges.push_back(std::to_string(i) + "@" +
                                        rational_to_string(*w));
      }
    }
    trace.notes.push_back("resolved " + std::to_string(counts.size()) +
                          " blocks, " + std::to_string(fresh_multiset.size()) +
                          " fresh parents");
    report.trace.push_back(std::move(trace));
  }

  report.recovered = std::move(prefix);
  report.seq_count = state.asked;
  report.largest_query_outputs = state.largest_query;
  report.samples_used = oracle.samples_consumed();
  report.guaranteed_regime = cfg.family.subclass == Subclass::kOneWeightValue;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

namespace {

SeqBudget end_to_end_budget(const ReconstructionConfig& cfg) {
  cfg.family.check();
  if (cfg.bias >= 1) {
    throw DegenerateData(
        "bias 1 makes every output constantly zero; samples carry no structure");
  }
  if (!(cfg.alpha > 0)) throw std::invalid_argument("alpha must be > 0");
  if (!(cfg.delta > 0 && cfg.delta < 1)) {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  const int k = cfg.family.fan_in_k;
  const std::uint64_t bound = worst_case_query_bound(
      cfg.num_inputs, cfg.num_outputs, k, cfg.family.num_weight_values());
  const double delta_per_query = cfg.delta / (2.0 * static_cast<double>(bound));
  const std::size_t needed =
      required_sample_size(cfg.alpha, delta_per_query, k + 1);
  return SeqBudget{cfg.alpha, delta_per_query, needed};
}

}  // namespace

ReconstructionReport end_to_end_learn(const SampleSet& samples,
                                      const ReconstructionConfig& cfg) {
  const SeqBudget budget = end_to_end_budget(cfg);
  if (samples.size() < budget.sample_size) {
    throw std::invalid_argument("insufficient samples: have " +
                                std::to_string(samples.size()) + ", need " +
                                std::to_string(budget.sample_size));
  }
  if (samples.num_outputs != cfg.num_outputs) {
    throw std::invalid_argument("sample width does not match num_outputs");
  }
  StatisticalSeqOracle oracle(samples, BiasSetting{cfg.bias}, budget,
                              cfg.family.fan_in_k + 1);
  ReconstructionReport report = reconstruct(oracle, cfg);
  report.samples_used = samples.size();
  return report;
}

ReconstructionReport end_to_end_learn(const SampleSummary& summary,
                                      const ReconstructionConfig& cfg) {
  const SeqBudget budget = end_to_end_budget(cfg);
  if (summary.count < budget.sample_size) {
    throw std::invalid_argument("insufficient samples: have " +
                                std::to_string(summary.count) + ", need " +
                                std::to_string(budget.sample_size));
  }
  if (summary.num_outputs != cfg.num_outputs) {
    throw std::invalid_argument("sample width does not match num_outputs");
  }
  StatisticalSeqOracle oracle(summary, BiasSetting{cfg.bias}, budget,
                              cfg.family.fan_in_k + 1);
  ReconstructionReport report = reconstruct(oracle, cfg);
  report.samples_used = summary.count;
  return report;
}

}  // namespace noisyor
