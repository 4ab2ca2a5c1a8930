#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noisyor/rational.hpp"

namespace noisyor {

/// One edge of the bipartite structure, seen from the input side.
struct Edge {
  int output = 0;
  Rational weight;  // suppression probability, in [0,1); 1 encodes "no edge"
};

bool operator==(const Edge& a, const Edge& b);

/// An input's influence signature: its edges sorted by output index.
/// Two inputs with equal signatures influence the outputs identically.
using Signature = std::vector<Edge>;

int compare_signatures(const Signature& a, const Signature& b);

/// Two-layer noisy-OR structure: m hidden inputs, n observable outputs,
/// and a sparse weight map. Absence of an (input, output) entry means the
/// pair is not connected. Immutable in practice: build with add_edge, then
/// treat as a value.
class NoisyOrNetwork {
 public:
  NoisyOrNetwork() = default;
  NoisyOrNetwork(int num_inputs, int num_outputs);

  int num_inputs() const { return static_cast<int>(rows_.size()); }
  int num_outputs() const { return num_outputs_; }

  /// Adds edge (input, output) with the given weight (canonicalized on the
  /// way in). Throws std::out_of_range on bad indices, std::invalid_argument
  /// if the weight is outside [0,1) or the edge already exists.
  void add_edge(int input, int output, const Rational& weight_in);

  bool connected(int input, int output) const;
  std::optional<Rational> weight(int input, int output) const;

  /// The input's signature, sorted by output index.
  const Signature& input_signature(int input) const { return rows_[input]; }

  /// Outputs influenced by the given input (T_i).
  std::vector<int> influenced_outputs(int input) const;

  /// Inputs connected to the given output (S_j).
  std::vector<int> parents(int output) const;

  /// Largest |S_j| over all outputs.
  int max_fan_in() const;

  int edge_count() const;

  /// Signature restricted to a sorted set of outputs.
  Signature restricted_signature(int input, const std::vector<int>& outputs) const;

  /// Sorted copy of all input signatures; two networks are structurally
  /// equivalent iff these lists are equal (and dimensions match).
  std::vector<Signature> canonical_signatures() const;

  /// Deterministic text form of canonical_signatures, usable as a map key.
  std::string canonical_key() const;

 private:
  int num_outputs_ = 0;
  std::vector<Signature> rows_;  // rows_[i] sorted by output index
};

bool operator==(const NoisyOrNetwork& a, const NoisyOrNetwork& b);

enum class Subclass {
  kGeneral,
  kOneWeightValue,
  kPerOutputWeight,
  kPerInputWeight,
  kTwoValueWeakStrong,
};

std::string subclass_to_string(Subclass s);
Subclass subclass_from_string(const std::string& s);

/// A restriction triple: fan-in bound, the finite set of allowed weight
/// values, and an optional resolution beta every value must be a natural
/// multiple of.
struct NetworkFamily {
  int fan_in_k = 1;
  std::vector<Rational> weight_values;  // sorted ascending, all in [0,1)
  std::optional<Rational> beta;
  Subclass subclass = Subclass::kGeneral;

  /// Throws std::invalid_argument when the triple itself is inconsistent
  /// (empty A, a value outside [0,1), value 1, beta not dividing some value,
  /// subclass needing a different |A|).
  void check() const;

  int num_weight_values() const { return static_cast<int>(weight_values.size()); }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Diagnostic check of a network against a family; reports every violated
/// constraint and never throws.
ValidationReport validate(const NoisyOrNetwork& net, const NetworkFamily& fam);

/// True iff some permutation of the inputs maps one network onto the other
/// (outputs are matched positionally). Networks of different dimensions are
/// never equivalent; disconnected inputs count via their empty signatures.
bool structurally_equivalent(const NoisyOrNetwork& a, const NoisyOrNetwork& b);

struct BasicBlock {
  std::vector<int> inputs;  // ascending
  Signature signature;      // common to all inputs of the block
};

/// One literal of a block name. A positive literal selects inputs connected
/// to `output` with exactly `weight`; a negative literal selects inputs not
/// connected to `output`. (With a single allowed weight value the positive
/// literal degenerates to plain S_j membership.)
struct NameLiteral {
  int output = 0;
  bool positive = true;
  Rational weight;  // meaningful only for positive literals

  std::string to_string() const;
};

struct BlockName {
  std::vector<NameLiteral> literals;

  std::string to_string() const;
};

struct BasicBlockPartition {
  std::vector<BasicBlock> blocks;  // canonical order: by signature
  /// Names for blocks with nonempty signature; disconnected block has none.
  std::vector<std::optional<BlockName>> names;  // parallel to blocks; may be empty
};

/// Partitions the inputs by signature. Blocks come out in canonical
/// signature order; the disconnected block (empty signature), if present,
/// comes first. Does not compute names.
BasicBlockPartition basic_blocks(const NoisyOrNetwork& net);

/// Greedy short name for a basic block with nonempty signature: at most
/// max_fan_in literals whose intersection is exactly the block. Throws
/// std::invalid_argument if the input set is not a basic block of the
/// network or has empty signature.
BlockName block_name(const NoisyOrNetwork& net, const std::vector<int>& block);

/// Evaluates a name: the set of inputs satisfying every literal.
std::vector<int> name_intersection(const NoisyOrNetwork& net, const BlockName& name);

/// Fills in names for every connected block of the partition.
void compute_block_names(const NoisyOrNetwork& net, BasicBlockPartition& partition);

struct InducedSubnetwork {
  NoisyOrNetwork net;
  std::vector<int> input_map;   // subnet input -> original input
  std::vector<int> output_map;  // subnet output -> original output (sorted)
};

/// The subnetwork induced by an output subset: exactly those outputs plus
/// every input connected to at least one of them, original weights kept.
InducedSubnetwork induced_subnetwork(const NoisyOrNetwork& net,
                                     const std::vector<int>& outputs);

/// Deterministic-per-seed random member of the family: each output's parent
/// set is uniform over subsets of size <= k, weights uniform over A subject
/// to the subclass tag. Throws std::invalid_argument if the family is
/// unsatisfiable.
NoisyOrNetwork random_network(const NetworkFamily& fam, int num_inputs,
                              int num_outputs, std::uint64_t seed);

}  // namespace noisyor
