#include "noisyor/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace noisyor {

UnivariatePolynomial::UnivariatePolynomial(std::vector<Rational> coefficients)
    : coefficients_(std::move(coefficients)) {
  normalize();
}

void UnivariatePolynomial::normalize() {
  while (!coefficients_.empty() && coefficients_.back() == 0) {
    coefficients_.pop_back();
  }
}

UnivariatePolynomial UnivariatePolynomial::constant(const Rational& c) {
  return UnivariatePolynomial(std::vector<Rational>{c});
}

UnivariatePolynomial UnivariatePolynomial::linear(const Rational& a,
                                                  const Rational& b) {
  return UnivariatePolynomial(std::vector<Rational>{a, b});
}

Rational UnivariatePolynomial::leading_coefficient() const {
  if (is_zero()) return Rational(0);
  return coefficients_.back();
}

Rational UnivariatePolynomial::evaluate(const Rational& x) const {
  Rational acc(0);
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

double UnivariatePolynomial::evaluate(double x) const {
  double acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + to_double(*it);
  }
  return acc;
}

UnivariatePolynomial UnivariatePolynomial::operator+(
    const UnivariatePolynomial& other) const {
  std::vector<Rational> out(std::max(coefficients_.size(), other.coefficients_.size()),
                            Rational(0));
  for (size_t i = 0; i < coefficients_.size(); ++i) out[i] += coefficients_[i];
  for (size_t i = 0; i < other.coefficients_.size(); ++i) {
    out[i] += other.coefficients_[i];
  }
  return UnivariatePolynomial(std::move(out));
}

UnivariatePolynomial UnivariatePolynomial::operator-(
    const UnivariatePolynomial& other) const {
  std::vector<Rational> out(std::max(coefficients_.size(), other.coefficients_.size()),
                            Rational(0));
  for (size_t i = 0; i < coefficients_.size(); ++i) out[i] += coefficients_[i];
  for (size_t i = 0; i < other.coefficients_.size(); ++i) {
    out[i] -= other.coefficients_[i];
  }
  return UnivariatePolynomial(std::move(out));
}

UnivariatePolynomial UnivariatePolynomial::operator*(
    const UnivariatePolynomial& other) const {
  if (is_zero() || other.is_zero()) return UnivariatePolynomial();
  std::vector<Rational> out(coefficients_.size() + other.coefficients_.size() - 1,
                            Rational(0));
  for (size_t i = 0; i < coefficients_.size(); ++i) {
    for (size_t j = 0; j < other.coefficients_.size(); ++j) {
      out[i + j] += coefficients_[i] * other.coefficients_[j];
    }
  }
  return UnivariatePolynomial(std::move(out));
}

std::string UnivariatePolynomial::to_string() const {
  if (is_zero()) return "0";
  return rationals_to_string(coefficients_);
}

UnivariatePolynomial all_zero_polynomial(const NoisyOrNetwork& net,
                                         const std::vector<int>& Y) {
  UnivariatePolynomial product = UnivariatePolynomial::constant(Rational(1));
  for (int i = 0; i < net.num_inputs(); ++i) {
    const Signature sig = net.restricted_signature(i, Y);
    if (sig.empty()) continue;
    Rational w(1);
    for (const Edge& e : sig) w *= e.weight;
    product = product * UnivariatePolynomial::linear(w, 1 - w);
  }
  return product;
}

NearRootBound near_root_measure_bound(int degree, int count, const Rational& c,
                                      const Rational& alpha) {
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (c <= 0) throw std::invalid_argument("leading coefficient bound must be > 0");
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  NearRootBound bound;
  bound.crossing_count = static_cast<std::int64_t>(degree) * count;
  const double ratio = to_double(alpha) / (2.0 * to_double(c));
  bound.measure = 8.0 * degree * count * std::pow(ratio, 1.0 / degree);
  return bound;
}

namespace {

std::vector<int> mask_to_subset(std::uint32_t mask, const std::vector<int>& outputs) {
  std::vector<int> subset;
  for (size_t b = 0; b < outputs.size(); ++b) {
    if (mask >> b & 1) subset.push_back(outputs[b]);
  }
  return subset;
}

}  // namespace

Rational separation_at(const Rational& p, const NoisyOrNetwork& a,
                       const NoisyOrNetwork& b, int max_subset,
                       std::uint64_t max_enumerated) {
  if (a.num_outputs() != b.num_outputs()) {
    throw std::invalid_argument("networks must have the same outputs");
  }
  const int n = a.num_outputs();
  if (n > 31) throw std::runtime_error("subset enumeration cap exceeded");
  std::vector<int> all_outputs(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) all_outputs[j] = j;

  const BiasSetting bias{Rational(p)};
  Rational best(0);
  std::uint64_t visited = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    if (std::popcount(mask) > max_subset) continue;
    if (++visited > max_enumerated) {
      throw std::runtime_error("subset enumeration cap exceeded");
    }
    const std::vector<int> subset = mask_to_subset(mask, all_outputs);
    const Rational gap = abs(all_zero_probability(a, subset, bias) -
                             all_zero_probability(b, subset, bias));
    if (gap > best) best = gap;
  }
  return best;
}

namespace {

// Input type: a candidate signature over the n outputs. Enumeration of
// networks up to equivalence walks nondecreasing type-index multisets.
struct TypeList {
  std::vector<Signature> types;
};

TypeList build_type_list(const std::vector<Rational>& values, int num_outputs) {
  TypeList list;
  const std::uint32_t masks = std::uint32_t{1} << num_outputs;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<int> outputs;
    for (int j = 0; j < num_outputs; ++j) {
      if (mask >> j & 1) outputs.push_back(j);
    }
    // All weight assignments over the chosen outputs, lexicographic.
    std::vector<size_t> pick(outputs.size(), 0);
    while (true) {
      Signature sig;
      for (size_t t = 0; t < outputs.size(); ++t) {
        sig.push_back(Edge{outputs[t], values[pick[t]]});
      }
      list.types.push_back(std::move(sig));
      size_t pos = 0;
      while (pos < pick.size()) {
        if (++pick[pos] < values.size()) break;
        pick[pos] = 0;
        ++pos;
      }
      if (pos == pick.size()) break;
      if (outputs.empty()) break;
    }
  }
  return list;
}

NoisyOrNetwork network_from_type_counts(const TypeList& list,
                                        const std::vector<int>& chosen_types,
                                        int num_outputs) {
  NoisyOrNetwork net(static_cast<int>(chosen_types.size()), num_outputs);
  for (size_t i = 0; i < chosen_types.size(); ++i) {
    for (const Edge& e : list.types[static_cast<size_t>(chosen_types[i])]) {
      net.add_edge(static_cast<int>(i), e.output, e.weight);
    }
  }
  return net;
}

}  // namespace

std::vector<NoisyOrNetwork> enumerate_family_classes(const NetworkFamily& fam,
                                                     int num_inputs, int num_outputs,
                                                     std::uint64_t budget) {
  fam.check();
  if (num_inputs < 1 || num_outputs < 1) {
    throw std::invalid_argument("enumeration needs m, n >= 1");
  }
  if (num_outputs > 16) throw std::runtime_error("enumeration budget exceeded");
  const TypeList list = build_type_list(fam.weight_values, num_outputs);

  std::vector<NoisyOrNetwork> classes;
  std::vector<int> chosen;
  std::vector<int> fan_in(static_cast<size_t>(num_outputs), 0);
  std::uint64_t visited = 0;

  auto walk = [&](auto&& self, int next_type) -> void {
    if (static_cast<int>(chosen.size()) == num_inputs) {
      if (++visited > budget) throw std::runtime_error("enumeration budget exceeded");
      NoisyOrNetwork net = network_from_type_counts(list, chosen, num_outputs);
      if (validate(net, fam).ok) classes.push_back(std::move(net));
      return;
    }
    for (int t = next_type; t < static_cast<int>(list.types.size()); ++t) {
      bool feasible = true;
      for (const Edge& e : list.types[static_cast<size_t>(t)]) {
        // Prune on the plain fan-in bound; the weak/strong subclass revalidates.
        if (fam.subclass != Subclass::kTwoValueWeakStrong &&
            fan_in[e.output] + 1 > fam.fan_in_k) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      for (const Edge& e : list.types[static_cast<size_t>(t)]) ++fan_in[e.output];
      chosen.push_back(t);
      self(self, t);
      chosen.pop_back();
      for (const Edge& e : list.types[static_cast<size_t>(t)]) --fan_in[e.output];
    }
  };
  walk(walk, 0);
  return classes;
}

FamilyPolynomialTable family_polynomial_table(const NetworkFamily& fam,
                                              int num_inputs, int num_outputs,
                                              int max_subset, std::uint64_t budget) {
  FamilyPolynomialTable table;
  table.classes = enumerate_family_classes(fam, num_inputs, num_outputs, budget);
  std::vector<int> all_outputs(static_cast<size_t>(num_outputs));
  for (int j = 0; j < num_outputs; ++j) all_outputs[j] = j;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << num_outputs); ++mask) {
    if (std::popcount(mask) <= max_subset) table.subset_masks.push_back(mask);
  }
  table.polynomials.reserve(table.classes.size());
  for (const NoisyOrNetwork& net : table.classes) {
    std::vector<UnivariatePolynomial> polys;
    polys.reserve(table.subset_masks.size());
    for (std::uint32_t mask : table.subset_masks) {
      polys.push_back(all_zero_polynomial(net, mask_to_subset(mask, all_outputs)));
    }
    table.polynomials.push_back(std::move(polys));
  }
  return table;
}

std::vector<double> min_separation_curve(const FamilyPolynomialTable& table,
                                         int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");
  const size_t num_classes = table.classes.size();
  const size_t num_subsets = table.subset_masks.size();
  std::vector<double> curve(static_cast<size_t>(grid),
                            std::numeric_limits<double>::infinity());
  if (num_classes < 2) {
    // No pairs: every bias separates vacuously.
    return curve;
  }

  std::vector<double> values(num_classes * num_subsets);
  std::vector<size_t> order(num_classes);
  for (int g = 0; g < grid; ++g) {
    const double p = (g + 0.5) / grid;
    for (size_t c = 0; c < num_classes; ++c) {
      for (size_t s = 0; s < num_subsets; ++s) {
        values[c * num_subsets + s] = table.polynomials[c][s].evaluate(p);
      }
    }
    // Min over pairs of the max coordinate gap. Sorting by the first
    // coordinate lets the inner loop stop once that gap alone exceeds the
    // running minimum.
    for (size_t c = 0; c < num_classes; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
      return values[x * num_subsets] < values[y * num_subsets];
    });
    double best = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < num_classes && best > 0; ++a) {
      const double* va = &values[order[a] * num_subsets];
      for (size_t b = a + 1; b < num_classes; ++b) {
        const double* vb = &values[order[b] * num_subsets];
        if (vb[0] - va[0] >= best) break;
        double gap = 0;
        for (size_t s = 0; s < num_subsets; ++s) {
          gap = std::max(gap, std::abs(va[s] - vb[s]));
        }
        best = std::min(best, gap);
      }
    }
    curve[static_cast<size_t>(g)] = best;
  }
  return curve;
}

GoodBiasProfile good_bias_profile(const NetworkFamily& fam, int num_inputs,
                                  int num_outputs, double alpha, int grid,
                                  std::uint64_t budget) {
  const int max_subset = std::min(fam.fan_in_k + 1, num_outputs);
  const FamilyPolynomialTable table =
      family_polynomial_table(fam, num_inputs, num_outputs, max_subset, budget);
  const std::vector<double> curve = min_separation_curve(table, grid);

  GoodBiasProfile profile;
  profile.alpha = alpha;
  profile.grid_resolution = grid;
  profile.num_classes = table.classes.size();
  profile.num_pairs = table.classes.size() * (table.classes.size() - 1) / 2;
  int good = 0;
  int g = 0;
  while (g < grid) {
    if (curve[static_cast<size_t>(g)] >= alpha) {
      ++good;
      ++g;
      continue;
    }
    // Bad run: report the covering cell-aligned interval.
    int end = g;
    while (end < grid && curve[static_cast<size_t>(end)] < alpha) ++end;
    profile.bad_intervals.emplace_back(static_cast<double>(g) / grid,
                                       static_cast<double>(end) / grid);
    g = end;
  }
  profile.good_measure = static_cast<double>(good) / grid;
  return profile;
}

namespace {

std::string polynomial_tuple_key(const std::vector<UnivariatePolynomial>& polys) {
  std::ostringstream out;
  for (const auto& poly : polys) out << poly.to_string() << ";";
  return out.str();
}

}  // namespace

UniquePolynomialsResult unique_polynomials_check(const NetworkFamily& fam,
                                                 int num_inputs, int num_outputs,
                                                 std::uint64_t budget) {
  const FamilyPolynomialTable table = family_polynomial_table(
      fam, num_inputs, num_outputs, num_outputs, budget);
  UniquePolynomialsResult result;
  result.num_classes = table.classes.size();
  std::unordered_map<std::string, size_t> seen;
  for (size_t c = 0; c < table.classes.size(); ++c) {
    const std::string key = polynomial_tuple_key(table.polynomials[c]);
    auto [it, inserted] = seen.emplace(key, c);
    if (!inserted) {
      result.verdict = UniqueVerdict::kFails;
      result.witness = {table.classes[it->second], table.classes[c]};
      return result;
    }
  }
  return result;
}

std::optional<int> distinguishing_subset_size(const NoisyOrNetwork& a,
                                              const NoisyOrNetwork& b) {
  if (a.num_outputs() != b.num_outputs()) {
    throw std::invalid_argument("networks must have the same outputs");
  }
  const int n = a.num_outputs();
  if (n > 20) throw std::runtime_error("subset enumeration cap exceeded");
  std::vector<int> all_outputs(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) all_outputs[j] = j;
  std::optional<int> best;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (best && size >= *best) continue;
    const std::vector<int> subset = mask_to_subset(mask, all_outputs);
    if (!(all_zero_polynomial(a, subset) == all_zero_polynomial(b, subset))) {
      best = size;
    }
  }
  return best;
}

CounterexampleSearchResult counterexample_search(
    int num_weights, int max_inputs, int num_outputs,
    const std::vector<Rational>& weight_grid, std::uint64_t budget) {
  if (num_weights < 1) throw std::invalid_argument("num_weights must be >= 1");
  std::vector<Rational> grid = weight_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const Rational& w : grid) {
    if (w < 0 || w >= 1) throw std::invalid_argument("grid weight outside [0,1)");
  }

  CounterexampleSearchResult result;
  const TypeList list = build_type_list(grid, num_outputs);
  std::vector<int> all_outputs(static_cast<size_t>(num_outputs));
  for (int j = 0; j < num_outputs; ++j) all_outputs[j] = j;

  for (int m = 1; m <= max_inputs && !result.pair; ++m) {
    // Group this input-count's classes by their full polynomial tuple; any
    // group with two members is a distribution-identical inequivalent pair.
    std::unordered_map<std::string, NoisyOrNetwork> seen;
    std::vector<int> chosen;

    auto consider = [&](const NoisyOrNetwork& net) {
      std::set<Rational> used;
      for (int i = 0; i < net.num_inputs(); ++i) {
        for (const Edge& e : net.input_signature(i)) used.insert(e.weight);
      }
      if (static_cast<int>(used.size()) > num_weights) return;
      std::vector<UnivariatePolynomial> polys;
      for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << num_outputs); ++mask) {
        polys.push_back(all_zero_polynomial(net, mask_to_subset(mask, all_outputs)));
      }
      auto [it, inserted] = seen.emplace(polynomial_tuple_key(polys), net);
      if (!inserted && !result.pair) {
        result.pair = {it->second, net};
      }
    };

    auto walk = [&](auto&& self, int next_type) -> void {
      if (result.pair) return;
      if (static_cast<int>(chosen.size()) == m) {
        if (++result.networks_enumerated > budget) {
          throw std::runtime_error("counterexample search budget exceeded");
        }
        consider(network_from_type_counts(list, chosen, num_outputs));
        return;
      }
      for (int t = next_type; t < static_cast<int>(list.types.size()); ++t) {
        chosen.push_back(t);
        self(self, t);
        chosen.pop_back();
        if (result.pair) return;
      }
    };
    walk(walk, 0);
  }
  return result;
}

}  // namespace noisyor
