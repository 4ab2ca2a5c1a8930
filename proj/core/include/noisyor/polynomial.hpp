#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noisyor/distribution.hpp"
#include "noisyor/network.hpp"

namespace noisyor {

/// Dense univariate polynomial with exact rational coefficients;
/// coefficient index = degree. The zero polynomial has no coefficients.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<Rational> coefficients);

  static UnivariatePolynomial constant(const Rational& c);
  /// a + b*x
  static UnivariatePolynomial linear(const Rational& a, const Rational& b);

  bool is_zero() const { return coefficients_.empty(); }
  /// Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  Rational leading_coefficient() const;

  Rational evaluate(const Rational& x) const;
  double evaluate(double x) const;

  UnivariatePolynomial operator+(const UnivariatePolynomial& other) const;
  UnivariatePolynomial operator-(const UnivariatePolynomial& other) const;
  UnivariatePolynomial operator*(const UnivariatePolynomial& other) const;
  bool operator==(const UnivariatePolynomial& other) const = default;

  /// Comma-separated rational coefficients, constant term first; "0" for the
  /// zero polynomial.
  std::string to_string() const;

 private:
  void normalize();
  std::vector<Rational> coefficients_;
};

/// The all-zero probability of the output set Y as a polynomial in the input
/// bias p: the product over inputs of (w_i + (1 - w_i) p) with
/// w_i = prod_{j in T_i cap Y} eta_ij, over inputs connected to Y.
UnivariatePolynomial all_zero_polynomial(const NoisyOrNetwork& net,
                                         const std::vector<int>& Y);

inline bool polynomials_identical(const UnivariatePolynomial& a,
                                  const UnivariatePolynomial& b) {
  return a == b;
}

struct NearRootBound {
  std::int64_t crossing_count;  // d * r
  double measure;               // 8 d r (alpha / 2c)^(1/d)
};

/// For r polynomials of degree <= d with leading coefficient >= c: bound on
/// the number of exact level-alpha crossings in [0,1] and on the measure of
/// {p in [0,1] : some |Q_i(p)| <= alpha}.
NearRootBound near_root_measure_bound(int degree, int count, const Rational& c,
                                      const Rational& alpha);

/// Largest |Pr_A[all of Y zero] - Pr_B[all of Y zero]| at bias p over
/// nonempty output subsets of size <= max_subset. Throws if the subset
/// enumeration would exceed max_enumerated.
Rational separation_at(const Rational& p, const NoisyOrNetwork& a,
                       const NoisyOrNetwork& b, int max_subset,
                       std::uint64_t max_enumerated = std::uint64_t{1} << 20);

/// All networks of the family at (m, n), one representative per structural
/// equivalence class, in deterministic order. Throws std::runtime_error when
/// the enumeration would visit more than budget candidates.
std::vector<NoisyOrNetwork> enumerate_family_classes(const NetworkFamily& fam,
                                                     int num_inputs, int num_outputs,
                                                     std::uint64_t budget = 5'000'000);

/// Per-class all-zero polynomials for every nonempty output subset of size
/// <= max_subset, masks in ascending order.
struct FamilyPolynomialTable {
  std::vector<NoisyOrNetwork> classes;
  std::vector<std::uint32_t> subset_masks;
  std::vector<std::vector<UnivariatePolynomial>> polynomials;  // [class][mask idx]
};

FamilyPolynomialTable family_polynomial_table(const NetworkFamily& fam,
                                              int num_inputs, int num_outputs,
                                              int max_subset,
                                              std::uint64_t budget = 5'000'000);

/// Grid profile of which biases separate every non-equivalent pair.
struct GoodBiasProfile {
  double alpha = 0;
  double good_measure = 0;                            // fraction of grid cells
  std::vector<std::pair<double, double>> bad_intervals;  // disjoint, sorted
  int grid_resolution = 0;
  std::size_t num_classes = 0;
  std::size_t num_pairs = 0;
};

/// Pointwise minimum over non-equivalent class pairs of the maximum
/// subset-probability gap, on the midpoint grid p_g = (g + 1/2)/grid.
/// Evaluated in doubles; this is a profiling tool, not an identity test.
std::vector<double> min_separation_curve(const FamilyPolynomialTable& table,
                                         int grid);

GoodBiasProfile good_bias_profile(const NetworkFamily& fam, int num_inputs,
                                  int num_outputs, double alpha, int grid,
                                  std::uint64_t budget = 5'000'000);

enum class UniqueVerdict { kHolds, kFails };

struct UniquePolynomialsResult {
  UniqueVerdict verdict = UniqueVerdict::kHolds;
  std::size_t num_classes = 0;
  /// Present when verdict == kFails: a non-equivalent pair whose all-zero
  /// polynomials agree on every output subset.
  std::optional<std::pair<NoisyOrNetwork, NoisyOrNetwork>> witness;
};

/// Exhaustive check at (m, n): do all structurally distinct family members
/// differ in some subset's all-zero polynomial?
UniquePolynomialsResult unique_polynomials_check(const NetworkFamily& fam,
                                                 int num_inputs, int num_outputs,
                                                 std::uint64_t budget = 5'000'000);

/// Smallest |Y| whose all-zero polynomials differ, or nullopt if the two
/// networks generate identical distributions at every bias.
std::optional<int> distinguishing_subset_size(const NoisyOrNetwork& a,
                                              const NoisyOrNetwork& b);

struct CounterexampleSearchResult {
  std::optional<std::pair<NoisyOrNetwork, NoisyOrNetwork>> pair;
  std::size_t networks_enumerated = 0;
};

/// Searches for two structurally inequivalent networks (same input count <=
/// max_inputs, exactly num_outputs outputs, at most num_weights distinct
/// weight values drawn from weight_grid) whose output distributions are
/// identical at every bias. Returns the first hit in canonical order.
CounterexampleSearchResult counterexample_search(int num_weights, int max_inputs,
                                                 int num_outputs,
                                                 const std::vector<Rational>& weight_grid,
                                                 std::uint64_t budget = 5'000'000);

}  // namespace noisyor
