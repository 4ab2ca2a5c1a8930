// Command-line surface for the noisy-OR structure toolkit: generate networks,
// sample observations, reconstruct hidden structure, analyze separation
// properties, and verify network relationships.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict, 2 error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noisyor/distribution.hpp"
#include "noisyor/io.hpp"
#include "noisyor/polynomial.hpp"
#include "noisyor/reconstruct.hpp"
#include "noisyor/sampler.hpp"
#include "noisyor/seq.hpp"

namespace {

using namespace noisyor;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::vector<Rational> parse_weight_list(const std::string& csv) {
  std::vector<Rational> values;
  size_t start = 0;
  while (start <= csv.size()) {
    const size_t comma = csv.find(',', start);
    const std::string field =
        csv.substr(start, comma == std::string::npos ? std::string::npos
                                                     : comma - start);
    if (!field.empty()) values.push_back(parse_rational(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> values;
  size_t start = 0;
  while (start < csv.size()) {
    const size_t comma = csv.find(',', start);
    const std::string field =
        csv.substr(start, comma == std::string::npos ? std::string::npos
                                                     : comma - start);
    if (!field.empty()) values.push_back(std::stoi(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

NetworkFamily family_from_flags(int fanin, const std::string& weights,
                                const std::string& subclass) {
  NetworkFamily fam;
  fam.fan_in_k = fanin;
  fam.weight_values = parse_weight_list(weights);
  std::sort(fam.weight_values.begin(), fam.weight_values.end());
  fam.subclass = subclass_from_string(subclass);
  fam.check();
  return fam;
}

/// Writes <path>.manifest.json describing one command invocation well enough
/// to re-run it bit-identically.
void write_manifest(const std::string& out_path, const std::string& command,
                    const json& args, const std::vector<std::string>& artifacts,
                    double wall_ms) {
  json manifest;
  manifest["format_version"] = 1;
  manifest["command"] = command;
  manifest["args"] = args;
  json outputs = json::array();
  for (const std::string& path : artifacts) {
    outputs.push_back(
        {{"path", path}, {"fnv1a64", fnv1a64_hex(read_text_file(path))}});
  }
  manifest["outputs"] = std::move(outputs);
  manifest["wall_time_ms"] = wall_ms;
  write_text_file_atomic(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

int cmd_generate(int inputs, int outputs, int fanin, const std::string& weights,
                 const std::string& subclass, std::uint64_t seed,
                 const std::string& out, const std::string& family_out) {
  const auto start = Clock::now();
  const NetworkFamily fam = family_from_flags(fanin, weights, subclass);
  const NoisyOrNetwork net = random_network(fam, inputs, outputs, seed);
  write_text_file_atomic(out, write_network_text(net));
  std::vector<std::string> artifacts{out};
  if (!family_out.empty()) {
    write_text_file_atomic(family_out, write_family_text(fam));
    artifacts.push_back(family_out);
  }
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  write_manifest(out, "generate",
                 json{{"inputs", inputs},
                      {"outputs", outputs},
                      {"fanin", fanin},
                      {"weights", weights},
                      {"subclass", subclass},
                      {"seed", seed},
                      {"out", out},
                      {"family_out", family_out}},
                 artifacts, ms);
  std::cout << "network: " << out << "\n";
  return kExitOk;
}

int cmd_sample(const std::string& net_path, const std::string& bias,
               std::size_t count, std::uint64_t seed, const std::string& out) {
  const auto start = Clock::now();
  const NoisyOrNetwork net = load_network_file(net_path);
  const BiasSetting setting{parse_rational(bias)};
  const SampleSet data = sample(net, setting, count, seed);
  write_text_file_atomic(out, write_sample_text(data));
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  write_manifest(out, "sample",
                 json{{"net", net_path},
                      {"bias", bias},
                      {"count", count},
                      {"seed", seed},
                      {"out", out}},
                 {out}, ms);
  std::cout << "samples: " << out << "\n";
  return kExitOk;
}

void print_report(std::ostream& os, const ReconstructionReport& report,
                  const std::string& oracle, const std::string& algorithm,
                  std::optional<bool> equivalent) {
  os << "oracle: " << oracle << "\n";
  os << "algorithm: " << algorithm << "\n";
  os << "seq_count: " << report.seq_count << "\n";
  os << "largest_query_outputs: " << report.largest_query_outputs << "\n";
  os << "samples_used: " << report.samples_used << "\n";
  os << "regime: " << (report.guaranteed_regime ? "guaranteed" : "best-effort")
     << "\n";
  os << "warnings: " << report.warnings.size() << "\n";
  for (const std::string& w : report.warnings) os << "warning: " << w << "\n";
  if (equivalent) {
    os << "equivalent: " << (*equivalent ? "true" : "false") << "\n";
  }
  for (const OutputTrace& t : report.trace) {
    os << "trace: output " << t.output << " rounds " << t.block_rounds
       << " candidates " << t.candidates_tried << "\n";
  }
}

struct ReconstructFlags {
  std::string samples;
  std::string net;  // live-sampling target
  std::uint64_t budget = 0;
  std::uint64_t sample_seed = 0;
  bool sample_seed_set = false;
  int m = 0;
  int fanin = 0;
  std::string weights;
  std::string subclass = "general";
  std::string bias;
  double alpha = 0;
  double delta = 0;
  std::string oracle = "statistical";
  std::string algorithm = "basic-block";
  std::string target;
  std::string out;
  std::string report_path;
};

int cmd_reconstruct(const ReconstructFlags& flags) {
  const auto start = Clock::now();
  const NetworkFamily fam =
      family_from_flags(flags.fanin, flags.weights, flags.subclass);
  ReconstructionConfig cfg;
  cfg.num_inputs = flags.m;
  cfg.family = fam;
  cfg.bias = parse_rational(flags.bias);
  cfg.alpha = flags.alpha;
  cfg.delta = flags.delta;
  cfg.variant = flags.algorithm == "simple" ? AlgorithmVariant::kSimple
                                            : AlgorithmVariant::kBasicBlock;

  std::optional<NoisyOrNetwork> target;
  if (!flags.target.empty()) target = load_network_file(flags.target);

  ReconstructionReport report;
  if (flags.oracle == "structural" || flags.oracle == "distributional") {
    if (!target) {
      std::cerr << "error: --target is required in simulation mode\n";
      return kExitError;
    }
    cfg.num_outputs = target->num_outputs();
    std::unique_ptr<SeqOracle> oracle;
    if (flags.oracle == "structural") {
      oracle = std::make_unique<StructuralSeqOracle>(*target);
    } else {
      const int cap = cfg.variant == AlgorithmVariant::kSimple
                          ? target->num_outputs()
                          : fam.fan_in_k + 1;
      oracle = std::make_unique<DistributionalSeqOracle>(
          *target, BiasSetting{cfg.bias}, cap);
    }
    report = cfg.variant == AlgorithmVariant::kSimple
                 ? reconstruct_simple(*oracle, cfg)
                 : reconstruct(*oracle, cfg);
  } else {
    if (!flags.samples.empty()) {
      const SampleSet data = read_sample_text(read_text_file(flags.samples));
      cfg.num_outputs = data.num_outputs;
      if (cfg.bias != data.bias) {
        std::cerr << "error: --bias disagrees with the sample file header\n";
        return kExitError;
      }
      report = end_to_end_learn(data, cfg);
    } else if (!flags.net.empty()) {
      if (!flags.sample_seed_set) {
        std::cerr << "error: live sampling requires --sample-seed\n";
        return kExitError;
      }
      const NoisyOrNetwork live_target = load_network_file(flags.net);
      cfg.num_outputs = live_target.num_outputs();
      if (cfg.bias >= 1) {
        std::cerr << "error: bias 1 generates all-zero samples with no "
                     "structure to learn\n";
        return kExitError;
      }
      const int k = fam.fan_in_k;
      const std::uint64_t bound = worst_case_query_bound(
          cfg.num_inputs, cfg.num_outputs, k, fam.num_weight_values());
      const double delta_per_query =
          cfg.delta / (2.0 * static_cast<double>(bound));
      const std::size_t per_query =
          required_sample_size(cfg.alpha, delta_per_query, k + 1);
      if (flags.budget < per_query) {
        std::cerr << "error: --budget " << flags.budget
                  << " is below the per-query sample size " << per_query
                  << "\n";
        return kExitError;
      }
      cfg.max_queries = flags.budget / per_query;
      StatisticalSeqOracle oracle(
          live_target, BiasSetting{cfg.bias},
          SeqBudget{cfg.alpha, delta_per_query, per_query}, k + 1,
          flags.sample_seed);
      report = reconstruct(oracle, cfg);
      report.samples_used = oracle.samples_consumed();
    } else {
      std::cerr << "error: statistical mode needs --samples or --net\n";
      return kExitError;
    }
  }

  write_text_file_atomic(flags.out, write_network_text(report.recovered));

  std::optional<bool> equivalent;
  if (target) equivalent = structurally_equivalent(report.recovered, *target);
  std::ostringstream text;
  print_report(text, report, flags.oracle, flags.algorithm, equivalent);
  std::cout << text.str();
  std::vector<std::string> artifacts{flags.out};
  if (!flags.report_path.empty()) {
    write_text_file_atomic(flags.report_path, text.str());
    artifacts.push_back(flags.report_path);
  }
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  write_manifest(flags.out, "reconstruct",
                 json{{"samples", flags.samples},
                      {"net", flags.net},
                      {"budget", flags.budget},
                      {"sample_seed", flags.sample_seed},
                      {"m", flags.m},
                      {"fanin", flags.fanin},
                      {"weights", flags.weights},
                      {"subclass", flags.subclass},
                      {"bias", flags.bias},
                      {"alpha", flags.alpha},
                      {"delta", flags.delta},
                      {"oracle", flags.oracle},
                      {"algorithm", flags.algorithm},
                      {"target", flags.target},
                      {"out", flags.out}},
                 artifacts, ms);
  if (equivalent && !*equivalent) return kExitNegative;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-layer noisy-OR networks: exact distributions, sampling, "
               "and hidden-structure reconstruction"};
  app.require_subcommand(1);

  // generate
  int g_inputs = 0, g_outputs = 0, g_fanin = 0;
  std::string g_weights, g_subclass = "general", g_out, g_family_out;
  std::uint64_t g_seed = 0;
  CLI::App* generate = app.add_subcommand("generate", "draw a random network");
  generate->add_option("--inputs", g_inputs)->required();
  generate->add_option("--outputs", g_outputs)->required();
  generate->add_option("--fanin", g_fanin)->required();
  generate->add_option("--weights", g_weights, "comma list of rationals")
      ->required();
  generate->add_option("--subclass", g_subclass);
  generate->add_option("--seed", g_seed)->required();
  generate->add_option("--out", g_out)->required();
  generate->add_option("--family-out", g_family_out);

  // sample
  std::string s_net, s_bias, s_out;
  std::size_t s_count = 0;
  std::uint64_t s_seed = 0;
  CLI::App* sample_cmd = app.add_subcommand("sample", "draw output observations");
  sample_cmd->add_option("--net", s_net)->required();
  sample_cmd->add_option("--bias", s_bias)->required();
  sample_cmd->add_option("--count", s_count)->required();
  sample_cmd->add_option("--seed", s_seed)->required();
  sample_cmd->add_option("--out", s_out)->required();

  // reconstruct
  ReconstructFlags r;
  CLI::App* reconstruct_cmd =
      app.add_subcommand("reconstruct", "recover hidden structure");
  reconstruct_cmd->add_option("--samples", r.samples);
  reconstruct_cmd->add_option("--net", r.net, "live-sampling target");
  reconstruct_cmd->add_option("--budget", r.budget, "total live samples allowed");
  CLI::Option* sample_seed_opt =
      reconstruct_cmd->add_option("--sample-seed", r.sample_seed);
  reconstruct_cmd->add_option("--m", r.m)->required();
  reconstruct_cmd->add_option("--fanin", r.fanin)->required();
  reconstruct_cmd->add_option("--weights", r.weights)->required();
  reconstruct_cmd->add_option("--subclass", r.subclass);
  reconstruct_cmd->add_option("--bias", r.bias)->required();
  reconstruct_cmd->add_option("--alpha", r.alpha);
  reconstruct_cmd->add_option("--delta", r.delta);
  reconstruct_cmd->add_option("--oracle", r.oracle)
      ->check(CLI::IsMember({"structural", "distributional", "statistical"}));
  reconstruct_cmd->add_option("--algorithm", r.algorithm)
      ->check(CLI::IsMember({"simple", "basic-block"}));
  reconstruct_cmd->add_option("--target", r.target, "simulation-mode target");
  reconstruct_cmd->add_option("--out", r.out)->required();
  reconstruct_cmd->add_option("--report", r.report_path);

  // analyze
  CLI::App* analyze = app.add_subcommand("analyze", "distribution analysis");
  analyze->require_subcommand(1);

  std::string ap_net, ap_outputs;
  CLI::App* a_poly = analyze->add_subcommand("poly", "all-zero polynomial");
  a_poly->add_option("--net", ap_net)->required();
  a_poly->add_option("--outputs", ap_outputs, "comma list, may be empty");

  int gb_m = 0, gb_n = 0, gb_fanin = 0, gb_grid = 1024;
  std::string gb_weights, gb_subclass = "general";
  double gb_alpha = 0;
  CLI::App* a_good = analyze->add_subcommand("goodbias", "separation profile");
  a_good->add_option("--m", gb_m)->required();
  a_good->add_option("--n", gb_n)->required();
  a_good->add_option("--fanin", gb_fanin)->required();
  a_good->add_option("--weights", gb_weights)->required();
  a_good->add_option("--subclass", gb_subclass);
  a_good->add_option("--alpha", gb_alpha)->required();
  a_good->add_option("--grid", gb_grid);

  int b_d = 0, b_r = 0;
  std::string b_c, b_alpha;
  CLI::App* a_bound = analyze->add_subcommand("bound", "near-root measure bound");
  a_bound->add_option("--d", b_d)->required();
  a_bound->add_option("--r", b_r)->required();
  a_bound->add_option("--c", b_c)->required();
  a_bound->add_option("--alpha", b_alpha)->required();

  int u_m = 0, u_n = 0, u_fanin = 0;
  std::string u_weights, u_subclass = "general";
  CLI::App* a_unique =
      analyze->add_subcommand("unique", "unique-polynomials check");
  a_unique->add_option("--m", u_m)->required();
  a_unique->add_option("--n", u_n)->required();
  a_unique->add_option("--fanin", u_fanin)->required();
  a_unique->add_option("--weights", u_weights)->required();
  a_unique->add_option("--subclass", u_subclass);

  int cx_weights = 3, cx_max_inputs = 4, cx_outputs = 2;
  std::string cx_grid = "0,1/4,1/2,3/4", cx_out_a, cx_out_b;
  CLI::App* a_cx = analyze->add_subcommand(
      "counterexample", "search for distribution-identical inequivalent pairs");
  a_cx->add_option("--weights", cx_weights, "max distinct weight values");
  a_cx->add_option("--max-inputs", cx_max_inputs);
  a_cx->add_option("--outputs", cx_outputs);
  a_cx->add_option("--grid", cx_grid, "candidate weight values");
  a_cx->add_option("--out-a", cx_out_a);
  a_cx->add_option("--out-b", cx_out_b);

  // verify
  CLI::App* verify = app.add_subcommand("verify", "compare two networks");
  verify->require_subcommand(1);

  std::string ve_a, ve_b;
  CLI::App* v_equiv = verify->add_subcommand("equiv", "structural equivalence");
  v_equiv->add_option("a", ve_a)->required();
  v_equiv->add_option("b", ve_b)->required();

  std::string vd_a, vd_b, vd_bias;
  int vd_max_subset = 3;
  CLI::App* v_dist = verify->add_subcommand("dist", "distributional separation");
  v_dist->add_option("a", vd_a)->required();
  v_dist->add_option("b", vd_b)->required();
  v_dist->add_option("--bias", vd_bias)->required();
  v_dist->add_option("--max-subset", vd_max_subset);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      return cmd_generate(g_inputs, g_outputs, g_fanin, g_weights, g_subclass,
                          g_seed, g_out, g_family_out);
    }
    if (*sample_cmd) return cmd_sample(s_net, s_bias, s_count, s_seed, s_out);
    if (*reconstruct_cmd) {
      r.sample_seed_set = sample_seed_opt->count() > 0;
      return cmd_reconstruct(r);
    }
    if (*a_poly) {
      const NoisyOrNetwork net = load_network_file(ap_net);
      std::vector<int> Y = parse_int_list(ap_outputs);
      std::sort(Y.begin(), Y.end());
      const UnivariatePolynomial poly = all_zero_polynomial(net, Y);
      std::cout << "coefficients: " << poly.to_string() << "\n";
      std::cout << "degree: " << poly.degree() << "\n";
      return kExitOk;
    }
    if (*a_good) {
      const NetworkFamily fam =
          family_from_flags(gb_fanin, gb_weights, gb_subclass);
      const GoodBiasProfile profile =
          good_bias_profile(fam, gb_m, gb_n, gb_alpha, gb_grid);
      std::cout << "alpha: " << profile.alpha << "\n";
      std::cout << "grid: " << profile.grid_resolution << "\n";
      std::cout << "classes: " << profile.num_classes << "\n";
      std::cout << "pairs: " << profile.num_pairs << "\n";
      std::cout << "good_measure: " << profile.good_measure << "\n";
      std::cout << "bad_intervals: " << profile.bad_intervals.size() << "\n";
      for (const auto& [lo, hi] : profile.bad_intervals) {
        std::cout << "bad_interval: " << lo << " " << hi << "\n";
      }
      return kExitOk;
    }
    if (*a_bound) {
      const NearRootBound result = near_root_measure_bound(
          b_d, b_r, parse_rational(b_c), parse_rational(b_alpha));
      std::cout << "crossing_count_bound: " << result.crossing_count << "\n";
      std::cout << "measure_bound: " << result.measure << "\n";
      return kExitOk;
    }
    if (*a_unique) {
      const NetworkFamily fam = family_from_flags(u_fanin, u_weights, u_subclass);
      const UniquePolynomialsResult result =
          unique_polynomials_check(fam, u_m, u_n);
      std::cout << "classes: " << result.num_classes << "\n";
      std::cout << "verdict: "
                << (result.verdict == UniqueVerdict::kHolds ? "HOLDS" : "FAILS")
                << "\n";
      if (result.witness) {
        std::cout << "witness_a:\n" << write_network_text(result.witness->first);
        std::cout << "witness_b:\n" << write_network_text(result.witness->second);
        return kExitNegative;
      }
      return kExitOk;
    }
    if (*a_cx) {
      const CounterexampleSearchResult result = counterexample_search(
          cx_weights, cx_max_inputs, cx_outputs, parse_weight_list(cx_grid));
      std::cout << "networks_enumerated: " << result.networks_enumerated << "\n";
      if (!result.pair) {
        std::cout << "verdict: none-found\n";
        return kExitNegative;
      }
      // Independent verification: inequivalent, yet equal subset-zero tables
      // at 10 rational biases.
      const auto& [first, second] = *result.pair;
      bool verified = !structurally_equivalent(first, second);
      std::vector<int> all(static_cast<size_t>(cx_outputs));
      for (int j = 0; j < cx_outputs; ++j) all[static_cast<size_t>(j)] = j;
      for (int t = 1; t <= 10 && verified; ++t) {
        const BiasSetting bias{Rational(t, 11)};
        verified = subset_zero_table(first, all, bias) ==
                   subset_zero_table(second, all, bias);
      }
      std::cout << "verdict: found\n";
      std::cout << "verified: " << (verified ? "true" : "false") << "\n";
      std::cout << "inputs: " << first.num_inputs() << "\n";
      if (!cx_out_a.empty()) {
        write_text_file_atomic(cx_out_a, write_network_text(first));
        std::cout << "out_a: " << cx_out_a << "\n";
      }
      if (!cx_out_b.empty()) {
        write_text_file_atomic(cx_out_b, write_network_text(second));
        std::cout << "out_b: " << cx_out_b << "\n";
      }
      return verified ? kExitOk : kExitError;
    }
    if (*v_equiv) {
      const bool same = structurally_equivalent(load_network_file(ve_a),
                                                load_network_file(ve_b));
      std::cout << "verdict: " << (same ? "equivalent" : "not-equivalent")
                << "\n";
      return same ? kExitOk : kExitNegative;
    }
    if (*v_dist) {
      const NoisyOrNetwork a = load_network_file(vd_a);
      const NoisyOrNetwork b = load_network_file(vd_b);
      const Rational separation =
          separation_at(parse_rational(vd_bias), a, b, vd_max_subset);
      std::cout << "max_separation: " << rational_to_string(separation) << "\n";
      return separation == 0 ? kExitOk : kExitNegative;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::cerr << "error: no subcommand\n";
  return kExitError;
}
