#include "noisyor/sampler.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

#include "noisyor/distribution.hpp"

namespace noisyor {

void draw_into(const NoisyOrNetwork& net, double p_zero, SplitMix64& rng,
               std::vector<std::uint8_t>& out) {
  out.assign(static_cast<size_t>(net.num_outputs()), 0);
  for (int i = 0; i < net.num_inputs(); ++i) {
    const bool fired = rng.unit() >= p_zero;  // X_i = 1 with probability 1-p
    if (!fired) continue;
    for (const Edge& e : net.input_signature(i)) {
      if (out[e.output]) continue;
      const bool suppressed = rng.unit() < to_double(e.weight);
      if (!suppressed) out[e.output] = 1;
    }
  }
}

std::vector<std::uint8_t> draw(const NoisyOrNetwork& net, const BiasSetting& bias,
                               SplitMix64& rng) {
  std::vector<std::uint8_t> outputs;
  draw_into(net, to_double(bias.p), rng, outputs);
  return outputs;
}

SampleSet sample(const NoisyOrNetwork& net, const BiasSetting& bias,
                 std::size_t count, std::uint64_t seed) {
  SampleSet set;
  set.num_outputs = net.num_outputs();
  set.bias = bias.p;
  set.seed = seed;
  set.draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 stream = SplitMix64::substream(seed, i);
    set.draws.push_back(draw(net, bias, stream));
  }
  return set;
}

SampleSummary SampleSummary::from_samples(const SampleSet& samples) {
  if (samples.num_outputs > 20) {
    throw std::invalid_argument("sample summary supports at most 20 outputs");
  }
  SampleSummary summary;
  summary.num_outputs = samples.num_outputs;
  summary.bias = samples.bias;
  summary.seed = samples.seed;
  summary.count = samples.size();
  summary.pattern_counts.assign(size_t{1} << samples.num_outputs, 0);
  for (const auto& d : samples.draws) {
    std::uint32_t mask = 0;
    for (int j = 0; j < samples.num_outputs; ++j) {
      if (d[static_cast<size_t>(j)]) mask |= std::uint32_t{1} << j;
    }
    ++summary.pattern_counts[mask];
  }
  return summary;
}

SampleSummary sample_summary(const NoisyOrNetwork& net, const BiasSetting& bias,
                             std::uint64_t count, std::uint64_t seed) {
  if (net.num_outputs() > 20) {
    throw std::invalid_argument("sample summary supports at most 20 outputs");
  }
  SampleSummary summary;
  summary.num_outputs = net.num_outputs();
  summary.bias = bias.p;
  summary.seed = seed;
  summary.count = count;
  summary.pattern_counts.assign(size_t{1} << net.num_outputs(), 0);
  const double p = to_double(bias.p);
  std::vector<std::uint8_t> buffer;
  for (std::uint64_t i = 0; i < count; ++i) {
    SplitMix64 stream = SplitMix64::substream(seed, i);
    draw_into(net, p, stream, buffer);
    std::uint32_t mask = 0;
    for (int j = 0; j < net.num_outputs(); ++j) {
      if (buffer[static_cast<size_t>(j)]) mask |= std::uint32_t{1} << j;
    }
    ++summary.pattern_counts[mask];
  }
  return summary;
}

std::vector<double> empirical_subset_zero_table(const SampleSet& samples,
                                                const std::vector<int>& Y) {
  if (samples.draws.empty()) {
    throw std::invalid_argument("empty sample set has no frequencies");
  }
  if (Y.size() > 20) throw std::runtime_error("subset table limit exceeded");
  for (size_t b = 0; b < Y.size(); ++b) {
    if (Y[b] < 0 || Y[b] >= samples.num_outputs) {
      throw std::out_of_range("output index in Y");
    }
    if (b > 0 && Y[b] <= Y[b - 1]) {
      throw std::invalid_argument("Y must be sorted and duplicate-free");
    }
  }

  // Bin draws by their restricted pattern, then count zeros per subset:
  // a draw is all-zero on S iff its restricted mask misses S entirely.
  const size_t size = size_t{1} << Y.size();
  std::vector<std::uint64_t> pattern_count(size, 0);
  for (const auto& d : samples.draws) {
    std::uint32_t mask = 0;
    for (size_t b = 0; b < Y.size(); ++b) {
      if (d[static_cast<size_t>(Y[b])]) mask |= std::uint32_t{1} << b;
    }
    ++pattern_count[mask];
  }
  // Subset-sum transform: h[u] = #draws whose restricted mask is inside u;
  // then all-zero-on-S count = h[complement(S)].
  std::vector<std::uint64_t> h = std::move(pattern_count);
  for (size_t b = 0; b < Y.size(); ++b) {
    for (size_t u = 0; u < size; ++u) {
      if (u >> b & 1) h[u] += h[u ^ (size_t{1} << b)];
    }
  }
  std::vector<double> table(size, 0.0);
  for (size_t s = 0; s < size; ++s) {
    table[s] = static_cast<double>(h[(size - 1) ^ s]) /
               static_cast<double>(samples.draws.size());
  }
  return table;
}

std::string write_sample_text(const SampleSet& samples) {
  nlohmann::json header;
  header["num_outputs"] = samples.num_outputs;
  header["count"] = samples.draws.size();
  header["bias"] = rational_to_string(samples.bias);
  if (samples.seed) {
    header["seed"] = *samples.seed;
  } else {
    header["seed"] = nullptr;
  }
  std::ostringstream out;
  out << header.dump() << "\n";
  for (const auto& d : samples.draws) {
    for (std::uint8_t bit : d) out << (bit ? '1' : '0');
    out << "\n";
  }
  return out.str();
}

SampleSet read_sample_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty sample file");
  nlohmann::json header = nlohmann::json::parse(line);
  SampleSet set;
  set.num_outputs = header.at("num_outputs").get<int>();
  set.bias = parse_rational(header.at("bias").get<std::string>());
  if (!header.at("seed").is_null()) {
    set.seed = header.at("seed").get<std::uint64_t>();
  }
  const std::size_t count = header.at("count").get<std::size_t>();
  set.draws.reserve(count);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (static_cast<int>(line.size()) != set.num_outputs) {
      throw std::runtime_error("sample record length mismatch");
    }
    std::vector<std::uint8_t> bits(line.size());
    for (size_t t = 0; t < line.size(); ++t) {
      if (line[t] != '0' && line[t] != '1') {
        throw std::runtime_error("sample record must be 0/1");
      }
      bits[t] = line[t] == '1';
    }
    set.draws.push_back(std::move(bits));
  }
  if (set.draws.size() != count) {
    throw std::runtime_error("sample count mismatch: header says " +
                             std::to_string(count) + ", file has " +
                             std::to_string(set.draws.size()));
  }
  return set;
}

}  // namespace noisyor
