#include "noisyor/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noisyor {

using nlohmann::json;

std::string write_network_text(const NoisyOrNetwork& net) {
  json doc;
  doc["format_version"] = 1;
  doc["num_inputs"] = net.num_inputs();
  doc["num_outputs"] = net.num_outputs();
  json edges = json::array();
  for (int i = 0; i < net.num_inputs(); ++i) {
    for (const Edge& e : net.input_signature(i)) {
      edges.push_back({{"input", i},
                       {"output", e.output},
                       {"weight", rational_to_string(e.weight)}});
    }
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

NoisyOrNetwork read_network_text(const std::string& text) {
  json doc = json::parse(text);
  if (doc.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported network format version");
  }
  NoisyOrNetwork net(doc.at("num_inputs").get<int>(),
                     doc.at("num_outputs").get<int>());
  for (const json& e : doc.at("edges")) {
    net.add_edge(e.at("input").get<int>(), e.at("output").get<int>(),
                 parse_rational(e.at("weight").get<std::string>()));
  }
  return net;
}

std::string write_family_text(const NetworkFamily& fam) {
  json doc;
  doc["format_version"] = 1;
  doc["fan_in_k"] = fam.fan_in_k;
  json values = json::array();
  for (const Rational& v : fam.weight_values) values.push_back(rational_to_string(v));
  doc["weight_values"] = std::move(values);
  if (fam.beta) doc["beta"] = rational_to_string(*fam.beta);
  doc["subclass"] = subclass_to_string(fam.subclass);
  return doc.dump(2) + "\n";
}

NetworkFamily read_family_text(const std::string& text) {
  json doc = json::parse(text);
  if (doc.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported family format version");
  }
  NetworkFamily fam;
  fam.fan_in_k = doc.at("fan_in_k").get<int>();
  for (const json& v : doc.at("weight_values")) {
    fam.weight_values.push_back(parse_rational(v.get<std::string>()));
  }
  if (doc.contains("beta") && !doc["beta"].is_null()) {
    fam.beta = parse_rational(doc["beta"].get<std::string>());
  }
  fam.subclass = subclass_from_string(doc.at("subclass").get<std::string>());
  fam.check();
  return fam;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

NoisyOrNetwork load_network_file(const std::string& path) {
  return read_network_text(read_text_file(path));
}

NetworkFamily load_family_file(const std::string& path) {
  return read_family_text(read_text_file(path));
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string fnv1a64_hex(const std::string& content) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : content) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

}  // namespace noisyor
