#pragma once

#include <cstdint>
#include <string>

#include "noisyor/network.hpp"

namespace noisyor {

/// Network file: JSON with format_version, num_inputs, num_outputs and an
/// edge list; weights serialized as exact rational strings.
std::string write_network_text(const NoisyOrNetwork& net);
NoisyOrNetwork read_network_text(const std::string& text);

/// Family file: JSON with fan_in_k, weight_values, optional beta, subclass.
std::string write_family_text(const NetworkFamily& fam);
NetworkFamily read_family_text(const std::string& text);

NoisyOrNetwork load_network_file(const std::string& path);
NetworkFamily load_family_file(const std::string& path);

std::string read_text_file(const std::string& path);

/// Writes via a sibling temp file plus rename, so readers never observe a
/// partial file.
void write_text_file_atomic(const std::string& path, const std::string& content);

/// FNV-1a 64-bit content hash, as fixed-width hex; used for manifests.
std::string fnv1a64_hex(const std::string& content);

}  // namespace noisyor
