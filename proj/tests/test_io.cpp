#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "noisyor/io.hpp"
#include "noisyor/rational.hpp"
#include "support.hpp"

using namespace noisyor;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(parse_rational("7/21") == Rational(1, 3));  // canonicalized
  CHECK(rational_to_string(Rational(1, 3)) == "1/3");
  CHECK(rational_to_string(Rational(4)) == "4");
  CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("network files round-trip") {
  SplitMix64 rng(1);
  const NetworkFamily fam = noisyor::testing::random_family(rng, 3, 3);
  const NoisyOrNetwork net = random_network(fam, 7, 4, 99);
  const std::string text = write_network_text(net);
  const NoisyOrNetwork back = read_network_text(text);
  CHECK(back == net);
  CHECK(write_network_text(back) == text);
  CHECK_THROWS(read_network_text("{}"));
}

TEST_CASE("family files round-trip") {
  NetworkFamily fam;
  fam.fan_in_k = 2;
  fam.weight_values = {Rational(1, 4), Rational(1, 2)};
  fam.beta = Rational(1, 4);
  fam.subclass = Subclass::kPerOutputWeight;
  const std::string text = write_family_text(fam);
  const NetworkFamily back = read_family_text(text);
  CHECK(back.fan_in_k == 2);
  CHECK(back.weight_values == fam.weight_values);
  CHECK(back.beta == fam.beta);
  CHECK(back.subclass == Subclass::kPerOutputWeight);

  // read_family_text enforces the family invariants
  CHECK_THROWS(read_family_text(
      R"({"format_version":1,"fan_in_k":2,"weight_values":["1"],"subclass":"general"})"));
}

TEST_CASE("atomic writes land complete and hash stably") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "noisyor_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.txt").string();
  write_text_file_atomic(path, "payload");
  CHECK(read_text_file(path) == "payload");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  write_text_file_atomic(path, "updated");
  CHECK(read_text_file(path) == "updated");

  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
  CHECK(fnv1a64_hex("payload").size() == 16);
  std::filesystem::remove_all(dir);
}
