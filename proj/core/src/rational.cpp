#include "noisyor/rational.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace noisyor {

namespace {

bool valid_rational_chars(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' &&
        c != '+' && c != '.') {
      return false;
    }
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (!valid_rational_chars(text)) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    // Exact decimal: a.b -> (a*10^len(b) + b) / 10^len(b)
    const std::string head = text.substr(0, dot);
    const std::string tail = text.substr(dot + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("not a rational: '" + text + "'");
    }
    const bool neg = !head.empty() && head[0] == '-';
    std::string digits = neg ? head.substr(1) : head;
    if (!digits.empty() && digits[0] == '+') digits = digits.substr(1);
    if (digits.empty()) digits = "0";
    mpz_class num(digits + tail, 10);
    mpz_class den(1);
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
  }
  Rational q;
  if (q.set_str(text, 10) != 0) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
  if (q.get_den() == 0) {
    throw std::invalid_argument("zero denominator: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string rationals_to_string(const std::vector<Rational>& qs, char sep) {
  std::ostringstream out;
  for (size_t i = 0; i < qs.size(); ++i) {
    if (i) out << sep;
    out << rational_to_string(qs[i]);
  }
  return out.str();
}

}  // namespace noisyor
