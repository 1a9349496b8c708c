#include "noisytd/cube.hpp"

#include <cstdio>

namespace noisytd {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string bits_to_string(Word bits, int dim) {
  std::string s(static_cast<std::size_t>(dim), '0');
  for (int i = 0; i < dim; ++i)
    if ((bits >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

Word bits_from_string(const std::string& s, int dim) {
  if (static_cast<int>(s.size()) != dim)
    throw ParseError("bitstring length does not match dim");
  Word b = 0;
  for (int i = 0; i < dim; ++i) {
    char c = s[static_cast<std::size_t>(i)];
    if (c == '1')
      b |= Word(1) << i;
    else if (c != '0')
      throw ParseError("bitstring has a character other than 0/1");
  }
  return b;
}

int Restriction::specified_count() const {
  int n = 0;
  for (auto v : values) n += (v != 0);
  return n;
}

bool Restriction::consistent(Word bits) const {
  for (int i = 0; i < dim(); ++i) {
    auto v = values[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    int c = ((bits >> i) & 1u) ? +1 : -1;
    if (c != v) return false;
  }
  return true;
}

Word Restriction::project(Word free_bits) const {
  Word out = 0;
  int next_free = 0;
  for (int i = 0; i < dim(); ++i) {
    auto v = values[static_cast<std::size_t>(i)];
    if (v == 0) {
      if ((free_bits >> next_free) & 1u) out |= Word(1) << i;
      ++next_free;
    } else if (v > 0) {
      out |= Word(1) << i;
    }
  }
  return out;
}

std::string Restriction::to_string() const {
  std::string s;
  s.reserve(values.size());
  for (auto v : values) s += (v == 0 ? '*' : (v > 0 ? '+' : '-'));
  return s;
}

}  // namespace noisytd
