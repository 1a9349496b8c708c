#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noisytd/errors.hpp"

namespace noisytd {

// One point of {-1,+1}^d packed into a word: bit i set <=> coordinate i is +1.
// Coordinate indices are 0-based in code; serialized bitstrings list
// coordinate 0 first.
using Word = std::uint32_t;

inline constexpr int kMaxExplicitDim = 24;   // explicit tables hold 2^d rows
inline constexpr int kMaxEmpiricalDim = 30;

struct BitPoint {
  Word bits = 0;
  int dim = 0;

  BitPoint() = default;
  BitPoint(Word b, int d) : bits(b), dim(d) {
    if (d < 1 || d > kMaxEmpiricalDim) throw OutOfRange("BitPoint: dim out of range");
    if ((b >> d) != 0) throw DimMismatch("BitPoint: bits set beyond dim");
  }

  // Coordinate value in {-1,+1}.
  int coord(int i) const { return (bits >> i) & 1u ? +1 : -1; }
  BitPoint flipped(int i) const { return BitPoint(bits ^ (Word(1) << i), dim); }
  BitPoint with(int i, int value) const {
    Word b = value > 0 ? (bits | (Word(1) << i)) : (bits & ~(Word(1) << i));
    return BitPoint(b, dim);
  }

  bool operator==(const BitPoint& o) const = default;
};

// Binary label; internal space is {0,1}, the signed view {-1,+1} is a pure
// adapter used by the analysis and target operations.
using Label = std::uint8_t;

inline int to_signed(Label y) { return y ? +1 : -1; }
inline Label from_signed(int s) {
  if (s != 1 && s != -1) throw OutOfRange("from_signed: not a sign");
  return s > 0 ? Label(1) : Label(0);
}

struct SampleRecord {
  Word bits = 0;
  Label y = 0;
  bool operator==(const SampleRecord&) const = default;
};

std::string bits_to_string(Word bits, int dim);
Word bits_from_string(const std::string& s, int dim);

// 17 significant digits: enough for exact double round-trips in text formats.
std::string fmt17(double v);

// Partial assignment in {-1,+1,star}^d; star is encoded as 0.
struct Restriction {
  std::vector<std::int8_t> values;  // per coordinate: -1, +1, or 0 = star

  static Restriction all_free(int d) {
    Restriction r;
    r.values.assign(static_cast<std::size_t>(d), 0);
    return r;
  }

  int dim() const { return static_cast<int>(values.size()); }
  int specified_count() const;
  int free_count() const { return dim() - specified_count(); }
  bool consistent(Word bits) const;

  // proj_rho: fills the specified coordinates from the restriction and the
  // free coordinates, in increasing coordinate order, from free_bits.
  Word project(Word free_bits) const;

  std::string to_string() const;  // e.g. "+-**+"
};

}  // namespace noisytd
