#include "wfnas/types.hpp"

#include <cmath>

namespace wfnas {

Index width_from_weight_count(Index d) {
  const auto width = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(d) / 2.0)));
  if (width <= 0 || weight_count(width) != d) {
    throw Error("weight vector length " + std::to_string(d) + " is not of the form 2*I^2");
  }
  return width;
}

BinaryMask::BinaryMask(Bits bits) : bits_(std::move(bits)) {
  for (Index i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) throw Error("mask entry " + std::to_string(i) + " is not 0/1");
  }
}

BinaryMask BinaryMask::from_string(const std::string& bits) {
  Bits out(static_cast<Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw Error("mask string has character other than 0/1 at " + std::to_string(i));
    out[static_cast<Index>(i)] = bits[i] == '1' ? 1 : 0;
  }
  return BinaryMask(std::move(out));
}

Index BinaryMask::count() const { return bits_.cast<Index>().sum(); }

double BinaryMask::density() const {
  return bits_.size() == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(bits_.size());
}

std::string BinaryMask::to_string() const {
  std::string s(static_cast<std::size_t>(bits_.size()), '0');
  for (Index i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace wfnas
