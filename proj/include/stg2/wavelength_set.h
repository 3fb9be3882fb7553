#ifndef STG2_WAVELENGTH_SET_H
#define STG2_WAVELENGTH_SET_H

#include <array>
#include <bit>
#include <cstdint>

namespace stg2 {

inline constexpr int kMaxWavelengths = 256;

// Fixed-capacity set of wavelength indices in [0, kMaxWavelengths).
class WavelengthSet {
 public:
  constexpr WavelengthSet() = default;

  static WavelengthSet All(int count) {
    WavelengthSet s;
    for (int w = 0; w < 4 && count > 0; ++w, count -= 64) {
      s.words_[w] = count >= 64 ? ~uint64_t{0} : (uint64_t{1} << count) - 1;
    }
    return s;
  }

  bool contains(int w) const { return (words_[w >> 6] >> (w & 63)) & 1; }
  void insert(int w) { words_[w >> 6] |= uint64_t{1} << (w & 63); }
  void erase(int w) { words_[w >> 6] &= ~(uint64_t{1} << (w & 63)); }

  bool empty() const {
    return (words_[0] | words_[1] | words_[2] | words_[3]) == 0;
  }

  int size() const {
    int n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  // Smallest index in the set, or -1 when empty.
  int min() const {
    for (int w = 0; w < 4; ++w) {
      if (words_[w] != 0) return w * 64 + std::countr_zero(words_[w]);
    }
    return -1;
  }

  WavelengthSet& operator&=(const WavelengthSet& o) {
    for (int w = 0; w < 4; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  WavelengthSet& operator|=(const WavelengthSet& o) {
    for (int w = 0; w < 4; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  // Set difference.
  WavelengthSet& operator-=(const WavelengthSet& o) {
    for (int w = 0; w < 4; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  friend WavelengthSet operator&(WavelengthSet a, const WavelengthSet& b) {
    return a &= b;
  }
  friend WavelengthSet operator-(WavelengthSet a, const WavelengthSet& b) {
    return a -= b;
  }
  friend bool operator==(const WavelengthSet&, const WavelengthSet&) = default;

  bool is_subset_of(const WavelengthSet& o) const {
    return (*this - o).empty();
  }

 private:
  std::array<uint64_t, 4> words_{};
};

}  // namespace stg2

#endif  // STG2_WAVELENGTH_SET_H
