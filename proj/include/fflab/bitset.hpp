#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace fflab {

/// Fixed-size bitmap over [0, size). Used as the dense representation of
/// subsets of small finite fields, with a cyclic shift-or for sumsets in F_p.
class DenseBitset {
 public:
  DenseBitset() = default;
  explicit DenseBitset(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::uint64_t size() const noexcept { return size_; }

  void set(std::uint64_t i) noexcept { words_[i >> 6] |= 1ULL << (i & 63); }
  bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }

  std::uint64_t count() const noexcept {
    std::uint64_t n = 0;
    for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  bool all() const noexcept { return count() == size_; }

  /// this |= (src rotated up by shift), i.e. bit (i + shift) mod size is set
  /// for every set bit i of src.
  void or_rotated(const DenseBitset& src, std::uint64_t shift) noexcept {
    shift %= size_;
    if (shift == 0) {
      for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= src.words_[w];
      return;
    }
    // Bits [0, size - shift) of src land at [shift, size); the rest wrap to [0, shift).
    or_range(src, 0, shift, size_ - shift);
    or_range(src, size_ - shift, 0, shift);
  }

  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        fn(static_cast<std::uint64_t>(w) * 64 + static_cast<std::uint64_t>(b));
        bits &= bits - 1;
      }
    }
  }

 private:
  // Reads 64 bits of src starting at bit position pos (zero past the end).
  std::uint64_t load(std::uint64_t pos) const noexcept {
    const std::uint64_t w = pos >> 6;
    const unsigned off = pos & 63;
    std::uint64_t lo = w < words_.size() ? words_[w] : 0;
    if (off == 0) return lo;
    std::uint64_t hi = w + 1 < words_.size() ? words_[w + 1] : 0;
    return (lo >> off) | (hi << (64 - off));
  }

  // this[dst + k] |= src[from + k] for k in [0, len).
  void or_range(const DenseBitset& src, std::uint64_t from, std::uint64_t dst, std::uint64_t len) noexcept {
    std::uint64_t k = 0;
    // Head: align destination to a word boundary.
    while (k < len && ((dst + k) & 63) != 0) {
      if (src.test(from + k)) set(dst + k);
      ++k;
    }
    for (; k + 64 <= len; k += 64) words_[(dst + k) >> 6] |= src.load(from + k);
    for (; k < len; ++k) {
      if (src.test(from + k)) set(dst + k);
    }
  }

  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace fflab
