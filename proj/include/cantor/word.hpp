#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cantor {

using Bit = int;

/// A finite binary word, an element of D^{<omega}.
///
/// Stored as a string of '0'/'1' characters so that prefix tests,
/// concatenation and ordering are the plain string operations. The induced
/// ordering is lexicographic with a proper prefix sorting before its
/// extensions, which is what the trie routines in base_tree.hpp rely on.
class Word {
 public:
  Word() = default;

  explicit Word(std::string_view bits) : bits_(bits) {
    for (char c : bits_)
      if (c != '0' && c != '1')
        throw std::invalid_argument("Word: expected only '0' and '1', got '" + bits_ + "'");
  }

  static Word repeat(Bit b, std::size_t n) { return Word(std::string(n, b ? '1' : '0'), Trusted{}); }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  Bit operator[](std::size_t i) const noexcept {
    assert(i < bits_.size());
    return bits_[i] == '1';
  }
  Bit back() const noexcept { return (*this)[size() - 1]; }

  void push_back(Bit b) { bits_.push_back(b ? '1' : '0'); }
  void pop_back() { bits_.pop_back(); }

  /// Copy of the word with bit i inverted.
  Word flipped(std::size_t i) const {
    Word w = *this;
    w.bits_[i] = bits_[i] == '1' ? '0' : '1';
    return w;
  }

  Word substr(std::size_t pos, std::size_t len = std::string::npos) const {
    return Word(bits_.substr(pos, len), Trusted{});
  }

  bool is_prefix_of(const Word& other) const noexcept {
    return other.bits_.size() >= bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
  }

  /// Length of the longest common prefix.
  std::size_t common_prefix(const Word& other) const noexcept {
    std::size_t n = std::min(size(), other.size());
    std::size_t i = 0;
    while (i < n && bits_[i] == other.bits_[i]) ++i;
    return i;
  }

  bool all(Bit b) const noexcept { return bits_.find(b ? '0' : '1') == std::string::npos; }

  /// The word read as a big-endian binary number; used to index depth-n grids.
  std::size_t to_index() const noexcept {
    std::size_t v = 0;
    for (char c : bits_) v = (v << 1) | static_cast<std::size_t>(c == '1');
    return v;
  }

  static Word from_index(std::size_t value, std::size_t length) {
    std::string s(length, '0');
    for (std::size_t i = 0; i < length; ++i)
      if ((value >> (length - 1 - i)) & 1U) s[i] = '1';
    return Word(std::move(s), Trusted{});
  }

  const std::string& str() const noexcept { return bits_; }

  Word& operator+=(const Word& rhs) {
    bits_ += rhs.bits_;
    return *this;
  }
  friend Word operator+(Word lhs, const Word& rhs) { return lhs += rhs; }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept {
    return a.bits_.compare(b.bits_) <=> 0;
  }

 private:
  struct Trusted {};
  Word(std::string bits, Trusted) : bits_(std::move(bits)) {}

  std::string bits_;
};

}  // namespace cantor
