#pragma once

#include <cstdint>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccnet {

/// Packed bit string. All payloads in the library (files, encoded symbols,
/// pieces, shares, keys, signals) are BitBuffers. Bit 0 is the LSB of byte 0.
class BitBuffer {
 public:
  BitBuffer() = default;

  explicit BitBuffer(std::size_t length_bits)
      : nbits_(length_bits), bytes_((length_bits + 7) / 8, 0) {}

  static BitBuffer from_bytes(std::vector<std::uint8_t> bytes) {
    BitBuffer b;
    b.nbits_ = bytes.size() * 8;
    b.bytes_ = std::move(bytes);
    return b;
  }

  std::size_t size_bits() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  bool get_bit(std::size_t i) const {
    check_index(i);
    return (bytes_[i >> 3] >> (i & 7)) & 1u;
  }

  void set_bit(std::size_t i, bool v) {
    check_index(i);
    const std::uint8_t mask = std::uint8_t(1u << (i & 7));
    if (v)
      bytes_[i >> 3] |= mask;
    else
      bytes_[i >> 3] &= std::uint8_t(~mask);
  }

  std::uint8_t get_byte(std::size_t byte_index) const {
    return bytes_.at(byte_index);
  }

  void set_byte(std::size_t byte_index, std::uint8_t v) {
    bytes_.at(byte_index) = v;
  }

  void xor_with(const BitBuffer& other) {
    if (other.nbits_ != nbits_)
      throw std::invalid_argument("BitBuffer::xor_with: length mismatch (" +
                                  std::to_string(nbits_) + " vs " +
                                  std::to_string(other.nbits_) + ")");
    for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  }

  friend BitBuffer operator^(BitBuffer a, const BitBuffer& b) {
    a.xor_with(b);
    return a;
  }

  BitBuffer slice(std::size_t offset_bits, std::size_t length_bits) const {
    if (offset_bits + length_bits > nbits_)
      throw std::out_of_range("BitBuffer::slice: range exceeds buffer");
    BitBuffer out(length_bits);
    if ((offset_bits & 7) == 0) {
      const std::size_t first = offset_bits >> 3;
      for (std::size_t i = 0; i < out.bytes_.size(); ++i)
        out.bytes_[i] = bytes_[first + i];
      out.mask_tail();
    } else {
      for (std::size_t i = 0; i < length_bits; ++i)
        out.set_bit(i, get_bit(offset_bits + i));
    }
    return out;
  }

  void append(const BitBuffer& other) {
    if ((nbits_ & 7) == 0) {
      bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
      nbits_ += other.nbits_;
      // drop any surplus bytes introduced by a partially filled tail
      bytes_.resize((nbits_ + 7) / 8);
      mask_tail();
    } else {
      const std::size_t base = nbits_;
      resize(nbits_ + other.nbits_);
      for (std::size_t i = 0; i < other.nbits_; ++i)
        set_bit(base + i, other.get_bit(i));
    }
  }

  void resize(std::size_t new_bits) {
    nbits_ = new_bits;
    bytes_.resize((new_bits + 7) / 8, 0);
    mask_tail();
  }

  bool operator==(const BitBuffer& other) const {
    return nbits_ == other.nbits_ && bytes_ == other.bytes_;
  }
  bool operator!=(const BitBuffer& other) const { return !(*this == other); }

  /// Value of the whole buffer as an integer; usable only for tiny buffers
  /// in enumeration oracles.
  std::uint64_t as_uint() const {
    if (nbits_ > 64) throw std::logic_error("BitBuffer::as_uint: too long");
    std::uint64_t v = 0;
    for (std::size_t i = bytes_.size(); i-- > 0;) v = (v << 8) | bytes_[i];
    return v;
  }

  static BitBuffer from_uint(std::uint64_t v, std::size_t length_bits) {
    BitBuffer b(length_bits);
    for (std::size_t i = 0; i < length_bits && i < 64; ++i)
      b.set_bit(i, (v >> i) & 1u);
    return b;
  }

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 0xf]);
    }
    return s;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= nbits_) throw std::out_of_range("BitBuffer: bit index out of range");
  }

  void mask_tail() {
    const std::size_t tail = nbits_ & 7;
    if (tail != 0 && !bytes_.empty())
      bytes_.back() &= std::uint8_t((1u << tail) - 1u);
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

inline BitBuffer concat(const BitBuffer& a, const BitBuffer& b) {
  BitBuffer out = a;
  out.append(b);
  return out;
}

}  // namespace ccnet
