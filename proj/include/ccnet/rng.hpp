#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "ccnet/bitbuffer.hpp"

namespace ccnet {

/// Source of placement-phase randomness (ramp-sharing randomness and key
/// material). The default is a seeded deterministic stream; the security
/// audits substitute an exhaustive assignment source so every random bit can
/// be enumerated. Draw order is fixed by the placement procedures.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual BitBuffer draw(std::size_t nbits) = 0;
};

class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed) : gen_(seed) {}

  BitBuffer draw(std::size_t nbits) override {
    BitBuffer out(nbits);
    std::size_t i = 0;
    for (; i + 8 <= nbits; i += 8)
      out.set_byte(i / 8, std::uint8_t(gen_() & 0xff));
    for (; i < nbits; ++i) out.set_bit(i, (gen_() & 1) != 0);
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

/// Replays a preset bit string in draw order; throws if the scheme asks for
/// more bits than were preset. Used by the enumeration oracles.
class PresetEntropy final : public EntropySource {
 public:
  explicit PresetEntropy(BitBuffer bits) : bits_(std::move(bits)) {}

  BitBuffer draw(std::size_t nbits) override {
    if (pos_ + nbits > bits_.size_bits())
      throw std::logic_error("PresetEntropy: exhausted");
    BitBuffer out = bits_.slice(pos_, nbits);
    pos_ += nbits;
    return out;
  }

  std::size_t consumed_bits() const { return pos_; }

 private:
  BitBuffer bits_;
  std::size_t pos_ = 0;
};

/// Counts bits requested without producing entropy; a dry run with this
/// source sizes the enumeration space for the audits.
class CountingEntropy final : public EntropySource {
 public:
  BitBuffer draw(std::size_t nbits) override {
    total_ += nbits;
    return BitBuffer(nbits);
  }
  std::size_t total_bits() const { return total_; }

 private:
  std::size_t total_ = 0;
};

}  // namespace ccnet
