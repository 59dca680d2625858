#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "ccnet/bitbuffer.hpp"
#include "ccnet/rng.hpp"

namespace ccnet {

/// One-time-pad key identifier: owner scope plus label, e.g.
/// "mcast/j=3/S=0b0110" or "unicast/i=2/l=4".
using KeyId = std::string;

/// Generates and tracks pad keys. Each key is generated once and may be
/// consumed by exactly one encryption; a second consumption throws, which the
/// audits treat as a fatal structural failure.
class KeyRegistry {
 public:
  const BitBuffer& generate(const KeyId& id, std::size_t length_bits,
                            EntropySource& entropy) {
    auto [it, inserted] = keys_.try_emplace(id);
    if (!inserted)
      throw std::logic_error("KeyRegistry: key '" + id + "' generated twice");
    it->second.data = entropy.draw(length_bits);
    return it->second.data;
  }

  const BitBuffer& lookup(const KeyId& id) const {
    auto it = keys_.find(id);
    if (it == keys_.end())
      throw std::logic_error("KeyRegistry: unknown key '" + id + "'");
    return it->second.data;
  }

  bool contains(const KeyId& id) const { return keys_.count(id) != 0; }

  /// XOR-encrypts `data` with the named key and marks the key consumed.
  BitBuffer consume(const KeyId& id, const BitBuffer& data) {
    auto it = keys_.find(id);
    if (it == keys_.end())
      throw std::logic_error("KeyRegistry: unknown key '" + id + "'");
    if (it->second.consumed)
      throw std::logic_error("KeyRegistry: key '" + id + "' consumed twice");
    if (it->second.data.size_bits() != data.size_bits())
      throw std::logic_error("KeyRegistry: key '" + id + "' length mismatch");
    it->second.consumed = true;
    return data ^ it->second.data;
  }

  std::size_t consumed_count() const {
    std::size_t c = 0;
    for (const auto& [id, e] : keys_)
      if (e.consumed) ++c;
    return c;
  }

  std::size_t size() const { return keys_.size(); }

  const std::map<KeyId, BitBuffer> all_keys() const {
    std::map<KeyId, BitBuffer> out;
    for (const auto& [id, e] : keys_) out[id] = e.data;
    return out;
  }

 private:
  struct Entry {
    BitBuffer data;
    bool consumed = false;
  };
  std::map<KeyId, Entry> keys_;
};

/// Plain pad application for decryption paths: otp(otp(x,k),k) = x.
inline BitBuffer otp(const BitBuffer& data, const BitBuffer& key) {
  if (data.size_bits() != key.size_bits())
    throw std::invalid_argument("otp: key/data length mismatch");
  return data ^ key;
}

}  // namespace ccnet
