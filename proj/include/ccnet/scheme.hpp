#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccnet/bitbuffer.hpp"
#include "ccnet/gf.hpp"
#include "ccnet/keys.hpp"
#include "ccnet/mds.hpp"
#include "ccnet/params.hpp"
#include "ccnet/ramp.hpp"
#include "ccnet/rng.hpp"
#include "ccnet/subsets.hpp"
#include "ccnet/topology.hpp"

namespace ccnet {

struct Library {
  unsigned D = 0;
  std::uint64_t F = 0;  // bits per file
  std::vector<BitBuffer> files;

  const BitBuffer& file(unsigned n) const { return files.at(n - 1); }
};

inline Library random_library(unsigned D, std::uint64_t F, std::uint64_t seed) {
  Library lib;
  lib.D = D;
  lib.F = F;
  SeededEntropy e(seed);
  for (unsigned n = 0; n < D; ++n) lib.files.push_back(e.draw(F));
  return lib;
}

/// Demand vector: d[k-1] in {1..D} is the file requested by user k.
using Demand = std::vector<unsigned>;

inline Demand all_distinct_demand(unsigned K) {
  Demand d(K);
  for (unsigned k = 0; k < K; ++k) d[k] = k + 1;
  return d;
}

namespace keyid {
inline KeyId mcast(unsigned relay, SubsetMask S) {
  return "mcast/j=" + std::to_string(relay) + "/S=" + std::to_string(S);
}
inline KeyId unicast(unsigned relay, unsigned rank) {
  return "unicast/j=" + std::to_string(relay) + "/l=" + std::to_string(rank);
}
}  // namespace keyid

/// Result of the cache placement phase. Segments are stored server-side once;
/// cache membership at relays and users is determined by the labeling rules,
/// and decode paths go through the entitlement-checked accessors below.
class Placement {
 public:
  Placement(const Library& lib, const Topology& topo, const SchemeParams& params,
            EntropySource& entropy, Field field = Field::GF256)
      : topo_(&topo), params_(params), field_(field), F_(lib.F) {
    if (lib.D != params.D) throw std::invalid_argument("Placement: library/params D mismatch");
    if (F_ % params.F_min != 0)
      throw std::invalid_argument("Placement: file size must be a multiple of F_min = " +
                                  std::to_string(params.F_min) + " bits (got " +
                                  std::to_string(F_) + ")");
    f1_bits_ = params_.bits_of(params_.f1_frac, F_);
    f2_bits_ = params_.bits_of(params_.f2_frac, F_);
    seg2_bits_ = params_.bits_of(params_.seg2_frac, F_);
    block_bits_ = params_.bits_of(params_.block_frac, F_);
    ukey_bits_ = params_.bits_of(params_.unicast_key_frac, F_);

    const unsigned h = params_.h, D = params_.D;
    part1_.assign(h, std::vector<BitBuffer>(D));
    part2_.assign(h, std::vector<BitBuffer>(D));

    for (unsigned n = 1; n <= D; ++n) {
      auto symbols = mds_encode(lib.file(n), h, params_.r, field_, n);
      for (unsigned j = 1; j <= h; ++j) {
        const BitBuffer& sym = symbols[j - 1].data;
        part1_[j - 1][n - 1] = sym.slice(0, f1_bits_);
        part2_[j - 1][n - 1] = sym.slice(f1_bits_, f2_bits_);
      }
    }

    if (params_.uses_shares()) {
      // replace part2 by the concatenation of its ramp shares, in label order
      for (unsigned j = 1; j <= h; ++j) {
        for (unsigned n = 1; n <= D; ++n) {
          auto shares = ramp_share(part2_[j - 1][n - 1], params_.ramp_m,
                                   params_.ramp_n, entropy, field_);
          BitBuffer all;
          for (const auto& s : shares) all.append(s.data);
          part2_[j - 1][n - 1] = std::move(all);
        }
      }
    }

    if (params_.uses_keys()) {
      for (unsigned j = 1; j <= h; ++j)
        for (std::size_t si = 0; si < params_.sig_sets.count(); ++si)
          registry_.generate(keyid::mcast(j, params_.sig_sets.mask_at(si)), seg2_bits_,
                             entropy);
      for (unsigned j = 1; j <= h; ++j)
        for (unsigned l = 1; l <= params_.khat; ++l)
          registry_.generate(keyid::unicast(j, l), ukey_bits_, entropy);
    }
  }

  const Topology& topology() const { return *topo_; }
  const SchemeParams& params() const { return params_; }
  Field field() const { return field_; }
  std::uint64_t file_bits() const { return F_; }
  std::uint64_t f1_bits() const { return f1_bits_; }
  std::uint64_t f2_bits() const { return f2_bits_; }
  std::uint64_t seg2_bits() const { return seg2_bits_; }
  std::uint64_t block_bits() const { return block_bits_; }
  std::uint64_t unicast_key_bits() const { return ukey_bits_; }

  KeyRegistry& registry() { return registry_; }
  const KeyRegistry& registry() const { return registry_; }

  /// f^{j,1}_n, held by relay j.
  const BitBuffer& relay_segment(unsigned relay, unsigned n) const {
    return part1_.at(relay - 1).at(n - 1);
  }

  /// Block b (1..khat) of f^{j,1}_n.
  BitBuffer f1_block(unsigned relay, unsigned n, unsigned block) const {
    return part1_.at(relay - 1).at(n - 1).slice((block - 1) * block_bits_, block_bits_);
  }

  /// Piece f^{j,2}_{n,T} or share S^j_{n,T}.
  BitBuffer segment2(unsigned relay, unsigned n, SubsetMask label) const {
    const std::size_t idx = params_.piece_sets.rank_of(label);
    return part2_.at(relay - 1).at(n - 1).slice(idx * seg2_bits_, seg2_bits_);
  }

  /// Blocks of f^{j,1} cached by the user at rank rho: the cyclic run of t1
  /// blocks starting at rho. Deterministic stand-in for the random-fraction
  /// selection; the relay knows exactly which blocks are missing.
  std::vector<unsigned> cached_blocks(unsigned rank) const {
    std::vector<unsigned> out;
    if (!params_.uses_blocks()) return out;
    for (unsigned i = 0; i < params_.t1; ++i)
      out.push_back((rank - 1 + i) % params_.khat + 1);
    return out;
  }

  bool block_is_cached(unsigned rank, unsigned block) const {
    if (!params_.uses_blocks() || params_.t1 == 0) return false;
    const unsigned off = (block + params_.khat - rank) % params_.khat;  // 0-based offset
    return off < params_.t1;
  }

  bool user_holds_segment2(unsigned relay, unsigned user, SubsetMask label) const {
    if (!topo_->adjacent(relay, user)) return false;
    const unsigned rank = topo_->index_of(relay, user);
    return (label >> (rank - 1)) & 1u;
  }

  bool user_holds_key(unsigned user, const KeyId& id) const {
    if (!params_.uses_keys()) return false;
    for (unsigned relay : topo_->relays_of(user)) {
      const unsigned rank = topo_->index_of(relay, user);
      if (id == keyid::unicast(relay, rank)) return true;
      for (std::size_t si = 0; si < params_.sig_sets.count(); ++si) {
        const SubsetMask S = params_.sig_sets.mask_at(si);
        if (((S >> (rank - 1)) & 1u) && id == keyid::mcast(relay, S)) return true;
      }
    }
    return false;
  }

  /// Exact cached bits at relay j (data + pad keys).
  std::uint64_t relay_cached_bits(unsigned relay) const {
    std::uint64_t bits = std::uint64_t(params_.D) * f1_bits_;
    if (params_.uses_keys()) bits += std::uint64_t(params_.khat) * ukey_bits_;
    (void)relay;
    return bits;
  }

  /// Exact cached bits at user k (blocks, pieces/shares, keys).
  std::uint64_t user_cached_bits(unsigned user) const {
    std::uint64_t bits = 0;
    const unsigned D = params_.D, khat = params_.khat;
    for (unsigned relay : topo_->relays_of(user)) {
      const unsigned rank = topo_->index_of(relay, user);
      (void)relay;
      if (params_.uses_blocks())
        bits += std::uint64_t(D) * params_.t1 * block_bits_;
      // part2 labels containing this rank
      std::uint64_t labels = 0;
      for (std::size_t ti = 0; ti < params_.piece_sets.count(); ++ti)
        if ((params_.piece_sets.mask_at(ti) >> (rank - 1)) & 1u) ++labels;
      bits += std::uint64_t(D) * labels * seg2_bits_;
      if (params_.uses_keys()) {
        std::uint64_t mkeys = 0;
        for (std::size_t si = 0; si < params_.sig_sets.count(); ++si)
          if ((params_.sig_sets.mask_at(si) >> (rank - 1)) & 1u) ++mkeys;
        bits += mkeys * seg2_bits_ + ukey_bits_;
      }
    }
    return bits;
  }

 private:
  const Topology* topo_;
  SchemeParams params_;
  Field field_;
  std::uint64_t F_;
  std::uint64_t f1_bits_ = 0, f2_bits_ = 0, seg2_bits_ = 0, block_bits_ = 0,
                ukey_bits_ = 0;
  std::vector<std::vector<BitBuffer>> part1_;  // [h][D]
  std::vector<std::vector<BitBuffer>> part2_;  // [h][D], pieces/shares concatenated
  KeyRegistry registry_;
};

struct SubSignal {
  SubsetMask S = 0;
  BitBuffer data;
  std::optional<KeyId> key_id;  // set iff the payload is one-time padded
};

struct RelayUserMessage {
  BitBuffer f1_payload;             // top-up part, possibly padded
  std::vector<unsigned> f1_blocks;  // block ids carried; empty = whole part1
  std::optional<KeyId> f1_key_id;
  std::vector<SubsetMask> forwarded;  // sub-signals forwarded from the server
  std::uint64_t bits = 0;             // total bits on this relay->user link
};

struct Transcript {
  std::vector<std::vector<SubSignal>> server_signals;  // [h]
  std::map<std::pair<unsigned, unsigned>, RelayUserMessage> relay_messages;
  std::vector<std::uint64_t> server_bits;  // per relay

  const RelayUserMessage& message(unsigned relay, unsigned user) const {
    auto it = relay_messages.find({relay, user});
    if (it == relay_messages.end())
      throw std::invalid_argument("Transcript: no message for this relay/user pair");
    return it->second;
  }

  const SubSignal& signal(unsigned relay, SubsetMask S) const {
    for (const auto& sig : server_signals.at(relay - 1))
      if (sig.S == S) return sig;
    throw std::invalid_argument("Transcript: no such sub-signal");
  }
};

/// Delivery phase: per-relay multicast sub-signals plus unicast top-ups.
inline Transcript deliver(Placement& placement, const Demand& demand) {
  const Topology& topo = placement.topology();
  const SchemeParams& p = placement.params();
  if (demand.size() != p.K)
    throw std::invalid_argument("deliver: demand vector must have K entries");
  for (unsigned d : demand)
    if (d < 1 || d > p.D) throw std::invalid_argument("deliver: demand out of range");

  Transcript tr;
  tr.server_signals.assign(p.h, {});
  tr.server_bits.assign(p.h, 0);

  for (unsigned j = 1; j <= p.h; ++j) {
    for (std::size_t si = 0; si < p.sig_sets.count(); ++si) {
      const SubsetMask S = p.sig_sets.mask_at(si);
      BitBuffer x(placement.seg2_bits());
      for (unsigned user : topo.users_of(j)) {
        const unsigned rank = topo.index_of(j, user);
        if (((S >> (rank - 1)) & 1u) == 0) continue;
        x.xor_with(placement.segment2(j, demand[user - 1], S & ~(SubsetMask(1u) << (rank - 1))));
      }
      SubSignal sig;
      sig.S = S;
      if (p.uses_keys()) {
        sig.key_id = keyid::mcast(j, S);
        sig.data = placement.registry().consume(*sig.key_id, x);
      } else {
        sig.data = std::move(x);
      }
      tr.server_bits[j - 1] += sig.data.size_bits();
      tr.server_signals[j - 1].push_back(std::move(sig));
    }

    for (unsigned user : topo.users_of(j)) {
      const unsigned rank = topo.index_of(j, user);
      RelayUserMessage msg;
      const unsigned d = demand[user - 1];
      if (p.uses_blocks()) {
        for (unsigned b = 1; b <= p.khat; ++b) {
          if (placement.block_is_cached(rank, b)) continue;
          msg.f1_blocks.push_back(b);
          msg.f1_payload.append(placement.f1_block(j, d, b));
        }
      } else {
        msg.f1_payload = placement.relay_segment(j, d);
      }
      if (p.uses_keys()) {
        msg.f1_key_id = keyid::unicast(j, rank);
        msg.f1_payload = placement.registry().consume(*msg.f1_key_id, msg.f1_payload);
      }
      msg.bits = msg.f1_payload.size_bits();
      for (std::size_t si = 0; si < p.sig_sets.count(); ++si) {
        const SubsetMask S = p.sig_sets.mask_at(si);
        if ((S >> (rank - 1)) & 1u) {
          msg.forwarded.push_back(S);
          msg.bits += placement.seg2_bits();
        }
      }
      tr.relay_messages[{j, user}] = std::move(msg);
    }
  }
  return tr;
}

/// Decoding map of user k: cache contents (via the entitlement-checked
/// placement accessors) plus the r incoming relay messages yield W_{d_k}.
inline BitBuffer decode_user(const Placement& placement, const Transcript& tr,
                             const Demand& demand, unsigned user) {
  const Topology& topo = placement.topology();
  const SchemeParams& p = placement.params();
  const unsigned d = demand.at(user - 1);

  std::vector<EncodedSymbol> symbols;
  for (unsigned j : topo.relays_of(user)) {
    const unsigned rank = topo.index_of(j, user);
    const RelayUserMessage& msg = tr.message(j, user);

    // part1 recovery
    BitBuffer f1_payload = msg.f1_payload;
    if (msg.f1_key_id) {
      if (!placement.user_holds_key(user, *msg.f1_key_id))
        throw std::logic_error("decode_user: pad key not in this user's cache");
      f1_payload = otp(f1_payload, placement.registry().lookup(*msg.f1_key_id));
    }
    BitBuffer f1;
    if (p.uses_blocks()) {
      f1 = BitBuffer(placement.f1_bits());
      std::size_t off = 0;
      std::map<unsigned, BitBuffer> blocks;
      for (unsigned b : msg.f1_blocks) {
        blocks[b] = f1_payload.slice(off, placement.block_bits());
        off += placement.block_bits();
      }
      for (unsigned b = 1; b <= p.khat; ++b) {
        BitBuffer blk = placement.block_is_cached(rank, b)
                            ? placement.f1_block(j, d, b)  // from Z_k
                            : blocks.at(b);
        for (std::size_t i = 0; i < blk.size_bits(); ++i)
          f1.set_bit((b - 1) * placement.block_bits() + i, blk.get_bit(i));
      }
    } else {
      f1 = std::move(f1_payload);
    }

    // part2 recovery: cached labels (rank in T) plus one fresh segment per
    // forwarded sub-signal, after cancelling the other users' terms
    std::map<SubsetMask, BitBuffer> segs;
    for (std::size_t ti = 0; ti < p.piece_sets.count(); ++ti) {
      const SubsetMask T = p.piece_sets.mask_at(ti);
      if ((T >> (rank - 1)) & 1u) segs[T] = placement.segment2(j, d, T);
    }
    for (SubsetMask S : msg.forwarded) {
      BitBuffer x = tr.signal(j, S).data;
      const auto& sig = tr.signal(j, S);
      if (sig.key_id) {
        if (!placement.user_holds_key(user, *sig.key_id))
          throw std::logic_error("decode_user: multicast key not in this user's cache");
        x = otp(x, placement.registry().lookup(*sig.key_id));
      }
      for (unsigned other : topo.users_of(j)) {
        if (other == user) continue;
        const unsigned orank = topo.index_of(j, other);
        if (((S >> (orank - 1)) & 1u) == 0) continue;
        const SubsetMask olabel = S & ~(SubsetMask(1u) << (orank - 1));
        if (!placement.user_holds_segment2(j, user, olabel))
          throw std::logic_error("decode_user: cancellation segment not cached");
        x.xor_with(placement.segment2(j, demand[other - 1], olabel));
      }
      segs[S & ~(SubsetMask(1u) << (rank - 1))] = std::move(x);
    }

    BitBuffer f2;
    if (p.uses_shares()) {
      std::vector<Share> shares(p.ramp_n);
      for (std::size_t ti = 0; ti < p.piece_sets.count(); ++ti) {
        const SubsetMask T = p.piece_sets.mask_at(ti);
        shares[ti].symbol_index = unsigned(ti) + 1;
        shares[ti].label = T;
        shares[ti].data = segs.at(T);
      }
      f2 = ramp_reconstruct(shares, p.ramp_m, p.ramp_n, placement.field());
    } else {
      for (std::size_t ti = 0; ti < p.piece_sets.count(); ++ti)
        f2.append(segs.at(p.piece_sets.mask_at(ti)));
    }

    EncodedSymbol sym;
    sym.file_index = d;
    sym.symbol_index = j;
    sym.data = concat(f1, f2);
    symbols.push_back(std::move(sym));
  }

  return mds_decode(symbols, p.h, p.r, placement.field());
}

}  // namespace ccnet
