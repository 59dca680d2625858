#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ccnet/scheme.hpp"

namespace ccnet {

struct AuditReport {
  bool pass = false;
  std::string detail;
};

/// Structural one-time-pad witness: every delivery payload on both hops must
/// be padded by exactly one key, every key consumed at most once, and key
/// lengths must match payload lengths. Fails on the first offending label.
inline AuditReport audit_pad_coverage(const Placement& placement, const Transcript& tr) {
  const SchemeParams& p = placement.params();
  std::map<KeyId, unsigned> used;
  for (unsigned j = 1; j <= p.h; ++j) {
    for (const SubSignal& sig : tr.server_signals[j - 1]) {
      if (!sig.key_id)
        return {false, "unpadded bits: server sub-signal j=" + std::to_string(j) +
                           " S=" + std::to_string(sig.S)};
      if (placement.registry().lookup(*sig.key_id).size_bits() != sig.data.size_bits())
        return {false, "key length mismatch on " + *sig.key_id};
      if (++used[*sig.key_id] > 1) return {false, "key reused: " + *sig.key_id};
    }
  }
  for (const auto& [jk, msg] : tr.relay_messages) {
    if (msg.f1_payload.size_bits() > 0 || placement.unicast_key_bits() > 0) {
      if (!msg.f1_key_id)
        return {false, "unpadded bits: relay message j=" + std::to_string(jk.first) +
                           " user=" + std::to_string(jk.second)};
      if (placement.registry().lookup(*msg.f1_key_id).size_bits() !=
          msg.f1_payload.size_bits())
        return {false, "key length mismatch on " + *msg.f1_key_id};
      if (++used[*msg.f1_key_id] > 1) return {false, "key reused: " + *msg.f1_key_id};
    }
    // forwarded sub-signals are re-transmissions of already padded payloads
  }
  return {true, "pad coverage: " + std::to_string(used.size()) + " keys, all single-use"};
}

namespace detail {

/// Everything an external eavesdropper observes during delivery, in a fixed
/// canonical order. Key material is never included.
inline std::string eavesdropper_view(const Transcript& tr, unsigned h) {
  std::ostringstream os;
  for (unsigned j = 1; j <= h; ++j) {
    for (const SubSignal& sig : tr.server_signals[j - 1])
      os << 'X' << j << '.' << sig.S << ':' << sig.data.to_hex() << ';';
  }
  for (const auto& [jk, msg] : tr.relay_messages) {
    os << 'Y' << jk.first << '.' << jk.second << ':' << msg.f1_payload.to_hex() << ';';
    // forwarded payloads are copies of the X's above; the observer sees them
    // again but they add no new values
  }
  return os.str();
}

/// User k's complete view: cache contents (including any keys) plus the r
/// received messages with all forwarded payloads, plus the demand vector.
inline std::string user_view(const Placement& placement, const Transcript& tr,
                             const Demand& demand, unsigned user) {
  const Topology& topo = placement.topology();
  const SchemeParams& p = placement.params();
  std::ostringstream os;
  for (unsigned d : demand) os << d << ',';
  for (unsigned j : topo.relays_of(user)) {
    const unsigned rank = topo.index_of(j, user);
    for (unsigned n = 1; n <= p.D; ++n) {
      for (unsigned b : placement.cached_blocks(rank))
        os << 'b' << j << '.' << n << '.' << b << ':'
           << placement.f1_block(j, n, b).to_hex() << ';';
      for (std::size_t ti = 0; ti < p.piece_sets.count(); ++ti) {
        const SubsetMask T = p.piece_sets.mask_at(ti);
        if ((T >> (rank - 1)) & 1u)
          os << 's' << j << '.' << n << '.' << T << ':'
             << placement.segment2(j, n, T).to_hex() << ';';
      }
    }
    if (p.uses_keys()) {
      for (std::size_t si = 0; si < p.sig_sets.count(); ++si) {
        const SubsetMask S = p.sig_sets.mask_at(si);
        if ((S >> (rank - 1)) & 1u)
          os << 'k' << j << '.' << S << ':'
             << placement.registry().lookup(keyid::mcast(j, S)).to_hex() << ';';
      }
      os << 'u' << j << ':' << placement.registry().lookup(keyid::unicast(j, rank)).to_hex()
         << ';';
    }
    const RelayUserMessage& msg = tr.message(j, user);
    os << 'f' << j << ':' << msg.f1_payload.to_hex() << ';';
    for (SubsetMask S : msg.forwarded)
      os << 'm' << j << '.' << S << ':' << tr.signal(j, S).data.to_hex() << ';';
  }
  return os.str();
}

}  // namespace detail

/// Exhaustive two-library indistinguishability: over all values of the
/// placement randomness (keys and share randomness), the multiset of
/// eavesdropper transcripts must be identical for both libraries. Only viable
/// at GF(2)/tiny-F scale; refuses larger enumeration spaces.
inline AuditReport audit_transcript_indistinguishability(
    const Topology& topo, const SchemeParams& params, std::uint64_t F,
    const Demand& demand, const Library& lib_a, const Library& lib_b,
    Field field = Field::GF2, std::size_t max_random_bits = 24) {
  CountingEntropy counter;
  {
    Placement probe(lib_a, topo, params, counter, field);
    Transcript t = deliver(probe, demand);
    (void)t;
  }
  const std::size_t bits = counter.total_bits();
  if (bits > max_random_bits)
    return {false, "enumeration space too large: " + std::to_string(bits) + " random bits"};

  auto histogram = [&](const Library& lib) {
    std::map<std::string, std::uint64_t> h;
    for (std::uint64_t rbits = 0; rbits < (std::uint64_t(1) << bits); ++rbits) {
      PresetEntropy entropy(BitBuffer::from_uint(rbits, bits));
      Placement pl(lib, topo, params, entropy, field);
      Transcript tr = deliver(pl, demand);
      ++h[detail::eavesdropper_view(tr, params.h)];
    }
    return h;
  };

  const auto ha = histogram(lib_a);
  const auto hb = histogram(lib_b);
  if (ha != hb)
    return {false, "transcript distributions differ between the two libraries"};
  return {true, "transcript distribution equality over " +
                    std::to_string(std::uint64_t(1) << bits) + " randomness values"};
}

/// Structural secure-caching witness at any scale: after delivery user k has
/// all C(Khat,t) share labels of its requested symbols, and for every other
/// file no signal ever exposes a share label the user does not already cache,
/// leaving it at m = C(Khat-1,t-1) shares -- below the secrecy threshold.
inline AuditReport audit_share_count(const Placement& placement, const Transcript& tr,
                                     const Demand& demand) {
  const Topology& topo = placement.topology();
  const SchemeParams& p = placement.params();
  if (!p.uses_shares()) return {false, "share-count audit: scheme does not place shares"};
  for (unsigned user = 1; user <= p.K; ++user) {
    for (unsigned j : topo.relays_of(user)) {
      const unsigned rank = topo.index_of(j, user);
      std::size_t cached = 0;
      for (std::size_t ti = 0; ti < p.piece_sets.count(); ++ti)
        if ((p.piece_sets.mask_at(ti) >> (rank - 1)) & 1u) ++cached;
      if (cached != p.ramp_m)
        return {false, "user " + std::to_string(user) + " caches " + std::to_string(cached) +
                           " shares per foreign symbol, expected m=" + std::to_string(p.ramp_m)};
      const RelayUserMessage& msg = tr.message(j, user);
      std::size_t fresh = 0;
      for (SubsetMask S : msg.forwarded) {
        // the only unknown term in X^S for this user must be its own file's
        for (unsigned other : topo.users_of(j)) {
          if (other == user) continue;
          const unsigned orank = topo.index_of(j, other);
          if (((S >> (orank - 1)) & 1u) == 0) continue;
          const SubsetMask olabel = S & ~(SubsetMask(1u) << (orank - 1));
          if (((olabel >> (rank - 1)) & 1u) == 0)
            return {false, "signal j=" + std::to_string(j) + " S=" + std::to_string(S) +
                               " exposes an uncached share to user " + std::to_string(user)};
        }
        ++fresh;
      }
      if (cached + fresh != p.ramp_n)
        return {false, "user " + std::to_string(user) + " ends with " +
                           std::to_string(cached + fresh) + " shares of its request, expected " +
                           std::to_string(p.ramp_n)};
    }
  }
  (void)demand;
  return {true, "share counts: n=" + std::to_string(p.ramp_n) +
                    " for requests, m=" + std::to_string(p.ramp_m) + " for the rest"};
}

/// Exhaustive posterior audit: enumerating every library and every value of
/// the placement randomness, the distribution of each non-requested file
/// conditioned on user k's full view must be exactly uniform. Tiny scale only.
inline AuditReport audit_posterior_uniformity(const Topology& topo,
                                              const SchemeParams& params, std::uint64_t F,
                                              const Demand& demand,
                                              Field field = Field::GF2,
                                              std::size_t max_total_bits = 24) {
  CountingEntropy counter;
  {
    Library probe = random_library(params.D, F, 1);
    Placement pl(probe, topo, params, counter, field);
    Transcript t = deliver(pl, demand);
    (void)t;
  }
  const std::size_t rand_bits = counter.total_bits();
  const std::size_t lib_bits = std::size_t(params.D) * F;
  if (rand_bits + lib_bits > max_total_bits)
    return {false, "enumeration space too large: " + std::to_string(rand_bits + lib_bits) +
                       " bits"};

  // view -> per (user, file) value counts
  for (unsigned user = 1; user <= params.K; ++user) {
    const unsigned d = demand[user - 1];
    std::map<std::string, std::map<std::pair<unsigned, std::uint64_t>, std::uint64_t>> counts;
    for (std::uint64_t lv = 0; lv < (std::uint64_t(1) << lib_bits); ++lv) {
      Library lib;
      lib.D = params.D;
      lib.F = F;
      for (unsigned n = 0; n < params.D; ++n)
        lib.files.push_back(BitBuffer::from_uint((lv >> (n * F)) & ((1u << F) - 1), F));
      for (std::uint64_t rv = 0; rv < (std::uint64_t(1) << rand_bits); ++rv) {
        PresetEntropy entropy(BitBuffer::from_uint(rv, rand_bits));
        Placement pl(lib, topo, params, entropy, field);
        Transcript tr = deliver(pl, demand);
        const std::string view = detail::user_view(pl, tr, demand, user);
        auto& c = counts[view];
        for (unsigned n = 1; n <= params.D; ++n)
          if (n != d) ++c[{n, lib.file(n).as_uint()}];
      }
    }
    for (const auto& [view, c] : counts) {
      for (unsigned n = 1; n <= params.D; ++n) {
        if (n == d) continue;
        std::uint64_t first = 0;
        bool have = false;
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << F); ++v) {
          auto it = c.find({n, v});
          const std::uint64_t cnt = it == c.end() ? 0 : it->second;
          if (!have) {
            first = cnt;
            have = true;
          } else if (cnt != first) {
            return {false, "non-uniform posterior: user " + std::to_string(user) +
                               ", file " + std::to_string(n)};
          }
        }
      }
    }
  }
  return {true, "posterior uniform over " + std::to_string(std::uint64_t(1) << lib_bits) +
                    " libraries x " + std::to_string(std::uint64_t(1) << rand_bits) +
                    " randomness values"};
}

}  // namespace ccnet
