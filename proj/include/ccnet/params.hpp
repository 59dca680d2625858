#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ccnet/rational.hpp"
#include "ccnet/subsets.hpp"
#include "ccnet/topology.hpp"

namespace ccnet {

enum class SchemeKind { Baseline, SecureDelivery, SecureCaching, SecureBoth };

inline const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::Baseline: return "baseline";
    case SchemeKind::SecureDelivery: return "secure_delivery";
    case SchemeKind::SecureCaching: return "secure_caching";
    case SchemeKind::SecureBoth: return "secure_both";
  }
  return "?";
}

inline SchemeKind scheme_kind_from_string(const std::string& s) {
  if (s == "baseline") return SchemeKind::Baseline;
  if (s == "secure_delivery") return SchemeKind::SecureDelivery;
  if (s == "secure_caching") return SchemeKind::SecureCaching;
  if (s == "secure_both") return SchemeKind::SecureBoth;
  throw std::invalid_argument("unknown scheme kind: " + s);
}

/// Fully resolved scheme instance: grid parameters plus every derived segment
/// size as an exact fraction of the file size F, and the smallest F for which
/// all segments are whole field symbols.
///
/// Segment layout per encoded symbol f^i of F/r bits:
///   part1 (|f1| bits)  -- relay-cached head of the symbol
///   part2 (|f2| bits)  -- subpacketized tail: pieces labeled by t2-subsets
///                         (baseline / secure delivery) or ramp shares labeled
///                         by t-subsets (secure caching / both)
struct SchemeParams {
  SchemeKind kind = SchemeKind::Baseline;
  unsigned h = 0, r = 0, khat = 0, K = 0, D = 0;
  Rational N;       // normalized relay cache
  unsigned t1 = 0;  // relay-segment caching parameter (baseline / secure delivery)
  unsigned t2 = 0;  // subpacketization parameter (t for the share-based kinds)
  Rational M;       // derived normalized user cache

  Rational f1_frac;           // |f^{i,1}| / F
  Rational f2_frac;           // |f^{i,2}| / F
  Rational seg2_frac;         // piece or share size / F
  Rational block_frac;        // f1 block size / F (f1 split into khat blocks)
  Rational unicast_key_frac;  // relay->user pad size / F (secure kinds)
  unsigned ramp_m = 0, ramp_n = 0;  // share-based kinds only

  std::uint64_t F_min = 0;  // bits

  SubsetIndexer piece_sets;  // labels of part2 segments, |T| = t2
  SubsetIndexer sig_sets;    // delivery subsets, |S| = t2 + 1

  bool uses_blocks() const {
    return kind == SchemeKind::Baseline || kind == SchemeKind::SecureDelivery;
  }
  bool uses_shares() const {
    return kind == SchemeKind::SecureCaching || kind == SchemeKind::SecureBoth;
  }
  bool uses_keys() const {
    return kind == SchemeKind::SecureDelivery || kind == SchemeKind::SecureBoth;
  }

  std::uint64_t bits_of(const Rational& frac, std::uint64_t F) const {
    const Rational b = frac * Rational(std::int64_t(F));
    if (!b.is_integer())
      throw std::logic_error("SchemeParams: segment size is not a whole number of bits");
    return std::uint64_t(b.num());
  }
};

namespace detail {

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return a | b;
  return a / std::gcd(a, b) * b;
}

/// Smallest F such that q*F is a whole multiple of `sym` bits for every
/// positive fraction q in `fracs`.
inline std::uint64_t minimal_file_bits(const std::vector<Rational>& fracs,
                                       std::uint64_t sym) {
  std::uint64_t f = sym;
  for (const Rational& q : fracs) {
    if (q.num() <= 0) continue;
    const std::uint64_t a = std::uint64_t(q.num());
    const std::uint64_t need = sym * std::uint64_t(q.den()) / std::gcd(a, sym * std::uint64_t(q.den()));
    f = lcm_u64(f, need);
  }
  return f;
}

inline void check_common(const Topology& t, unsigned D, const Rational& N) {
  if (D < t.num_users())
    throw std::invalid_argument("scheme: requires K <= D (got K=" +
                                std::to_string(t.num_users()) + ", D=" + std::to_string(D) + ")");
  if (N < Rational(0)) throw std::invalid_argument("scheme: N must be nonnegative");
}

inline void finish(SchemeParams& p, std::uint64_t sym) {
  p.block_frac = p.uses_blocks() && p.khat > 0 ? p.f1_frac / Rational(p.khat) : p.f1_frac;
  std::vector<Rational> fracs = {Rational(1, p.r), p.f1_frac, p.f2_frac,
                                 p.seg2_frac, p.block_frac, p.unicast_key_frac};
  p.F_min = minimal_file_bits(fracs, sym);
  p.piece_sets = SubsetIndexer(p.khat, p.t2);
  p.sig_sets = SubsetIndexer(p.khat, p.t2 + 1);
}

}  // namespace detail

inline SchemeParams params_baseline(const Topology& topo, unsigned D, Rational N,
                                    unsigned t1, unsigned t2,
                                    std::uint64_t sym_bits = 8) {
  detail::check_common(topo, D, N);
  SchemeParams p;
  p.kind = SchemeKind::Baseline;
  p.h = topo.h();
  p.r = topo.r();
  p.khat = topo.users_per_relay();
  p.K = topo.num_users();
  p.D = D;
  p.N = N;
  p.t1 = t1;
  p.t2 = t2;
  if (N > Rational(D, p.r))
    throw std::invalid_argument("baseline: requires N <= D/r");
  if (t2 > p.khat) throw std::invalid_argument("baseline: t2 must be in {0..Khat}");
  const std::int64_t t1_cap =
      std::min<std::int64_t>(p.khat, (N * Rational(p.khat) / Rational(D)).floor());
  if (std::int64_t(t1) > t1_cap)
    throw std::invalid_argument("baseline: t1 exceeds min(Khat, floor(Khat*N/D)) = " +
                                std::to_string(t1_cap));
  p.M = Rational(std::int64_t(t1) - std::int64_t(t2)) * N * Rational(p.r) / Rational(p.khat) +
        Rational(t2) * Rational(D) / Rational(p.khat);
  p.f1_frac = N / Rational(D);
  p.f2_frac = Rational(1, p.r) - p.f1_frac;
  p.seg2_frac = p.f2_frac / Rational(std::int64_t(binomial(p.khat, t2)));
  detail::finish(p, sym_bits);
  return p;
}

inline SchemeParams params_secure_delivery(const Topology& topo, unsigned D, Rational N,
                                           unsigned t1, unsigned t2,
                                           std::uint64_t sym_bits = 8) {
  detail::check_common(topo, D, N);
  SchemeParams p;
  p.kind = SchemeKind::SecureDelivery;
  p.h = topo.h();
  p.r = topo.r();
  p.khat = topo.users_per_relay();
  p.K = topo.num_users();
  p.D = D;
  p.N = N;
  p.t1 = t1;
  p.t2 = t2;
  if (t1 > p.khat || t2 > p.khat)
    throw std::invalid_argument("secure_delivery: t1, t2 must be in {0..Khat}");
  const Rational denom = Rational(D) + Rational(p.khat) - Rational(t1);
  if (Rational(t1) / Rational(p.khat) > N / denom)
    throw std::invalid_argument("secure_delivery: requires t1/Khat <= N/(D+Khat-t1)");
  p.f1_frac = N / denom;
  p.f2_frac = Rational(1, p.r) - p.f1_frac;
  if (p.f2_frac < Rational(0))
    throw std::invalid_argument("secure_delivery: N too large, part2 would be negative");
  p.seg2_frac = p.f2_frac / Rational(std::int64_t(binomial(p.khat, t2)));
  p.unicast_key_frac =
      p.f1_frac * Rational(std::int64_t(p.khat) - std::int64_t(t1)) / Rational(p.khat);
  // M from exact bit accounting of the cache contents
  p.M = Rational(1) + Rational(t2) * Rational(std::int64_t(D) - 1) / Rational(p.khat) +
        Rational(std::int64_t(t1) - std::int64_t(t2)) * Rational(p.r) *
            Rational(std::int64_t(D) - 1) * N / (Rational(p.khat) * denom);
  detail::finish(p, sym_bits);
  return p;
}

inline SchemeParams params_secure_caching(const Topology& topo, unsigned D, Rational N,
                                          unsigned t, std::uint64_t sym_bits = 8) {
  detail::check_common(topo, D, N);
  SchemeParams p;
  p.kind = SchemeKind::SecureCaching;
  p.h = topo.h();
  p.r = topo.r();
  p.khat = topo.users_per_relay();
  p.K = topo.num_users();
  p.D = D;
  p.N = N;
  p.t2 = t;
  if (t >= p.khat)
    throw std::invalid_argument("secure_caching: t must be in {0..Khat-1}");
  if (N > Rational(D, p.r))
    throw std::invalid_argument("secure_caching: requires N <= D/r");
  p.f1_frac = N / Rational(D);
  p.f2_frac = Rational(1, p.r) - p.f1_frac;
  p.ramp_n = unsigned(binomial(p.khat, t));
  p.ramp_m = t == 0 ? 0u : unsigned(binomial(p.khat - 1, t - 1));
  p.seg2_frac = p.f2_frac / Rational(std::int64_t(p.ramp_n - p.ramp_m));
  p.M = Rational(t) * Rational(D) / Rational(std::int64_t(p.khat) - std::int64_t(t)) *
        (Rational(1) - N * Rational(p.r) / Rational(D));
  detail::finish(p, sym_bits);
  return p;
}

inline SchemeParams params_secure_both(const Topology& topo, unsigned D, Rational N,
                                       unsigned t, std::uint64_t sym_bits = 8) {
  detail::check_common(topo, D, N);
  SchemeParams p;
  p.kind = SchemeKind::SecureBoth;
  p.h = topo.h();
  p.r = topo.r();
  p.khat = topo.users_per_relay();
  p.K = topo.num_users();
  p.D = D;
  p.N = N;
  p.t2 = t;
  if (t >= p.khat)
    throw std::invalid_argument("secure_both: t must be in {0..Khat-1}");
  const Rational denom = Rational(D) + Rational(p.khat);
  if (N > denom / Rational(p.r))
    throw std::invalid_argument("secure_both: requires N <= (D+Khat)/r");
  p.f1_frac = N / denom;
  p.f2_frac = Rational(1, p.r) - p.f1_frac;
  p.ramp_n = unsigned(binomial(p.khat, t));
  p.ramp_m = t == 0 ? 0u : unsigned(binomial(p.khat - 1, t - 1));
  p.seg2_frac = p.f2_frac / Rational(std::int64_t(p.ramp_n - p.ramp_m));
  p.unicast_key_frac = p.f1_frac;
  p.M = Rational(1) + Rational(t) * Rational(D) /
                          Rational(std::int64_t(p.khat) - std::int64_t(t)) *
                          (Rational(1) - Rational(p.r) * N / denom);
  detail::finish(p, sym_bits);
  return p;
}

}  // namespace ccnet
