#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ccnet/params.hpp"
#include "ccnet/rational.hpp"
#include "ccnet/subsets.hpp"

namespace ccnet {

/// Achievable (or bounding) rate pair at one memory point, exact rationals
/// normalized by the file size.
struct RatePoint {
  SchemeKind kind = SchemeKind::Baseline;
  Rational M, N;
  Rational R1, R2;
  unsigned t1 = 0, t2 = 0;  // grid parameters (t2 doubles as t)
};

/// Achievable rates of the relay-cache scheme on its (t1,t2) grid.
inline RatePoint rate_upper_baseline(unsigned D, unsigned khat, unsigned r,
                                     Rational N, unsigned t1, unsigned t2) {
  if (t2 > khat) throw std::invalid_argument("rate_upper_baseline: t2 out of grid");
  if (N < Rational(0) || N > Rational(D, r))
    throw std::invalid_argument("rate_upper_baseline: need 0 <= N <= D/r");
  const std::int64_t t1_cap =
      std::min<std::int64_t>(khat, (N * Rational(khat) / Rational(D)).floor());
  if (std::int64_t(t1) > t1_cap)
    throw std::invalid_argument("rate_upper_baseline: t1 out of grid");
  RatePoint p;
  p.kind = SchemeKind::Baseline;
  p.N = N;
  p.t1 = t1;
  p.t2 = t2;
  p.M = Rational(std::int64_t(t1) - std::int64_t(t2)) * N * Rational(r) / Rational(khat) +
        Rational(t2) * Rational(D) / Rational(khat);
  p.R1 = Rational(std::int64_t(khat) - std::int64_t(t2)) /
         (Rational(r) * Rational(std::int64_t(t2) + 1)) *
         (Rational(1) - N * Rational(r) / Rational(D));
  p.R2 = Rational(1, r) * (Rational(1) - p.M / Rational(D));
  return p;
}

inline RatePoint rate_upper_secure_delivery(unsigned D, unsigned khat, unsigned r,
                                            Rational N, unsigned t1, unsigned t2) {
  if (t1 > khat || t2 > khat)
    throw std::invalid_argument("rate_upper_secure_delivery: t out of grid");
  const Rational denom = Rational(D) + Rational(khat) - Rational(t1);
  if (Rational(t1) / Rational(khat) > N / denom)
    throw std::invalid_argument("rate_upper_secure_delivery: t1/Khat <= N/(D+Khat-t1) violated");
  RatePoint p;
  p.kind = SchemeKind::SecureDelivery;
  p.N = N;
  p.t1 = t1;
  p.t2 = t2;
  p.M = Rational(1) + Rational(t2) * Rational(std::int64_t(D) - 1) / Rational(khat) +
        Rational(std::int64_t(t1) - std::int64_t(t2)) * Rational(r) *
            Rational(std::int64_t(D) - 1) * N / (Rational(khat) * denom);
  p.R1 = Rational(std::int64_t(khat) - std::int64_t(t2)) /
         (Rational(r) * Rational(std::int64_t(t2) + 1)) *
         (Rational(1) - N * Rational(r) / denom);
  p.R2 = Rational(1, r) *
         (Rational(1) - (p.M - Rational(1)) / Rational(std::int64_t(D) - 1));
  return p;
}

inline RatePoint rate_point_secure_caching(unsigned D, unsigned khat, unsigned r,
                                           Rational N, unsigned t) {
  if (t >= khat) throw std::invalid_argument("rate_point_secure_caching: t out of grid");
  if (N < Rational(0) || N > Rational(D, r))
    throw std::invalid_argument("rate_point_secure_caching: need 0 <= N <= D/r");
  RatePoint p;
  p.kind = SchemeKind::SecureCaching;
  p.N = N;
  p.t2 = t;
  const Rational load = Rational(1) - N * Rational(r) / Rational(D);
  p.M = Rational(t) * Rational(D) / Rational(std::int64_t(khat) - std::int64_t(t)) * load;
  p.R1 = Rational(khat) / (Rational(r) * Rational(std::int64_t(t) + 1)) * load;
  p.R2 = Rational(1, r);
  return p;
}

/// Secure-caching rates expressed in M; M must sit on the
/// t-grid M = tD/(Khat-t) (1 - Nr/D).
inline RatePoint rate_upper_secure_caching(unsigned D, unsigned khat, unsigned r,
                                           Rational N, Rational M) {
  const Rational load = Rational(1) - N * Rational(r) / Rational(D);
  // t = Khat*M / (D + M - Nr)
  const Rational tq = Rational(khat) * M / (Rational(D) + M - N * Rational(r));
  if (!tq.is_integer() || tq.num() < 0 || tq.num() >= khat)
    throw std::invalid_argument("rate_upper_secure_caching: M is off-grid; use the envelope");
  RatePoint p = rate_point_secure_caching(D, khat, r, N, unsigned(tq.num()));
  // equivalent closed form in M
  const Rational direct = Rational(khat) * (Rational(D) + M - Rational(r) * N) /
                          (Rational(r) * (Rational(std::int64_t(khat) + 1) * M +
                                          Rational(D) - Rational(r) * N)) *
                          load;
  if (direct != p.R1)
    throw std::logic_error("rate_upper_secure_caching: closed forms disagree");
  return p;
}

inline RatePoint rate_point_secure_both(unsigned D, unsigned khat, unsigned r,
                                        Rational N, unsigned t) {
  if (t >= khat) throw std::invalid_argument("rate_point_secure_both: t out of grid");
  const Rational denom = Rational(D) + Rational(khat);
  if (N < Rational(0) || N > denom / Rational(r))
    throw std::invalid_argument("rate_point_secure_both: need 0 <= N <= (D+Khat)/r");
  RatePoint p;
  p.kind = SchemeKind::SecureBoth;
  p.N = N;
  p.t2 = t;
  const Rational load = Rational(1) - N * Rational(r) / denom;
  p.M = Rational(1) +
        Rational(t) * Rational(D) / Rational(std::int64_t(khat) - std::int64_t(t)) * load;
  p.R1 = Rational(khat) / (Rational(r) * Rational(std::int64_t(t) + 1)) * load;
  p.R2 = Rational(1, r);
  return p;
}

inline RatePoint rate_upper_secure_both(unsigned D, unsigned khat, unsigned r,
                                        Rational N, Rational M) {
  const Rational dk = Rational(D) + Rational(khat);
  // Inverting the grid M = 1 + tD/(Khat-t)(1 - rN/(D+Khat)) gives
  // t = Khat (M-1)(D+Khat) / ((D+Khat)(M+D-1) - rND).
  const Rational rnd = Rational(r) * N * Rational(D);
  const Rational tq = Rational(khat) * (M - Rational(1)) * dk /
                      (dk * (M + Rational(D) - Rational(1)) - rnd);
  if (!tq.is_integer() || tq.num() < 0 || tq.num() >= khat)
    throw std::invalid_argument("rate_upper_secure_both: M is off-grid; use the envelope");
  RatePoint p = rate_point_secure_both(D, khat, r, N, unsigned(tq.num()));
  const Rational direct =
      Rational(khat) * (dk * (M + Rational(D) - Rational(1)) - rnd) /
      (Rational(r) *
       (dk * (Rational(D) + (M - Rational(1)) * Rational(std::int64_t(khat) + 1)) - rnd)) *
      (Rational(1) - N * Rational(r) / dk);
  if (direct != p.R1)
    throw std::logic_error("rate_upper_secure_both: closed forms disagree");
  return p;
}

/// Genie-aided cut-set lower bound on the per-relay server load. Maximizes
/// over cuts of l relays with s exclusively-served users, and over the
/// smallest-relay-set branch for x users; clamped at zero.
inline Rational rate_lower_R1(unsigned h, unsigned r, unsigned D, unsigned K,
                              Rational M, Rational N) {
  Rational best(0);
  for (unsigned l = r; l <= h; ++l) {
    const std::uint64_t reach = binomial(l, r);
    const std::uint64_t s_max = std::min<std::uint64_t>(D, reach);
    for (std::uint64_t s = 1; s <= s_max; ++s) {
      const std::int64_t inst = std::int64_t(D / s);  // request instances
      const Rational v = (Rational(std::int64_t(s)) -
                          (Rational(std::int64_t(s)) * M + Rational(l) * N) / Rational(inst)) /
                         Rational(l);
      best = std::max(best, v);
    }
  }
  for (unsigned x = 1; x <= std::min(D, K); ++x) {
    const unsigned u = std::min(x + r - 1, h);
    const std::int64_t inst = std::int64_t(D / x);
    const Rational v =
        (Rational(x) - (Rational(x) * M + Rational(u) * N) / Rational(inst)) / Rational(u);
    best = std::max(best, v);
  }
  return best;
}

inline Rational rate_lower_R2(unsigned r, unsigned D, Rational M) {
  const Rational v = Rational(1, r) * (Rational(1) - M / Rational(D));
  return std::max(v, Rational(0));
}

/// Lower convex envelope over a set of (M, R) grid points, evaluated per rate
/// component; memory sharing makes every point on it achievable.
class Envelope {
 public:
  explicit Envelope(std::vector<RatePoint> points) : pts_(std::move(points)) {
    if (pts_.empty()) throw std::invalid_argument("Envelope: no points");
    std::sort(pts_.begin(), pts_.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.M < b.M; });
    hull1_ = lower_hull([](const RatePoint& p) { return p.R1; });
    hull2_ = lower_hull([](const RatePoint& p) { return p.R2; });
  }

  Rational M_min() const { return pts_.front().M; }
  Rational M_max() const { return pts_.back().M; }

  Rational R1(const Rational& M) const { return eval(hull1_, M); }
  Rational R2(const Rational& M) const { return eval(hull2_, M); }

  const std::vector<RatePoint>& points() const { return pts_; }

 private:
  using XY = std::pair<Rational, Rational>;

  template <typename Get>
  std::vector<XY> lower_hull(Get get) const {
    std::vector<XY> hull;
    for (const RatePoint& p : pts_) {
      XY cur{p.M, get(p)};
      if (!hull.empty() && hull.back().first == cur.first) {
        if (cur.second < hull.back().second) hull.back() = cur;
        continue;
      }
      while (hull.size() >= 2 && !right_turn(hull[hull.size() - 2], hull.back(), cur))
        hull.pop_back();
      hull.push_back(cur);
    }
    return hull;
  }

  // keep the middle point only if it lies strictly below the chord
  static bool right_turn(const XY& a, const XY& b, const XY& c) {
    const Rational lhs = (b.second - a.second) * (c.first - a.first);
    const Rational rhs = (c.second - a.second) * (b.first - a.first);
    return lhs < rhs;
  }

  static Rational eval(const std::vector<XY>& hull, const Rational& M) {
    if (M < hull.front().first || M > hull.back().first)
      throw std::out_of_range("Envelope: M outside hull range");
    for (std::size_t i = 1; i < hull.size(); ++i) {
      if (M <= hull[i].first) {
        const XY& a = hull[i - 1];
        const XY& b = hull[i];
        if (a.first == b.first) return std::min(a.second, b.second);
        return a.second + (b.second - a.second) * (M - a.first) / (b.first - a.first);
      }
    }
    return hull.back().second;
  }

  std::vector<RatePoint> pts_;
  std::vector<XY> hull1_, hull2_;
};

}  // namespace ccnet
