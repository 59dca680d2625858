#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccnet/bitbuffer.hpp"
#include "ccnet/gf.hpp"
#include "ccnet/rng.hpp"
#include "ccnet/subsets.hpp"

namespace ccnet {

struct Share {
  unsigned file_index = 0;
  unsigned symbol_index = 0;
  SubsetMask label = 0;  // t-subset of {1..Khat} when produced by a scheme
  BitBuffer data;        // |secret| / (n - m) bits
};

namespace detail {

/// Mixing matrix for the (m,n) ramp scheme: shares = A * (randomness | secret).
/// The left n x m block must have every m x m submatrix invertible so that any
/// m shares are statistically independent of the secret; over GF(2^8) a full
/// n x n Cauchy matrix provides this. Over GF(2) only m in {0, 1, n-1} admit
/// such a block (binary MDS limits); those are the shapes the schemes use at
/// oracle scale.
inline GFMatrix ramp_matrix(unsigned m, unsigned n, Field field) {
  if (m >= n) throw std::invalid_argument("ramp: need m < n");
  if (field == Field::GF256) return cauchy_matrix(n, n);
  GFMatrix a(n, n);
  if (m == 0) {
    return GFMatrix::identity(n);
  } else if (m == 1) {
    // s_1 = k, s_i = k + w_{i-1}
    for (unsigned i = 0; i < n; ++i) a.at(i, 0) = 1;
    for (unsigned i = 1; i < n; ++i) a.at(i, i) = 1;
  } else if (m + 1 == n) {
    // s_i = k_i for i < n, s_n = k_1 + .. + k_m + w
    for (unsigned i = 0; i < m; ++i) a.at(i, i) = 1;
    for (unsigned j = 0; j < m; ++j) a.at(n - 1, j) = 1;
    a.at(n - 1, n - 1) = 1;
  } else {
    throw std::invalid_argument("ramp: no (m,n) binary scheme with these parameters");
  }
  return a;
}

inline std::vector<BitBuffer> apply_matrix(const GFMatrix& a,
                                           const std::vector<BitBuffer>& in,
                                           Field field) {
  std::vector<BitBuffer> out;
  out.reserve(a.rows());
  const std::size_t len = in.at(0).size_bits();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    BitBuffer acc(len);
    if (field == Field::GF2) {
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a.at(i, j)) acc.xor_with(in[j]);
    } else {
      for (std::size_t s = 0; s < len / 8; ++s) {
        std::uint8_t v = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
          v ^= GF256::mul(a.at(i, j), in[j].get_byte(s));
        acc.set_byte(s, v);
      }
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace detail

/// (m,n) non-perfect secret sharing: n shares of |secret|/(n-m) bits; any m
/// shares reveal nothing, all n reconstruct. Randomness (m blocks of share
/// size) comes from `entropy`.
inline std::vector<Share> ramp_share(const BitBuffer& secret, unsigned m, unsigned n,
                                     EntropySource& entropy, Field field = Field::GF256) {
  if (m >= n) throw std::invalid_argument("ramp_share: need m < n");
  const std::size_t sym = symbol_bits(field);
  if (secret.size_bits() % (std::size_t(n - m) * sym) != 0)
    throw std::invalid_argument("ramp_share: secret must split into n-m whole-symbol blocks");
  const std::size_t share_bits = secret.size_bits() / (n - m);

  std::vector<BitBuffer> input;
  input.reserve(n);
  for (unsigned j = 0; j < m; ++j) input.push_back(entropy.draw(share_bits));
  for (unsigned j = 0; j < n - m; ++j)
    input.push_back(secret.slice(std::size_t(j) * share_bits, share_bits));

  const GFMatrix a = detail::ramp_matrix(m, n, field);
  auto mixed = detail::apply_matrix(a, input, field);
  std::vector<Share> out(n);
  for (unsigned i = 0; i < n; ++i) {
    out[i].symbol_index = i + 1;
    out[i].data = std::move(mixed[i]);
  }
  return out;
}

/// Requires all n shares (this scheme guarantees nothing from fewer).
inline BitBuffer ramp_reconstruct(const std::vector<Share>& shares, unsigned m,
                                  unsigned n, Field field = Field::GF256) {
  if (shares.size() != n)
    throw std::invalid_argument("ramp_reconstruct: all n shares are required");
  const std::size_t share_bits = shares[0].data.size_bits();
  std::vector<BitBuffer> s;
  s.reserve(n);
  for (const auto& sh : shares) {
    if (sh.data.size_bits() != share_bits)
      throw std::invalid_argument("ramp_reconstruct: inconsistent share sizes");
    s.push_back(sh.data);
  }
  const GFMatrix inv = detail::ramp_matrix(m, n, field).inverse();
  auto input = detail::apply_matrix(inv, s, field);
  BitBuffer secret;
  for (unsigned j = m; j < n; ++j) secret.append(input[j]);
  return secret;
}

}  // namespace ccnet
