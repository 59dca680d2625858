#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccnet/bitbuffer.hpp"
#include "ccnet/gf.hpp"

namespace ccnet {

struct EncodedSymbol {
  unsigned file_index = 0;   // n, 1-based
  unsigned symbol_index = 0; // i in {1..h}
  BitBuffer data;            // F/r bits
};

namespace detail {

/// Systematic (h,r) generator over GF(2^8): rows 0..r-1 are the identity and
/// the parity rows come from a Vandermonde matrix right-multiplied by the
/// inverse of its top r x r block, so any r rows stay invertible.
inline GFMatrix mds_generator_gf256(unsigned h, unsigned r) {
  if (h > 255) throw std::invalid_argument("mds: h > 255 unsupported over GF(2^8)");
  GFMatrix v(h, r);
  for (unsigned i = 0; i < h; ++i) {
    std::uint8_t x = std::uint8_t(i + 1), p = 1;
    for (unsigned j = 0; j < r; ++j) {
      v.at(i, j) = p;
      p = GF256::mul(p, x);
    }
  }
  GFMatrix top(r, r);
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < r; ++j) top.at(i, j) = v.at(i, j);
  return v.mul(top.inverse());
}

/// Over GF(2) only the trivial MDS codes exist: repetition (r=1), identity
/// (r=h) and single parity (r=h-1). The security oracles never need more.
inline GFMatrix mds_generator_gf2(unsigned h, unsigned r) {
  GFMatrix g(h, r);
  if (r == 1) {
    for (unsigned i = 0; i < h; ++i) g.at(i, 0) = 1;
  } else if (r == h) {
    for (unsigned i = 0; i < h; ++i) g.at(i, i) = 1;
  } else if (r + 1 == h) {
    for (unsigned i = 0; i < r; ++i) g.at(i, i) = 1;
    for (unsigned j = 0; j < r; ++j) g.at(h - 1, j) = 1;
  } else {
    throw std::invalid_argument("mds: no (h,r) binary MDS code for these parameters");
  }
  return g;
}

inline GFMatrix mds_generator(unsigned h, unsigned r, Field field) {
  return field == Field::GF2 ? mds_generator_gf2(h, r) : mds_generator_gf256(h, r);
}

/// Applies one generator row to the r subfile streams, symbol-wise.
inline BitBuffer apply_row(const GFMatrix& g, unsigned row,
                           const std::vector<BitBuffer>& subfiles, Field field) {
  const std::size_t sym = symbol_bits(field);
  const std::size_t len = subfiles[0].size_bits();
  BitBuffer out(len);
  if (field == Field::GF2) {
    for (unsigned j = 0; j < g.cols(); ++j)
      if (g.at(row, j)) out.xor_with(subfiles[j]);
  } else {
    const std::size_t nsym = len / sym;
    for (std::size_t s = 0; s < nsym; ++s) {
      std::uint8_t acc = 0;
      for (unsigned j = 0; j < g.cols(); ++j)
        acc ^= GF256::mul(g.at(row, j), subfiles[j].get_byte(s));
      out.set_byte(s, acc);
    }
  }
  return out;
}

}  // namespace detail

/// Splits `file` into r subfiles and produces h encoded symbols of F/r bits;
/// symbols 1..r are the systematic copies of the subfiles.
inline std::vector<EncodedSymbol> mds_encode(const BitBuffer& file, unsigned h,
                                             unsigned r, Field field = Field::GF256,
                                             unsigned file_index = 0) {
  const std::size_t sym = symbol_bits(field);
  if (file.size_bits() % (std::size_t(r) * sym) != 0)
    throw std::invalid_argument("mds_encode: file size must be a whole number of "
                                "field symbols per subfile");
  const std::size_t part = file.size_bits() / r;
  std::vector<BitBuffer> subfiles;
  subfiles.reserve(r);
  for (unsigned j = 0; j < r; ++j) subfiles.push_back(file.slice(j * part, part));

  const GFMatrix g = detail::mds_generator(h, r, field);
  std::vector<EncodedSymbol> out;
  out.reserve(h);
  for (unsigned i = 0; i < h; ++i)
    out.push_back({file_index, i + 1, detail::apply_row(g, i, subfiles, field)});
  return out;
}

/// Reconstructs the file from any >= r symbols with distinct indexes.
inline BitBuffer mds_decode(const std::vector<EncodedSymbol>& symbols, unsigned h,
                            unsigned r, Field field = Field::GF256) {
  if (symbols.size() < r)
    throw std::invalid_argument("mds_decode: fewer than r symbols");
  std::vector<std::size_t> rows;
  std::vector<const BitBuffer*> data;
  for (const auto& s : symbols) {
    if (s.symbol_index < 1 || s.symbol_index > h)
      throw std::invalid_argument("mds_decode: symbol index out of range");
    if (std::find(rows.begin(), rows.end(), s.symbol_index - 1) != rows.end())
      throw std::invalid_argument("mds_decode: duplicate symbol index");
    if (s.data.size_bits() != symbols[0].data.size_bits())
      throw std::invalid_argument("mds_decode: inconsistent symbol lengths");
    rows.push_back(s.symbol_index - 1);
    data.push_back(&s.data);
    if (rows.size() == r) break;
  }

  const GFMatrix g = detail::mds_generator(h, r, field);
  const GFMatrix dec = g.submatrix_rows(rows).inverse();

  std::vector<BitBuffer> received;
  received.reserve(r);
  for (const BitBuffer* b : data) received.push_back(*b);

  BitBuffer out;
  for (unsigned j = 0; j < r; ++j)
    out.append(detail::apply_row(dec, j, received, field));
  return out;
}

}  // namespace ccnet
