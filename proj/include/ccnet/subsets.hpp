#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ccnet {

inline std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;  // exact: divisor always divides
  }
  return result;
}

/// Subsets are bitmasks over {1..n} with element e at bit (e-1).
using SubsetMask = std::uint32_t;

inline unsigned popcount(SubsetMask m) { return unsigned(__builtin_popcount(m)); }

inline std::vector<unsigned> subset_elements(SubsetMask m) {
  std::vector<unsigned> out;
  for (unsigned e = 1; m != 0; ++e, m >>= 1)
    if (m & 1u) out.push_back(e);
  return out;
}

inline SubsetMask mask_of(const std::vector<unsigned>& elems) {
  SubsetMask m = 0;
  for (unsigned e : elems) m |= SubsetMask(1u) << (e - 1);
  return m;
}

/// All k-subsets of {1..n} in lexicographic order of their sorted element
/// lists; this fixes piece/share labels and their storage order.
inline std::vector<SubsetMask> k_subsets(unsigned n, unsigned k) {
  if (n > 31) throw std::invalid_argument("k_subsets: n too large for masks");
  std::vector<SubsetMask> out;
  if (k > n) return out;
  std::vector<unsigned> idx(k);
  for (unsigned i = 0; i < k; ++i) idx[i] = i + 1;
  while (true) {
    out.push_back(mask_of(idx));
    // next lexicographic combination
    int i = int(k) - 1;
    while (i >= 0 && idx[std::size_t(i)] == n - k + unsigned(i) + 1) --i;
    if (i < 0) break;
    ++idx[std::size_t(i)];
    for (std::size_t j = std::size_t(i) + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Rank of a k-subset in the k_subsets(n,k) order.
class SubsetIndexer {
 public:
  SubsetIndexer() = default;
  SubsetIndexer(unsigned n, unsigned k) : masks_(k_subsets(n, k)) {
    for (std::size_t i = 0; i < masks_.size(); ++i) rank_[masks_[i]] = i;
  }

  std::size_t count() const { return masks_.size(); }
  SubsetMask mask_at(std::size_t i) const { return masks_.at(i); }

  std::size_t rank_of(SubsetMask m) const {
    auto it = rank_.find(m);
    if (it == rank_.end()) throw std::invalid_argument("SubsetIndexer: unknown mask");
    return it->second;
  }

  const std::vector<SubsetMask>& masks() const { return masks_; }

 private:
  std::vector<SubsetMask> masks_;
  std::unordered_map<SubsetMask, std::size_t> rank_;
};

}  // namespace ccnet
