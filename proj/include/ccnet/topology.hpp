#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "ccnet/subsets.hpp"

namespace ccnet {

/// Combination network C(h,r): a server feeds h relays; each of the
/// K = C(h,r) end users connects to a distinct r-subset of relays. User ids
/// are assigned in lexicographic order of their relay subsets, so user 1 on
/// the h=5, r=2 network owns relays {1,2}, user 5 owns {2,3}, and so on.
/// All ids are 1-based. Immutable after construction.
class Topology {
 public:
  Topology(unsigned h, unsigned r) : h_(h), r_(r) {
    if (r < 1 || r >= h)
      throw std::invalid_argument("Topology: need 1 <= r < h");
    khat_ = unsigned(binomial(h - 1, r - 1));
    const auto subsets = k_subsets(h, r);
    k_ = unsigned(subsets.size());
    user_relays_.resize(k_);
    relay_users_.assign(h_, {});
    for (unsigned user = 1; user <= k_; ++user) {
      user_relays_[user - 1] = subset_elements(subsets[user - 1]);
      for (unsigned relay : user_relays_[user - 1])
        relay_users_[relay - 1].push_back(user);
    }
    // users attach in ascending id order already; ranks follow directly
    for (unsigned relay = 1; relay <= h_; ++relay) {
      const auto& users = relay_users_[relay - 1];
      for (unsigned rank = 1; rank <= users.size(); ++rank)
        index_table_[{relay, users[rank - 1]}] = rank;
    }
  }

  unsigned h() const { return h_; }
  unsigned r() const { return r_; }
  unsigned num_users() const { return k_; }
  unsigned users_per_relay() const { return khat_; }

  /// N(U_k): the ordered r-subset of relays serving user k.
  const std::vector<unsigned>& relays_of(unsigned user) const {
    check_user(user);
    return user_relays_[user - 1];
  }

  /// N(Gamma_j): ascending user ids attached to relay j.
  const std::vector<unsigned>& users_of(unsigned relay) const {
    check_relay(relay);
    return relay_users_[relay - 1];
  }

  /// Rank of user k among the users of relay j, in {1..Khat}.
  unsigned index_of(unsigned relay, unsigned user) const {
    check_relay(relay);
    check_user(user);
    auto it = index_table_.find({relay, user});
    if (it == index_table_.end())
      throw std::invalid_argument("Topology::index_of: user " + std::to_string(user) +
                                  " is not attached to relay " + std::to_string(relay));
    return it->second;
  }

  bool adjacent(unsigned relay, unsigned user) const {
    return index_table_.count({relay, user}) != 0;
  }

  /// Inverse of index_of for a fixed relay.
  unsigned user_at_rank(unsigned relay, unsigned rank) const {
    check_relay(relay);
    if (rank < 1 || rank > khat_)
      throw std::invalid_argument("Topology::user_at_rank: rank out of range");
    return relay_users_[relay - 1][rank - 1];
  }

 private:
  void check_relay(unsigned relay) const {
    if (relay < 1 || relay > h_)
      throw std::invalid_argument("Topology: relay id out of range");
  }
  void check_user(unsigned user) const {
    if (user < 1 || user > k_)
      throw std::invalid_argument("Topology: user id out of range");
  }

  unsigned h_, r_, k_ = 0, khat_ = 0;
  std::vector<std::vector<unsigned>> user_relays_;
  std::vector<std::vector<unsigned>> relay_users_;
  std::map<std::pair<unsigned, unsigned>, unsigned> index_table_;
};

}  // namespace ccnet
