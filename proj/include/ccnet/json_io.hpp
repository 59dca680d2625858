#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "ccnet/scheme.hpp"
#include "ccnet/topology.hpp"

namespace ccnet {

inline nlohmann::json to_json(const Topology& t) {
  nlohmann::json j;
  j["h"] = t.h();
  j["r"] = t.r();
  j["K"] = t.num_users();
  j["Khat"] = t.users_per_relay();
  for (unsigned user = 1; user <= t.num_users(); ++user)
    j["user_relays"].push_back(t.relays_of(user));
  for (unsigned relay = 1; relay <= t.h(); ++relay)
    j["relay_users"].push_back(t.users_of(relay));
  return j;
}

inline std::string subset_label(SubsetMask m) {
  std::string s;
  for (unsigned e : subset_elements(m)) s += std::to_string(e);
  return s.empty() ? "0" : s;
}

/// JSON-lines dump of a placement: one record per labeled segment
/// (and per key when include_keys is set). Schema:
///   {"rec":"relay_segment","j":...,"n":...,"bits":...,"hex":...}
///   {"rec":"segment2","j":...,"n":...,"T":"134","bits":...,"hex":...}
///   {"rec":"key","id":...,"bits":...,"hex":...}
inline void dump_placement_jsonl(const Placement& p, std::ostream& os,
                                 bool include_keys = false) {
  const SchemeParams& sp = p.params();
  for (unsigned j = 1; j <= sp.h; ++j) {
    for (unsigned n = 1; n <= sp.D; ++n) {
      nlohmann::json rec;
      rec["rec"] = "relay_segment";
      rec["j"] = j;
      rec["n"] = n;
      rec["bits"] = p.relay_segment(j, n).size_bits();
      rec["hex"] = p.relay_segment(j, n).to_hex();
      os << rec.dump() << '\n';
      for (std::size_t ti = 0; ti < sp.piece_sets.count(); ++ti) {
        const SubsetMask T = sp.piece_sets.mask_at(ti);
        nlohmann::json r2;
        r2["rec"] = sp.uses_shares() ? "share" : "segment2";
        r2["j"] = j;
        r2["n"] = n;
        r2["T"] = subset_label(T);
        r2["bits"] = p.segment2(j, n, T).size_bits();
        r2["hex"] = p.segment2(j, n, T).to_hex();
        os << r2.dump() << '\n';
      }
    }
  }
  if (include_keys && sp.uses_keys()) {
    for (const auto& [id, data] : p.registry().all_keys()) {
      nlohmann::json rec;
      rec["rec"] = "key";
      rec["id"] = id;
      rec["bits"] = data.size_bits();
      rec["hex"] = data.to_hex();
      os << rec.dump() << '\n';
    }
  }
}

/// JSON-lines dump of a delivery transcript: sub-signals then per-link
/// messages, key ids always redacted to presence flags unless requested.
inline void dump_transcript_jsonl(const Transcript& tr, std::ostream& os,
                                  bool include_key_ids = false) {
  for (unsigned j = 1; j <= tr.server_signals.size(); ++j) {
    for (const SubSignal& sig : tr.server_signals[j - 1]) {
      nlohmann::json rec;
      rec["rec"] = "server_signal";
      rec["j"] = j;
      rec["S"] = subset_label(sig.S);
      rec["bits"] = sig.data.size_bits();
      rec["hex"] = sig.data.to_hex();
      rec["padded"] = sig.key_id.has_value();
      if (include_key_ids && sig.key_id) rec["key_id"] = *sig.key_id;
      os << rec.dump() << '\n';
    }
  }
  for (const auto& [jk, msg] : tr.relay_messages) {
    nlohmann::json rec;
    rec["rec"] = "relay_message";
    rec["j"] = jk.first;
    rec["user"] = jk.second;
    rec["f1_bits"] = msg.f1_payload.size_bits();
    rec["f1_hex"] = msg.f1_payload.to_hex();
    rec["f1_blocks"] = msg.f1_blocks;
    rec["padded"] = msg.f1_key_id.has_value();
    if (include_key_ids && msg.f1_key_id) rec["key_id"] = *msg.f1_key_id;
    nlohmann::json fwd = nlohmann::json::array();
    for (SubsetMask S : msg.forwarded) fwd.push_back(subset_label(S));
    rec["forwarded"] = fwd;
    rec["bits"] = msg.bits;
    os << rec.dump() << '\n';
  }
}

}  // namespace ccnet
