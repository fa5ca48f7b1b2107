#pragma once

// Pairwise key establishment along the data-gathering tree.
//
// New pair (no shared key):
//   A -> BS   DANotification   E[K(BS,A); ID_A || N_A || count || child ids]
//   BS -> A   SeedSecretKey    len||E[K(BS,A); BS || N_A+1 || RN(A) || RN(c)...]
//                              || len||E[K(BS,c); BS || ID_A || RN(A) || RN(c)] ...
//   A -> c    SeedSecretKey    the child's component, forwarded unchanged
//   c -> A    NewPairwiseKey   E[RN(A)*RN(c); K_new || N_c]
//   A -> c    NewPairwiseKeyAck E[K_new; N_c+1]
//
// Existing pair:
//   A -> c    RefreshRequest   E[K_cur; N_a]
//   c -> A    RefreshResponse  E[K_cur; N_a+1 || K_new || N_b]
//   A -> c    RefreshAck       E[K_new; N_b+1]
//
// All integers are big-endian. Node ids 2 bytes, nonces and RNs 8 bytes, keys
// 16 bytes, Seed components framed by a 2-byte length prefix.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "sda/cipher.hpp"
#include "sda/topology.hpp"
#include "sda/types.hpp"

namespace sda {

/// Wire id of the base station; also the "BS" tag inside Seed components.
inline constexpr NodeId kBaseStationId = 0xFFFF;
inline constexpr NodeId kMaxWireNodeId = 0xFFFE;

enum class MessageKind : std::uint8_t {
  kDANotification = 1,
  kSeedSecretKey = 2,
  kNewPairwiseKey = 3,
  kNewPairwiseKeyAck = 4,
  kRefreshRequest = 5,
  kRefreshResponse = 6,
  kRefreshAck = 7,
};

std::string_view to_string(MessageKind kind);

struct ProtocolMessage {
  MessageKind kind = MessageKind::kDANotification;
  NodeId sender = 0;
  NodeId receiver = 0;
  Bytes payload;

  /// kind(1) || sender(2) || receiver(2) || payload
  [[nodiscard]] Bytes encode() const;
  static std::optional<ProtocolMessage> decode(std::span<const std::uint8_t> wire);

  friend bool operator==(const ProtocolMessage&, const ProtocolMessage&) = default;
};

/// Plain DA-Notification layout before encryption.
Bytes da_notification_plaintext(NodeId aggregator, std::uint64_t nonce,
                                std::span<const NodeId> children);

/// Big-endian 16-byte encoding of the full 128-bit product RN(A) * RN(c).
Key128 temp_key(std::uint64_t rn_aggregator, std::uint64_t rn_child);

using KeyCache = std::map<NodeId, Key128>;

/// Trusted key authority. Holds K(BS, n) for every node n.
class BaseStation {
 public:
  BaseStation(std::vector<Key128> node_keys, const CipherSuite& cipher = default_cipher());

  /// Answers a DA-Notification with a Seed-Secret-Key message. Malformed or
  /// undecryptable notifications are dropped and counted.
  std::optional<ProtocolMessage> handle_notification(const ProtocolMessage& msg, Rng& rng);

  [[nodiscard]] std::size_t errors() const { return errors_; }
  [[nodiscard]] const Key128& key_for(NodeId node) const { return node_keys_.at(node); }

 private:
  std::vector<Key128> node_keys_;
  const CipherSuite* cipher_;
  std::size_t errors_ = 0;
};

/// One sensor node's protocol endpoint. A node may act as aggregator towards
/// its children and as child towards its parent at the same time. Every
/// handler leaves the node's state untouched when it rejects a message.
class KeyAgent {
 public:
  KeyAgent(NodeId id, Key128 bs_key, const CipherSuite& cipher = default_cipher());

  [[nodiscard]] NodeId id() const { return id_; }
  [[nodiscard]] const KeyCache& cache() const { return cache_; }
  [[nodiscard]] bool shares_key_with(NodeId peer) const { return cache_.contains(peer); }
  [[nodiscard]] std::size_t rejected() const { return rejected_; }

  // Aggregator role.
  /// std::nullopt when `children` is empty (nothing to request).
  std::optional<ProtocolMessage> begin_establishment(std::span<const NodeId> children, Rng& rng);
  /// Validates our component (N_A + 1) and returns the child components to forward.
  std::vector<ProtocolMessage> on_seed(const ProtocolMessage& msg);
  /// Stores K_new for the child and returns the acknowledgment.
  std::optional<ProtocolMessage> on_new_pairwise_key(const ProtocolMessage& msg);
  std::optional<ProtocolMessage> begin_refresh(NodeId child, Rng& rng);
  std::optional<ProtocolMessage> on_refresh_response(const ProtocolMessage& msg);

  // Child role.
  std::optional<ProtocolMessage> on_seed_component(const ProtocolMessage& msg, Rng& rng);
  bool on_new_key_ack(const ProtocolMessage& msg);
  std::optional<ProtocolMessage> on_refresh_request(const ProtocolMessage& msg, Rng& rng);
  bool on_refresh_ack(const ProtocolMessage& msg);

 private:
  struct PendingNotification {
    std::uint64_t nonce = 0;
    std::vector<NodeId> children;
  };
  struct PendingSeed {
    std::uint64_t rn_aggregator = 0;
    std::uint64_t rn_child = 0;
  };
  struct PendingKey {
    Key128 key{};
    std::uint64_t nonce = 0;
  };

  bool reject();
  [[nodiscard]] bool addressed_to_me(const ProtocolMessage& msg, MessageKind kind) const;

  NodeId id_;
  Key128 bs_key_;
  const CipherSuite* cipher_;
  KeyCache cache_;
  std::size_t rejected_ = 0;

  std::optional<PendingNotification> pending_notification_;
  std::map<NodeId, PendingSeed> pending_seeds_;          // aggregator: child -> RNs
  std::map<NodeId, std::uint64_t> pending_refresh_;      // aggregator: child -> N_a
  std::map<NodeId, PendingKey> pending_new_key_;         // child: aggregator -> (K_new, N_c)
  std::map<NodeId, PendingKey> pending_refresh_child_;   // child: aggregator -> (K_new, N_b)
};

/// Reliable in-order delivery with an optional per-message trace line
/// `round kind sender receiver payload_hex` and an optional adversary hook.
class ProtocolChannel {
 public:
  using Tamper = std::function<void(ProtocolMessage&)>;

  void set_round(Round round) { round_ = round; }
  void set_trace(std::ostream* out) { trace_ = out; }
  void set_tamper(Tamper tamper) { tamper_ = std::move(tamper); }

  /// Returns the message as it arrives at the receiver.
  ProtocolMessage transmit(ProtocolMessage msg);
  [[nodiscard]] std::size_t messages() const { return messages_; }

 private:
  Round round_ = 0;
  std::ostream* trace_ = nullptr;
  Tamper tamper_;
  std::size_t messages_ = 0;
};

struct KeyEstablishmentReport {
  std::size_t established = 0;
  std::size_t refreshed = 0;
  std::size_t failures = 0;
  std::size_t messages = 0;
  std::size_t bs_hops = 0;  // tree hops travelled by notifications and seeds

  KeyEstablishmentReport& operator+=(const KeyEstablishmentReport& other);
};

/// Runs establishment or refresh on every parent-child edge of the tree.
/// `agents[n]` must be node n's endpoint. `skip_child(parent, child)`, when
/// set, excludes a pair from key work.
KeyEstablishmentReport run_key_establishment_for_tree(
    const DGTree& tree, std::vector<KeyAgent>& agents, BaseStation& bs, ProtocolChannel& channel,
    Rng& rng, const std::function<bool(NodeId, NodeId)>& skip_child = {});

/// Number of unordered node pairs {i, j} holding a key for each other.
std::size_t count_key_pairs(const std::vector<KeyAgent>& agents);

Key128 random_key(Rng& rng);

}  // namespace sda
