#include "sda/keyproto.hpp"

#include <stdexcept>
#include <string>

namespace sda {

namespace {

class Writer {
 public:
  Writer& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  Writer& u16(NodeId v) {
    if (v > 0xFFFF) throw std::invalid_argument("node id does not fit the 2-byte wire field");
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
    return *this;
  }
  Writer& u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
  }
  Writer& key(const Key128& k) {
    out_.insert(out_.end(), k.begin(), k.end());
    return *this;
  }
  Writer& bytes(std::span<const std::uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

/// Bounds-checked cursor; any short read poisons the reader.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    if (!need(1)) return 0;
    return in_[pos_++];
  }
  NodeId u16() {
    if (!need(2)) return 0;
    const NodeId v = (NodeId{in_[pos_]} << 8) | in_[pos_ + 1];
    pos_ += 2;
    return v;
  }
  std::uint64_t u64() {
    if (!need(8)) return 0;
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 8;
    return v;
  }
  Key128 key() {
    Key128 k{};
    if (!need(k.size())) return k;
    std::copy_n(in_.begin() + static_cast<std::ptrdiff_t>(pos_), k.size(), k.begin());
    pos_ += k.size();
    return k;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    if (!need(n)) return {};
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  /// True iff every read succeeded and the input was consumed exactly.
  [[nodiscard]] bool done() const { return ok_ && pos_ == in_.size(); }
  [[nodiscard]] bool ok() const { return ok_; }
  [[nodiscard]] std::size_t remaining() const { return in_.size() - pos_; }

 private:
  bool need(std::size_t n) {
    if (!ok_ || in_.size() - pos_ < n) ok_ = false;
    return ok_;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

ProtocolMessage make_message(MessageKind kind, NodeId sender, NodeId receiver, Bytes payload) {
  return ProtocolMessage{kind, sender, receiver, std::move(payload)};
}

bool valid_kind(std::uint8_t raw) {
  return raw >= static_cast<std::uint8_t>(MessageKind::kDANotification) &&
         raw <= static_cast<std::uint8_t>(MessageKind::kRefreshAck);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kDANotification: return "DANotification";
    case MessageKind::kSeedSecretKey: return "SeedSecretKey";
    case MessageKind::kNewPairwiseKey: return "NewPairwiseKey";
    case MessageKind::kNewPairwiseKeyAck: return "NewPairwiseKeyAck";
    case MessageKind::kRefreshRequest: return "RefreshRequest";
    case MessageKind::kRefreshResponse: return "RefreshResponse";
    case MessageKind::kRefreshAck: return "RefreshAck";
  }
  return "Unknown";
}

Bytes ProtocolMessage::encode() const {
  return Writer().u8(static_cast<std::uint8_t>(kind)).u16(sender).u16(receiver).bytes(payload).take();
}

std::optional<ProtocolMessage> ProtocolMessage::decode(std::span<const std::uint8_t> wire) {
  Reader r(wire);
  const std::uint8_t raw_kind = r.u8();
  const NodeId sender = r.u16();
  const NodeId receiver = r.u16();
  if (!r.ok() || !valid_kind(raw_kind)) return std::nullopt;
  auto rest = r.bytes(r.remaining());
  return ProtocolMessage{static_cast<MessageKind>(raw_kind), sender, receiver,
                         Bytes(rest.begin(), rest.end())};
}

Bytes da_notification_plaintext(NodeId aggregator, std::uint64_t nonce,
                                std::span<const NodeId> children) {
  if (children.size() > 0xFF) throw std::invalid_argument("DA-Notification holds at most 255 children");
  Writer w;
  w.u16(aggregator).u64(nonce).u8(static_cast<std::uint8_t>(children.size()));
  for (NodeId c : children) w.u16(c);
  return w.take();
}

Key128 temp_key(std::uint64_t rn_aggregator, std::uint64_t rn_child) {
  // Schoolbook 64x64 -> 128 multiply on 32-bit limbs.
  const std::uint64_t a_lo = rn_aggregator & 0xFFFFFFFFULL;
  const std::uint64_t a_hi = rn_aggregator >> 32;
  const std::uint64_t b_lo = rn_child & 0xFFFFFFFFULL;
  const std::uint64_t b_hi = rn_child >> 32;
  const std::uint64_t lo_lo = a_lo * b_lo;
  const std::uint64_t hi_lo = a_hi * b_lo;
  const std::uint64_t lo_hi = a_lo * b_hi;
  const std::uint64_t hi_hi = a_hi * b_hi;
  const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFULL) + lo_hi;
  const std::uint64_t low = (cross << 32) | (lo_lo & 0xFFFFFFFFULL);
  const std::uint64_t high = hi_hi + (hi_lo >> 32) + (cross >> 32);

  Key128 out{};
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(high >> (56 - 8 * i));
    out[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(low >> (56 - 8 * i));
  }
  return out;
}

Key128 random_key(Rng& rng) {
  Key128 k{};
  const std::uint64_t hi = rng();
  const std::uint64_t lo = rng();
  for (int i = 0; i < 8; ++i) {
    k[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
    k[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
  }
  return k;
}

// ---------------------------------------------------------------------------
// Base station

BaseStation::BaseStation(std::vector<Key128> node_keys, const CipherSuite& cipher)
    : node_keys_(std::move(node_keys)), cipher_(&cipher) {}

std::optional<ProtocolMessage> BaseStation::handle_notification(const ProtocolMessage& msg,
                                                                Rng& rng) {
  auto drop = [this]() -> std::optional<ProtocolMessage> {
    ++errors_;
    return std::nullopt;
  };
  if (msg.kind != MessageKind::kDANotification || msg.receiver != kBaseStationId) return drop();
  if (msg.sender >= node_keys_.size()) return drop();

  const auto plain = cipher_->decrypt(node_keys_[msg.sender], msg.payload);
  if (!plain) return drop();
  Reader r(*plain);
  const NodeId aggregator = r.u16();
  const std::uint64_t nonce = r.u64();
  const std::size_t count = r.u8();
  std::vector<NodeId> children;
  for (std::size_t i = 0; i < count; ++i) children.push_back(r.u16());
  if (!r.done() || aggregator != msg.sender || children.empty()) return drop();
  for (NodeId c : children) {
    if (c >= node_keys_.size() || c == aggregator) return drop();
  }

  const std::uint64_t rn_aggregator = rng();
  std::vector<std::uint64_t> rn_children;
  for (std::size_t i = 0; i < children.size(); ++i) rn_children.push_back(rng());

  Writer agg_plain;
  agg_plain.u16(kBaseStationId).u64(nonce + 1).u64(rn_aggregator);
  for (std::uint64_t rn : rn_children) agg_plain.u64(rn);

  Writer payload;
  auto append_component = [&payload](const Bytes& ct) {
    payload.u16(static_cast<NodeId>(ct.size())).bytes(ct);
  };
  append_component(cipher_->encrypt(node_keys_[aggregator], agg_plain.take()));
  for (std::size_t i = 0; i < children.size(); ++i) {
    Bytes child_plain =
        Writer().u16(kBaseStationId).u16(aggregator).u64(rn_aggregator).u64(rn_children[i]).take();
    append_component(cipher_->encrypt(node_keys_[children[i]], child_plain));
  }
  return make_message(MessageKind::kSeedSecretKey, kBaseStationId, aggregator, payload.take());
}

// ---------------------------------------------------------------------------
// Sensor node endpoint

KeyAgent::KeyAgent(NodeId id, Key128 bs_key, const CipherSuite& cipher)
    : id_(id), bs_key_(bs_key), cipher_(&cipher) {
  if (id > kMaxWireNodeId) throw std::invalid_argument("node id does not fit the wire format");
}

bool KeyAgent::reject() {
  ++rejected_;
  return false;
}

bool KeyAgent::addressed_to_me(const ProtocolMessage& msg, MessageKind kind) const {
  return msg.kind == kind && msg.receiver == id_;
}

std::optional<ProtocolMessage> KeyAgent::begin_establishment(std::span<const NodeId> children,
                                                             Rng& rng) {
  if (children.empty()) return std::nullopt;
  PendingNotification pending{rng(), {children.begin(), children.end()}};
  Bytes plain = da_notification_plaintext(id_, pending.nonce, children);
  pending_notification_ = std::move(pending);
  return make_message(MessageKind::kDANotification, id_, kBaseStationId,
                      cipher_->encrypt(bs_key_, plain));
}

std::vector<ProtocolMessage> KeyAgent::on_seed(const ProtocolMessage& msg) {
  if (!addressed_to_me(msg, MessageKind::kSeedSecretKey) || msg.sender != kBaseStationId ||
      !pending_notification_) {
    reject();
    return {};
  }
  const auto& children = pending_notification_->children;

  Reader framing(msg.payload);
  std::vector<std::span<const std::uint8_t>> components;
  while (framing.ok() && framing.remaining() > 0) {
    const std::size_t len = framing.u16();
    components.push_back(framing.bytes(len));
  }
  if (!framing.done() || components.size() != children.size() + 1) {
    reject();
    return {};
  }

  const auto plain = cipher_->decrypt(bs_key_, components.front());
  if (!plain) {
    reject();
    return {};
  }
  Reader r(*plain);
  const NodeId tag = r.u16();
  const std::uint64_t echoed = r.u64();
  const std::uint64_t rn_aggregator = r.u64();
  std::vector<std::uint64_t> rn_children;
  for (std::size_t i = 0; i < children.size(); ++i) rn_children.push_back(r.u64());
  if (!r.done() || tag != kBaseStationId || echoed != pending_notification_->nonce + 1) {
    reject();
    return {};
  }

  std::vector<ProtocolMessage> forwards;
  for (std::size_t i = 0; i < children.size(); ++i) {
    pending_seeds_[children[i]] = {rn_aggregator, rn_children[i]};
    const auto& comp = components[i + 1];
    forwards.push_back(make_message(MessageKind::kSeedSecretKey, id_, children[i],
                                    Bytes(comp.begin(), comp.end())));
  }
  pending_notification_.reset();
  return forwards;
}

std::optional<ProtocolMessage> KeyAgent::on_seed_component(const ProtocolMessage& msg, Rng& rng) {
  if (!addressed_to_me(msg, MessageKind::kSeedSecretKey) || msg.sender == kBaseStationId) {
    reject();
    return std::nullopt;
  }
  const auto plain = cipher_->decrypt(bs_key_, msg.payload);
  if (!plain) {
    reject();
    return std::nullopt;
  }
  Reader r(*plain);
  const NodeId tag = r.u16();
  const NodeId aggregator = r.u16();
  const std::uint64_t rn_aggregator = r.u64();
  const std::uint64_t rn_child = r.u64();
  // The forwarding node must be the aggregator the BS issued the seed for.
  if (!r.done() || tag != kBaseStationId || aggregator != msg.sender) {
    reject();
    return std::nullopt;
  }
  PendingKey pending{random_key(rng), rng()};
  Bytes body = Writer().key(pending.key).u64(pending.nonce).take();
  pending_new_key_[aggregator] = pending;
  return make_message(MessageKind::kNewPairwiseKey, id_, aggregator,
                      cipher_->encrypt(temp_key(rn_aggregator, rn_child), body));
}

std::optional<ProtocolMessage> KeyAgent::on_new_pairwise_key(const ProtocolMessage& msg) {
  if (!addressed_to_me(msg, MessageKind::kNewPairwiseKey)) {
    reject();
    return std::nullopt;
  }
  const auto seed = pending_seeds_.find(msg.sender);
  if (seed == pending_seeds_.end()) {
    reject();
    return std::nullopt;
  }
  const auto plain =
      cipher_->decrypt(temp_key(seed->second.rn_aggregator, seed->second.rn_child), msg.payload);
  if (!plain) {
    reject();
    return std::nullopt;
  }
  Reader r(*plain);
  const Key128 key = r.key();
  const std::uint64_t nonce = r.u64();
  if (!r.done()) {
    reject();
    return std::nullopt;
  }
  cache_[msg.sender] = key;
  pending_seeds_.erase(seed);
  return make_message(MessageKind::kNewPairwiseKeyAck, id_, msg.sender,
                      cipher_->encrypt(key, Writer().u64(nonce + 1).take()));
}

bool KeyAgent::on_new_key_ack(const ProtocolMessage& msg) {
  if (!addressed_to_me(msg, MessageKind::kNewPairwiseKeyAck)) return reject();
  const auto pending = pending_new_key_.find(msg.sender);
  if (pending == pending_new_key_.end()) return reject();
  const auto plain = cipher_->decrypt(pending->second.key, msg.payload);
  if (!plain) return reject();
  Reader r(*plain);
  const std::uint64_t echoed = r.u64();
  if (!r.done() || echoed != pending->second.nonce + 1) return reject();
  cache_[msg.sender] = pending->second.key;
  pending_new_key_.erase(pending);
  return true;
}

std::optional<ProtocolMessage> KeyAgent::begin_refresh(NodeId child, Rng& rng) {
  const auto current = cache_.find(child);
  if (current == cache_.end()) return std::nullopt;
  const std::uint64_t nonce = rng();
  pending_refresh_[child] = nonce;
  return make_message(MessageKind::kRefreshRequest, id_, child,
                      cipher_->encrypt(current->second, Writer().u64(nonce).take()));
}

std::optional<ProtocolMessage> KeyAgent::on_refresh_request(const ProtocolMessage& msg, Rng& rng) {
  if (!addressed_to_me(msg, MessageKind::kRefreshRequest)) {
    reject();
    return std::nullopt;
  }
  const auto current = cache_.find(msg.sender);
  if (current == cache_.end()) {
    reject();
    return std::nullopt;
  }
  const auto plain = cipher_->decrypt(current->second, msg.payload);
  if (!plain) {
    reject();
    return std::nullopt;
  }
  Reader r(*plain);
  const std::uint64_t nonce = r.u64();
  if (!r.done()) {
    reject();
    return std::nullopt;
  }
  PendingKey pending{random_key(rng), rng()};
  Bytes body = Writer().u64(nonce + 1).key(pending.key).u64(pending.nonce).take();
  pending_refresh_child_[msg.sender] = pending;
  return make_message(MessageKind::kRefreshResponse, id_, msg.sender,
                      cipher_->encrypt(current->second, body));
}

std::optional<ProtocolMessage> KeyAgent::on_refresh_response(const ProtocolMessage& msg) {
  if (!addressed_to_me(msg, MessageKind::kRefreshResponse)) {
    reject();
    return std::nullopt;
  }
  const auto pending = pending_refresh_.find(msg.sender);
  const auto current = cache_.find(msg.sender);
  if (pending == pending_refresh_.end() || current == cache_.end()) {
    reject();
    return std::nullopt;
  }
  const auto plain = cipher_->decrypt(current->second, msg.payload);
  if (!plain) {
    reject();
    return std::nullopt;
  }
  Reader r(*plain);
  const std::uint64_t echoed = r.u64();
  const Key128 key = r.key();
  const std::uint64_t child_nonce = r.u64();
  if (!r.done() || echoed != pending->second + 1) {
    reject();
    return std::nullopt;
  }
  current->second = key;
  pending_refresh_.erase(pending);
  return make_message(MessageKind::kRefreshAck, id_, msg.sender,
                      cipher_->encrypt(key, Writer().u64(child_nonce + 1).take()));
}

bool KeyAgent::on_refresh_ack(const ProtocolMessage& msg) {
  if (!addressed_to_me(msg, MessageKind::kRefreshAck)) return reject();
  const auto pending = pending_refresh_child_.find(msg.sender);
  if (pending == pending_refresh_child_.end()) return reject();
  const auto plain = cipher_->decrypt(pending->second.key, msg.payload);
  if (!plain) return reject();
  Reader r(*plain);
  const std::uint64_t echoed = r.u64();
  if (!r.done() || echoed != pending->second.nonce + 1) return reject();
  cache_[msg.sender] = pending->second.key;
  pending_refresh_child_.erase(pending);
  return true;
}

// ---------------------------------------------------------------------------
// Channel and tree driver

ProtocolMessage ProtocolChannel::transmit(ProtocolMessage msg) {
  ++messages_;
  if (tamper_) tamper_(msg);
  if (trace_) {
    *trace_ << round_ << ' ' << to_string(msg.kind) << ' ' << msg.sender << ' ' << msg.receiver
            << ' ' << to_hex(msg.payload) << '\n';
  }
  return msg;
}

KeyEstablishmentReport& KeyEstablishmentReport::operator+=(const KeyEstablishmentReport& other) {
  established += other.established;
  refreshed += other.refreshed;
  failures += other.failures;
  messages += other.messages;
  bs_hops += other.bs_hops;
  return *this;
}

KeyEstablishmentReport run_key_establishment_for_tree(
    const DGTree& tree, std::vector<KeyAgent>& agents, BaseStation& bs, ProtocolChannel& channel,
    Rng& rng, const std::function<bool(NodeId, NodeId)>& skip_child) {
  if (agents.size() != tree.size()) throw std::invalid_argument("one KeyAgent per tree node");
  KeyEstablishmentReport report;
  const std::size_t before = channel.messages();

  for (NodeId parent : tree.bfs_order) {
    KeyAgent& aggregator = agents[parent];
    std::vector<NodeId> missing;
    for (NodeId child : tree.children[parent]) {
      if (skip_child && skip_child(parent, child)) continue;
      if (!aggregator.shares_key_with(child)) {
        missing.push_back(child);
        continue;
      }
      // Step 6: refresh an existing key.
      KeyAgent& peer = agents[child];
      bool ok = false;
      if (auto request = aggregator.begin_refresh(child, rng)) {
        if (auto response = peer.on_refresh_request(channel.transmit(std::move(*request)), rng)) {
          if (auto ack = aggregator.on_refresh_response(channel.transmit(std::move(*response)))) {
            ok = peer.on_refresh_ack(channel.transmit(std::move(*ack)));
          }
        }
      }
      ok ? ++report.refreshed : ++report.failures;
    }

    // Steps 3-5: establish keys with the remaining children through the BS.
    for (std::size_t first = 0; first < missing.size(); first += 0xFF) {
      const std::size_t last = std::min(missing.size(), first + 0xFF);
      std::span<const NodeId> batch(missing.data() + first, last - first);
      const auto hops = static_cast<std::size_t>(tree.level[parent]);
      std::size_t done = 0;

      auto notification = aggregator.begin_establishment(batch, rng);
      if (notification) {
        report.bs_hops += hops;
        auto seed = bs.handle_notification(channel.transmit(std::move(*notification)), rng);
        if (seed) {
          report.bs_hops += hops;
          for (auto& forward : aggregator.on_seed(channel.transmit(std::move(*seed)))) {
            KeyAgent& peer = agents[forward.receiver];
            auto new_key = peer.on_seed_component(channel.transmit(std::move(forward)), rng);
            if (!new_key) continue;
            auto ack = aggregator.on_new_pairwise_key(channel.transmit(std::move(*new_key)));
            if (!ack) continue;
            if (peer.on_new_key_ack(channel.transmit(std::move(*ack)))) ++done;
          }
        }
      }
      report.established += done;
      report.failures += batch.size() - done;
    }
  }
  report.messages = channel.messages() - before;
  return report;
}

std::size_t count_key_pairs(const std::vector<KeyAgent>& agents) {
  std::size_t pairs = 0;
  for (const KeyAgent& agent : agents) {
    for (const auto& [peer, key] : agent.cache()) {
      if (peer <= agent.id() || peer >= agents.size()) continue;
      const auto& other = agents[peer].cache();
      const auto it = other.find(agent.id());
      if (it != other.end() && it->second == key) ++pairs;
    }
  }
  return pairs;
}

}  // namespace sda
