#include "fedsel/ledger.hpp"

#include <bit>

#include "fedsel/error.hpp"

namespace fedsel {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::ClientToServer: return "client_to_server";
    case Direction::ServerToClient: return "server_to_client";
  }
  return "unknown";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::FeatureUpload: return "feature_upload";
    case Phase::SelectionBroadcast: return "selection_broadcast";
    case Phase::FedAvgModelDown: return "fedavg_model_down";
    case Phase::FedAvgModelUp: return "fedavg_model_up";
  }
  return "unknown";
}

std::uint64_t index_bits(std::size_t p) {
  if (p <= 1) return 0;
  return static_cast<std::uint64_t>(std::bit_width(static_cast<std::uint64_t>(p - 1)));
}

std::uint64_t encoded_bits(const Payload& payload, std::size_t p, unsigned f_bits) {
  if (const auto* idx = std::get_if<IndexSet>(&payload))
    return static_cast<std::uint64_t>(idx->size()) * index_bits(p);
  const auto& vec = std::get<Vector>(payload);
  return static_cast<std::uint64_t>(vec.size()) * f_bits;
}

Message make_message(std::size_t client_id, Direction direction, Phase phase, Payload payload,
                     std::size_t p, unsigned f_bits) {
  Message m;
  m.client_id = client_id;
  m.direction = direction;
  m.phase = phase;
  m.payload_bits = encoded_bits(payload, p, f_bits);
  m.payload = std::move(payload);
  return m;
}

void CommLedger::record(const Message& msg) {
  record(msg.client_id, msg.phase, msg.direction, msg.payload_bits, 1);
}

void CommLedger::record(std::size_t client_id, Phase phase, Direction direction,
                        std::uint64_t bits, std::uint64_t messages) {
  auto& e = entries_[Key{client_id, phase, direction}];
  e.bits += bits;
  e.messages += messages;
  total_bits_ += bits;
  total_messages_ += messages;
}

void CommLedger::merge(const CommLedger& other) {
  for (const auto& [key, totals] : other.entries_)
    record(std::get<0>(key), std::get<1>(key), std::get<2>(key), totals.bits, totals.messages);
}

std::uint64_t CommLedger::bits(Phase phase) const {
  std::uint64_t sum = 0;
  for (const auto& [key, totals] : entries_)
    if (std::get<1>(key) == phase) sum += totals.bits;
  return sum;
}

std::uint64_t CommLedger::bits(std::size_t client_id, Phase phase) const {
  std::uint64_t sum = 0;
  for (const auto& [key, totals] : entries_)
    if (std::get<0>(key) == client_id && std::get<1>(key) == phase) sum += totals.bits;
  return sum;
}

void CommLedger::write_csv(std::ostream& os) const {
  os << "client_id,phase,direction,messages,bits\n";
  for (const auto& [key, totals] : entries_) {
    os << std::get<0>(key) << ',' << to_string(std::get<1>(key)) << ','
       << to_string(std::get<2>(key)) << ',' << totals.messages << ',' << totals.bits << '\n';
  }
}

}  // namespace fedsel
