#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "fedsel/types.hpp"

namespace fedsel {

enum class Direction { ClientToServer, ServerToClient };
enum class Phase { FeatureUpload, SelectionBroadcast, FedAvgModelDown, FedAvgModelUp };

std::string_view to_string(Direction d);
std::string_view to_string(Phase p);

// Fixed-width index encoding: ceil(log2 p) bits per index (0 for p <= 1).
std::uint64_t index_bits(std::size_t p);

using Payload = std::variant<IndexSet, Vector>;

struct Message {
  std::size_t client_id = 0;  // the non-server endpoint of the link
  Direction direction = Direction::ClientToServer;
  Phase phase = Phase::FeatureUpload;
  std::uint64_t payload_bits = 0;
  Payload payload;
};

// Index lists cost index_bits(p) each; real vectors cost f_bits per entry.
std::uint64_t encoded_bits(const Payload& payload, std::size_t p, unsigned f_bits);

Message make_message(std::size_t client_id, Direction direction, Phase phase,
                     Payload payload, std::size_t p, unsigned f_bits);

struct LinkTotals {
  std::uint64_t messages = 0;
  std::uint64_t bits = 0;
};

// Per-link, per-phase record of every transmission in a run.
class CommLedger {
 public:
  using Key = std::tuple<std::size_t, Phase, Direction>;

  void record(const Message& msg);
  void record(std::size_t client_id, Phase phase, Direction direction, std::uint64_t bits,
              std::uint64_t messages = 1);
  void merge(const CommLedger& other);

  std::uint64_t total_bits() const noexcept { return total_bits_; }
  std::uint64_t total_messages() const noexcept { return total_messages_; }
  std::uint64_t bits(Phase phase) const;
  std::uint64_t bits(std::size_t client_id, Phase phase) const;
  const std::map<Key, LinkTotals>& entries() const noexcept { return entries_; }

  // CSV with header client_id,phase,direction,messages,bits; rows ordered by key.
  void write_csv(std::ostream& os) const;

 private:
  std::map<Key, LinkTotals> entries_;
  std::uint64_t total_bits_ = 0;
  std::uint64_t total_messages_ = 0;
};

}  // namespace fedsel
