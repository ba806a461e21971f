#include <gtest/gtest.h>

#include <sstream>

#include "fedsel/ledger.hpp"

using namespace fedsel;

TEST(IndexBits, CeilLog2) {
  EXPECT_EQ(index_bits(0), 0u);
  EXPECT_EQ(index_bits(1), 0u);
  EXPECT_EQ(index_bits(2), 1u);
  EXPECT_EQ(index_bits(3), 2u);
  EXPECT_EQ(index_bits(4), 2u);
  EXPECT_EQ(index_bits(5), 3u);
  EXPECT_EQ(index_bits(100), 7u);
  EXPECT_EQ(index_bits(128), 7u);
  EXPECT_EQ(index_bits(129), 8u);
}

TEST(EncodedBits, IndicesAndFloats) {
  EXPECT_EQ(encoded_bits(IndexSet{1, 5, 9}, 100, 32), 21u);
  EXPECT_EQ(encoded_bits(Vector::Zero(4), 100, 32), 128u);
  EXPECT_EQ(encoded_bits(Vector::Zero(4), 100, 64), 256u);
  const auto m = make_message(3, Direction::ServerToClient, Phase::SelectionBroadcast,
                              IndexSet{0, 1}, 2, 32);
  EXPECT_EQ(m.payload_bits, 2u);
}

TEST(Ledger, TotalsAndMerge) {
  CommLedger a;
  a.record(make_message(0, Direction::ClientToServer, Phase::FeatureUpload, IndexSet{1, 2}, 16, 32));
  a.record(make_message(1, Direction::ClientToServer, Phase::FeatureUpload, IndexSet{3}, 16, 32));
  a.record(1, Phase::FedAvgModelUp, Direction::ClientToServer, 64, 2);
  EXPECT_EQ(a.total_bits(), 8u + 4u + 64u);
  EXPECT_EQ(a.total_messages(), 4u);
  EXPECT_EQ(a.bits(Phase::FeatureUpload), 12u);
  EXPECT_EQ(a.bits(1, Phase::FeatureUpload), 4u);

  CommLedger b;
  b.record(0, Phase::FeatureUpload, Direction::ClientToServer, 4);
  a.merge(b);
  EXPECT_EQ(a.bits(0, Phase::FeatureUpload), 12u);
  std::uint64_t sum = 0;
  for (const auto& [key, t] : a.entries()) sum += t.bits;
  EXPECT_EQ(sum, a.total_bits());
}

TEST(Ledger, Csv) {
  CommLedger l;
  l.record(1, Phase::SelectionBroadcast, Direction::ServerToClient, 14);
  l.record(0, Phase::FeatureUpload, Direction::ClientToServer, 21);
  std::ostringstream os;
  l.write_csv(os);
  EXPECT_EQ(os.str(),
            "client_id,phase,direction,messages,bits\n"
            "0,feature_upload,client_to_server,1,21\n"
            "1,selection_broadcast,server_to_client,1,14\n");
}
