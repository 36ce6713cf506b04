// Copyright 2026 The qvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qvote/netsim.hpp"

#include <sstream>

#include "gtest/gtest.h"

#include "qvote/csqbc.hpp"

using namespace qvote;

TEST(netsim, party_ids) {
    EXPECT_EQ((PartyId{PartyRole::Voter, 0}.str()), "V0");
    EXPECT_EQ((PartyId{PartyRole::Miner, 1}.str()), "M1");
    EXPECT_EQ((PartyId{PartyRole::EPS, 0}.str()), "E0");
    EXPECT_EQ((PartyId{PartyRole::Auditor, 0}.str()), "A0");
}

TEST(netsim, registration) {
    Network net;
    auto v0 = net.register_party(PartyRole::Voter, "alice");
    auto v1 = net.register_party(PartyRole::Voter, "bob");
    EXPECT_EQ(v0, (PartyId{PartyRole::Voter, 0}));
    EXPECT_EQ(v1, (PartyId{PartyRole::Voter, 1}));
    EXPECT_THROW(net.register_party(PartyRole::Voter, "alice"), NetworkError);
    EXPECT_THROW(net.register_party(PartyRole::EPS, "eps2"), NetworkError);
    for (int i = 0; i < 3; i++) {
        net.register_party(PartyRole::Miner, "miner" + std::to_string(i));
    }
    EXPECT_EQ(net.miners().size(), 3u);
    EXPECT_EQ(net.voters().size(), 2u);
    EXPECT_TRUE(net.is_registered(net.eps()));
    EXPECT_FALSE(net.is_registered({PartyRole::Voter, 5}));
    for (const auto &e : net.transcript()) {
        EXPECT_EQ(e.type, PayloadType::Register);
        EXPECT_EQ(e.to, net.eps());
    }
}

TEST(netsim, classical_delivery) {
    Network net;
    auto a = net.register_party(PartyRole::Voter, "a");
    auto m = net.register_party(PartyRole::Miner, "m");
    const auto before = net.transcript().size();
    auto seq = net.send_classical(a, m, PayloadType::VoteShare, {{"value", 4}});
    EXPECT_EQ(net.transcript().size(), before + 1);
    EXPECT_EQ(seq, net.transcript().back().seq);
    auto inbox = net.inbox(m, PayloadType::VoteShare);
    ASSERT_EQ(inbox.size(), 1u);
    EXPECT_EQ(inbox[0]->from, a);
    EXPECT_EQ(inbox[0]->payload.at("value"), 4);

    PartyId ghost{PartyRole::Voter, 9};
    EXPECT_THROW(net.send_classical(ghost, m, PayloadType::VoteShare, {}), NetworkError);
    EXPECT_THROW(net.send_classical(a, ghost, PayloadType::VoteShare, {}), NetworkError);
}

TEST(netsim, sequence_has_no_gaps) {
    Network net;
    auto a = net.register_party(PartyRole::Voter, "a");
    auto b = net.register_party(PartyRole::Voter, "b");
    for (int i = 0; i < 1000; i++) {
        net.send_classical(i % 2 ? a : b, i % 2 ? b : a, PayloadType::AuditQuery, {{"i", i}});
    }
    const auto &t = net.transcript();
    for (std::size_t k = 0; k < t.size(); k++) {
        ASSERT_EQ(t[k].seq, k + 1);
    }
    EXPECT_EQ(t.size(), 1002u);
}

TEST(netsim, quantum_transfer_moves_ownership) {
    Rng rng(1);
    Network net;
    auto v = net.register_party(PartyRole::Voter, "v");
    auto m = net.register_party(PartyRole::Miner, "m");
    auto bus = prepare_bus({8, 1, 1}, rng);
    auto h = net.create_register(m, bus.reg);
    net.transfer_quantum(m, v, h, PayloadType::BusTransfer);
    EXPECT_EQ(net.owner(h), v);
    EXPECT_THROW(net.take(m, h), OwnershipError);
    EXPECT_THROW(net.transfer_quantum(m, v, h, PayloadType::BusTransfer), OwnershipError);
    auto &last = net.transcript().back();
    EXPECT_EQ(last.channel, Channel::Quantum);
    EXPECT_EQ(last.payload.at("qubits"), 8);

    auto reg = net.take(v, h);
    EXPECT_EQ(verify_bus(reg, bus.labels, rng), Verdict::Pass);
    EXPECT_EQ(net.live_registers(), 0u);
    EXPECT_THROW(net.take(v, h), OwnershipError);
    EXPECT_THROW(net.owner(h), OwnershipError);
}

TEST(netsim, roundtrip_transfer_preserves_state) {
    Rng rng(2);
    Network net;
    auto v = net.register_party(PartyRole::Voter, "v");
    auto m = net.register_party(PartyRole::Miner, "m");
    auto bus = prepare_bus({8, 1, 1}, rng);
    auto committed = apply_commitment(bus.reg, 3, Bits{1, 0, 1, 1});
    auto h = net.create_register(v, committed);
    net.transfer_quantum(v, m, h, PayloadType::CommitTransfer);
    net.transfer_quantum(m, v, h, PayloadType::CommitTransfer);
    auto back = net.take(v, h);
    ASSERT_EQ(back.size(), committed.size());
    for (std::size_t q = 0; q < back.size(); q++) {
        EXPECT_NEAR(fidelity(DensityMatrix::from_pure(back[q]), committed[q]), 1.0, 1e-12);
    }
}

TEST(netsim, every_register_has_one_owner) {
    Network net;
    std::vector<PartyId> parties;
    for (int i = 0; i < 4; i++) {
        parties.push_back(net.register_party(PartyRole::Miner, "m" + std::to_string(i)));
    }
    Rng rng(3);
    std::vector<RegisterHandle> handles;
    for (int i = 0; i < 10; i++) {
        handles.push_back(net.create_register(parties[i % 4], zero_register(2)));
    }
    for (int step = 0; step < 200; step++) {
        auto h = handles[uniform_index(rng, handles.size())];
        auto from = net.owner(h);
        auto to = parties[uniform_index(rng, 4)];
        net.transfer_quantum(from, to, h, PayloadType::BusTransfer);
        ASSERT_EQ(net.owner(h), to);
        ASSERT_EQ(net.live_registers(), 10u);
    }
    EXPECT_THROW(net.create_register({PartyRole::Voter, 3}, zero_register(1)), NetworkError);
}

TEST(netsim, transcript_jsonl_shape) {
    Network net;
    auto a = net.register_party(PartyRole::Voter, "a");
    auto m = net.register_party(PartyRole::Miner, "m");
    net.send_classical(a, m, PayloadType::CsReveal, {{"cs", "0101"}});
    auto h = net.create_register(a, zero_register(1));
    net.transfer_quantum(a, m, h, PayloadType::CommitTransfer);
    std::istringstream lines(net.transcript_jsonl());
    std::string line;
    std::vector<nlohmann::json> docs;
    while (std::getline(lines, line)) {
        docs.push_back(nlohmann::json::parse(line));
    }
    ASSERT_EQ(docs.size(), 4u);
    const auto &msg = docs[2];
    EXPECT_EQ(msg.at("seq"), 3);
    EXPECT_EQ(msg.at("from"), "V0");
    EXPECT_EQ(msg.at("to"), "M0");
    EXPECT_EQ(msg.at("channel"), "classical");
    EXPECT_EQ(msg.at("type"), "CS_REVEAL");
    EXPECT_EQ(msg.at("payload").at("cs"), "0101");
    EXPECT_EQ(docs[3].at("channel"), "quantum");
    EXPECT_EQ(payload_type_name(PayloadType::AharonovDistribute), "AHARONOV_DISTRIBUTE");
}

TEST(netsim, identical_runs_give_identical_transcripts) {
    auto run = [] {
        Network net;
        auto a = net.register_party(PartyRole::Voter, "a");
        auto m = net.register_party(PartyRole::Miner, "m");
        Rng rng(4);
        for (int i = 0; i < 50; i++) {
            net.send_classical(a, m, PayloadType::VoteShare, {{"value", rng() % 100}});
        }
        return net.transcript_jsonl();
    };
    EXPECT_EQ(run(), run());
}

TEST(netsim, auditor_reconstructs_claims_from_transcript) {
    Rng rng(5);
    Network net;
    auto auditor = net.register_party(PartyRole::Auditor, "aud");
    std::vector<PartyId> voters;
    for (int i = 0; i < 4; i++) {
        voters.push_back(net.register_party(PartyRole::Voter, "v" + std::to_string(i)));
    }
    auto m = generate_matrix(4, 50, rng);
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t j = 0; j < 4; j++) {
            if (i == j) {
                continue;
            }
            // Voter i reports what it sent, voter j what it received; (2,0) is tampered.
            const std::uint64_t received = m.at(i, j) + ((i == 2 && j == 0) ? 1 : 0);
            net.send_classical(voters[i], auditor, PayloadType::AuditReply, {{"i", i}, {"j", j}, {"value", m.at(i, j)}});
            net.send_classical(voters[j], auditor, PayloadType::AuditReply, {{"i", i}, {"j", j}, {"value", received}});
        }
    }
    auto claims = reconstruct_audit_claims(net.transcript());
    ASSERT_EQ(claims.size(), 12u);
    std::size_t cheating = 0;
    for (const auto &c : claims) {
        EXPECT_EQ(c.value_from_i, m.at(c.i, c.j));
        if (audit(c) == AuditVerdict::Cheating) {
            cheating++;
            EXPECT_EQ(c.i, 2u);
            EXPECT_EQ(c.j, 0u);
        }
    }
    EXPECT_EQ(cheating, 1u);
}
