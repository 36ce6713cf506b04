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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qvote/ballot.hpp"
#include "qvote/quantum.hpp"

namespace qvote {

enum class PartyRole { Voter, Miner, EPS, Auditor };

struct PartyId {
    PartyRole role = PartyRole::Voter;
    std::uint32_t index = 0;

    /// "V0", "M1", "E0", "A0".
    std::string str() const;
    auto operator<=>(const PartyId &) const = default;
};

enum class Channel { Classical, Quantum };

enum class PayloadType {
    Register,
    VoteShare,
    BusTransfer,
    RevealRequest,
    RevealLabels,
    VerifyVerdict,
    CommitTransfer,
    CsReveal,
    DecodeResult,
    AharonovDistribute,
    LeaderBit,
    ConsistencyFlag,
    ConvinceIndices,
    ConsensusResult,
    AuditQuery,
    AuditReply,
    AuditVerdict,
    TallyResult,
};

std::string_view payload_type_name(PayloadType type);

struct TranscriptEntry {
    std::uint64_t seq = 0;
    PartyId from;
    PartyId to;
    Channel channel = Channel::Classical;
    PayloadType type = PayloadType::Register;
    nlohmann::json payload;

    /// One JSON object with keys seq, from, to, channel, type, payload.
    nlohmann::json to_json() const;
};

struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a party touches a quantum register it does not own.
struct OwnershipError : NetworkError {
    using NetworkError::NetworkError;
};

using RegisterHandle = std::uint64_t;

/// Single-threaded simulated network with ideal authenticated channels. Every
/// classical message and quantum transfer is appended to the transcript.
class Network {
   public:
    Network();

    PartyId eps() const { return eps_; }

    /// Registers a device with the EPS. Credentials must be unique.
    PartyId register_party(PartyRole role, const std::string &credentials);
    bool is_registered(const PartyId &party) const;
    const std::vector<PartyId> &voters() const { return voters_; }
    const std::vector<PartyId> &miners() const { return miners_; }
    const std::vector<PartyId> &auditors() const { return auditors_; }

    /// Delivers a classical message; returns its sequence number as receipt.
    std::uint64_t send_classical(const PartyId &from, const PartyId &to, PayloadType type, nlohmann::json payload);

    RegisterHandle create_register(const PartyId &owner, QubitRegister qubits);
    /// Moves ownership by swapping the qubits into a fresh register held by `to`.
    void transfer_quantum(const PartyId &from, const PartyId &to, RegisterHandle handle, PayloadType type);
    /// Removes the register for measurement; only the owner may do this.
    QubitRegister take(const PartyId &who, RegisterHandle handle);
    PartyId owner(RegisterHandle handle) const;
    std::size_t live_registers() const { return registers_.size(); }

    const std::vector<TranscriptEntry> &transcript() const { return transcript_; }
    /// Messages of one type sent to `to`, in order.
    std::vector<const TranscriptEntry *> inbox(const PartyId &to, PayloadType type) const;
    std::string transcript_jsonl() const;

   private:
    struct Held {
        PartyId owner;
        QubitRegister qubits;
    };

    void require_registered(const PartyId &party) const;
    std::uint64_t append(const PartyId &from, const PartyId &to, Channel channel, PayloadType type, nlohmann::json payload);

    PartyId eps_{PartyRole::EPS, 0};
    std::set<std::string> credentials_;
    std::set<PartyId> registered_;
    std::vector<PartyId> voters_;
    std::vector<PartyId> miners_;
    std::vector<PartyId> auditors_;
    std::map<RegisterHandle, Held> registers_;
    RegisterHandle next_handle_ = 1;
    std::vector<TranscriptEntry> transcript_;
};

/// Audit claims for every off-diagonal V_ij whose two replies appear in the transcript.
std::vector<AuditClaim> reconstruct_audit_claims(const std::vector<TranscriptEntry> &transcript);

}  // namespace qvote
