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

#include <array>
#include <optional>
#include <utility>

namespace qvote {

namespace {

constexpr std::array<std::string_view, 18> kPayloadNames{
    "REGISTER",
    "VOTE_SHARE",
    "BUS_TRANSFER",
    "REVEAL_REQUEST",
    "REVEAL_LABELS",
    "VERIFY_VERDICT",
    "COMMIT_TRANSFER",
    "CS_REVEAL",
    "DECODE_RESULT",
    "AHARONOV_DISTRIBUTE",
    "LEADER_BIT",
    "CONSISTENCY_FLAG",
    "CONVINCE_INDICES",
    "CONSENSUS_RESULT",
    "AUDIT_QUERY",
    "AUDIT_REPLY",
    "AUDIT_VERDICT",
    "TALLY_RESULT",
};

char role_letter(PartyRole role) {
    switch (role) {
        case PartyRole::Voter:
            return 'V';
        case PartyRole::Miner:
            return 'M';
        case PartyRole::EPS:
            return 'E';
        case PartyRole::Auditor:
            return 'A';
    }
    return '?';
}

}  // namespace

std::string PartyId::str() const {
    return std::string(1, role_letter(role)) + std::to_string(index);
}

std::string_view payload_type_name(PayloadType type) {
    return kPayloadNames.at(static_cast<std::size_t>(type));
}

nlohmann::json TranscriptEntry::to_json() const {
    return {
        {"seq", seq},
        {"from", from.str()},
        {"to", to.str()},
        {"channel", channel == Channel::Classical ? "classical" : "quantum"},
        {"type", payload_type_name(type)},
        {"payload", payload},
    };
}

Network::Network() {
    registered_.insert(eps_);
}

PartyId Network::register_party(PartyRole role, const std::string &credentials) {
    if (role == PartyRole::EPS) {
        throw NetworkError("the EPS is created with the network");
    }
    if (!credentials_.insert(credentials).second) {
        throw NetworkError("duplicate registration for credentials '" + credentials + "'");
    }
    auto &list = role == PartyRole::Voter ? voters_ : role == PartyRole::Miner ? miners_ : auditors_;
    PartyId id{role, static_cast<std::uint32_t>(list.size())};
    list.push_back(id);
    registered_.insert(id);
    append(id, eps_, Channel::Classical, PayloadType::Register, {{"credentials", credentials}, {"id", id.str()}});
    return id;
}

bool Network::is_registered(const PartyId &party) const {
    return registered_.contains(party);
}

void Network::require_registered(const PartyId &party) const {
    if (!is_registered(party)) {
        throw NetworkError("party " + party.str() + " is not registered");
    }
}

std::uint64_t Network::append(
    const PartyId &from, const PartyId &to, Channel channel, PayloadType type, nlohmann::json payload) {
    TranscriptEntry e;
    e.seq = transcript_.size() + 1;
    e.from = from;
    e.to = to;
    e.channel = channel;
    e.type = type;
    e.payload = std::move(payload);
    transcript_.push_back(std::move(e));
    return transcript_.back().seq;
}

std::uint64_t Network::send_classical(
    const PartyId &from, const PartyId &to, PayloadType type, nlohmann::json payload) {
    require_registered(from);
    require_registered(to);
    return append(from, to, Channel::Classical, type, std::move(payload));
}

RegisterHandle Network::create_register(const PartyId &owner, QubitRegister qubits) {
    require_registered(owner);
    RegisterHandle h = next_handle_++;
    registers_.emplace(h, Held{owner, std::move(qubits)});
    return h;
}

void Network::transfer_quantum(const PartyId &from, const PartyId &to, RegisterHandle handle, PayloadType type) {
    require_registered(from);
    require_registered(to);
    auto it = registers_.find(handle);
    if (it == registers_.end()) {
        throw OwnershipError("register " + std::to_string(handle) + " does not exist");
    }
    if (it->second.owner != from) {
        throw OwnershipError(from.str() + " does not own register " + std::to_string(handle));
    }
    QubitRegister incoming = zero_register(it->second.qubits.size());
    std::vector<std::size_t> all(incoming.size());
    for (std::size_t q = 0; q < all.size(); q++) {
        all[q] = q;
    }
    swap_transfer(it->second.qubits, incoming, all);
    const std::size_t size = incoming.size();
    it->second = Held{to, std::move(incoming)};
    append(from, to, Channel::Quantum, type, {{"register", handle}, {"qubits", size}});
}

QubitRegister Network::take(const PartyId &who, RegisterHandle handle) {
    auto it = registers_.find(handle);
    if (it == registers_.end()) {
        throw OwnershipError("register " + std::to_string(handle) + " does not exist");
    }
    if (it->second.owner != who) {
        throw OwnershipError(who.str() + " does not own register " + std::to_string(handle));
    }
    QubitRegister q = std::move(it->second.qubits);
    registers_.erase(it);
    return q;
}

PartyId Network::owner(RegisterHandle handle) const {
    auto it = registers_.find(handle);
    if (it == registers_.end()) {
        throw OwnershipError("register " + std::to_string(handle) + " does not exist");
    }
    return it->second.owner;
}

std::vector<const TranscriptEntry *> Network::inbox(const PartyId &to, PayloadType type) const {
    std::vector<const TranscriptEntry *> out;
    for (const auto &e : transcript_) {
        if (e.to == to && e.type == type) {
            out.push_back(&e);
        }
    }
    return out;
}

std::string Network::transcript_jsonl() const {
    std::string out;
    for (const auto &e : transcript_) {
        out += e.to_json().dump();
        out += '\n';
    }
    return out;
}

std::vector<AuditClaim> reconstruct_audit_claims(const std::vector<TranscriptEntry> &transcript) {
    struct Pending {
        std::optional<std::uint64_t> from_i;
        std::optional<std::uint64_t> from_j;
        std::size_t asker = 0;
    };
    std::map<std::pair<std::size_t, std::size_t>, Pending> pending;
    for (const auto &e : transcript) {
        if (e.type != PayloadType::AuditReply || e.from.role != PartyRole::Voter) {
            continue;
        }
        const auto i = e.payload.at("i").get<std::size_t>();
        const auto j = e.payload.at("j").get<std::size_t>();
        const auto v = e.payload.at("value").get<std::uint64_t>();
        auto &p = pending[{i, j}];
        p.asker = e.to.index;
        if (e.from.index == i) {
            p.from_i = v;
        } else if (e.from.index == j) {
            p.from_j = v;
        }
    }
    std::vector<AuditClaim> claims;
    for (const auto &[key, p] : pending) {
        if (p.from_i && p.from_j) {
            claims.push_back({p.asker, key.first, key.second, *p.from_i, *p.from_j});
        }
    }
    return claims;
}

}  // namespace qvote
