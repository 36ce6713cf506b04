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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qvote/ballot.hpp"
#include "qvote/csqbc.hpp"
#include "qvote/qba.hpp"

namespace qvote {

struct QbaSettings {
    std::size_t copies = 30;
    double lambda = 0.9;
    SampleSource source = SampleSource::Ideal;
};

struct ElectionConfig {
    std::size_t voters = 3;
    std::size_t miners = 3;
    /// One vote per voter; nullopt draws the votes from the seed.
    std::optional<Bits> votes;
    /// k is derived from the voter count; only n and m are read.
    CsqbcParams csqbc;
    QbaSettings qba;
    /// Complicit miner during agreement.
    AdversaryModel adversary;
    /// Miner (0-based) that plants a probe sequence in every commitment session.
    std::optional<std::size_t> probe_miner;
    /// Voter i sends voter j a tampered share V_ij + 1 and reports the true one to the auditor.
    std::vector<std::pair<std::size_t, std::size_t>> ballot_lies;
    std::size_t retry_budget = 3;
    std::uint64_t entry_bound = kDefaultEntryBound;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on any violated precondition.
    void validate() const;
    nlohmann::json to_json() const;
};

enum class ElectionStatus { Completed, Aborted };

struct ElectionResult {
    ElectionStatus status = ElectionStatus::Completed;
    std::string abort_reason;
    Bits votes;
    std::uint64_t true_count = 0;
    std::uint64_t tally = 0;
    VoteMatrix matrix;
    std::vector<MaskedBallot> ballots;
    /// decoded[i][j]: voter i's masked ballot as opened by miner j.
    std::vector<std::vector<std::optional<std::uint64_t>>> decoded;
    /// consensus[i][b]: outcome of the agreement round on bit b of voter i's ballot.
    std::vector<std::vector<OutcomeKind>> consensus;
    std::vector<std::uint64_t> agreed_values;
    std::vector<AuditClaim> audit_claims;
    std::vector<AuditVerdict> audit_verdicts;

    std::size_t sessions = 0;
    std::size_t retries = 0;
    std::size_t ambiguous_decodes = 0;
    std::size_t inconsistent_decodes = 0;
    std::size_t qubits_used = 0;
    std::size_t probe_retained = 0;
    std::size_t probe_leaks = 0;

    std::string transcript_jsonl;
    std::size_t transcript_entries = 0;

    bool completed() const { return status == ElectionStatus::Completed; }
    nlohmann::json to_json(const ElectionConfig &config) const;
};

/// Registration, ballot preparation, commitment to every miner, opening,
/// per-bit agreement and tally, followed by the share audit. Aborts are
/// reported in the result rather than thrown.
ElectionResult run_election(const ElectionConfig &config);

}  // namespace qvote
