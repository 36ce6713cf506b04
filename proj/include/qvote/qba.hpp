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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvote/ballot.hpp"
#include "qvote/rng.hpp"

namespace qvote {

inline constexpr std::size_t kAgreementMiners = 3;

/// T measured copies of the Aharonov state. Each triple holds the trits of
/// (leader, first receiver, second receiver) and is a permutation of {0,1,2}.
struct AharonovBatch {
    std::vector<std::array<std::uint8_t, 3>> trits;

    std::size_t size() const { return trits.size(); }
};

enum class SampleSource { Ideal, Statevector };

std::string_view sample_source_name(SampleSource source);
SampleSource parse_sample_source(std::string_view name);

bool is_trit_permutation(const std::array<std::uint8_t, 3> &triple);

/// Ideal mode draws uniform permutations; statevector mode measures all three
/// qubit pairs of prepare_aharonov() in the computational basis.
AharonovBatch sample_copies(std::size_t copies, Rng &rng, SampleSource source = SampleSource::Ideal);

/// Placement of the (single) complicit miner.
struct AdversaryModel {
    enum class Kind { None, RandomMiner, FixedMiner, Leader };

    Kind kind = Kind::None;
    /// 1-based miner for FixedMiner.
    unsigned miner = 0;

    static AdversaryModel none() { return {}; }
    /// gamma = 0: a random miner each iteration; gamma = i in {1,2,3}: miner i always.
    static AdversaryModel from_gamma(int gamma);
    /// Whichever miner leads the round.
    static AdversaryModel leader() { return {Kind::Leader, 0}; }
    /// Accepts "none", "leader", or a gamma value "0".."3".
    static AdversaryModel parse(std::string_view text);

    std::string name() const;
};

/// Role of the complicit miner within one round.
enum class Complicit { None, Leader, Receiver1, Receiver2 };

struct RoundRoles {
    std::size_t leader = 0;
    std::array<std::size_t, 2> receivers{1, 2};
    Complicit complicit = Complicit::None;
};

/// Draws a uniform leader and places the adversary relative to it.
RoundRoles draw_roles(const AdversaryModel &model, Rng &rng);

enum class OutcomeKind { Successful, Detectable };
std::string_view outcome_kind_name(OutcomeKind kind);

struct BroadcastOutcome {
    OutcomeKind kind = OutcomeKind::Successful;
    Complicit complicit = Complicit::None;
    int leader_bit = 0;
    std::array<int, 2> received_bits{};
    std::array<bool, 2> flags{};
    /// Bits held after flag exchange and the convince step (claimed bit for a complicit receiver).
    std::array<int, 2> final_bits{};
    bool convince_attempted = false;
    std::size_t evidence_size = 0;
    std::size_t valid_evidence = 0;
    /// Common bit of the honest receivers when kind is Successful.
    std::optional<int> agreed_bit;
    /// Honest receivers hold one common bit, equal to the leader's bit when the leader is honest.
    bool honest_agreement = false;
    /// An honest receiver ended with a bit other than an honest leader's.
    bool misled = false;
};

/// One broadcast round. `reference` carries each receiver's own copy of the
/// bit for the cross-check; without it only the trit check sets the flags.
BroadcastOutcome run_broadcast(
    int x,
    const AharonovBatch &batch,
    Complicit complicit,
    double lambda,
    const std::optional<std::array<int, 2>> &reference = std::nullopt);

BroadcastOutcome run_broadcast(
    int x, const AharonovBatch &batch, const AdversaryModel &adversary, double lambda, Rng &rng);

struct ConsensusResult {
    std::vector<std::optional<std::uint8_t>> agreed;
    std::vector<OutcomeKind> kinds;
    std::vector<RoundRoles> roles;
    std::vector<BroadcastOutcome> rounds;

    bool all_successful() const;
    /// Agreed bits; throws if any round was detectable.
    Bits agreed_bits() const;
};

/// Runs one broadcast per ballot bit with a fresh leader and a fresh batch of
/// `copies` states. `miner_bits[p]` is miner p's decoded copy of the ballot.
ConsensusResult consensus_on_ballot(
    std::span<const Bits> miner_bits,
    std::size_t copies,
    const AdversaryModel &adversary,
    double lambda,
    Rng &rng,
    SampleSource source = SampleSource::Ideal);

struct CurvePoint {
    std::size_t copies = 0;
    std::size_t trials = 0;
    double p_detectable = 0;
    double p_successful = 0;
    double stderr_detectable = 0;
    double stderr_successful = 0;
};

/// Monte-Carlo success curve. A round counts as successful when the honest
/// receivers finish with one common bit (the honest leader's bit, if any), and
/// as detectable when no honest receiver is misled and the round either
/// reaches that agreement or ends flagged as Detectable.
std::vector<CurvePoint> estimate_success(
    std::span<const std::size_t> copies_values,
    double lambda,
    const AdversaryModel &adversary,
    std::size_t trials,
    Rng &rng,
    unsigned jobs = 1,
    SampleSource source = SampleSource::Ideal);

}  // namespace qvote
