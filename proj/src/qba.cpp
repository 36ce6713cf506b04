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

#include "qvote/qba.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qvote/quantum.hpp"

namespace qvote {

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 6> kPermutations{{
    {0, 1, 2},
    {0, 2, 1},
    {1, 0, 2},
    {1, 2, 0},
    {2, 0, 1},
    {2, 1, 0},
}};

const QuantumState &aharonov_state() {
    static const QuantumState state = prepare_aharonov();
    return state;
}

bool is_honest_receiver(Complicit complicit, std::size_t p) {
    return !(complicit == Complicit::Receiver1 && p == 0) && !(complicit == Complicit::Receiver2 && p == 1);
}

}  // namespace

std::string_view sample_source_name(SampleSource source) {
    return source == SampleSource::Ideal ? "ideal" : "statevector";
}

SampleSource parse_sample_source(std::string_view name) {
    if (name == "ideal") {
        return SampleSource::Ideal;
    }
    if (name == "statevector") {
        return SampleSource::Statevector;
    }
    throw std::invalid_argument("unknown sample source '" + std::string(name) + "'");
}

bool is_trit_permutation(const std::array<std::uint8_t, 3> &triple) {
    auto sorted = triple;
    std::sort(sorted.begin(), sorted.end());
    return sorted == std::array<std::uint8_t, 3>{0, 1, 2};
}

AharonovBatch sample_copies(std::size_t copies, Rng &rng, SampleSource source) {
    AharonovBatch batch;
    batch.trits.reserve(copies);
    for (std::size_t t = 0; t < copies; t++) {
        if (source == SampleSource::Ideal) {
            batch.trits.push_back(kPermutations[uniform_index(rng, kPermutations.size())]);
            continue;
        }
        QuantumState state = aharonov_state();
        std::array<int, 6> bits{};
        for (std::size_t q = 0; q < 6; q++) {
            auto m = measure(std::move(state), q, MeasBasis::Z, rng);
            bits[q] = m.outcome;
            state = std::move(m.post);
        }
        std::array<std::uint8_t, 3> triple{};
        for (std::size_t p = 0; p < 3; p++) {
            int trit = trit_from_pair(bits[2 * p], bits[2 * p + 1]);
            if (trit < 0) {
                throw std::logic_error("Aharonov measurement produced the pattern 11");
            }
            triple[p] = static_cast<std::uint8_t>(trit);
        }
        batch.trits.push_back(triple);
    }
    return batch;
}

AdversaryModel AdversaryModel::from_gamma(int gamma) {
    if (gamma == 0) {
        return {Kind::RandomMiner, 0};
    }
    if (gamma >= 1 && gamma <= 3) {
        return {Kind::FixedMiner, static_cast<unsigned>(gamma)};
    }
    throw std::invalid_argument("gamma must be 0, 1, 2 or 3");
}

AdversaryModel AdversaryModel::parse(std::string_view text) {
    if (text == "none") {
        return none();
    }
    if (text == "leader") {
        return leader();
    }
    if (text.size() == 1 && text[0] >= '0' && text[0] <= '9') {
        return from_gamma(text[0] - '0');
    }
    throw std::invalid_argument("adversary must be none, leader, or gamma 0..3 (got '" + std::string(text) + "')");
}

std::string AdversaryModel::name() const {
    switch (kind) {
        case Kind::None:
            return "none";
        case Kind::RandomMiner:
            return "0";
        case Kind::FixedMiner:
            return std::to_string(miner);
        case Kind::Leader:
            return "leader";
    }
    return "?";
}

RoundRoles draw_roles(const AdversaryModel &model, Rng &rng) {
    RoundRoles roles;
    roles.leader = uniform_index(rng, kAgreementMiners);
    std::size_t r = 0;
    for (std::size_t p = 0; p < kAgreementMiners; p++) {
        if (p != roles.leader) {
            roles.receivers[r++] = p;
        }
    }
    std::optional<std::size_t> bad;
    switch (model.kind) {
        case AdversaryModel::Kind::None:
            break;
        case AdversaryModel::Kind::RandomMiner:
            bad = uniform_index(rng, kAgreementMiners);
            break;
        case AdversaryModel::Kind::FixedMiner:
            bad = model.miner - 1;
            break;
        case AdversaryModel::Kind::Leader:
            bad = roles.leader;
            break;
    }
    if (bad) {
        if (*bad == roles.leader) {
            roles.complicit = Complicit::Leader;
        } else if (*bad == roles.receivers[0]) {
            roles.complicit = Complicit::Receiver1;
        } else {
            roles.complicit = Complicit::Receiver2;
        }
    }
    return roles;
}

std::string_view outcome_kind_name(OutcomeKind kind) {
    return kind == OutcomeKind::Successful ? "SUCCESSFUL" : "DETECTABLE";
}

BroadcastOutcome run_broadcast(
    int x,
    const AharonovBatch &batch,
    Complicit complicit,
    double lambda,
    const std::optional<std::array<int, 2>> &reference) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must be in (0, 1]");
    }
    if (x != 0 && x != 1) {
        throw std::invalid_argument("broadcast bit must be 0 or 1");
    }
    const auto &trits = batch.trits;
    auto indices_where_leader_has = [&](int bit) {
        std::vector<std::size_t> idx;
        for (std::size_t t = 0; t < trits.size(); t++) {
            if (trits[t][0] == bit) {
                idx.push_back(t);
            }
        }
        return idx;
    };

    BroadcastOutcome out;
    out.complicit = complicit;
    out.leader_bit = x;

    // Leader: an honest one sends x with the indices where it measured x. A
    // complicit one tells the second receiver 1-x, with the matching index set.
    std::array<std::vector<std::size_t>, 2> index_sets;
    out.received_bits = {x, x};
    index_sets[0] = indices_where_leader_has(x);
    if (complicit == Complicit::Leader) {
        out.received_bits[1] = 1 - x;
        index_sets[1] = indices_where_leader_has(1 - x);
    } else {
        index_sets[1] = index_sets[0];
    }

    std::array<int, 2> bits{};
    for (std::size_t p = 0; p < 2; p++) {
        const int got = out.received_bits[p];
        if (!is_honest_receiver(complicit, p)) {
            // Claims the opposite bit and a consistent flag to force the convince step.
            bits[p] = 1 - got;
            out.flags[p] = true;
            continue;
        }
        bool consistent = !reference || (*reference)[p] == got;
        for (auto t : index_sets[p]) {
            if (trits[t][1 + p] == got) {
                consistent = false;
                break;
            }
        }
        bits[p] = got;
        out.flags[p] = consistent;
    }

    out.final_bits = bits;
    if (!out.flags[0] && !out.flags[1]) {
        out.kind = OutcomeKind::Detectable;
    } else if (out.flags[0] && out.flags[1] && bits[0] == bits[1]) {
        out.kind = OutcomeKind::Successful;
    } else if (out.flags[0] != out.flags[1]) {
        const std::size_t loser = out.flags[0] ? 1 : 0;
        out.final_bits[loser] = bits[1 - loser];
        out.kind = OutcomeKind::Successful;
    } else {
        // Receiver 1 tries to convince receiver 2.
        out.convince_attempted = true;
        std::vector<std::size_t> evidence;
        if (is_honest_receiver(complicit, 0)) {
            for (auto t : index_sets[0]) {
                if (trits[t][1] == 1 - bits[0]) {
                    evidence.push_back(t);
                }
            }
        } else {
            // Forged evidence: every index outside the set it was actually sent.
            for (std::size_t t = 0; t < trits.size(); t++) {
                if (!std::binary_search(index_sets[0].begin(), index_sets[0].end(), t)) {
                    evidence.push_back(t);
                }
            }
        }
        out.evidence_size = evidence.size();
        bool convinced = false;
        if (is_honest_receiver(complicit, 1)) {
            for (auto t : evidence) {
                const bool outside = !std::binary_search(index_sets[1].begin(), index_sets[1].end(), t);
                if (outside && trits[t][2] == 2) {
                    out.valid_evidence++;
                }
            }
            convinced = !evidence.empty() && static_cast<double>(out.valid_evidence) >=
                                                 lambda * static_cast<double>(evidence.size()) - 1e-12;
        }
        if (convinced) {
            out.final_bits[1] = bits[0];
            out.kind = OutcomeKind::Successful;
        } else {
            out.kind = OutcomeKind::Detectable;
        }
    }

    std::optional<int> common;
    bool agree = true;
    for (std::size_t p = 0; p < 2; p++) {
        if (!is_honest_receiver(complicit, p)) {
            continue;
        }
        if (common && *common != out.final_bits[p]) {
            agree = false;
        }
        common = out.final_bits[p];
        if (complicit != Complicit::Leader && out.final_bits[p] != x) {
            out.misled = true;
        }
    }
    out.honest_agreement = agree && !out.misled;
    if (out.kind == OutcomeKind::Successful) {
        out.agreed_bit = common;
    }
    return out;
}

BroadcastOutcome run_broadcast(
    int x, const AharonovBatch &batch, const AdversaryModel &adversary, double lambda, Rng &rng) {
    return run_broadcast(x, batch, draw_roles(adversary, rng).complicit, lambda);
}

bool ConsensusResult::all_successful() const {
    return std::all_of(kinds.begin(), kinds.end(), [](OutcomeKind k) { return k == OutcomeKind::Successful; });
}

Bits ConsensusResult::agreed_bits() const {
    Bits bits;
    for (const auto &b : agreed) {
        if (!b) {
            throw std::logic_error("consensus did not agree on every bit");
        }
        bits.push_back(*b);
    }
    return bits;
}

ConsensusResult consensus_on_ballot(
    std::span<const Bits> miner_bits,
    std::size_t copies,
    const AdversaryModel &adversary,
    double lambda,
    Rng &rng,
    SampleSource source) {
    if (miner_bits.size() != kAgreementMiners) {
        throw std::invalid_argument("agreement runs among exactly 3 miners");
    }
    const std::size_t width = miner_bits[0].size();
    for (const auto &b : miner_bits) {
        if (b.size() != width) {
            throw std::invalid_argument("miners hold ballots of different widths");
        }
    }
    ConsensusResult result;
    for (std::size_t i = 0; i < width; i++) {
        RoundRoles roles = draw_roles(adversary, rng);
        AharonovBatch batch = sample_copies(copies, rng, source);
        const int x = miner_bits[roles.leader][i];
        std::array<int, 2> refs{miner_bits[roles.receivers[0]][i], miner_bits[roles.receivers[1]][i]};
        BroadcastOutcome out = run_broadcast(x, batch, roles.complicit, lambda, refs);
        result.kinds.push_back(out.kind);
        result.agreed.push_back(
            out.agreed_bit ? std::optional<std::uint8_t>(static_cast<std::uint8_t>(*out.agreed_bit)) : std::nullopt);
        result.roles.push_back(roles);
        result.rounds.push_back(std::move(out));
    }
    return result;
}

std::vector<CurvePoint> estimate_success(
    std::span<const std::size_t> copies_values,
    double lambda,
    const AdversaryModel &adversary,
    std::size_t trials,
    Rng &rng,
    unsigned jobs,
    SampleSource source) {
    if (copies_values.empty()) {
        throw std::invalid_argument("empty copy-count range");
    }
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must be in (0, 1]");
    }
    std::vector<CurvePoint> curve;
    for (auto copies : copies_values) {
        const std::uint64_t seed = rng();
        struct Tally {
            int detectable = 0;
            int successful = 0;
        };
        auto results = run_trials(trials, seed, jobs, [&](std::size_t, Rng &trial_rng) {
            RoundRoles roles = draw_roles(adversary, trial_rng);
            const int x = coin(trial_rng) ? 1 : 0;
            AharonovBatch batch = sample_copies(copies, trial_rng, source);
            BroadcastOutcome out = run_broadcast(x, batch, roles.complicit, lambda);
            Tally t;
            t.successful = out.honest_agreement ? 1 : 0;
            t.detectable = (!out.misled && (out.honest_agreement || out.kind == OutcomeKind::Detectable)) ? 1 : 0;
            return t;
        });
        CurvePoint pt;
        pt.copies = copies;
        pt.trials = trials;
        for (const auto &t : results) {
            pt.p_detectable += t.detectable;
            pt.p_successful += t.successful;
        }
        const auto n = static_cast<double>(trials);
        pt.p_detectable /= n;
        pt.p_successful /= n;
        pt.stderr_detectable = std::sqrt(pt.p_detectable * (1 - pt.p_detectable) / n);
        pt.stderr_successful = std::sqrt(pt.p_successful * (1 - pt.p_successful) / n);
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace qvote
