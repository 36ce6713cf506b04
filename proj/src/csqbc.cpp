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

#include "qvote/csqbc.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qvote {

void CsqbcParams::validate() const {
    if (n == 0 || n % 4 != 0) {
        throw std::invalid_argument("sequence length n must be a positive multiple of 4 (got " + std::to_string(n) + ")");
    }
    if (m < 1) {
        throw std::invalid_argument("decoy sequence count m must be at least 1");
    }
    if (k < 1) {
        throw std::invalid_argument("committed sequence count k must be at least 1");
    }
}

namespace {

constexpr std::array<StateLabel, 4> kAllLabels{StateLabel::Z0, StateLabel::Z1, StateLabel::Yplus, StateLabel::Yminus};

bool balanced(std::span<const StateLabel> labels) {
    if (labels.size() % 4 != 0) {
        return false;
    }
    for (auto l : kAllLabels) {
        if (static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l)) != labels.size() / 4) {
            return false;
        }
    }
    return true;
}

// Position at which original qubit q was measured after the cs swaps.
std::size_t measured_position(std::size_t q, std::span<const std::uint8_t> cs) {
    return cs[q / 2] ? (q ^ 1) : q;
}

}  // namespace

BalancedUniformSequence prepare_bus(const CsqbcParams &params, Rng &rng) {
    params.validate();
    std::vector<StateLabel> labels;
    labels.reserve(params.n);
    for (auto l : kAllLabels) {
        labels.insert(labels.end(), params.n / 4, l);
    }
    std::shuffle(labels.begin(), labels.end(), rng);
    auto reg = register_from_labels(labels);
    return {std::move(labels), std::move(reg)};
}

Verdict verify_bus(QubitRegister seq, std::span<const StateLabel> revealed_labels, Rng &rng) {
    if (revealed_labels.size() != seq.size() || !balanced(revealed_labels)) {
        return Verdict::Fail;
    }
    Verdict verdict = Verdict::Pass;
    for (std::size_t q = 0; q < seq.size(); q++) {
        auto label = revealed_labels[q];
        auto m = measure(std::move(seq[q]), 0, basis_of(label), rng);
        if (m.outcome != eigen_outcome(label)) {
            verdict = Verdict::Fail;
        }
    }
    return verdict;
}

Selection select_and_verify(
    std::vector<QubitRegister> sequences, const CsqbcParams &params, const LabelReveal &reveal, Rng &rng) {
    params.validate();
    if (sequences.size() != params.sequences()) {
        throw std::invalid_argument(
            "expected " + std::to_string(params.sequences()) + " sequences, got " + std::to_string(sequences.size()));
    }
    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    Selection sel;
    sel.verified_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(params.m));
    std::sort(sel.verified_indices.begin(), sel.verified_indices.end());
    for (auto idx : sel.verified_indices) {
        auto labels = reveal(idx);
        if (verify_bus(std::move(sequences[idx]), labels, rng) == Verdict::Fail) {
            sel.verdict = Verdict::Fail;
        }
    }
    for (std::size_t idx = 0; idx < sequences.size(); idx++) {
        if (!std::binary_search(sel.verified_indices.begin(), sel.verified_indices.end(), idx)) {
            sel.retained_indices.push_back(idx);
            sel.retained.push_back(std::move(sequences[idx]));
        }
    }
    return sel;
}

unsigned pair_value(int b0, int b1) {
    if ((b0 != 0 && b0 != 1) || (b1 != 0 && b1 != 1)) {
        throw std::invalid_argument("committed bits must be 0 or 1");
    }
    return static_cast<unsigned>(2 * b0 + b1);
}

double commit_angle(unsigned pair) {
    if (pair > 3) {
        throw std::invalid_argument("committed pair must be in [0, 3]");
    }
    const double b0 = static_cast<double>(pair >> 1);
    const double b1 = static_cast<double>(pair & 1);
    return std::numbers::pi * (b0 + b1 / 2);
}

QubitRegister apply_commitment(QubitRegister qs, unsigned pair, std::span<const std::uint8_t> cs) {
    if (cs.size() * 2 != qs.size()) {
        throw std::invalid_argument("swap string must have n/2 bits");
    }
    const double theta = commit_angle(pair);
    for (auto &q : qs) {
        q = apply_rx(std::move(q), 0, theta);
    }
    for (std::size_t p = 0; p < cs.size(); p++) {
        if (cs[p]) {
            std::swap(qs[2 * p], qs[2 * p + 1]);
        }
    }
    return qs;
}

CommittedSequence commit_bits(QubitRegister qs, unsigned pair, Rng &rng) {
    if (qs.empty() || qs.size() % 2 != 0) {
        throw std::invalid_argument("committed sequence must have an even, non-zero length");
    }
    Bits cs(qs.size() / 2);
    for (auto &b : cs) {
        b = coin(rng) ? 1 : 0;
    }
    auto reg = apply_commitment(std::move(qs), pair, cs);
    return {std::move(reg), std::move(cs)};
}

MeasurementRecord measure_in_bases(QubitRegister reg, std::span<const MeasBasis> bases, Rng &rng) {
    if (bases.size() != reg.size()) {
        throw std::invalid_argument("one basis per qubit is required");
    }
    MeasurementRecord rec;
    rec.bases.assign(bases.begin(), bases.end());
    rec.outcomes.reserve(reg.size());
    for (std::size_t q = 0; q < reg.size(); q++) {
        rec.outcomes.push_back(static_cast<std::uint8_t>(measure(std::move(reg[q]), 0, bases[q], rng).outcome));
    }
    return rec;
}

MeasurementRecord miner_measure(QubitRegister reg, Rng &rng) {
    std::vector<MeasBasis> bases(reg.size());
    for (auto &b : bases) {
        b = coin(rng) ? MeasBasis::Y : MeasBasis::Z;
    }
    return measure_in_bases(std::move(reg), bases, rng);
}

std::string_view decode_status_name(DecodeStatus status) {
    switch (status) {
        case DecodeStatus::Ok:
            return "OK";
        case DecodeStatus::Ambiguous:
            return "AMBIGUOUS";
        case DecodeStatus::Inconsistent:
            return "INCONSISTENT";
    }
    return "?";
}

DecodeResult decode_commitment(
    std::span<const StateLabel> labels, std::span<const std::uint8_t> cs, const MeasurementRecord &meas) {
    if (cs.size() * 2 != labels.size()) {
        throw std::invalid_argument("swap string length does not match the sequence");
    }
    if (meas.bases.size() != labels.size() || meas.outcomes.size() != labels.size()) {
        throw std::invalid_argument("measurement record length does not match the sequence");
    }
    DecodeResult result;
    for (unsigned candidate = 0; candidate < 4; candidate++) {
        bool consistent = true;
        for (std::size_t q = 0; q < labels.size() && consistent; q++) {
            const std::size_t pos = measured_position(q, cs);
            const StateLabel expected = label_advance(labels[q], static_cast<int>(candidate));
            if (basis_of(expected) == meas.bases[pos] && eigen_outcome(expected) != meas.outcomes[pos]) {
                consistent = false;
            }
        }
        if (consistent) {
            result.consistent_candidates++;
            result.bits = candidate;
        }
    }
    if (result.consistent_candidates == 1) {
        result.status = DecodeStatus::Ok;
    } else {
        result.status = result.consistent_candidates == 0 ? DecodeStatus::Inconsistent : DecodeStatus::Ambiguous;
        result.bits = 0;
    }
    return result;
}

DecodeResult decode_commitment(const CommitmentRecord &record) {
    return decode_commitment(record.qs_labels, record.cs, record.meas);
}

SessionResult run_honest_session(const CsqbcParams &params, std::span<const unsigned> pairs, Rng &rng) {
    params.validate();
    if (pairs.size() != params.k) {
        throw std::invalid_argument("one committed pair per retained sequence is required");
    }
    SessionResult out;
    std::vector<std::vector<StateLabel>> labels;
    std::vector<QubitRegister> sequences;
    for (std::size_t s = 0; s < params.sequences(); s++) {
        auto bus = prepare_bus(params, rng);
        labels.push_back(std::move(bus.labels));
        sequences.push_back(std::move(bus.reg));
    }
    out.qubits_used = params.sequences() * params.n;
    auto sel = select_and_verify(std::move(sequences), params, [&](std::size_t i) { return labels[i]; }, rng);
    out.verdict = sel.verdict;
    if (sel.verdict == Verdict::Fail) {
        return out;
    }
    for (std::size_t c = 0; c < params.k; c++) {
        auto committed = commit_bits(std::move(sel.retained[c]), pairs[c], rng);
        CommitmentRecord rec;
        rec.params = params;
        rec.qs_labels = labels[sel.retained_indices[c]];
        rec.cs = std::move(committed.cs);
        rec.meas = miner_measure(std::move(committed.reg), rng);
        rec.committed_bits = pairs[c];
        out.decodes.push_back(decode_commitment(rec));
        out.records.push_back(std::move(rec));
    }
    return out;
}

bool equivocation_exists(
    std::span<const StateLabel> labels,
    const MeasurementRecord &meas,
    unsigned committed,
    std::size_t sample_budget,
    Rng &rng) {
    const std::size_t half = labels.size() / 2;
    Bits cs(half, 0);
    auto opens_elsewhere = [&]() {
        auto r = decode_commitment(labels, cs, meas);
        return r.ok() && r.bits != committed;
    };
    if (half <= kExhaustiveSwapBits) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << half); mask++) {
            for (std::size_t p = 0; p < half; p++) {
                cs[p] = static_cast<std::uint8_t>((mask >> p) & 1);
            }
            if (opens_elsewhere()) {
                return true;
            }
        }
        return false;
    }
    for (std::size_t s = 0; s < sample_budget; s++) {
        for (auto &b : cs) {
            b = coin(rng) ? 1 : 0;
        }
        if (opens_elsewhere()) {
            return true;
        }
    }
    return false;
}

double simulate_voter_cheat(const CsqbcParams &params, std::size_t trials, Rng &rng, unsigned jobs) {
    params.validate();
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    const std::uint64_t seed = rng();
    auto hits = run_trials(trials, seed, jobs, [&](std::size_t, Rng &trial_rng) -> int {
        auto bus = prepare_bus(params, trial_rng);
        const unsigned committed = static_cast<unsigned>(uniform_index(trial_rng, 4));
        auto c = commit_bits(std::move(bus.reg), committed, trial_rng);
        auto meas = miner_measure(std::move(c.reg), trial_rng);
        return equivocation_exists(bus.labels, meas, committed, 4096, trial_rng) ? 1 : 0;
    });
    return static_cast<double>(std::accumulate(hits.begin(), hits.end(), 0)) / static_cast<double>(trials);
}

std::vector<StateLabel> probe_labels(std::size_t n) {
    return std::vector<StateLabel>(n, StateLabel::Z0);
}

std::vector<StateLabel> probe_cover_labels(std::size_t n) {
    std::vector<StateLabel> labels;
    for (auto l : kAllLabels) {
        labels.insert(labels.end(), n / 4, l);
    }
    return labels;
}

std::vector<MeasBasis> probe_bases(std::size_t n) {
    std::vector<MeasBasis> bases(n, MeasBasis::Z);
    std::fill(bases.begin() + static_cast<std::ptrdiff_t>(n / 2), bases.end(), MeasBasis::Y);
    return bases;
}

std::optional<unsigned> infer_probe_commitment(const MeasurementRecord &meas) {
    // Every probe qubit carries the same rotated |0>, so swaps are irrelevant.
    std::optional<unsigned> first;
    for (unsigned candidate = 0; candidate < 4; candidate++) {
        const StateLabel expected = label_advance(StateLabel::Z0, static_cast<int>(candidate));
        bool consistent = true;
        for (std::size_t q = 0; q < meas.bases.size() && consistent; q++) {
            if (basis_of(expected) == meas.bases[q] && eigen_outcome(expected) != meas.outcomes[q]) {
                consistent = false;
            }
        }
        if (consistent && !first) {
            first = candidate;
        }
    }
    return first;
}

MinerCheatStats simulate_miner_cheat(const CsqbcParams &params, std::size_t trials, Rng &rng, unsigned jobs) {
    params.validate();
    if (params.k != 1) {
        throw std::invalid_argument("the probe attack is modelled for k = 1");
    }
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    struct Trial {
        int success = 0;
        int detected = 0;
        int retained = 0;
    };
    const std::uint64_t seed = rng();
    auto results = run_trials(trials, seed, jobs, [&](std::size_t, Rng &trial_rng) {
        const std::size_t probe_index = uniform_index(trial_rng, params.sequences());
        std::vector<std::vector<StateLabel>> labels;
        std::vector<QubitRegister> sequences;
        for (std::size_t s = 0; s < params.sequences(); s++) {
            if (s == probe_index) {
                labels.push_back(probe_labels(params.n));
                sequences.push_back(register_from_labels(labels.back()));
            } else {
                auto bus = prepare_bus(params, trial_rng);
                labels.push_back(std::move(bus.labels));
                sequences.push_back(std::move(bus.reg));
            }
        }
        auto reveal = [&](std::size_t i) { return i == probe_index ? probe_cover_labels(params.n) : labels[i]; };
        auto sel = select_and_verify(std::move(sequences), params, reveal, trial_rng);
        Trial t;
        if (sel.retained_indices.front() != probe_index) {
            t.detected = sel.verdict == Verdict::Fail ? 1 : 0;
            return t;
        }
        t.retained = 1;
        const unsigned committed = static_cast<unsigned>(uniform_index(trial_rng, 4));
        auto c = commit_bits(std::move(sel.retained.front()), committed, trial_rng);
        auto meas = measure_in_bases(std::move(c.reg), probe_bases(params.n), trial_rng);
        auto guess = infer_probe_commitment(meas);
        t.success = (guess && *guess == committed) ? 1 : 0;
        return t;
    });
    MinerCheatStats stats;
    stats.trials = trials;
    for (const auto &t : results) {
        stats.success_rate += t.success;
        stats.detection_rate += t.detected;
        stats.retention_rate += t.retained;
    }
    stats.success_rate /= static_cast<double>(trials);
    stats.detection_rate /= static_cast<double>(trials);
    stats.retention_rate /= static_cast<double>(trials);
    return stats;
}

}  // namespace qvote
