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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qvote/ballot.hpp"
#include "qvote/quantum.hpp"
#include "qvote/rng.hpp"

namespace qvote {

/// Sequence length n, decoy count m and committed-sequence count k.
struct CsqbcParams {
    std::size_t n = 16;
    std::size_t m = 3;
    std::size_t k = 1;

    /// Throws std::invalid_argument unless n > 0, n % 4 == 0, m >= 1, k >= 1.
    void validate() const;
    std::size_t sequences() const { return m + k; }
};

enum class Verdict { Pass, Fail };

/// Miner-side preparation record plus the qubits it describes.
struct BalancedUniformSequence {
    std::vector<StateLabel> labels;
    QubitRegister reg;
};

BalancedUniformSequence prepare_bus(const CsqbcParams &params, Rng &rng);

/// Measures every qubit in the basis of its revealed label. Passes only if all
/// outcomes match and the revealed labels are balanced.
Verdict verify_bus(QubitRegister seq, std::span<const StateLabel> revealed_labels, Rng &rng);

/// Miner's answer when the voter asks for the labels of sequence `index`.
using LabelReveal = std::function<std::vector<StateLabel>(std::size_t index)>;

struct Selection {
    Verdict verdict = Verdict::Pass;
    std::vector<std::size_t> verified_indices;
    std::vector<std::size_t> retained_indices;
    std::vector<QubitRegister> retained;
};

/// Verifies a uniformly random m-subset of the m+k sequences and keeps the rest.
Selection select_and_verify(
    std::vector<QubitRegister> sequences, const CsqbcParams &params, const LabelReveal &reveal, Rng &rng);

/// Two committed bits b0 b1 as the integer 2*b0 + b1, which is also the number
/// of quarter turns of the commitment rotation.
unsigned pair_value(int b0, int b1);
double commit_angle(unsigned pair);

/// Rotates every qubit by R_X(pi(b0 + b1/2)) and swaps qubits (2p, 2p+1) for every cs[p] = 1.
QubitRegister apply_commitment(QubitRegister qs, unsigned pair, std::span<const std::uint8_t> cs);

struct CommittedSequence {
    QubitRegister reg;
    Bits cs;
};

CommittedSequence commit_bits(QubitRegister qs, unsigned pair, Rng &rng);

struct MeasurementRecord {
    std::vector<MeasBasis> bases;
    Bits outcomes;
};

/// Measures each qubit in an independently chosen uniform basis.
MeasurementRecord miner_measure(QubitRegister reg, Rng &rng);
MeasurementRecord measure_in_bases(QubitRegister reg, std::span<const MeasBasis> bases, Rng &rng);

struct CommitmentRecord {
    CsqbcParams params;
    std::vector<StateLabel> qs_labels;
    Bits cs;
    MeasurementRecord meas;
    unsigned committed_bits = 0;
};

enum class DecodeStatus { Ok, Ambiguous, Inconsistent };
std::string_view decode_status_name(DecodeStatus status);

struct DecodeResult {
    DecodeStatus status = DecodeStatus::Inconsistent;
    unsigned bits = 0;
    unsigned consistent_candidates = 0;

    bool ok() const { return status == DecodeStatus::Ok; }
};

/// Undoes the cs pair swaps on the measurement record and returns the unique
/// rotation whose deterministic qubits all match.
DecodeResult decode_commitment(
    std::span<const StateLabel> labels, std::span<const std::uint8_t> cs, const MeasurementRecord &meas);
DecodeResult decode_commitment(const CommitmentRecord &record);

/// One honest voter-to-miner session with k committed pairs: preparation,
/// selection and verification, commitment, measurement, opening.
struct SessionResult {
    Verdict verdict = Verdict::Pass;
    std::vector<CommitmentRecord> records;
    std::vector<DecodeResult> decodes;
    std::size_t qubits_used = 0;
};

SessionResult run_honest_session(const CsqbcParams &params, std::span<const unsigned> pairs, Rng &rng);

/// True if some reveal cs' opens the record to a value other than `committed`.
/// All 2^(n/2) strings are tried when n/2 <= kExhaustiveSwapBits, otherwise
/// `sample_budget` random ones.
inline constexpr std::size_t kExhaustiveSwapBits = 12;
bool equivocation_exists(
    std::span<const StateLabel> labels,
    const MeasurementRecord &meas,
    unsigned committed,
    std::size_t sample_budget,
    Rng &rng);

/// Fraction of trials in which a voter could open its commitment to a
/// different value.
double simulate_voter_cheat(const CsqbcParams &params, std::size_t trials, Rng &rng, unsigned jobs = 1);

// Probe attack: the miner plants one all-|0> sequence among the m+1 it sends.
std::vector<StateLabel> probe_labels(std::size_t n);
/// Balanced label list a cheating miner reveals if its probe is checked.
std::vector<StateLabel> probe_cover_labels(std::size_t n);
/// First half Z, second half Y.
std::vector<MeasBasis> probe_bases(std::size_t n);
/// Committed pair inferred from a measured probe; nullopt if no candidate fits.
std::optional<unsigned> infer_probe_commitment(const MeasurementRecord &meas);

struct MinerCheatStats {
    std::size_t trials = 0;
    double success_rate = 0;
    double detection_rate = 0;
    double retention_rate = 0;
};

/// Requires params.k == 1.
MinerCheatStats simulate_miner_cheat(const CsqbcParams &params, std::size_t trials, Rng &rng, unsigned jobs = 1);

}  // namespace qvote
