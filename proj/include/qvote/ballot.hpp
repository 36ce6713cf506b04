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
#include <span>
#include <vector>

#include "json.hpp"
#include "qvote/rng.hpp"

namespace qvote {

/// Bit strings are stored one bit per byte, values 0 or 1, most significant first.
using Bits = std::vector<std::uint8_t>;

inline constexpr std::uint64_t kDefaultEntryBound = std::uint64_t{1} << 16;

/// ceil(log2(n)) for n >= 1.
std::size_t ceil_log2(std::uint64_t n);

/// Number of two-bit commitments a masked ballot needs for N voters.
std::size_t committed_pairs(std::size_t voters);
/// Masked ballot width in bits, 2 * ceil(log2 N).
std::size_t ballot_width(std::size_t voters);

Bits encode_bits(std::uint64_t value, std::size_t width);
std::uint64_t decode_bits(std::span<const std::uint8_t> bits);

/// Integer voting matrix. Row i is generated by voter i; every row sums to a
/// multiple of N+1 and every diagonal entry is positive.
struct VoteMatrix {
    std::size_t voters = 0;
    std::uint64_t entry_bound = kDefaultEntryBound;
    std::vector<std::vector<std::uint64_t>> entries;

    std::uint64_t at(std::size_t i, std::size_t j) const { return entries.at(i).at(j); }
    /// Column j, i.e. the shares voter j receives.
    std::vector<std::uint64_t> column(std::size_t j) const;
    bool satisfies_invariants() const;
};

/// Fills the diagonal of an otherwise complete row with the smallest positive
/// value that makes the row sum divisible by N+1.
std::vector<std::uint64_t> complete_row(std::size_t i, std::vector<std::uint64_t> row);

std::vector<std::uint64_t> generate_row(std::size_t i, std::size_t voters, std::uint64_t entry_bound, Rng &rng);
VoteMatrix generate_matrix(std::size_t voters, std::uint64_t entry_bound, Rng &rng);

struct MaskedBallot {
    std::size_t voter = 0;
    std::uint64_t value = 0;
    Bits bits;

    bool operator==(const MaskedBallot &) const = default;
};

MaskedBallot masked_ballot(
    std::size_t voter, std::span<const std::uint64_t> received_column, int vote, std::size_t voters);

/// Sum of masked values mod (N+1).
std::uint64_t tally(std::span<const MaskedBallot> ballots, std::size_t voters);

enum class AuditVerdict { Honest, Cheating };

struct AuditClaim {
    std::size_t asker = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint64_t value_from_i = 0;
    std::uint64_t value_from_j = 0;
};

AuditVerdict audit(const AuditClaim &claim);

nlohmann::json to_json(const VoteMatrix &matrix);
nlohmann::json to_json(const MaskedBallot &ballot);
VoteMatrix vote_matrix_from_json(const nlohmann::json &doc);
MaskedBallot masked_ballot_from_json(const nlohmann::json &doc);

}  // namespace qvote
