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

#include "qvote/ballot.hpp"

#include <numeric>
#include <stdexcept>

namespace qvote {

std::size_t ceil_log2(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("ceil_log2 of zero");
    }
    std::size_t k = 0;
    while ((std::uint64_t{1} << k) < n) {
        k++;
    }
    return k;
}

std::size_t committed_pairs(std::size_t voters) {
    if (voters < 2) {
        throw std::invalid_argument("at least two voters are required");
    }
    return ceil_log2(voters);
}

std::size_t ballot_width(std::size_t voters) {
    return 2 * committed_pairs(voters);
}

Bits encode_bits(std::uint64_t value, std::size_t width) {
    if (width < 64 && (value >> width) != 0) {
        throw std::invalid_argument("value does not fit in the requested width");
    }
    Bits bits(width, 0);
    for (std::size_t b = 0; b < width; b++) {
        bits[width - 1 - b] = static_cast<std::uint8_t>((value >> b) & 1);
    }
    return bits;
}

std::uint64_t decode_bits(std::span<const std::uint8_t> bits) {
    std::uint64_t v = 0;
    for (auto b : bits) {
        v = (v << 1) | (b & 1);
    }
    return v;
}

std::vector<std::uint64_t> VoteMatrix::column(std::size_t j) const {
    std::vector<std::uint64_t> col;
    col.reserve(voters);
    for (std::size_t i = 0; i < voters; i++) {
        col.push_back(at(i, j));
    }
    return col;
}

bool VoteMatrix::satisfies_invariants() const {
    if (voters < 2 || entries.size() != voters) {
        return false;
    }
    for (std::size_t i = 0; i < voters; i++) {
        const auto &row = entries[i];
        if (row.size() != voters || row[i] == 0) {
            return false;
        }
        std::uint64_t sum = 0;
        for (std::size_t j = 0; j < voters; j++) {
            if (j != i && row[j] > entry_bound) {
                return false;
            }
            sum += row[j];
        }
        if (sum % (voters + 1) != 0) {
            return false;
        }
    }
    return true;
}

std::vector<std::uint64_t> complete_row(std::size_t i, std::vector<std::uint64_t> row) {
    const std::size_t n = row.size();
    if (n < 2) {
        throw std::invalid_argument("at least two voters are required");
    }
    if (i >= n) {
        throw std::out_of_range("voter index out of range");
    }
    const std::uint64_t modulus = n + 1;
    std::uint64_t residue = 0;
    for (std::size_t j = 0; j < n; j++) {
        if (j != i) {
            residue = (residue + row[j]) % modulus;
        }
    }
    row[i] = residue == 0 ? modulus : modulus - residue;
    return row;
}

std::vector<std::uint64_t> generate_row(std::size_t i, std::size_t voters, std::uint64_t entry_bound, Rng &rng) {
    if (voters < 2) {
        throw std::invalid_argument("at least two voters are required");
    }
    if (entry_bound < 1) {
        throw std::invalid_argument("entry bound must be at least 1");
    }
    if (i >= voters) {
        throw std::out_of_range("voter index out of range");
    }
    std::uniform_int_distribution<std::uint64_t> dist(0, entry_bound);
    std::vector<std::uint64_t> row(voters, 0);
    for (std::size_t j = 0; j < voters; j++) {
        if (j != i) {
            row[j] = dist(rng);
        }
    }
    return complete_row(i, std::move(row));
}

VoteMatrix generate_matrix(std::size_t voters, std::uint64_t entry_bound, Rng &rng) {
    VoteMatrix m;
    m.voters = voters;
    m.entry_bound = entry_bound;
    for (std::size_t i = 0; i < voters; i++) {
        m.entries.push_back(generate_row(i, voters, entry_bound, rng));
    }
    return m;
}

MaskedBallot masked_ballot(
    std::size_t voter, std::span<const std::uint64_t> received_column, int vote, std::size_t voters) {
    if (vote != 0 && vote != 1) {
        throw std::invalid_argument("vote must be 0 or 1");
    }
    if (received_column.size() != voters) {
        throw std::invalid_argument("received column must hold one share per voter");
    }
    const std::uint64_t modulus = voters + 1;
    std::uint64_t value = static_cast<std::uint64_t>(vote);
    for (auto share : received_column) {
        value = (value + share % modulus) % modulus;
    }
    return {voter, value, encode_bits(value, ballot_width(voters))};
}

std::uint64_t tally(std::span<const MaskedBallot> ballots, std::size_t voters) {
    if (ballots.size() != voters) {
        throw std::invalid_argument("tally needs exactly one ballot per voter");
    }
    const std::uint64_t modulus = voters + 1;
    std::uint64_t sum = 0;
    for (const auto &b : ballots) {
        sum = (sum + b.value % modulus) % modulus;
    }
    return sum;
}

AuditVerdict audit(const AuditClaim &claim) {
    return claim.value_from_i == claim.value_from_j ? AuditVerdict::Honest : AuditVerdict::Cheating;
}

nlohmann::json to_json(const VoteMatrix &matrix) {
    return {{"voters", matrix.voters}, {"entry_bound", matrix.entry_bound}, {"matrix", matrix.entries}};
}

nlohmann::json to_json(const MaskedBallot &ballot) {
    std::string bits;
    for (auto b : ballot.bits) {
        bits.push_back(b ? '1' : '0');
    }
    return {{"voter", ballot.voter}, {"value", ballot.value}, {"bits", bits}};
}

VoteMatrix vote_matrix_from_json(const nlohmann::json &doc) {
    VoteMatrix m;
    m.voters = doc.at("voters").get<std::size_t>();
    m.entry_bound = doc.at("entry_bound").get<std::uint64_t>();
    m.entries = doc.at("matrix").get<std::vector<std::vector<std::uint64_t>>>();
    return m;
}

MaskedBallot masked_ballot_from_json(const nlohmann::json &doc) {
    MaskedBallot b;
    b.voter = doc.at("voter").get<std::size_t>();
    b.value = doc.at("value").get<std::uint64_t>();
    for (char c : doc.at("bits").get<std::string>()) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("ballot bits must be a 0/1 string");
        }
        b.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return b;
}

}  // namespace qvote
