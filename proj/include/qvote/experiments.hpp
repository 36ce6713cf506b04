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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qvote/csqbc.hpp"
#include "qvote/qba.hpp"

namespace qvote {

struct CsqbcRow {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    double success_rate = 0;
    double stderr_rate = 0;
};

/// Honest two-bit commitments per n; an AMBIGUOUS opening counts as failure.
std::vector<CsqbcRow> run_experiment_csqbc(
    std::span<const std::size_t> n_values, std::size_t m, std::size_t trials, Rng &rng, unsigned jobs = 1);

std::vector<CurvePoint> run_experiment_qba(
    std::span<const std::size_t> copies_values,
    double lambda,
    const AdversaryModel &adversary,
    std::size_t trials,
    Rng &rng,
    unsigned jobs = 1,
    SampleSource source = SampleSource::Ideal);

struct FidelityRow {
    double p = 0;
    double fidelity = 0;
    double trace = 0;
    double hermiticity_error = 0;
    double min_eigenvalue = 0;
    /// Density-matrix invariants held after every single-qubit channel.
    bool valid_every_step = true;
};

/// Depolarizes each qubit of the Aharonov state with probability p and
/// compares against the ideal state.
std::vector<FidelityRow> run_experiment_fidelity(std::span<const double> noise_levels);

enum class CheatMode { Voter, Miner };

struct CheatRow {
    CheatMode mode = CheatMode::Voter;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    double measured = 0;
    double stderr_rate = 0;
    /// Miner: 1/(m+1). Voter: not defined, written as empty.
    double reference = 0;
    /// Analytic value quoted for the original scheme: (1/2)^n or (1 - 4^-n)/(m+1).
    double published = 0;
};

/// Voter mode sweeps n_values at m_values.front(); miner mode sweeps m_values at n_values.front().
std::vector<CheatRow> run_experiment_cheat(
    CheatMode mode,
    std::span<const std::size_t> n_values,
    std::span<const std::size_t> m_values,
    std::size_t trials,
    Rng &rng,
    unsigned jobs = 1);

void write_csv(std::ostream &out, std::span<const CsqbcRow> rows);
void write_csv(std::ostream &out, std::span<const CurvePoint> rows);
void write_csv(std::ostream &out, std::span<const FidelityRow> rows);
void write_csv(std::ostream &out, std::span<const CheatRow> rows);

/// Shortest round-trip text for a double ("%.17g" trimmed to what is needed).
std::string format_number(double value);

}  // namespace qvote
