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

#include "qvote/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "qvote/quantum.hpp"

namespace qvote {

namespace {

double binomial_stderr(double p, std::size_t trials) {
    return std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

}  // namespace

std::vector<CsqbcRow> run_experiment_csqbc(
    std::span<const std::size_t> n_values, std::size_t m, std::size_t trials, Rng &rng, unsigned jobs) {
    if (n_values.empty()) {
        throw std::invalid_argument("no sequence lengths given");
    }
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    for (auto n : n_values) {
        CsqbcParams{n, m, 1}.validate();
    }
    std::vector<CsqbcRow> rows;
    for (auto n : n_values) {
        const CsqbcParams params{n, m, 1};
        const std::uint64_t seed = rng();
        auto hits = run_trials(trials, seed, jobs, [&](std::size_t, Rng &trial_rng) -> int {
            const unsigned pair = static_cast<unsigned>(uniform_index(trial_rng, 4));
            auto session = run_honest_session(params, std::span<const unsigned>(&pair, 1), trial_rng);
            const auto &d = session.decodes.front();
            return (d.ok() && d.bits == pair) ? 1 : 0;
        });
        CsqbcRow row{n, m, trials, 0, 0};
        row.success_rate = static_cast<double>(std::accumulate(hits.begin(), hits.end(), 0)) / static_cast<double>(trials);
        row.stderr_rate = binomial_stderr(row.success_rate, trials);
        rows.push_back(row);
    }
    return rows;
}

std::vector<CurvePoint> run_experiment_qba(
    std::span<const std::size_t> copies_values,
    double lambda,
    const AdversaryModel &adversary,
    std::size_t trials,
    Rng &rng,
    unsigned jobs,
    SampleSource source) {
    return estimate_success(copies_values, lambda, adversary, trials, rng, jobs, source);
}

std::vector<FidelityRow> run_experiment_fidelity(std::span<const double> noise_levels) {
    for (auto p : noise_levels) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("noise level must be in [0, 1]");
        }
    }
    const QuantumState ideal = prepare_aharonov();
    std::vector<FidelityRow> rows;
    for (auto p : noise_levels) {
        DensityMatrix rho = DensityMatrix::from_pure(ideal);
        FidelityRow row;
        row.p = p;
        for (std::size_t q = 0; q < ideal.num_qubits(); q++) {
            rho = depolarize(std::move(rho), q, p);
            row.valid_every_step = row.valid_every_step && rho.is_valid();
        }
        row.fidelity = fidelity(rho, ideal);
        row.trace = rho.trace();
        row.hermiticity_error = rho.hermiticity_error();
        row.min_eigenvalue = rho.min_eigenvalue();
        rows.push_back(row);
    }
    return rows;
}

std::vector<CheatRow> run_experiment_cheat(
    CheatMode mode,
    std::span<const std::size_t> n_values,
    std::span<const std::size_t> m_values,
    std::size_t trials,
    Rng &rng,
    unsigned jobs) {
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
    if (n_values.empty() || m_values.empty()) {
        throw std::invalid_argument("empty parameter list");
    }
    std::vector<CheatRow> rows;
    if (mode == CheatMode::Voter) {
        for (auto n : n_values) {
            const CsqbcParams params{n, m_values.front(), 1};
            CheatRow row;
            row.mode = mode;
            row.n = n;
            row.m = params.m;
            row.trials = trials;
            row.measured = simulate_voter_cheat(params, trials, rng, jobs);
            row.stderr_rate = binomial_stderr(row.measured, trials);
            row.reference = std::nan("");
            row.published = std::pow(0.5, static_cast<double>(n));
            rows.push_back(row);
        }
        return rows;
    }
    for (auto m : m_values) {
        const CsqbcParams params{n_values.front(), m, 1};
        auto stats = simulate_miner_cheat(params, trials, rng, jobs);
        CheatRow row;
        row.mode = mode;
        row.n = params.n;
        row.m = m;
        row.trials = trials;
        row.measured = stats.success_rate;
        row.stderr_rate = binomial_stderr(stats.success_rate, trials);
        row.reference = 1.0 / static_cast<double>(m + 1);
        row.published = (1.0 - std::pow(0.25, static_cast<double>(params.n))) / static_cast<double>(m + 1);
        rows.push_back(row);
    }
    return rows;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "";
    }
    char buf[40];
    for (int precision = 1; precision <= 17; precision++) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

void write_csv(std::ostream &out, std::span<const CsqbcRow> rows) {
    out << "n,m,trials,success_rate,stderr\n";
    for (const auto &r : rows) {
        out << r.n << ',' << r.m << ',' << r.trials << ',' << format_number(r.success_rate) << ','
            << format_number(r.stderr_rate) << '\n';
    }
}

void write_csv(std::ostream &out, std::span<const CurvePoint> rows) {
    out << "T,trials,p_detectable,p_successful,stderr_detectable,stderr_successful\n";
    for (const auto &r : rows) {
        out << r.copies << ',' << r.trials << ',' << format_number(r.p_detectable) << ','
            << format_number(r.p_successful) << ',' << format_number(r.stderr_detectable) << ','
            << format_number(r.stderr_successful) << '\n';
    }
}

void write_csv(std::ostream &out, std::span<const FidelityRow> rows) {
    out << "p,fidelity,trace,hermiticity_error,min_eigenvalue\n";
    for (const auto &r : rows) {
        out << format_number(r.p) << ',' << format_number(r.fidelity) << ',' << format_number(r.trace) << ','
            << format_number(r.hermiticity_error) << ',' << format_number(r.min_eigenvalue) << '\n';
    }
}

void write_csv(std::ostream &out, std::span<const CheatRow> rows) {
    out << "mode,n,m,trials,measured,stderr,reference,published\n";
    for (const auto &r : rows) {
        out << (r.mode == CheatMode::Voter ? "voter" : "miner") << ',' << r.n << ',' << r.m << ',' << r.trials << ','
            << format_number(r.measured) << ',' << format_number(r.stderr_rate) << ','
            << format_number(r.reference) << ',' << format_number(r.published) << '\n';
    }
}

}  // namespace qvote
