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

#include <map>
#include <numbers>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace qvote;
using qvote::testing::chi2_homogeneity;
using qvote::testing::chi2_quantile;
using qvote::testing::CommitmentOracle;
using qvote::testing::within_sigma;

namespace {

std::map<StateLabel, int> label_counts(std::span<const StateLabel> labels) {
    std::map<StateLabel, int> counts;
    for (auto l : labels) {
        counts[l]++;
    }
    return counts;
}

MeasurementRecord record_of(const CommitmentOracle::Case &c) {
    MeasurementRecord meas;
    for (std::size_t p = 0; p < CommitmentOracle::kN; p++) {
        meas.bases.push_back(c.bases[p] ? MeasBasis::Y : MeasBasis::Z);
        meas.outcomes.push_back(static_cast<std::uint8_t>(c.outcomes[p]));
    }
    return meas;
}

const CommitmentOracle &oracle() {
    static const CommitmentOracle o;
    return o;
}

}  // namespace

TEST(csqbc, params_validation) {
    EXPECT_NO_THROW((CsqbcParams{16, 3, 1}.validate()));
    EXPECT_THROW((CsqbcParams{5, 3, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((CsqbcParams{0, 3, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((CsqbcParams{8, 0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((CsqbcParams{8, 1, 0}.validate()), std::invalid_argument);
    EXPECT_EQ((CsqbcParams{8, 3, 2}.sequences()), 5u);
}

TEST(csqbc, prepare_bus_is_balanced) {
    Rng rng(1);
    auto bus = prepare_bus({4, 1, 1}, rng);
    ASSERT_EQ(bus.labels.size(), 4u);
    for (auto [label, count] : label_counts(bus.labels)) {
        EXPECT_EQ(count, 1) << label_name(label);
    }
    EXPECT_EQ(label_counts(bus.labels).size(), 4u);

    auto big = prepare_bus({16, 1, 1}, rng);
    for (auto [label, count] : label_counts(big.labels)) {
        EXPECT_EQ(count, 4);
    }
    for (std::size_t q = 0; q < 16; q++) {
        EXPECT_TRUE(same_up_to_phase(big.reg[q], QuantumState::from_label(big.labels[q])));
    }
    EXPECT_THROW(prepare_bus({5, 1, 1}, rng), std::invalid_argument);
}

TEST(csqbc, prepare_bus_is_deterministic_and_shuffled) {
    Rng a(9), b(9);
    EXPECT_EQ(prepare_bus({16, 3, 1}, a).labels, prepare_bus({16, 3, 1}, b).labels);

    // Position 0 label is uniform over the four values.
    Rng rng(10);
    std::vector<double> counts(4, 0);
    for (int i = 0; i < 4000; i++) {
        counts[static_cast<std::size_t>(prepare_bus({8, 1, 1}, rng).labels[0])] += 1;
    }
    EXPECT_LT(qvote::testing::chi2_uniform(counts), chi2_quantile(3, 0.999));
}

TEST(csqbc, verify_bus_verdicts) {
    Rng rng(2);
    for (int i = 0; i < 100; i++) {
        auto bus = prepare_bus({16, 1, 1}, rng);
        ASSERT_EQ(verify_bus(bus.reg, bus.labels, rng), Verdict::Pass);
    }
    // Unbalanced reveal (2,2,0,0).
    std::vector<StateLabel> unbalanced{StateLabel::Z0, StateLabel::Z0, StateLabel::Z1, StateLabel::Z1};
    EXPECT_EQ(verify_bus(register_from_labels(unbalanced), unbalanced, rng), Verdict::Fail);

    // One Z0 qubit revealed as Z1.
    for (int i = 0; i < 100; i++) {
        auto bus = prepare_bus({8, 1, 1}, rng);
        auto lie = bus.labels;
        auto z0 = std::find(lie.begin(), lie.end(), StateLabel::Z0);
        auto z1 = std::find(lie.begin(), lie.end(), StateLabel::Z1);
        std::iter_swap(z0, z1);
        ASSERT_EQ(verify_bus(bus.reg, lie, rng), Verdict::Fail);
    }
    EXPECT_EQ(verify_bus(zero_register(4), std::vector<StateLabel>(3, StateLabel::Z0), rng), Verdict::Fail);
}

TEST(csqbc, select_and_verify_honest) {
    Rng rng(3);
    CsqbcParams params{8, 3, 2};
    std::vector<BalancedUniformSequence> buses;
    std::vector<QubitRegister> regs;
    for (std::size_t s = 0; s < params.sequences(); s++) {
        buses.push_back(prepare_bus(params, rng));
        regs.push_back(buses.back().reg);
    }
    auto sel = select_and_verify(regs, params, [&](std::size_t i) { return buses[i].labels; }, rng);
    EXPECT_EQ(sel.verdict, Verdict::Pass);
    EXPECT_EQ(sel.verified_indices.size(), 3u);
    EXPECT_EQ(sel.retained.size(), 2u);
    EXPECT_EQ(sel.retained_indices.size(), 2u);

    regs.pop_back();
    EXPECT_THROW(select_and_verify(regs, params, [&](std::size_t i) { return buses[i].labels; }, rng),
                 std::invalid_argument);
}

class DishonestRetention : public ::testing::TestWithParam<std::size_t> {};

TEST_P(DishonestRetention, rate_is_one_over_m_plus_one) {
    const std::size_t m = GetParam();
    CsqbcParams params{4, m, 1};
    Rng rng(4 + m);
    const std::size_t trials = 10000;
    std::size_t retained = 0;
    for (std::size_t t = 0; t < trials; t++) {
        std::vector<std::vector<StateLabel>> labels;
        std::vector<QubitRegister> regs;
        for (std::size_t s = 0; s < params.sequences(); s++) {
            auto bus = prepare_bus(params, rng);
            labels.push_back(bus.labels);
            regs.push_back(std::move(bus.reg));
        }
        // Sequence 0 is all |0> but revealed as a balanced list.
        regs[0] = register_from_labels(probe_labels(4));
        labels[0] = probe_cover_labels(4);
        auto sel = select_and_verify(regs, params, [&](std::size_t i) { return labels[i]; }, rng);
        bool kept = sel.retained_indices == std::vector<std::size_t>{0};
        retained += kept ? 1 : 0;
        ASSERT_EQ(sel.verdict, kept ? Verdict::Pass : Verdict::Fail);
    }
    EXPECT_TRUE(within_sigma(static_cast<double>(retained) / trials, 1.0 / (m + 1), trials));
}

INSTANTIATE_TEST_SUITE_P(csqbc, DishonestRetention, ::testing::Values(1, 3));

TEST(csqbc, commitment_angles) {
    EXPECT_EQ(pair_value(0, 0), 0u);
    EXPECT_EQ(pair_value(0, 1), 1u);
    EXPECT_EQ(pair_value(1, 0), 2u);
    EXPECT_EQ(pair_value(1, 1), 3u);
    EXPECT_DOUBLE_EQ(commit_angle(3), 1.5 * std::numbers::pi);
}

TEST(csqbc, commit_identity_case) {
    Rng rng(5);
    auto bus = prepare_bus({8, 1, 1}, rng);
    Bits cs(4, 0);
    auto out = apply_commitment(bus.reg, 0, cs);
    for (std::size_t q = 0; q < 8; q++) {
        EXPECT_NEAR(overlap_magnitude(out[q], bus.reg[q]), 1.0, 1e-12);
    }
}

TEST(csqbc, commit_rotation_advances_labels) {
    Rng rng(6);
    auto bus = prepare_bus({8, 1, 1}, rng);
    Bits cs(4, 0);
    for (unsigned pair = 0; pair < 4; pair++) {
        auto out = apply_commitment(bus.reg, pair, cs);
        for (std::size_t q = 0; q < 8; q++) {
            auto expected = QuantumState::from_label(label_advance(bus.labels[q], static_cast<int>(pair)));
            EXPECT_NEAR(overlap_magnitude(out[q], expected), 1.0, 1e-9);
        }
    }
}

TEST(csqbc, commit_single_swap) {
    std::vector<StateLabel> labels{StateLabel::Z0, StateLabel::Z1, StateLabel::Yplus, StateLabel::Yminus,
                                   StateLabel::Z0, StateLabel::Z1, StateLabel::Yplus, StateLabel::Yminus};
    Bits cs{1, 0, 0, 0};
    auto out = apply_commitment(register_from_labels(labels), 0, cs);
    EXPECT_TRUE(same_up_to_phase(out[0], QuantumState::from_label(StateLabel::Z1)));
    EXPECT_TRUE(same_up_to_phase(out[1], QuantumState::from_label(StateLabel::Z0)));
    for (std::size_t q = 2; q < 8; q++) {
        EXPECT_TRUE(same_up_to_phase(out[q], QuantumState::from_label(labels[q])));
    }
    EXPECT_THROW(apply_commitment(register_from_labels(labels), 0, Bits(3, 0)), std::invalid_argument);
    EXPECT_THROW(apply_commitment(register_from_labels(labels), 4, cs), std::invalid_argument);
}

TEST(csqbc, miner_measure_statistics) {
    Rng rng(7);
    const std::size_t trials = 1000;
    double z_total = 0;
    for (std::size_t t = 0; t < trials; t++) {
        auto meas = miner_measure(zero_register(16), rng);
        z_total += static_cast<double>(std::count(meas.bases.begin(), meas.bases.end(), MeasBasis::Z));
    }
    // Mean of Binomial(16, 1/2) over 1000 trials: sd of mean = 2/sqrt(1000).
    EXPECT_NEAR(z_total / trials, 8.0, 3 * 2.0 / std::sqrt(1000.0));

    std::size_t same = 0, cross_ones = 0, cross = 0;
    for (int t = 0; t < 700; t++) {
        auto bus = prepare_bus({16, 1, 1}, rng);
        auto meas = miner_measure(bus.reg, rng);
        for (std::size_t q = 0; q < 16; q++) {
            if (meas.bases[q] == basis_of(bus.labels[q])) {
                ASSERT_EQ(meas.outcomes[q], eigen_outcome(bus.labels[q]));
                same++;
            } else {
                cross++;
                cross_ones += meas.outcomes[q];
            }
        }
    }
    EXPECT_GT(same, 0u);
    EXPECT_GT(cross, 5000u);
    EXPECT_TRUE(within_sigma(static_cast<double>(cross_ones) / cross, 0.5, cross));
}

TEST(csqbc, honest_roundtrip_never_decodes_wrong_bits) {
    Rng rng(8);
    CsqbcParams params{16, 3, 1};
    std::map<unsigned, std::size_t> ok;
    for (int t = 0; t < 1000; t++) {
        for (unsigned pair = 0; pair < 4; pair++) {
            auto bus = prepare_bus(params, rng);
            auto c = commit_bits(bus.reg, pair, rng);
            auto meas = miner_measure(c.reg, rng);
            auto d = decode_commitment(bus.labels, c.cs, meas);
            ASSERT_NE(d.status, DecodeStatus::Inconsistent);
            if (d.ok()) {
                ASSERT_EQ(d.bits, pair);
                ok[pair]++;
            }
        }
    }
    for (unsigned pair = 0; pair < 4; pair++) {
        EXPECT_GT(ok[pair], 900u);
    }
}

TEST(csqbc, zero_wrong_decodes_at_scale) {
    Rng rng(9);
    CsqbcParams params{16, 1, 1};
    std::size_t wrong = 0;
    for (int t = 0; t < 100000; t++) {
        auto bus = prepare_bus(params, rng);
        const unsigned pair = static_cast<unsigned>(uniform_index(rng, 4));
        auto c = commit_bits(std::move(bus.reg), pair, rng);
        auto d = decode_commitment(bus.labels, c.cs, miner_measure(std::move(c.reg), rng));
        wrong += (d.ok() && d.bits != pair) || d.status == DecodeStatus::Inconsistent ? 1 : 0;
    }
    EXPECT_EQ(wrong, 0u);
}

TEST(csqbc, flipped_outcome_is_never_silently_accepted) {
    Rng rng(10);
    for (int t = 0; t < 2000; t++) {
        auto bus = prepare_bus({8, 1, 1}, rng);
        const unsigned pair = static_cast<unsigned>(uniform_index(rng, 4));
        auto c = commit_bits(bus.reg, pair, rng);
        auto meas = miner_measure(c.reg, rng);
        // Flip one outcome of a qubit that is deterministic for the true value.
        std::vector<std::size_t> det;
        for (std::size_t p = 0; p < 8; p++) {
            std::size_t q = c.cs[p / 2] ? (p ^ 1) : p;
            if (basis_of(label_advance(bus.labels[q], static_cast<int>(pair))) == meas.bases[p]) {
                det.push_back(p);
            }
        }
        if (det.empty()) {
            continue;
        }
        meas.outcomes[det[uniform_index(rng, det.size())]] ^= 1;
        auto d = decode_commitment(bus.labels, c.cs, meas);
        ASSERT_FALSE(d.ok() && d.bits == pair);
    }
}

TEST(csqbc, decode_errors) {
    MeasurementRecord meas{{MeasBasis::Z, MeasBasis::Z, MeasBasis::Z, MeasBasis::Z}, {0, 1, 0, 0}};
    std::vector<StateLabel> labels{StateLabel::Z0, StateLabel::Z1, StateLabel::Yplus, StateLabel::Yminus};
    EXPECT_THROW(decode_commitment(labels, Bits(3, 0), meas), std::invalid_argument);
    auto d = decode_commitment(labels, Bits(2, 0), meas);
    EXPECT_TRUE(d.ok());
    EXPECT_EQ(d.bits, 0u);
    EXPECT_EQ(decode_status_name(DecodeStatus::Ambiguous), "AMBIGUOUS");
    EXPECT_EQ(decode_status_name(DecodeStatus::Inconsistent), "INCONSISTENT");
}

TEST(csqbc, oracle_reproduces_closed_form_ambiguity) {
    const double closed = 1 - (2 * std::pow(0.75, 4) - 2 * std::pow(0.25, 4));
    EXPECT_NEAR(oracle().honest_success(), closed, 1e-12);
    EXPECT_NEAR(closed, 0.375, 1e-15);
}

TEST(csqbc, decode_agrees_with_oracle_on_every_case) {
    const auto &o = oracle();
    double lib_success = 0;
    o.for_each_case([&](const CommitmentOracle::Case &c) {
        auto labels = o.labels_of(c);
        Bits cs{static_cast<std::uint8_t>(c.cs[0]), static_cast<std::uint8_t>(c.cs[1])};
        auto d = decode_commitment(labels, cs, record_of(c));
        auto cands = o.consistent(c, c.cs);
        ASSERT_EQ(d.consistent_candidates, cands.size());
        if (d.ok()) {
            ASSERT_EQ(d.bits, cands[0]);
            if (d.bits == c.pair) {
                lib_success += c.weight;
            }
        }
    });
    EXPECT_NEAR(lib_success, o.honest_success(), 1e-12);
}

TEST(csqbc, honest_success_matches_oracle_at_n4) {
    Rng rng(11);
    const std::size_t trials = 20000;
    std::size_t ok = 0;
    CsqbcParams params{4, 1, 1};
    for (std::size_t t = 0; t < trials; t++) {
        std::array<unsigned, 1> pair{static_cast<unsigned>(uniform_index(rng, 4))};
        auto s = run_honest_session(params, pair, rng);
        ok += s.decodes[0].ok() ? 1 : 0;
    }
    EXPECT_TRUE(within_sigma(static_cast<double>(ok) / trials, oracle().honest_success(), trials));
}

TEST(csqbc, concealment_chi_square) {
    Rng rng(12);
    const std::size_t per_value = 10000;
    std::vector<std::vector<double>> table(4, std::vector<double>(4, 0));
    for (unsigned pair = 0; pair < 4; pair++) {
        for (std::size_t t = 0; t < per_value; t++) {
            auto bus = prepare_bus({8, 1, 1}, rng);
            auto c = commit_bits(std::move(bus.reg), pair, rng);
            auto meas = miner_measure(std::move(c.reg), rng);
            const std::size_t p = uniform_index(rng, 8);
            std::size_t cell = (meas.bases[p] == MeasBasis::Y ? 2 : 0) + meas.outcomes[p];
            table[pair][cell] += 1;
        }
    }
    EXPECT_LT(chi2_homogeneity(table), chi2_quantile(9, 0.999));
}

TEST(csqbc, resource_count) {
    Rng rng(13);
    for (std::size_t m : {1, 3, 7}) {
        CsqbcParams params{16, m, 1};
        std::array<unsigned, 1> pair{2};
        EXPECT_EQ(run_honest_session(params, pair, rng).qubits_used, (m + 1) * 16);
    }
    CsqbcParams params{8, 3, 2};
    std::array<unsigned, 2> pairs{1, 3};
    auto s = run_honest_session(params, pairs, rng);
    EXPECT_EQ(s.qubits_used, 5u * 8);
    EXPECT_EQ(s.records.size(), 2u);
    std::array<unsigned, 1> wrong{1};
    EXPECT_THROW(run_honest_session(params, wrong, rng), std::invalid_argument);
}

TEST(csqbc, equivocation_matches_oracle_exactly_at_n4) {
    const auto &o = oracle();
    Rng rng(14);
    double lib = 0;
    o.for_each_case([&](const CommitmentOracle::Case &c) {
        if (equivocation_exists(o.labels_of(c), record_of(c), c.pair, 0, rng)) {
            lib += c.weight;
        }
    });
    EXPECT_NEAR(lib, o.voter_cheat(), 1e-12);
}

TEST(csqbc, voter_cheat_monte_carlo_matches_oracle) {
    Rng rng(15);
    const std::size_t trials = 4000;
    double rate = simulate_voter_cheat({4, 1, 1}, trials, rng);
    EXPECT_TRUE(within_sigma(rate, oracle().voter_cheat(), trials));
    EXPECT_THROW(simulate_voter_cheat({4, 1, 1}, 0, rng), std::invalid_argument);
}

TEST(csqbc, voter_cheat_is_job_independent) {
    Rng a(16), b(16);
    EXPECT_EQ(simulate_voter_cheat({8, 1, 1}, 200, a, 1), simulate_voter_cheat({8, 1, 1}, 200, b, 3));
}

TEST(csqbc, probe_inference) {
    Rng rng(17);
    EXPECT_EQ(label_counts(probe_cover_labels(8)).size(), 4u);
    auto bases = probe_bases(8);
    EXPECT_EQ(std::count(bases.begin(), bases.end(), MeasBasis::Z), 4);
    // A wrong inference needs all 8 random-basis outcomes to match another value.
    std::size_t wrong = 0;
    const int per_value = 500;
    for (unsigned pair = 0; pair < 4; pair++) {
        for (int t = 0; t < per_value; t++) {
            auto c = commit_bits(register_from_labels(probe_labels(16)), pair, rng);
            auto inferred = infer_probe_commitment(measure_in_bases(c.reg, probe_bases(16), rng));
            ASSERT_TRUE(inferred.has_value());
            wrong += *inferred != pair ? 1 : 0;
        }
    }
    EXPECT_LE(wrong, 20u);
}

class MinerCheat : public ::testing::TestWithParam<std::size_t> {};

TEST_P(MinerCheat, success_near_one_over_m_plus_one) {
    const std::size_t m = GetParam();
    Rng rng(20 + m);
    const std::size_t trials = 10000;
    auto stats = simulate_miner_cheat({16, m, 1}, trials, rng);
    EXPECT_EQ(stats.trials, trials);
    EXPECT_TRUE(within_sigma(stats.success_rate, 1.0 / (m + 1), trials)) << stats.success_rate;
    EXPECT_NEAR(stats.retention_rate + stats.detection_rate, 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(csqbc, MinerCheat, ::testing::Values(1, 3));

TEST(csqbc, miner_cheat_requires_single_sequence) {
    Rng rng(30);
    EXPECT_THROW(simulate_miner_cheat({16, 3, 2}, 10, rng), std::invalid_argument);
    EXPECT_THROW(simulate_miner_cheat({16, 3, 1}, 0, rng), std::invalid_argument);
}
