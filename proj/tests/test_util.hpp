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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "qvote/csqbc.hpp"
#include "qvote/quantum.hpp"

namespace qvote::testing {

/// |observed - p| within k binomial standard deviations of `trials` draws.
inline bool within_sigma(double observed, double p, std::size_t trials, double k = 3.0) {
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    return std::abs(observed - p) <= k * sigma + 1e-12;
}

inline double chi2_quantile(double df, double q) {
    return boost::math::quantile(boost::math::chi_squared(df), q);
}

inline double chi2_uniform(const std::vector<double> &counts) {
    double total = 0;
    for (auto c : counts) {
        total += c;
    }
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0;
    for (auto c : counts) {
        stat += (c - expected) * (c - expected) / expected;
    }
    return stat;
}

/// Pearson homogeneity statistic for a rows x cols contingency table;
/// degrees of freedom (rows-1)(cols-1).
inline double chi2_homogeneity(const std::vector<std::vector<double>> &table) {
    const std::size_t rows = table.size();
    const std::size_t cols = table[0].size();
    std::vector<double> row_sum(rows, 0), col_sum(cols, 0);
    double total = 0;
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            row_sum[r] += table[r][c];
            col_sum[c] += table[r][c];
            total += table[r][c];
        }
    }
    double stat = 0;
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            double e = row_sum[r] * col_sum[c] / total;
            if (e > 0) {
                stat += (table[r][c] - e) * (table[r][c] - e) / e;
            }
        }
    }
    return stat;
}

// Brute-force commitment oracle for n = 4. It enumerates every label order,
// committed value, swap string, basis choice and outcome, weights each case by
// its statevector Born probability, and decides consistency from those
// probabilities instead of the label arithmetic used by the library.
class CommitmentOracle {
   public:
    static constexpr std::size_t kN = 4;

    CommitmentOracle() {
        const std::array<StateLabel, 4> labels{StateLabel::Z0, StateLabel::Z1, StateLabel::Yplus, StateLabel::Yminus};
        for (std::size_t l = 0; l < 4; l++) {
            for (unsigned s = 0; s < 4; s++) {
                QuantumState psi = apply_rx(QuantumState::from_label(labels[l]), 0, s * M_PI / 2);
                for (int b = 0; b < 2; b++) {
                    const auto basis = b == 0 ? MeasBasis::Z : MeasBasis::Y;
                    double p1 = psi.probability_of_one(0, basis);
                    prob_[l][s][b][0] = 1 - p1;
                    prob_[l][s][b][1] = p1;
                }
            }
        }
        label_values_ = labels;
    }

    struct Case {
        std::array<std::size_t, kN> order;  // label index per original qubit
        unsigned pair;
        std::array<int, kN / 2> cs;
        std::array<int, kN> bases;     // per measured position
        std::array<int, kN> outcomes;  // per measured position
        double weight;
    };

    template <typename Fn>
    void for_each_case(Fn fn) const {
        std::array<std::size_t, kN> order{0, 1, 2, 3};
        const double order_weight = 1.0 / 24.0;
        do {
            for (unsigned pair = 0; pair < 4; pair++) {
                for (int csm = 0; csm < 4; csm++) {
                    std::array<int, 2> cs{csm & 1, (csm >> 1) & 1};
                    for (int bm = 0; bm < 16; bm++) {
                        for (int om = 0; om < 16; om++) {
                            Case c{order, pair, cs, {}, {}, order_weight / 4.0 / 4.0 / 16.0};
                            for (std::size_t p = 0; p < kN; p++) {
                                c.bases[p] = (bm >> p) & 1;
                                c.outcomes[p] = (om >> p) & 1;
                                const std::size_t q = source(p, cs);
                                c.weight *= prob_[order[q]][pair][c.bases[p]][c.outcomes[p]];
                            }
                            if (c.weight > 0) {
                                fn(c);
                            }
                        }
                    }
                }
            }
        } while (std::next_permutation(order.begin(), order.end()));
    }

    /// Candidates consistent with the record when opened with `cs`.
    std::vector<unsigned> consistent(const Case &c, const std::array<int, kN / 2> &cs) const {
        std::vector<unsigned> out;
        for (unsigned s = 0; s < 4; s++) {
            bool ok = true;
            for (std::size_t p = 0; p < kN; p++) {
                const std::size_t q = source(p, cs);
                if (prob_[c.order[q]][s][c.bases[p]][c.outcomes[p]] < 1e-9) {
                    ok = false;
                }
            }
            if (ok) {
                out.push_back(s);
            }
        }
        return out;
    }

    double honest_success() const {
        double total = 0;
        for_each_case([&](const Case &c) {
            auto cands = consistent(c, c.cs);
            if (cands.size() == 1 && cands[0] == c.pair) {
                total += c.weight;
            }
        });
        return total;
    }

    double voter_cheat() const {
        double total = 0;
        for_each_case([&](const Case &c) {
            for (int csm = 0; csm < 4; csm++) {
                auto cands = consistent(c, {csm & 1, (csm >> 1) & 1});
                if (cands.size() == 1 && cands[0] != c.pair) {
                    total += c.weight;
                    return;
                }
            }
        });
        return total;
    }

    std::vector<StateLabel> labels_of(const Case &c) const {
        std::vector<StateLabel> out;
        for (auto l : c.order) {
            out.push_back(label_values_[l]);
        }
        return out;
    }

    static std::size_t source(std::size_t position, const std::array<int, kN / 2> &cs) {
        return cs[position / 2] ? (position ^ 1) : position;
    }

   private:
    // prob_[label][quarter turns][basis][outcome]
    double prob_[4][4][2][2]{};
    std::array<StateLabel, 4> label_values_{};
};

}  // namespace qvote::testing
