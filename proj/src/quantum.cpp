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

#include "qvote/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qvote {

namespace {

constexpr std::array<StateLabel, 4> kRxCycle{
    StateLabel::Z0, StateLabel::Yminus, StateLabel::Z1, StateLabel::Yplus};

const Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

int cycle_position(StateLabel label) {
    for (int k = 0; k < 4; k++) {
        if (kRxCycle[k] == label) {
            return k;
        }
    }
    throw std::invalid_argument("unknown state label");
}

// Eigenvector for `outcome` in `basis`.
Eigen::Vector2cd eigenvector(MeasBasis basis, int outcome) {
    Eigen::Vector2cd v;
    if (basis == MeasBasis::Z) {
        v << (outcome == 0 ? 1.0 : 0.0), (outcome == 0 ? 0.0 : 1.0);
    } else {
        v << kInvSqrt2, (outcome == 0 ? kI : -kI) * kInvSqrt2;
    }
    return v;
}

std::size_t qubits_for_dimension(std::size_t dim) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        n++;
    }
    if ((std::size_t{1} << n) != dim || n == 0 || n > kMaxQubits) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not 2^n with 1 <= n <= 12");
    }
    return n;
}

}  // namespace

MeasBasis basis_of(StateLabel label) {
    return (label == StateLabel::Z0 || label == StateLabel::Z1) ? MeasBasis::Z : MeasBasis::Y;
}

int eigen_outcome(StateLabel label) {
    return (label == StateLabel::Z1 || label == StateLabel::Yminus) ? 1 : 0;
}

StateLabel label_for(MeasBasis basis, int outcome) {
    if (basis == MeasBasis::Z) {
        return outcome == 0 ? StateLabel::Z0 : StateLabel::Z1;
    }
    return outcome == 0 ? StateLabel::Yplus : StateLabel::Yminus;
}

std::string_view label_name(StateLabel label) {
    switch (label) {
        case StateLabel::Z0:
            return "Z0";
        case StateLabel::Z1:
            return "Z1";
        case StateLabel::Yplus:
            return "Yplus";
        case StateLabel::Yminus:
            return "Yminus";
    }
    return "?";
}

StateLabel label_advance(StateLabel label, int steps) {
    int k = ((cycle_position(label) + steps) % 4 + 4) % 4;
    return kRxCycle[k];
}

int quarter_turns(double theta) {
    double k = theta / (std::numbers::pi / 2);
    double r = std::round(k);
    if (!std::isfinite(k) || std::abs(k - r) > 1e-9) {
        throw std::invalid_argument("angle is not a multiple of pi/2");
    }
    long long q = static_cast<long long>(r) % 4;
    return static_cast<int>((q + 4) % 4);
}

StateLabel label_rotate(StateLabel label, double theta) {
    return label_advance(label, quarter_turns(theta));
}

QuantumState::QuantumState(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [1, 12]");
    }
    amplitudes_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << num_qubits));
    amplitudes_(0) = 1.0;
}

QuantumState QuantumState::from_amplitudes(Eigen::VectorXcd amplitudes) {
    QuantumState s(qubits_for_dimension(static_cast<std::size_t>(amplitudes.size())));
    double norm = amplitudes.squaredNorm();
    if (std::abs(norm - 1.0) > kStateTolerance) {
        throw std::invalid_argument("amplitudes are not normalized");
    }
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::from_label(StateLabel label) {
    QuantumState s(1);
    s.amplitudes_ = eigenvector(basis_of(label), eigen_outcome(label));
    return s;
}

QuantumState QuantumState::from_labels(std::span<const StateLabel> labels) {
    QuantumState s(labels.size());
    Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
    for (auto label : labels) {
        Eigen::Vector2cd v = eigenvector(basis_of(label), eigen_outcome(label));
        Eigen::VectorXcd next(amps.size() * 2);
        for (Eigen::Index i = 0; i < amps.size(); i++) {
            next(2 * i) = amps(i) * v(0);
            next(2 * i + 1) = amps(i) * v(1);
        }
        amps = std::move(next);
    }
    s.amplitudes_ = std::move(amps);
    return s;
}

Complex QuantumState::amplitude(std::uint64_t basis_index) const {
    if (basis_index >= dimension()) {
        throw std::out_of_range("basis index out of range");
    }
    return amplitudes_(static_cast<Eigen::Index>(basis_index));
}

double QuantumState::norm_squared() const {
    return amplitudes_.squaredNorm();
}

void QuantumState::check_qubit(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw std::out_of_range(
            "qubit " + std::to_string(qubit) + " out of range for " + std::to_string(num_qubits_) + " qubits");
    }
}

double QuantumState::probability_of_one(std::size_t qubit, MeasBasis basis) const {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << bit_of(qubit);
    const Eigen::Vector2cd v = eigenvector(basis, 1);
    double p = 0;
    for (std::size_t i = 0; i < dimension(); i++) {
        if (i & mask) {
            continue;
        }
        Complex c = std::conj(v(0)) * amplitudes_(static_cast<Eigen::Index>(i)) +
                    std::conj(v(1)) * amplitudes_(static_cast<Eigen::Index>(i | mask));
        p += std::norm(c);
    }
    return std::min(1.0, std::max(0.0, p));
}

void QuantumState::apply_gate(std::size_t qubit, const Eigen::Matrix2cd &gate) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << bit_of(qubit);
    for (std::size_t i = 0; i < dimension(); i++) {
        if (i & mask) {
            continue;
        }
        auto i0 = static_cast<Eigen::Index>(i);
        auto i1 = static_cast<Eigen::Index>(i | mask);
        Complex a0 = amplitudes_(i0);
        Complex a1 = amplitudes_(i1);
        amplitudes_(i0) = gate(0, 0) * a0 + gate(0, 1) * a1;
        amplitudes_(i1) = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
}

void QuantumState::apply_swap(std::size_t a, std::size_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) {
        return;
    }
    const std::size_t ma = std::size_t{1} << bit_of(a);
    const std::size_t mb = std::size_t{1} << bit_of(b);
    for (std::size_t i = 0; i < dimension(); i++) {
        // Visit each (a=1, b=0) index once and swap with its (a=0, b=1) partner.
        if ((i & ma) && !(i & mb)) {
            std::size_t j = (i & ~ma) | mb;
            std::swap(amplitudes_(static_cast<Eigen::Index>(i)), amplitudes_(static_cast<Eigen::Index>(j)));
        }
    }
}

void QuantumState::collapse(std::size_t qubit, MeasBasis basis, int outcome) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << bit_of(qubit);
    const Eigen::Vector2cd v = eigenvector(basis, outcome);
    for (std::size_t i = 0; i < dimension(); i++) {
        if (i & mask) {
            continue;
        }
        auto i0 = static_cast<Eigen::Index>(i);
        auto i1 = static_cast<Eigen::Index>(i | mask);
        Complex c = std::conj(v(0)) * amplitudes_(i0) + std::conj(v(1)) * amplitudes_(i1);
        amplitudes_(i0) = c * v(0);
        amplitudes_(i1) = c * v(1);
    }
    double norm = amplitudes_.norm();
    if (norm < 1e-12) {
        throw std::logic_error("collapse onto a zero-probability outcome");
    }
    amplitudes_ /= norm;
}

Eigen::Matrix2cd rx_matrix(double theta) {
    Eigen::Matrix2cd m;
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    m << c, -kI * s, -kI * s, c;
    return m;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, -kI, kI, 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

QuantumState apply_rx(QuantumState state, std::size_t qubit, double theta) {
    state.apply_gate(qubit, rx_matrix(theta));
    return state;
}

Measurement measure(QuantumState state, std::size_t qubit, MeasBasis basis, Rng &rng) {
    double p1 = state.probability_of_one(qubit, basis);
    int outcome = uniform01(rng) < p1 ? 1 : 0;
    state.collapse(qubit, basis, outcome);
    return {outcome, std::move(state)};
}

double overlap_magnitude(const QuantumState &a, const QuantumState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("overlap of states with different qubit counts");
    }
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

bool same_up_to_phase(const QuantumState &a, const QuantumState &b, double tol) {
    return std::abs(overlap_magnitude(a, b) - 1.0) <= tol;
}

QuantumState prepare_aharonov() {
    struct Term {
        int a, b, c;
        double sign;
    };
    static constexpr std::array<Term, 6> kTerms{{
        {0, 1, 2, +1},
        {1, 2, 0, +1},
        {2, 0, 1, +1},
        {0, 2, 1, -1},
        {1, 0, 2, -1},
        {2, 1, 0, -1},
    }};
    // Trit t is encoded as the two-bit pattern t (0 -> 00, 1 -> 01, 2 -> 10).
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(64);
    const double w = 1.0 / std::sqrt(6.0);
    for (const auto &t : kTerms) {
        amps((t.a << 4) | (t.b << 2) | t.c) = t.sign * w;
    }
    return QuantumState::from_amplitudes(std::move(amps));
}

int trit_from_pair(int high, int low) {
    int v = (high << 1) | low;
    return v == 3 ? -1 : v;
}

QuantumState swap_transfer(
    QuantumState state, std::span<const std::size_t> src, std::span<const std::size_t> dst) {
    if (src.size() != dst.size()) {
        throw std::invalid_argument("swap_transfer: register lengths differ");
    }
    std::vector<bool> used(state.num_qubits(), false);
    auto claim = [&](std::size_t q) {
        if (q >= state.num_qubits()) {
            throw std::out_of_range("swap_transfer: qubit index out of range");
        }
        if (used[q]) {
            throw std::invalid_argument("swap_transfer: registers overlap");
        }
        used[q] = true;
    };
    for (auto q : src) {
        claim(q);
    }
    for (auto q : dst) {
        claim(q);
    }
    for (std::size_t i = 0; i < src.size(); i++) {
        state.apply_swap(src[i], dst[i]);
    }
    return state;
}

QubitRegister register_from_labels(std::span<const StateLabel> labels) {
    QubitRegister reg;
    reg.reserve(labels.size());
    for (auto label : labels) {
        reg.push_back(QuantumState::from_label(label));
    }
    return reg;
}

QubitRegister zero_register(std::size_t size) {
    return QubitRegister(size, QuantumState(1));
}

void swap_transfer(QubitRegister &src, QubitRegister &dst, std::span<const std::size_t> indices) {
    if (&src == &dst) {
        throw std::invalid_argument("swap_transfer: registers overlap");
    }
    for (auto q : indices) {
        if (q >= src.size() || q >= dst.size()) {
            throw std::out_of_range("swap_transfer: qubit index out of range");
        }
    }
    for (auto q : indices) {
        std::swap(src[q], dst[q]);
    }
}

DensityMatrix::DensityMatrix(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [1, 12]");
    }
    auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    entries_ = Eigen::MatrixXcd::Zero(dim, dim);
    entries_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_pure(const QuantumState &state) {
    DensityMatrix rho(state.num_qubits());
    rho.entries_ = state.amplitudes() * state.amplitudes().adjoint();
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t num_qubits) {
    DensityMatrix rho(num_qubits);
    auto dim = rho.entries_.rows();
    rho.entries_ = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    return rho;
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd entries) {
    if (entries.rows() != entries.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    DensityMatrix rho(qubits_for_dimension(static_cast<std::size_t>(entries.rows())));
    rho.entries_ = std::move(entries);
    if (!rho.is_valid()) {
        throw std::invalid_argument("not a valid density matrix (trace, Hermiticity or positivity)");
    }
    return rho;
}

double DensityMatrix::trace() const {
    return entries_.trace().real();
}

double DensityMatrix::hermiticity_error() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd h = (entries_ + entries_.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const {
    return (entries_ * entries_).trace().real();
}

bool DensityMatrix::is_valid(double tol) const {
    return std::abs(trace() - 1.0) <= tol && hermiticity_error() <= tol && min_eigenvalue() >= -1e-8;
}

void DensityMatrix::conjugate(std::size_t qubit, const Eigen::Matrix2cd &gate) {
    if (qubit >= num_qubits_) {
        throw std::out_of_range("qubit index out of range");
    }
    const std::size_t mask = std::size_t{1} << (num_qubits_ - 1 - qubit);
    const auto dim = static_cast<std::size_t>(entries_.rows());
    auto left = [&](Eigen::MatrixXcd &m) {
        for (std::size_t i = 0; i < dim; i++) {
            if (i & mask) {
                continue;
            }
            auto i0 = static_cast<Eigen::Index>(i);
            auto i1 = static_cast<Eigen::Index>(i | mask);
            Eigen::RowVectorXcd r0 = m.row(i0);
            Eigen::RowVectorXcd r1 = m.row(i1);
            m.row(i0) = gate(0, 0) * r0 + gate(0, 1) * r1;
            m.row(i1) = gate(1, 0) * r0 + gate(1, 1) * r1;
        }
    };
    // U rho U^dag = (U (U rho)^dag)^dag
    left(entries_);
    Eigen::MatrixXcd t = entries_.adjoint();
    left(t);
    entries_ = t.adjoint();
}

DensityMatrix depolarize(DensityMatrix rho, std::size_t qubit, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("depolarizing probability must be in [0, 1]");
    }
    if (qubit >= rho.num_qubits()) {
        throw std::out_of_range("qubit index out of range");
    }
    if (p == 0.0) {
        return rho;
    }
    Eigen::MatrixXcd acc = (1.0 - p) * rho.entries();
    for (const auto &pauli : {pauli_x(), pauli_y(), pauli_z()}) {
        DensityMatrix term = rho;
        term.conjugate(qubit, pauli);
        acc += (p / 3.0) * term.entries();
    }
    return DensityMatrix::from_matrix(std::move(acc));
}

namespace {

void check_fidelity_input(const DensityMatrix &rho) {
    if (rho.min_eigenvalue() < -1e-8) {
        throw std::invalid_argument("fidelity: input is not positive semidefinite");
    }
}

Eigen::VectorXcd dominant_vector(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver((rho.entries() + rho.entries().adjoint()) / 2.0);
    return solver.eigenvectors().col(solver.eigenvalues().size() - 1);
}

double clamp01(double x) {
    return std::min(1.0, std::max(0.0, x));
}

}  // namespace

double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.num_qubits() != sigma.num_qubits()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    check_fidelity_input(rho);
    check_fidelity_input(sigma);
    if (std::abs(sigma.purity() - 1.0) <= kStateTolerance) {
        Eigen::VectorXcd psi = dominant_vector(sigma);
        return clamp01((psi.adjoint() * rho.entries() * psi)(0, 0).real());
    }
    if (std::abs(rho.purity() - 1.0) <= kStateTolerance) {
        Eigen::VectorXcd psi = dominant_vector(rho);
        return clamp01((psi.adjoint() * sigma.entries() * psi)(0, 0).real());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rs((rho.entries() + rho.entries().adjoint()) / 2.0);
    Eigen::VectorXd roots = rs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sqrt_rho = rs.eigenvectors() * roots.asDiagonal() * rs.eigenvectors().adjoint();
    Eigen::MatrixXcd inner = sqrt_rho * sigma.entries() * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> is((inner + inner.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    double tr = is.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return clamp01(tr * tr);
}

double fidelity(const DensityMatrix &rho, const QuantumState &psi) {
    if (rho.num_qubits() != psi.num_qubits()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    check_fidelity_input(rho);
    return clamp01((psi.amplitudes().adjoint() * rho.entries() * psi.amplitudes())(0, 0).real());
}

}  // namespace qvote
