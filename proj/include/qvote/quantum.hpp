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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qvote/rng.hpp"

namespace qvote {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 12;
inline constexpr double kStateTolerance = 1e-9;

/// Single-qubit preparation labels used by the commitment scheme.
enum class StateLabel : std::uint8_t { Z0, Z1, Yplus, Yminus };

/// Measurement bases. Outcome 0 is |0> (Z) or |+i> (Y); outcome 1 is |1> or |-i>.
enum class MeasBasis : std::uint8_t { Z, Y };

MeasBasis basis_of(StateLabel label);
int eigen_outcome(StateLabel label);
StateLabel label_for(MeasBasis basis, int outcome);
std::string_view label_name(StateLabel label);

/// Advances `label` by `steps` quarter turns of R_X along Z0 -> Yminus -> Z1 -> Yplus.
StateLabel label_advance(StateLabel label, int steps);

/// Number of quarter turns in `theta`, which must be a multiple of pi/2.
/// Angles are reduced into [0, 2pi).
int quarter_turns(double theta);

/// Label reached by R_X(theta) for theta a multiple of pi/2 (global phase ignored).
StateLabel label_rotate(StateLabel label, double theta);

/// Pure state of up to kMaxQubits qubits. Qubit 0 is the leftmost symbol of a
/// ket, i.e. the most significant bit of the basis index.
class QuantumState {
   public:
    explicit QuantumState(std::size_t num_qubits = 1);

    static QuantumState from_amplitudes(Eigen::VectorXcd amplitudes);
    static QuantumState from_label(StateLabel label);
    static QuantumState from_labels(std::span<const StateLabel> labels);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Eigen::VectorXcd &amplitudes() const { return amplitudes_; }
    Complex amplitude(std::uint64_t basis_index) const;
    double norm_squared() const;

    /// Born probability of outcome 1 when `qubit` is measured in `basis`.
    double probability_of_one(std::size_t qubit, MeasBasis basis) const;

    /// Applies a 2x2 unitary to one qubit in place.
    void apply_gate(std::size_t qubit, const Eigen::Matrix2cd &gate);
    void apply_swap(std::size_t a, std::size_t b);
    void collapse(std::size_t qubit, MeasBasis basis, int outcome);

   private:
    std::size_t bit_of(std::size_t qubit) const { return num_qubits_ - 1 - qubit; }
    void check_qubit(std::size_t qubit) const;

    std::size_t num_qubits_;
    Eigen::VectorXcd amplitudes_;
};

Eigen::Matrix2cd rx_matrix(double theta);
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

QuantumState apply_rx(QuantumState state, std::size_t qubit, double theta);

struct Measurement {
    int outcome;
    QuantumState post;
};

/// Projective measurement of one qubit; the post-state is renormalized.
Measurement measure(QuantumState state, std::size_t qubit, MeasBasis basis, Rng &rng);

/// |<a|b>|, so states equal up to global phase give 1.
double overlap_magnitude(const QuantumState &a, const QuantumState &b);
bool same_up_to_phase(const QuantumState &a, const QuantumState &b, double tol = kStateTolerance);

/// Six-qubit encoding of the three-qutrit singlet, trits 0 -> 00, 1 -> 01, 2 -> 10,
/// with qubit pairs (0,1), (2,3), (4,5) held by three parties.
QuantumState prepare_aharonov();

/// Decodes a two-qubit computational pattern into a trit; returns -1 for 11.
int trit_from_pair(int high, int low);

/// Exchanges qubits src[i] <-> dst[i] inside one joint state. The two index
/// lists are the registers; they must be disjoint and of equal length.
QuantumState swap_transfer(
    QuantumState state, std::span<const std::size_t> src, std::span<const std::size_t> dst);

/// Unentangled sequence of single-qubit states, as used for balanced-uniform
/// sequences. Each element is a one-qubit QuantumState.
using QubitRegister = std::vector<QuantumState>;

QubitRegister register_from_labels(std::span<const StateLabel> labels);
QubitRegister zero_register(std::size_t size);

/// Product-register form of swap_transfer: qubits src[idx[i]] and dst[idx[i]]
/// are exchanged. Registers must be distinct objects.
void swap_transfer(QubitRegister &src, QubitRegister &dst, std::span<const std::size_t> indices);

class DensityMatrix {
   public:
    explicit DensityMatrix(std::size_t num_qubits = 1);

    static DensityMatrix from_pure(const QuantumState &state);
    static DensityMatrix maximally_mixed(std::size_t num_qubits);
    /// Validates trace, Hermiticity and positivity.
    static DensityMatrix from_matrix(Eigen::MatrixXcd entries);

    std::size_t num_qubits() const { return num_qubits_; }
    const Eigen::MatrixXcd &entries() const { return entries_; }

    double trace() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
    double purity() const;
    bool is_valid(double tol = kStateTolerance) const;

    /// rho -> U rho U^dagger with U acting on `qubit`.
    void conjugate(std::size_t qubit, const Eigen::Matrix2cd &gate);

   private:
    std::size_t num_qubits_;
    Eigen::MatrixXcd entries_;
};

/// Single-qubit depolarizing channel (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z).
DensityMatrix depolarize(DensityMatrix rho, std::size_t qubit, double p);

/// Uhlmann fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2. Uses <psi|rho|psi>
/// when either argument is pure.
double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);
double fidelity(const DensityMatrix &rho, const QuantumState &psi);

}  // namespace qvote
