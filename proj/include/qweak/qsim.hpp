// Copyright 2026 The qweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Dense statevector simulation of {RX, RY, RZ, CNOT} circuits, expectation of
 * the scaled Z-sum observable, and reverse-mode (adjoint) gradients.
 *
 * Qubit j is bit j of the amplitude index. Rotations are
 * R_P(t) = exp(-i t P / 2) = cos(t/2) I - i sin(t/2) P.
 */
#pragma once

#include "qweak/error.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace qweak::qsim {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 20;

enum class GateKind { RX, RY, RZ, CNOT };

[[nodiscard]] constexpr bool is_rotation(GateKind kind) noexcept {
    return kind != GateKind::CNOT;
}

struct Gate {
    GateKind kind = GateKind::RY;
    std::size_t target = 0;
    std::size_t control = 0; ///< CNOT only
    std::size_t slot = 0;    ///< rotations only

    static Gate rotation(GateKind kind, std::size_t target, std::size_t slot) {
        require<ContractError>(is_rotation(kind),
                               "rotation() needs an RX, RY or RZ kind");
        return Gate{kind, target, 0, slot};
    }
    static Gate cnot(std::size_t control, std::size_t target) {
        return Gate{GateKind::CNOT, target, control, 0};
    }
};

class StateVector {
  public:
    /// Zero state |0...0> on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
        require<ConfigError>(num_qubits >= 1 && num_qubits <= kMaxQubits,
                             "qubit count must be in [1, 20], got " +
                                 std::to_string(num_qubits));
        amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return amplitudes_.size();
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] const Complex &operator[](std::size_t i) const {
        return amplitudes_[i];
    }

    [[nodiscard]] double norm() const noexcept {
        double acc = 0.0;
        for (const auto &amp : amplitudes_) {
            acc += std::norm(amp);
        }
        return std::sqrt(acc);
    }

  private:
    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

[[nodiscard]] inline StateVector zero_state(std::size_t num_qubits) {
    return StateVector(num_qubits);
}

struct Circuit {
    std::size_t num_qubits = 1;
    std::vector<Gate> gates;
    std::size_t num_angle_slots = 0;

    /// Checks qubit indices and that every slot is used by some rotation.
    void validate() const {
        require<ConfigError>(num_qubits >= 1 && num_qubits <= kMaxQubits,
                             "circuit qubit count out of range");
        std::vector<bool> used(num_angle_slots, false);
        for (const auto &g : gates) {
            require<ConfigError>(g.target < num_qubits,
                                 "gate target out of range");
            if (g.kind == GateKind::CNOT) {
                require<ConfigError>(g.control < num_qubits &&
                                         g.control != g.target,
                                     "invalid CNOT control");
            } else {
                require<ConfigError>(g.slot < num_angle_slots,
                                     "gate angle slot out of range");
                used[g.slot] = true;
            }
        }
        for (std::size_t s = 0; s < num_angle_slots; ++s) {
            require<ConfigError>(used[s], "angle slot " + std::to_string(s) +
                                              " is not referenced by a gate");
        }
    }
};

/// C = a * sum_j Z_j + b * I.
struct Observable {
    double scale = 1.0;
    double shift = 0.0;
};

namespace kernels {

/// Applies R_P(angle) given c = cos(angle/2), s = sin(angle/2).
inline void rotate(std::span<Complex> amps, GateKind axis, std::size_t target,
                   double c, double s) {
    const std::size_t bit = std::size_t{1} << target;
    const std::size_t n = amps.size();
    switch (axis) {
    case GateKind::RX:
        for (std::size_t i = 0; i < n; ++i) {
            if (i & bit) {
                continue;
            }
            const Complex a0 = amps[i];
            const Complex a1 = amps[i | bit];
            // -i s * a = (s*a.imag, -s*a.real)
            amps[i] = {c * a0.real() + s * a1.imag(),
                       c * a0.imag() - s * a1.real()};
            amps[i | bit] = {c * a1.real() + s * a0.imag(),
                             c * a1.imag() - s * a0.real()};
        }
        break;
    case GateKind::RY:
        for (std::size_t i = 0; i < n; ++i) {
            if (i & bit) {
                continue;
            }
            const Complex a0 = amps[i];
            const Complex a1 = amps[i | bit];
            amps[i] = c * a0 - s * a1;
            amps[i | bit] = s * a0 + c * a1;
        }
        break;
    case GateKind::RZ: {
        const Complex lo{c, -s};
        const Complex hi{c, s};
        for (std::size_t i = 0; i < n; ++i) {
            amps[i] *= (i & bit) ? hi : lo;
        }
        break;
    }
    case GateKind::CNOT:
        throw ContractError("rotate() called with CNOT");
    }
}

inline void rotate(std::span<Complex> amps, GateKind axis, std::size_t target,
                   double angle) {
    rotate(amps, axis, target, std::cos(0.5 * angle), std::sin(0.5 * angle));
}

/// amps <- P amps for the Pauli generator of `axis`.
inline void apply_pauli(std::span<Complex> amps, GateKind axis,
                        std::size_t target) {
    const std::size_t bit = std::size_t{1} << target;
    const std::size_t n = amps.size();
    const Complex i_unit{0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | bit];
        switch (axis) {
        case GateKind::RX:
            amps[i] = a1;
            amps[i | bit] = a0;
            break;
        case GateKind::RY:
            amps[i] = -i_unit * a1;
            amps[i | bit] = i_unit * a0;
            break;
        case GateKind::RZ:
            amps[i | bit] = -a1;
            break;
        case GateKind::CNOT:
            throw ContractError("apply_pauli() called with CNOT");
        }
    }
}

/// out += coeff * P in, without touching `in`.
inline void add_pauli(std::span<const Complex> in, std::span<Complex> out,
                      GateKind axis, std::size_t target, Complex coeff) {
    const std::size_t bit = std::size_t{1} << target;
    const std::size_t n = in.size();
    const Complex i_unit{0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = in[i];
        const Complex a1 = in[i | bit];
        switch (axis) {
        case GateKind::RX:
            out[i] += coeff * a1;
            out[i | bit] += coeff * a0;
            break;
        case GateKind::RY:
            out[i] += coeff * (-i_unit * a1);
            out[i | bit] += coeff * (i_unit * a0);
            break;
        case GateKind::RZ:
            out[i] += coeff * a0;
            out[i | bit] -= coeff * a1;
            break;
        case GateKind::CNOT:
            throw ContractError("add_pauli() called with CNOT");
        }
    }
}

/// <lhs| P |rhs>.
[[nodiscard]] inline Complex pauli_inner(std::span<const Complex> lhs,
                                         std::span<const Complex> rhs,
                                         GateKind axis, std::size_t target) {
    const std::size_t bit = std::size_t{1} << target;
    const std::size_t n = lhs.size();
    const Complex i_unit{0.0, 1.0};
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (i & bit) {
            continue;
        }
        const Complex r0 = rhs[i];
        const Complex r1 = rhs[i | bit];
        Complex p0;
        Complex p1;
        switch (axis) {
        case GateKind::RX:
            p0 = r1;
            p1 = r0;
            break;
        case GateKind::RY:
            p0 = -i_unit * r1;
            p1 = i_unit * r0;
            break;
        case GateKind::RZ:
            p0 = r0;
            p1 = -r1;
            break;
        case GateKind::CNOT:
            throw ContractError("pauli_inner() called with CNOT");
        }
        acc += std::conj(lhs[i]) * p0 + std::conj(lhs[i | bit]) * p1;
    }
    return acc;
}

inline void cnot(std::span<Complex> amps, std::size_t control,
                 std::size_t target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t n = amps.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

/// Eigenvalue of sum_j Z_j on basis state `index`.
[[nodiscard]] inline double zsum_eigenvalue(std::size_t index,
                                            std::size_t num_qubits) noexcept {
    return static_cast<double>(num_qubits) -
           2.0 * static_cast<double>(std::popcount(index));
}

/// Re <lhs| sum_j Z_j |rhs>.
[[nodiscard]] inline double zsum_inner_real(std::span<const Complex> lhs,
                                            std::span<const Complex> rhs,
                                            std::size_t num_qubits) {
    double acc = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        acc += zsum_eigenvalue(i, num_qubits) *
               (lhs[i].real() * rhs[i].real() + lhs[i].imag() * rhs[i].imag());
    }
    return acc;
}

/// out += coeff * sum_j Z_j in.
inline void add_zsum(std::span<const Complex> in, std::span<Complex> out,
                     std::size_t num_qubits, double coeff) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] += (coeff * zsum_eigenvalue(i, num_qubits)) * in[i];
    }
}

inline void apply_gate(std::span<Complex> amps, const Gate &gate,
                       double angle) {
    if (gate.kind == GateKind::CNOT) {
        cnot(amps, gate.control, gate.target);
    } else {
        rotate(amps, gate.kind, gate.target, angle);
    }
}

/// Applies the inverse of `gate` (rotation by -angle; CNOT is self-inverse).
inline void apply_gate_inverse(std::span<Complex> amps, const Gate &gate,
                               double angle) {
    apply_gate(amps, gate, gate.kind == GateKind::CNOT ? angle : -angle);
}

} // namespace kernels

inline void apply_gate(StateVector &state, const Gate &gate, double angle) {
    const std::size_t n = state.num_qubits();
    require<ConfigError>(gate.target < n, "gate target out of range");
    if (gate.kind == GateKind::CNOT) {
        require<ConfigError>(gate.control < n && gate.control != gate.target,
                             "invalid CNOT control");
    } else {
        require<ContractError>(std::isfinite(angle), "non-finite gate angle");
    }
    kernels::apply_gate(state.amplitudes(), gate, angle);
}

/// Per-gate angles resolved from slot angles (CNOT entries are 0).
[[nodiscard]] inline std::vector<double>
gate_angles(const Circuit &circuit, std::span<const double> slot_angles) {
    require<ContractError>(slot_angles.size() == circuit.num_angle_slots,
                           "expected " +
                               std::to_string(circuit.num_angle_slots) +
                               " angles, got " +
                               std::to_string(slot_angles.size()));
    std::vector<double> out(circuit.gates.size(), 0.0);
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        const Gate &g = circuit.gates[k];
        if (is_rotation(g.kind)) {
            out[k] = slot_angles[g.slot];
        }
    }
    return out;
}

/// Runs the circuit from |0...0> with one explicit angle per gate.
[[nodiscard]] inline StateVector
run_gates(const Circuit &circuit, std::span<const double> per_gate_angles) {
    StateVector state(circuit.num_qubits);
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        kernels::apply_gate(state.amplitudes(), circuit.gates[k],
                            per_gate_angles[k]);
    }
    return state;
}

[[nodiscard]] inline StateVector run_circuit(const Circuit &circuit,
                                             std::span<const double> angles) {
    const auto per_gate = gate_angles(circuit, angles);
    return run_gates(circuit, per_gate);
}

/// sum_j <Z_j> without the scale and shift.
[[nodiscard]] inline double zsum_expectation(const StateVector &state) {
    const auto amps = state.amplitudes();
    return kernels::zsum_inner_real(amps, amps, state.num_qubits());
}

[[nodiscard]] inline double expectation(const StateVector &state,
                                        const Observable &obs) {
    return obs.scale * zsum_expectation(state) + obs.shift;
}

struct AdjointResult {
    double value = 0.0;         ///< sum_j <Z_j>
    std::vector<double> d_gate; ///< derivative w.r.t. each gate's angle
};

/// Reverse-mode pass over explicit per-gate angles for the plain Z-sum.
[[nodiscard]] inline AdjointResult
adjoint_gates(const Circuit &circuit, std::span<const double> per_gate_angles) {
    const std::size_t nq = circuit.num_qubits;
    StateVector psi = run_gates(circuit, per_gate_angles);
    std::vector<Complex> phi(psi.amplitudes().begin(), psi.amplitudes().end());
    std::vector<Complex> lambda(phi.size(), Complex{0.0, 0.0});
    kernels::add_zsum(phi, lambda, nq, 1.0);

    AdjointResult out;
    out.value = kernels::zsum_inner_real(phi, phi, nq);
    out.d_gate.assign(circuit.gates.size(), 0.0);
    for (std::size_t k = circuit.gates.size(); k-- > 0;) {
        const Gate &g = circuit.gates[k];
        if (is_rotation(g.kind)) {
            // d/dt Re<psi|C|psi> = Im <lambda| P |phi>, phi taken after gate k
            out.d_gate[k] =
                kernels::pauli_inner(lambda, phi, g.kind, g.target).imag();
        }
        kernels::apply_gate_inverse(phi, g, per_gate_angles[k]);
        kernels::apply_gate_inverse(lambda, g, per_gate_angles[k]);
    }
    return out;
}

struct GradientResult {
    double value = 0.0;
    std::vector<double> grad;
};

/// Value of the observable and its gradient w.r.t. every angle slot.
/// Shared slots accumulate the contributions of each gate that uses them.
[[nodiscard]] inline GradientResult
adjoint_gradient(const Circuit &circuit, std::span<const double> angles,
                 const Observable &obs) {
    const auto per_gate = gate_angles(circuit, angles);
    const AdjointResult raw = adjoint_gates(circuit, per_gate);
    GradientResult out;
    out.value = obs.scale * raw.value + obs.shift;
    out.grad.assign(circuit.num_angle_slots, 0.0);
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        const Gate &g = circuit.gates[k];
        if (is_rotation(g.kind)) {
            out.grad[g.slot] += obs.scale * raw.d_gate[k];
        }
    }
    return out;
}

/// Two-point +-pi/2 parameter-shift derivative for one slot, summed over
/// each gate occurrence of that slot individually.
[[nodiscard]] inline double shift_rule_gradient(const Circuit &circuit,
                                                std::span<const double> angles,
                                                const Observable &obs,
                                                std::size_t slot) {
    require<ContractError>(slot < circuit.num_angle_slots,
                           "slot " + std::to_string(slot) + " out of range");
    auto per_gate = gate_angles(circuit, angles);
    constexpr double kShift = std::numbers::pi / 2.0;
    double grad = 0.0;
    bool referenced = false;
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        const Gate &g = circuit.gates[k];
        if (!is_rotation(g.kind) || g.slot != slot) {
            continue;
        }
        referenced = true;
        const double base = per_gate[k];
        per_gate[k] = base + kShift;
        const double plus = expectation(run_gates(circuit, per_gate), obs);
        per_gate[k] = base - kShift;
        const double minus = expectation(run_gates(circuit, per_gate), obs);
        per_gate[k] = base;
        grad += 0.5 * (plus - minus);
    }
    require<ContractError>(referenced, "slot " + std::to_string(slot) +
                                           " is not used by a rotation");
    return grad;
}

} // namespace qweak::qsim
