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
 * Second-order forward-mode ("jet") simulation in one input coordinate, with
 * a reverse pass for gate-angle gradients.
 *
 * The state is carried together with its first and second derivatives in the
 * input, (psi, psi', psi''). A rotation whose angle depends on the input with
 * derivatives (p, q) acts as R o T with T unipotent lower block-triangular:
 *
 *   psi'  <- psi'  - (i p / 2) P psi
 *   psi'' <- psi'' - i p P psi' - (p^2 / 4) psi - (i q / 2) P psi
 *
 * The outputs are quadratic forms in the jet, so a weighted combination of
 * them is Re <Psi|M|Psi> for a Hermitian block matrix M and the usual adjoint
 * recursion (uncompute forward, propagate M Psi through G^dagger) applies.
 */
#pragma once

#include "qweak/qsim.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace qweak::qsim {

/// A gate angle and its first two derivatives in the active input coordinate.
struct AngleJet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    [[nodiscard]] bool depends_on_input() const noexcept {
        return d1 != 0.0 || d2 != 0.0;
    }
};

/// Z-sum expectation and its first two input derivatives.
struct JetValue {
    double e0 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

namespace detail {

class JetState {
  public:
    JetState(std::size_t num_qubits, int order)
        : num_qubits_(num_qubits), dim_(std::size_t{1} << num_qubits),
          parts_(static_cast<std::size_t>(order) + 1),
          data_(parts_ * dim_, Complex{0.0, 0.0}) {}

    [[nodiscard]] std::size_t parts() const noexcept { return parts_; }
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] std::span<Complex> part(std::size_t c) noexcept {
        return {data_.data() + c * dim_, dim_};
    }
    [[nodiscard]] std::span<const Complex> part(std::size_t c) const noexcept {
        return {data_.data() + c * dim_, dim_};
    }

  private:
    std::size_t num_qubits_;
    std::size_t dim_;
    std::size_t parts_;
    std::vector<Complex> data_;
};

inline void axpy(std::span<const Complex> x, std::span<Complex> y,
                 double alpha) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

inline void apply_plain(JetState &s, const Gate &g, double angle) {
    for (std::size_t c = 0; c < s.parts(); ++c) {
        kernels::apply_gate(s.part(c), g, angle);
    }
}

/// Psi <- T Psi.
inline void apply_tangent_mix(JetState &s, const Gate &g, double p, double q) {
    const Complex i_unit{0.0, 1.0};
    if (s.parts() > 2) {
        kernels::add_pauli(s.part(1), s.part(2), g.kind, g.target,
                           -i_unit * p);
        axpy(s.part(0), s.part(2), -0.25 * p * p);
        kernels::add_pauli(s.part(0), s.part(2), g.kind, g.target,
                           -i_unit * (0.5 * q));
    }
    if (s.parts() > 1) {
        kernels::add_pauli(s.part(0), s.part(1), g.kind, g.target,
                           -i_unit * (0.5 * p));
    }
}

/// Psi <- T^{-1} Psi.
inline void apply_tangent_unmix(JetState &s, const Gate &g, double p,
                                double q) {
    const Complex i_unit{0.0, 1.0};
    if (s.parts() > 1) {
        kernels::add_pauli(s.part(0), s.part(1), g.kind, g.target,
                           i_unit * (0.5 * p));
    }
    if (s.parts() > 2) {
        kernels::add_pauli(s.part(1), s.part(2), g.kind, g.target,
                           i_unit * p);
        axpy(s.part(0), s.part(2), 0.25 * p * p);
        kernels::add_pauli(s.part(0), s.part(2), g.kind, g.target,
                           i_unit * (0.5 * q));
    }
}

/// Lambda <- T^dagger Lambda.
inline void apply_tangent_mix_adjoint(JetState &s, const Gate &g, double p,
                                      double q) {
    const Complex i_unit{0.0, 1.0};
    if (s.parts() > 1) {
        kernels::add_pauli(s.part(1), s.part(0), g.kind, g.target,
                           i_unit * (0.5 * p));
    }
    if (s.parts() > 2) {
        axpy(s.part(2), s.part(0), -0.25 * p * p);
        kernels::add_pauli(s.part(2), s.part(0), g.kind, g.target,
                           i_unit * (0.5 * q));
        kernels::add_pauli(s.part(2), s.part(1), g.kind, g.target,
                           i_unit * p);
    }
}

inline void forward(JetState &s, const Circuit &circuit,
                    std::span<const AngleJet> per_gate) {
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        const Gate &g = circuit.gates[k];
        const AngleJet &a = per_gate[k];
        if (is_rotation(g.kind) && a.depends_on_input()) {
            apply_tangent_mix(s, g, a.d1, a.d2);
        }
        apply_plain(s, g, a.value);
    }
}

[[nodiscard]] inline JetValue read_out(const JetState &s) {
    const std::size_t nq = s.num_qubits();
    JetValue v;
    v.e0 = kernels::zsum_inner_real(s.part(0), s.part(0), nq);
    if (s.parts() > 1) {
        v.e1 = 2.0 * kernels::zsum_inner_real(s.part(0), s.part(1), nq);
    }
    if (s.parts() > 2) {
        v.e2 = 2.0 * kernels::zsum_inner_real(s.part(0), s.part(2), nq) +
               2.0 * kernels::zsum_inner_real(s.part(1), s.part(1), nq);
    }
    return v;
}

} // namespace detail

/// Runs the jet forward. `order` is the highest input derivative (0..2).
[[nodiscard]] inline JetValue
jet_expectation(const Circuit &circuit, std::span<const AngleJet> per_gate,
                int order) {
    require<ContractError>(order >= 0 && order <= 2,
                           "jet order must be 0, 1 or 2");
    require<ContractError>(per_gate.size() == circuit.gates.size(),
                           "one angle jet per gate required");
    detail::JetState s(circuit.num_qubits, order);
    s.part(0)[0] = 1.0;
    detail::forward(s, circuit, per_gate);
    return detail::read_out(s);
}

/// Forward + reverse pass. Returns the jet values and writes
/// d(w0 e0 + w1 e1 + w2 e2)/d(angle of gate k) into `d_gate[k]` for every
/// rotation gate (CNOT entries are left at 0).
inline JetValue jet_adjoint(const Circuit &circuit,
                            std::span<const AngleJet> per_gate, int order,
                            const std::array<double, 3> &weights,
                            std::span<double> d_gate) {
    require<ContractError>(order >= 0 && order <= 2,
                           "jet order must be 0, 1 or 2");
    require<ContractError>(per_gate.size() == circuit.gates.size() &&
                               d_gate.size() == circuit.gates.size(),
                           "one angle jet and output slot per gate required");
    const std::size_t nq = circuit.num_qubits;
    detail::JetState phi(nq, order);
    phi.part(0)[0] = 1.0;
    detail::forward(phi, circuit, per_gate);
    const JetValue value = detail::read_out(phi);

    // Lambda = M Psi
    detail::JetState lambda(nq, order);
    const std::size_t parts = phi.parts();
    kernels::add_zsum(phi.part(0), lambda.part(0), nq, weights[0]);
    if (parts > 1) {
        kernels::add_zsum(phi.part(1), lambda.part(0), nq, weights[1]);
        kernels::add_zsum(phi.part(0), lambda.part(1), nq, weights[1]);
    }
    if (parts > 2) {
        kernels::add_zsum(phi.part(2), lambda.part(0), nq, weights[2]);
        kernels::add_zsum(phi.part(1), lambda.part(1), nq, 2.0 * weights[2]);
        kernels::add_zsum(phi.part(0), lambda.part(2), nq, weights[2]);
    }

    for (std::size_t k = circuit.gates.size(); k-- > 0;) {
        const Gate &g = circuit.gates[k];
        const AngleJet &a = per_gate[k];
        if (!is_rotation(g.kind)) {
            d_gate[k] = 0.0;
            detail::apply_plain(phi, g, 0.0);
            detail::apply_plain(lambda, g, 0.0);
            continue;
        }
        double d = 0.0;
        for (std::size_t c = 0; c < parts; ++c) {
            d += kernels::pauli_inner(lambda.part(c), phi.part(c), g.kind,
                                      g.target)
                     .imag();
        }
        d_gate[k] = d;
        detail::apply_plain(phi, g, -a.value);
        detail::apply_plain(lambda, g, -a.value);
        if (a.depends_on_input()) {
            detail::apply_tangent_unmix(phi, g, a.d1, a.d2);
            detail::apply_tangent_mix_adjoint(lambda, g, a.d1, a.d2);
        }
    }
    return value;
}

} // namespace qweak::qsim
