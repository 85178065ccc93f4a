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
 * Quantum-neural-network trial functions: tower feature maps, a
 * hardware-efficient ansatz and the scale/shift Z-sum readout.
 *
 * f(x) = a * sum_j <Z_j> + b, evaluated on the compiled circuit.
 *
 * Input derivatives come from one of two exact routes:
 *  - ShiftRule: parameter-shift tables over every feature-gate occurrence
 *    (two-point for first order, four-point double shifts for second order);
 *  - Jet: forward-mode propagation of (psi, psi', psi'') with a reverse pass.
 * Both give the same numbers to round-off; Jet is the cheap one.
 */
#pragma once

#include "qweak/error.hpp"
#include "qweak/fields.hpp"
#include "qweak/jet.hpp"
#include "qweak/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qweak {

enum class FeatureMapKind { ChebyshevTower, FourierTower };

struct FeatureMapSpec {
    FeatureMapKind kind = FeatureMapKind::ChebyshevTower;
    qsim::GateKind axis = qsim::GateKind::RY;
    /// Per-qubit angle multipliers; empty means m_j = j + 1.
    std::vector<double> multipliers;
    std::size_t input_dim = 0;
    double rescale = 1.0;

    [[nodiscard]] double multiplier(std::size_t qubit) const {
        return multipliers.empty() ? static_cast<double>(qubit + 1)
                                   : multipliers.at(qubit);
    }
    friend bool operator==(const FeatureMapSpec &,
                           const FeatureMapSpec &) = default;
};

/// `depth` layers of (RX, RY, RX) on every qubit followed by a CNOT chain.
struct AnsatzSpec {
    std::size_t depth = 1;
};

using LayoutBlock = std::variant<FeatureMapSpec, AnsatzSpec>;

struct QnnLayout {
    std::size_t num_qubits = 1;
    std::size_t input_dims = 1;
    std::vector<LayoutBlock> blocks;
};

struct ModelParams {
    std::vector<double> theta;
    double a = 1.0;
    double b = 0.0;

    [[nodiscard]] std::size_t size() const { return theta.size() + 2; }
};

struct DerivativeRequest {
    int dim = 0;
    int order = 0;
};

enum class DerivativeEngine { Jet, ShiftRule };

/// Angles of one feature map per qubit, with their input derivatives.
struct EncodedAngles {
    std::vector<double> angle;
    std::vector<double> d1;
    std::vector<double> d2;
};

/// Tower Chebyshev: phi_j = m_j acos(s x). Tower Fourier: phi_j = m_j s x.
[[nodiscard]] inline EncodedAngles encode_angles(const FeatureMapSpec &fm,
                                                 std::size_t num_qubits,
                                                 double x) {
    EncodedAngles out;
    out.angle.resize(num_qubits);
    out.d1.resize(num_qubits);
    out.d2.resize(num_qubits);
    const double s = fm.rescale;
    if (fm.kind == FeatureMapKind::ChebyshevTower) {
        const double u = s * x;
        if (!(std::abs(u) < 1.0)) {
            throw DomainError("Chebyshev feature map needs |s*x| < 1, got "
                              "s*x = " +
                              std::to_string(u) + " (missing rescale?)");
        }
        const double w = 1.0 - u * u;
        const double base = std::acos(u);
        const double base_d1 = -s / std::sqrt(w);
        const double base_d2 = -s * s * s * x / (w * std::sqrt(w));
        for (std::size_t j = 0; j < num_qubits; ++j) {
            const double m = fm.multiplier(j);
            out.angle[j] = m * base;
            out.d1[j] = m * base_d1;
            out.d2[j] = m * base_d2;
        }
    } else {
        for (std::size_t j = 0; j < num_qubits; ++j) {
            const double m = fm.multiplier(j);
            out.angle[j] = m * s * x;
            out.d1[j] = m * s;
            out.d2[j] = 0.0;
        }
    }
    return out;
}

/// Where a feature-map angle slot comes from.
struct FeatureSlot {
    std::size_t coord = 0;
    std::size_t qubit = 0;
};

/// A layout lowered to a circuit. Slots [0, num_theta) are ansatz angles;
/// slot num_theta + coord * num_qubits + qubit is a feature angle, shared by
/// every re-upload of that coordinate.
struct CompiledQnn {
    QnnLayout layout;
    qsim::Circuit circuit;
    std::size_t num_theta = 0;
    std::vector<FeatureSlot> feature_slots;
    std::vector<FeatureMapSpec> coord_maps;

    [[nodiscard]] std::size_t num_qubits() const { return layout.num_qubits; }
    [[nodiscard]] std::size_t input_dims() const { return layout.input_dims; }
    [[nodiscard]] bool is_theta_slot(std::size_t slot) const {
        return slot < num_theta;
    }
    [[nodiscard]] std::size_t feature_slot(std::size_t coord,
                                           std::size_t qubit) const {
        return num_theta + coord * layout.num_qubits + qubit;
    }
    /// Gate indices of every feature rotation encoding `coord`.
    [[nodiscard]] std::vector<std::size_t>
    feature_occurrences(std::size_t coord) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
            const auto &g = circuit.gates[k];
            if (qsim::is_rotation(g.kind) && !is_theta_slot(g.slot) &&
                feature_slots[g.slot - num_theta].coord == coord) {
                out.push_back(k);
            }
        }
        return out;
    }
};

[[nodiscard]] inline std::size_t ansatz_parameter_count(const QnnLayout &l) {
    std::size_t n = 0;
    for (const auto &block : l.blocks) {
        if (const auto *a = std::get_if<AnsatzSpec>(&block)) {
            n += 3 * l.num_qubits * a->depth;
        }
    }
    return n;
}

[[nodiscard]] inline CompiledQnn compile(const QnnLayout &layout) {
    using qsim::Gate;
    using qsim::GateKind;
    require<ConfigError>(layout.num_qubits >= 1 &&
                             layout.num_qubits <= qsim::kMaxQubits,
                         "layout qubit count out of range");
    require<ConfigError>(layout.input_dims == 1 || layout.input_dims == 2,
                         "layout must have 1 or 2 input coordinates");

    CompiledQnn out;
    out.layout = layout;
    const std::size_t nq = layout.num_qubits;
    out.num_theta = ansatz_parameter_count(layout);
    out.circuit.num_qubits = nq;
    out.circuit.num_angle_slots = out.num_theta + layout.input_dims * nq;
    out.feature_slots.resize(layout.input_dims * nq);
    std::vector<std::optional<FeatureMapSpec>> maps(layout.input_dims);

    std::size_t next_theta = 0;
    for (const auto &block : layout.blocks) {
        if (const auto *fm = std::get_if<FeatureMapSpec>(&block)) {
            require<ConfigError>(fm->input_dim < layout.input_dims,
                                 "feature map encodes a coordinate the "
                                 "layout does not have");
            require<ConfigError>(qsim::is_rotation(fm->axis),
                                 "feature map axis must be a rotation");
            require<ConfigError>(fm->rescale > 0.0 && fm->rescale <= 1.0,
                                 "feature map rescale must lie in (0, 1]");
            require<ConfigError>(fm->multipliers.empty() ||
                                     fm->multipliers.size() == nq,
                                 "one multiplier per qubit required");
            auto &known = maps[fm->input_dim];
            if (known) {
                require<ConfigError>(*known == *fm,
                                     "re-uploads of a coordinate must use "
                                     "the same feature map");
            } else {
                known = *fm;
            }
            for (std::size_t q = 0; q < nq; ++q) {
                const std::size_t slot = out.feature_slot(fm->input_dim, q);
                out.feature_slots[slot - out.num_theta] = {fm->input_dim, q};
                out.circuit.gates.push_back(Gate::rotation(fm->axis, q, slot));
            }
        } else {
            const auto &ansatz = std::get<AnsatzSpec>(block);
            for (std::size_t layer = 0; layer < ansatz.depth; ++layer) {
                for (std::size_t q = 0; q < nq; ++q) {
                    for (GateKind kind :
                         {GateKind::RX, GateKind::RY, GateKind::RX}) {
                        out.circuit.gates.push_back(
                            Gate::rotation(kind, q, next_theta++));
                    }
                }
                for (std::size_t q = 0; q + 1 < nq; ++q) {
                    out.circuit.gates.push_back(Gate::cnot(q, q + 1));
                }
            }
        }
    }
    for (std::size_t d = 0; d < layout.input_dims; ++d) {
        require<ConfigError>(maps[d].has_value(),
                             "coordinate " + std::to_string(d) +
                                 " has no feature map");
        out.coord_maps.push_back(*maps[d]);
    }
    out.circuit.validate();
    return out;
}

namespace detail {

inline void check_params(const CompiledQnn &model, const ModelParams &p) {
    require<ContractError>(p.theta.size() == model.num_theta,
                           "expected " + std::to_string(model.num_theta) +
                               " ansatz angles, got " +
                               std::to_string(p.theta.size()));
}

/// Slot angles for (theta, x) plus each feature slot's input derivatives.
struct SlotAngles {
    std::vector<double> angle;
    std::vector<double> d1;
    std::vector<double> d2;
};

[[nodiscard]] inline SlotAngles slot_angles(const CompiledQnn &model,
                                            const ModelParams &p,
                                            const Coord &x) {
    check_params(model, p);
    const std::size_t n = model.circuit.num_angle_slots;
    SlotAngles s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                 std::vector<double>(n, 0.0)};
    std::copy(p.theta.begin(), p.theta.end(), s.angle.begin());
    for (std::size_t d = 0; d < model.input_dims(); ++d) {
        const auto enc =
            encode_angles(model.coord_maps[d], model.num_qubits(), x[d]);
        for (std::size_t q = 0; q < model.num_qubits(); ++q) {
            const std::size_t slot = model.feature_slot(d, q);
            s.angle[slot] = enc.angle[q];
            s.d1[slot] = enc.d1[q];
            s.d2[slot] = enc.d2[q];
        }
    }
    return s;
}

/// Per-gate angle jets with input derivatives switched on for `dim` only.
[[nodiscard]] inline std::vector<qsim::AngleJet>
gate_jets(const CompiledQnn &model, const SlotAngles &s, int dim) {
    const auto &gates = model.circuit.gates;
    std::vector<qsim::AngleJet> out(gates.size());
    for (std::size_t k = 0; k < gates.size(); ++k) {
        const auto &g = gates[k];
        if (!qsim::is_rotation(g.kind)) {
            continue;
        }
        out[k].value = s.angle[g.slot];
        if (dim >= 0 && !model.is_theta_slot(g.slot) &&
            model.feature_slots[g.slot - model.num_theta].coord ==
                static_cast<std::size_t>(dim)) {
            out[k].d1 = s.d1[g.slot];
            out[k].d2 = s.d2[g.slot];
        }
    }
    return out;
}

/// One shifted circuit evaluation inside a shift table.
struct ShiftTerm {
    std::vector<std::pair<std::size_t, double>> shifts; ///< (gate, offset)
    double coeff = 0.0;
};

/// Shift table for d^order/dx_dim^order of sum_j <Z_j>:
/// quantity = sum_t coeff_t * E(angles shifted by shifts_t).
[[nodiscard]] inline std::vector<ShiftTerm>
shift_table(const CompiledQnn &model, const SlotAngles &s, int dim,
            int order) {
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    constexpr double kPi = std::numbers::pi;
    std::vector<ShiftTerm> table;
    if (order == 0) {
        table.push_back({{}, 1.0});
        return table;
    }
    const auto occ = model.feature_occurrences(static_cast<std::size_t>(dim));
    const auto &gates = model.circuit.gates;
    auto d1_of = [&](std::size_t k) { return s.d1[gates[k].slot]; };
    auto d2_of = [&](std::size_t k) { return s.d2[gates[k].slot]; };
    if (order == 1) {
        for (std::size_t m : occ) {
            table.push_back({{{m, kHalfPi}}, 0.5 * d1_of(m)});
            table.push_back({{{m, -kHalfPi}}, -0.5 * d1_of(m)});
        }
        return table;
    }
    // order 2: sum_m phi_m'' D_m + sum_{m,m'} phi_m' phi_m'' D_{m,m'}
    for (std::size_t m : occ) {
        if (d2_of(m) != 0.0) {
            table.push_back({{{m, kHalfPi}}, 0.5 * d2_of(m)});
            table.push_back({{{m, -kHalfPi}}, -0.5 * d2_of(m)});
        }
    }
    for (std::size_t i = 0; i < occ.size(); ++i) {
        const std::size_t m = occ[i];
        const double wmm = d1_of(m) * d1_of(m);
        table.push_back({{{m, kPi}}, 0.25 * wmm});
        table.push_back({{}, -0.5 * wmm});
        table.push_back({{{m, -kPi}}, 0.25 * wmm});
        for (std::size_t j = i + 1; j < occ.size(); ++j) {
            const std::size_t n = occ[j];
            // ordered pairs (m, n) and (n, m) share one double shift
            const double w = 2.0 * d1_of(m) * d1_of(n) * 0.25;
            table.push_back({{{m, kHalfPi}, {n, kHalfPi}}, w});
            table.push_back({{{m, kHalfPi}, {n, -kHalfPi}}, -w});
            table.push_back({{{m, -kHalfPi}, {n, kHalfPi}}, -w});
            table.push_back({{{m, -kHalfPi}, {n, -kHalfPi}}, w});
        }
    }
    return table;
}

[[nodiscard]] inline std::vector<double>
shifted_gate_angles(std::vector<double> base, const ShiftTerm &term) {
    for (const auto &[gate, offset] : term.shifts) {
        base[gate] += offset;
    }
    return base;
}

inline void check_request(const CompiledQnn &model,
                          const DerivativeRequest &req) {
    require<ContractError>(req.order >= 0 && req.order <= 2,
                           "derivative order must be 0, 1 or 2, got " +
                               std::to_string(req.order));
    require<ContractError>(req.dim >= 0 && static_cast<std::size_t>(
                                               req.dim) < model.input_dims(),
                           "derivative coordinate out of range");
}

} // namespace detail

/// f(x) = a * sum_j <Z_j> + b.
[[nodiscard]] inline double model_value(const CompiledQnn &model,
                                        const ModelParams &p, const Coord &x) {
    const auto s = detail::slot_angles(model, p, x);
    return p.a * qsim::zsum_expectation(qsim::run_circuit(model.circuit,
                                                          s.angle)) +
           p.b;
}

/// D_m: two-point shift of feature-gate occurrence `gate` (a gate index).
[[nodiscard]] inline double single_shift(const CompiledQnn &model,
                                         const ModelParams &p, const Coord &x,
                                         std::size_t gate) {
    const auto s = detail::slot_angles(model, p, x);
    const auto base = qsim::gate_angles(model.circuit, s.angle);
    constexpr double h = std::numbers::pi / 2.0;
    auto e = [&](double off) {
        auto g = base;
        g[gate] += off;
        return qsim::zsum_expectation(qsim::run_gates(model.circuit, g));
    };
    return 0.5 * (e(h) - e(-h));
}

/// D_{m,m'}: four-point double shift of two feature-gate occurrences.
[[nodiscard]] inline double double_shift(const CompiledQnn &model,
                                         const ModelParams &p, const Coord &x,
                                         std::size_t gate_m,
                                         std::size_t gate_n) {
    const auto s = detail::slot_angles(model, p, x);
    const auto base = qsim::gate_angles(model.circuit, s.angle);
    constexpr double h = std::numbers::pi / 2.0;
    auto e = [&](double om, double on) {
        auto g = base;
        g[gate_m] += om;
        g[gate_n] += on;
        return qsim::zsum_expectation(qsim::run_gates(model.circuit, g));
    };
    return 0.25 * (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h));
}

/// d^order f / dx_dim^order through the parameter-shift tables.
[[nodiscard]] inline double
model_input_derivative(const CompiledQnn &model, const ModelParams &p,
                       const Coord &x, const DerivativeRequest &req) {
    detail::check_request(model, req);
    const auto s = detail::slot_angles(model, p, x);
    const auto base = qsim::gate_angles(model.circuit, s.angle);
    double acc = 0.0;
    for (const auto &term : detail::shift_table(model, s, req.dim, req.order)) {
        acc += term.coeff *
               qsim::zsum_expectation(qsim::run_gates(
                   model.circuit, detail::shifted_gate_angles(base, term)));
    }
    return p.a * acc + (req.order == 0 ? p.b : 0.0);
}

struct ModelGradients {
    double value = 0.0;
    std::vector<double> dtheta;
    double da = 0.0;
    double db = 0.0;
};

/// A requested quantity (value or input derivative) and its gradient with
/// respect to (theta, a, b).
[[nodiscard]] inline ModelGradients
model_gradients(const CompiledQnn &model, const ModelParams &p, const Coord &x,
                const DerivativeRequest &req,
                DerivativeEngine engine = DerivativeEngine::ShiftRule) {
    detail::check_request(model, req);
    const auto s = detail::slot_angles(model, p, x);
    const auto &gates = model.circuit.gates;
    ModelGradients out;
    out.dtheta.assign(model.num_theta, 0.0);
    double zpart = 0.0;
    if (engine == DerivativeEngine::ShiftRule) {
        const auto base = qsim::gate_angles(model.circuit, s.angle);
        for (const auto &term :
             detail::shift_table(model, s, req.dim, req.order)) {
            const auto raw = qsim::adjoint_gates(
                model.circuit, detail::shifted_gate_angles(base, term));
            zpart += term.coeff * raw.value;
            for (std::size_t k = 0; k < gates.size(); ++k) {
                if (qsim::is_rotation(gates[k].kind) &&
                    model.is_theta_slot(gates[k].slot)) {
                    out.dtheta[gates[k].slot] +=
                        p.a * term.coeff * raw.d_gate[k];
                }
            }
        }
    } else {
        const auto jets = detail::gate_jets(model, s, req.dim);
        std::array<double, 3> w{0.0, 0.0, 0.0};
        w[static_cast<std::size_t>(req.order)] = 1.0;
        std::vector<double> d_gate(gates.size(), 0.0);
        const auto v =
            qsim::jet_adjoint(model.circuit, jets, req.order, w, d_gate);
        zpart = req.order == 0 ? v.e0 : (req.order == 1 ? v.e1 : v.e2);
        for (std::size_t k = 0; k < gates.size(); ++k) {
            if (qsim::is_rotation(gates[k].kind) &&
                model.is_theta_slot(gates[k].slot)) {
                out.dtheta[gates[k].slot] += p.a * d_gate[k];
            }
        }
    }
    out.value = p.a * zpart + (req.order == 0 ? p.b : 0.0);
    out.da = zpart;
    out.db = req.order == 0 ? 1.0 : 0.0;
    return out;
}

/// Evaluates every quantity in `needs` at x.
[[nodiscard]] inline FieldBundle
evaluate_fields(const CompiledQnn &model, const ModelParams &p, const Coord &x,
                FieldNeeds needs,
                DerivativeEngine engine = DerivativeEngine::Jet) {
    const auto s = detail::slot_angles(model, p, x);
    FieldBundle out;
    const int dims = static_cast<int>(model.input_dims());
    bool have_value = false;
    if (engine == DerivativeEngine::Jet) {
        for (int d = 0; d < dims; ++d) {
            const int order = needs.order(d);
            if (order == 0) {
                continue;
            }
            const auto v = qsim::jet_expectation(
                model.circuit, detail::gate_jets(model, s, d), order);
            out.f = p.a * v.e0 + p.b;
            out.d1[d] = p.a * v.e1;
            if (order == 2) {
                out.d2[d] = p.a * v.e2;
            }
            have_value = true;
        }
        if (!have_value) {
            out.f = p.a * qsim::zsum_expectation(
                              qsim::run_circuit(model.circuit, s.angle)) +
                    p.b;
        }
        return out;
    }
    const auto base = qsim::gate_angles(model.circuit, s.angle);
    auto quantity = [&](int dim, int order) {
        double acc = 0.0;
        for (const auto &term : detail::shift_table(model, s, dim, order)) {
            acc += term.coeff *
                   qsim::zsum_expectation(qsim::run_gates(
                       model.circuit, detail::shifted_gate_angles(base, term)));
        }
        return acc;
    };
    out.f = p.a * quantity(0, 0) + p.b;
    for (int d = 0; d < dims; ++d) {
        if (needs.needs_first(d) || needs.needs_second(d)) {
            out.d1[d] = p.a * quantity(d, 1);
        }
        if (needs.needs_second(d)) {
            out.d2[d] = p.a * quantity(d, 2);
        }
    }
    return out;
}

/// grad += d(sum of cot * quantity)/d(theta, a, b) for the quantities in
/// `needs`. `grad` is laid out as [theta..., a, b].
inline void accumulate_field_gradient(
    const CompiledQnn &model, const ModelParams &p, const Coord &x,
    FieldNeeds needs, const FieldBundle &cot, std::span<double> grad,
    DerivativeEngine engine = DerivativeEngine::Jet) {
    require<ContractError>(grad.size() == model.num_theta + 2,
                           "gradient buffer has the wrong length");
    if (cot.is_zero()) {
        return;
    }
    const auto s = detail::slot_angles(model, p, x);
    const auto &gates = model.circuit.gates;
    const int dims = static_cast<int>(model.input_dims());
    const std::size_t ia = model.num_theta;
    const std::size_t ib = model.num_theta + 1;
    std::vector<double> d_gate(gates.size(), 0.0);
    auto add_theta = [&](double scale) {
        for (std::size_t k = 0; k < gates.size(); ++k) {
            if (qsim::is_rotation(gates[k].kind) &&
                model.is_theta_slot(gates[k].slot)) {
                grad[gates[k].slot] += scale * d_gate[k];
            }
        }
    };
    grad[ib] += cot.f;

    if (engine == DerivativeEngine::Jet) {
        bool value_done = false;
        for (int d = 0; d < dims; ++d) {
            const int order = needs.order(d);
            if (order == 0) {
                continue;
            }
            const std::array<double, 3> w{value_done ? 0.0 : cot.f, cot.d1[d],
                                          order == 2 ? cot.d2[d] : 0.0};
            const auto v = qsim::jet_adjoint(
                model.circuit, detail::gate_jets(model, s, d), order, w,
                d_gate);
            grad[ia] += w[0] * v.e0 + w[1] * v.e1 + w[2] * v.e2;
            add_theta(p.a);
            value_done = true;
        }
        if (!value_done && cot.f != 0.0) {
            const auto v = qsim::jet_adjoint(
                model.circuit, detail::gate_jets(model, s, -1), 0,
                {cot.f, 0.0, 0.0}, d_gate);
            grad[ia] += cot.f * v.e0;
            add_theta(p.a);
        }
        return;
    }

    // Shift-rule route: collapse all quantities onto their shifted circuits.
    const auto base = qsim::gate_angles(model.circuit, s.angle);
    auto run_table = [&](int dim, int order, double weight) {
        if (weight == 0.0) {
            return;
        }
        for (const auto &term : detail::shift_table(model, s, dim, order)) {
            const auto raw = qsim::adjoint_gates(
                model.circuit, detail::shifted_gate_angles(base, term));
            grad[ia] += weight * term.coeff * raw.value;
            d_gate = raw.d_gate;
            add_theta(p.a * weight * term.coeff);
        }
    };
    run_table(0, 0, cot.f);
    for (int d = 0; d < dims; ++d) {
        if (needs.needs_first(d) || needs.needs_second(d)) {
            run_table(d, 1, cot.d1[d]);
        }
        if (needs.needs_second(d)) {
            run_table(d, 2, cot.d2[d]);
        }
    }
}

} // namespace qweak
