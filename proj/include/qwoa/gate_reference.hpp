#pragma once

#include <array>

#include "qwoa/instances.hpp"
#include "qwoa/qwoa_sim.hpp"

/// Gate-by-gate circuit simulation, kept as a cross-check for the fast
/// diagonal/product path. Works from the graph, not the objective table.
namespace qwoa::reference {

using Gate1 = std::array<std::array<Amplitude, 2>, 2>;

Gate1 hadamard();
/// P(phi) = diag(1, e^{i phi})
Gate1 phase_gate(double phi);
/// Rx(theta) = exp(-i theta X / 2)
Gate1 rx(double theta);

void apply_gate(Statevector& psi, int qubit, const Gate1& gate);
void apply_cnot(Statevector& psi, int control, int target);

/// H on every qubit of |0...0>, then per layer: CNOT(i,j) P(-gamma_k w_ij)
/// CNOT(i,j) for each edge, followed by Rx(2 t_k) on every qubit.
Statevector evolve_circuit(const WeightedGraph& graph, const LayerSchedule& schedule);

} // namespace qwoa::reference
