#include "qwoa/gate_reference.hpp"

#include <cmath>

#include "qwoa/error.hpp"

namespace qwoa::reference {

Gate1 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{{r, r}, {r, -r}}};
}

Gate1 phase_gate(double phi) { return {{{1.0, 0.0}, {0.0, std::polar(1.0, phi)}}}; }

Gate1 rx(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {{{c, Amplitude(0.0, -s)}, {Amplitude(0.0, -s), c}}};
}

void apply_gate(Statevector& psi, int qubit, const Gate1& g) {
  if (qubit < 0 || qubit >= psi.num_qubits()) throw InvalidArgument("qubit out of range");
  const std::size_t mask = std::size_t{1} << qubit;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    if (b & mask) continue;
    const Amplitude a0 = psi[b];
    const Amplitude a1 = psi[b | mask];
    psi[b] = g[0][0] * a0 + g[0][1] * a1;
    psi[b | mask] = g[1][0] * a0 + g[1][1] * a1;
  }
}

void apply_cnot(Statevector& psi, int control, int target) {
  if (control == target) throw InvalidArgument("CNOT needs distinct qubits");
  const std::size_t cm = std::size_t{1} << control;
  const std::size_t tm = std::size_t{1} << target;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    if ((b & cm) && !(b & tm)) std::swap(psi[b], psi[b | tm]);
  }
}

Statevector evolve_circuit(const WeightedGraph& graph, const LayerSchedule& schedule) {
  schedule.validate();
  const int n = graph.num_vertices();
  Statevector psi(n);
  for (int q = 0; q < n; ++q) apply_gate(psi, q, hadamard());
  for (std::size_t k = 0; k < schedule.layers(); ++k) {
    for (const auto& e : graph.edges()) {
      apply_cnot(psi, e.i, e.j);
      apply_gate(psi, e.j, phase_gate(-schedule.gammas[k] * e.w));
      apply_cnot(psi, e.i, e.j);
    }
    for (int q = 0; q < n; ++q) apply_gate(psi, q, rx(2.0 * schedule.times[k]));
  }
  return psi;
}

} // namespace qwoa::reference
