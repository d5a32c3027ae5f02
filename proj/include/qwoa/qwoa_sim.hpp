#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qwoa/landscape.hpp"

namespace qwoa {

using Amplitude = std::complex<double>;

/// 2^n amplitudes; index b is the bitstring with bit i = qubit/vertex i,
/// bit 0 least significant.
class Statevector {
public:
  /// |0...0>.
  explicit Statevector(int n, int max_n = kDefaultMaxQubits);
  Statevector(int n, std::vector<Amplitude> amplitudes);

  static Statevector basis_state(int n, std::uint64_t index);

  [[nodiscard]] int num_qubits() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
  [[nodiscard]] std::span<Amplitude> amplitudes() noexcept { return amps_; }
  [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  Amplitude& operator[](std::size_t b) noexcept { return amps_[b]; }
  const Amplitude& operator[](std::size_t b) const noexcept { return amps_[b]; }

  [[nodiscard]] double norm_squared() const noexcept;
  [[nodiscard]] std::vector<double> probabilities() const;

private:
  int n_;
  std::vector<Amplitude> amps_;
};

/// p layers of phase strengths gamma_k and mixing times t_k.
struct LayerSchedule {
  std::vector<double> gammas;
  std::vector<double> times;

  [[nodiscard]] std::size_t layers() const noexcept { return gammas.size(); }
  void validate() const;
};

Statevector equal_superposition(int n, int max_n = kDefaultMaxQubits);

// Sign conventions, used everywhere:
//   phase separator  amp_b <- exp(-i gamma C_b) amp_b
//   mixer            exp(-i t X) on every qubit, i.e. Rx(2t)
//                    [[cos t, -i sin t], [-i sin t, cos t]]

void apply_phase_separator_inplace(Statevector& psi, const ObjectiveTable& table, double gamma);
void apply_mixer_inplace(Statevector& psi, double t);

Statevector apply_phase_separator(Statevector psi, const ObjectiveTable& table, double gamma);
Statevector apply_mixer(Statevector psi, double t);

/// Equal superposition, then phase separator and mixer for each layer.
Statevector evolve(const ObjectiveTable& table, const LayerSchedule& schedule);
/// Same as evolve(), reusing `out`'s storage when the size matches.
void evolve_into(Statevector& out, const ObjectiveTable& table, const LayerSchedule& schedule);

/// sum_b |amp_b|^2 C_b
double expectation(const Statevector& psi, const ObjectiveTable& table);
/// Probability mass on the optimum set.
double optimal_probability(const Statevector& psi, const ObjectiveTable& table);

/// sin^2((2p + 1) asin(sqrt(M/N))).
double grover_success_probability(std::uint64_t search_space, std::uint64_t marked, int iterations);
/// Smallest p >= 0 whose success probability reaches `target`.
int grover_required_iterations(std::uint64_t search_space, std::uint64_t marked, double target);

// Debug dump: "QWOAPSI1", uint64 n, then 2^n little-endian (re, im) pairs.
void write_statevector_dump(const Statevector& psi, const std::filesystem::path& path);
Statevector read_statevector_dump(const std::filesystem::path& path);

} // namespace qwoa
