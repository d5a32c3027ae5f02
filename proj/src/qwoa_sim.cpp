#include "qwoa/qwoa_sim.hpp"

#include <cmath>
#include <numbers>

#include "qwoa/binary_io.hpp"
#include "qwoa/error.hpp"

namespace qwoa {

namespace {

void check_qubits(int n, int max_n) {
  if (n < 1) throw InvalidArgument("need at least one qubit");
  if (n > max_n || n > 62) {
    throw CapacityError("n = " + std::to_string(n) + " exceeds the statevector cap of " +
                        std::to_string(max_n));
  }
}

void check_dims(const Statevector& psi, const ObjectiveTable& table) {
  if (psi.size() != table.size()) throw InvalidArgument("statevector/table dimension mismatch");
}

} // namespace

Statevector::Statevector(int n, int max_n) : n_(n) {
  check_qubits(n, max_n);
  amps_.assign(std::size_t{1} << n, Amplitude{});
  amps_[0] = 1.0;
}

Statevector::Statevector(int n, std::vector<Amplitude> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
  check_qubits(n, 62);
  if (amps_.size() != (std::size_t{1} << n)) throw InvalidArgument("amplitude count != 2^n");
}

Statevector Statevector::basis_state(int n, std::uint64_t index) {
  Statevector psi(n);
  if (index >= psi.size()) throw InvalidArgument("basis index out of range");
  psi.amps_[0] = 0.0;
  psi.amps_[index] = 1.0;
  return psi;
}

double Statevector::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t b = 0; b < p.size(); ++b) p[b] = std::norm(amps_[b]);
  return p;
}

void LayerSchedule::validate() const {
  if (gammas.empty()) throw InvalidArgument("schedule needs p >= 1 layers");
  if (gammas.size() != times.size()) throw InvalidArgument("gamma/time lengths differ");
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    if (!std::isfinite(gammas[k]) || !std::isfinite(times[k])) {
      throw InvalidArgument("schedule entries must be finite");
    }
  }
}

Statevector equal_superposition(int n, int max_n) {
  if (n < 2) throw InvalidArgument("equal superposition needs n >= 2");
  Statevector psi(n, max_n);
  const double amp = std::pow(2.0, -0.5 * n);
  for (auto& a : psi.amplitudes()) a = amp;
  return psi;
}

void apply_phase_separator_inplace(Statevector& psi, const ObjectiveTable& table, double gamma) {
  check_dims(psi, table);
  if (gamma == 0.0) return;
  auto amps = psi.amplitudes();
  const double* c = table.values.data();
  // C_b and C_~b are bit-identical, so each phase factor serves both.
  const std::size_t last = amps.size() - 1;
  for (std::size_t b = 0; b < amps.size() / 2; ++b) {
    const double phi = -gamma * c[b];
    const double re = std::cos(phi);
    const double im = std::sin(phi);
    for (const std::size_t idx : {b, last - b}) {
      const Amplitude a = amps[idx];
      amps[idx] = {a.real() * re - a.imag() * im, a.real() * im + a.imag() * re};
    }
  }
}

namespace {

void mix_one_qubit(std::span<Amplitude> amps, int q, double cs, double sn) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    Amplitude* lo = amps.data() + base;
    Amplitude* hi = lo + stride;
    for (std::size_t k = 0; k < stride; ++k) {
      const Amplitude a = lo[k];
      const Amplitude b = hi[k];
      // (c a - i s b, -i s a + c b)
      lo[k] = {cs * a.real() + sn * b.imag(), cs * a.imag() - sn * b.real()};
      hi[k] = {cs * b.real() + sn * a.imag(), cs * b.imag() - sn * a.real()};
    }
  }
}

// Rx(2t) on qubits q and q+1 in one pass. With M = [[c, -is], [-is, c]],
// M (x) M sends a00 to c^2 a00 - s^2 a11 - i cs (a01 + a10), and the other
// three outputs follow by symmetry.
void mix_two_qubits(std::span<Amplitude> amps, int q, double cs, double sn) {
  const std::size_t s1 = std::size_t{1} << q;
  const std::size_t s2 = s1 << 1;
  const double cc = cs * cs, ss = sn * sn, cx = cs * sn;
  for (std::size_t base = 0; base < amps.size(); base += 2 * s2) {
    Amplitude* p00 = amps.data() + base;
    Amplitude* p01 = p00 + s1;
    Amplitude* p10 = p00 + s2;
    Amplitude* p11 = p10 + s1;
    for (std::size_t k = 0; k < s1; ++k) {
      const Amplitude a00 = p00[k], a01 = p01[k], a10 = p10[k], a11 = p11[k];
      const double xr = a01.real() + a10.real(), xi = a01.imag() + a10.imag();
      const double yr = a00.real() + a11.real(), yi = a00.imag() + a11.imag();
      p00[k] = {cc * a00.real() - ss * a11.real() + cx * xi, cc * a00.imag() - ss * a11.imag() - cx * xr};
      p11[k] = {cc * a11.real() - ss * a00.real() + cx * xi, cc * a11.imag() - ss * a00.imag() - cx * xr};
      p01[k] = {cc * a01.real() - ss * a10.real() + cx * yi, cc * a01.imag() - ss * a10.imag() - cx * yr};
      p10[k] = {cc * a10.real() - ss * a01.real() + cx * yi, cc * a10.imag() - ss * a01.imag() - cx * yr};
    }
  }
}

} // namespace

void apply_mixer_inplace(Statevector& psi, double t) {
  if (t == 0.0) return;
  const double cs = std::cos(t);
  const double sn = std::sin(t);
  auto amps = psi.amplitudes();
  const int n = psi.num_qubits();
  int q = 0;
  for (; q + 1 < n; q += 2) mix_two_qubits(amps, q, cs, sn);
  if (q < n) mix_one_qubit(amps, q, cs, sn);
}

Statevector apply_phase_separator(Statevector psi, const ObjectiveTable& table, double gamma) {
  apply_phase_separator_inplace(psi, table, gamma);
  return psi;
}

Statevector apply_mixer(Statevector psi, double t) {
  apply_mixer_inplace(psi, t);
  return psi;
}

void evolve_into(Statevector& out, const ObjectiveTable& table, const LayerSchedule& schedule) {
  schedule.validate();
  if (out.num_qubits() != table.n) out = Statevector(table.n);
  const double amp = std::pow(2.0, -0.5 * table.n);
  for (auto& a : out.amplitudes()) a = amp;
  for (std::size_t k = 0; k < schedule.layers(); ++k) {
    apply_phase_separator_inplace(out, table, schedule.gammas[k]);
    apply_mixer_inplace(out, schedule.times[k]);
  }
}

Statevector evolve(const ObjectiveTable& table, const LayerSchedule& schedule) {
  if (table.n < 2) throw InvalidArgument("evolve needs n >= 2");
  Statevector psi(table.n);
  evolve_into(psi, table, schedule);
  return psi;
}

double expectation(const Statevector& psi, const ObjectiveTable& table) {
  check_dims(psi, table);
  double s = 0.0;
  const auto amps = psi.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) s += std::norm(amps[b]) * table.values[b];
  return s;
}

double optimal_probability(const Statevector& psi, const ObjectiveTable& table) {
  check_dims(psi, table);
  double s = 0.0;
  for (auto b : table.optima) s += std::norm(psi[b]);
  return s;
}

double grover_success_probability(std::uint64_t search_space, std::uint64_t marked,
                                  int iterations) {
  if (marked < 1 || marked > search_space) throw InvalidArgument("need 1 <= M <= N");
  if (iterations < 0) throw InvalidArgument("iterations must be >= 0");
  const double theta =
      std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(search_space)));
  const double s = std::sin((2.0 * iterations + 1.0) * theta);
  return s * s;
}

int grover_required_iterations(std::uint64_t search_space, std::uint64_t marked, double target) {
  if (!(target > 0.0) || target > 1.0) throw InvalidArgument("target must lie in (0, 1]");
  if (marked < 1 || marked > search_space) throw InvalidArgument("need 1 <= M <= N");
  const double theta =
      std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(search_space)));
  // Success rises monotonically up to the first peak near p = pi/(4 theta) - 1/2.
  const int last = static_cast<int>(std::ceil(std::numbers::pi / (4.0 * theta))) + 1;
  for (int p = 0; p <= last; ++p) {
    if (grover_success_probability(search_space, marked, p) >= target) return p;
  }
  throw InvalidArgument("Grover target probability is unreachable");
}

void write_statevector_dump(const Statevector& psi, const std::filesystem::path& path) {
  BinaryWriter out(path);
  out.magic("QWOAPSI1");
  out.u64(static_cast<std::uint64_t>(psi.num_qubits()));
  for (const auto& a : psi.amplitudes()) {
    out.f64(a.real());
    out.f64(a.imag());
  }
  out.close();
}

Statevector read_statevector_dump(const std::filesystem::path& path) {
  BinaryReader in(path);
  in.expect_magic("QWOAPSI1");
  const auto n = in.u64();
  if (n < 1 || n > 40) throw FormatError("statevector dump has implausible n");
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double re = in.f64();
    a = {re, in.f64()};
  }
  in.expect_end();
  return {static_cast<int>(n), std::move(amps)};
}

} // namespace qwoa
