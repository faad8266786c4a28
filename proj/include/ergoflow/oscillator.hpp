#pragma once

#include <cstddef>
#include <vector>

#include "ergoflow/core.hpp"
#include "ergoflow/thermomaj.hpp"

namespace ergoflow {

/// Shift parameter of the harmonic-oscillator saturating protocol:
/// length = 1 + log(Z_inf) / (beta*omega) with Z_inf = 1/(1 - e^{-beta*omega}),
/// delta = distance of length to the nearest integer. The extraction bound
/// (1/beta) log Z is attained exactly when delta = 0.
struct ShiftParameter {
  double length;
  double delta;
};

ShiftParameter shift_parameter(double omega, InverseTemperature beta);

/// Frequency omega > 0 with delta = 0 and length = n + 1, i.e. the root of
/// log(1/(1 - e^{-beta*omega})) = n * beta*omega. Unique for n >= 1.
double delta_zero_frequency(InverseTemperature beta, int n);

/// Ground state of the dim-level truncated oscillator at frequency omega.
DiagonalState oscillator_ground_state(double omega, std::size_t dim);

/// Highest-energy state reachable from the truncated ground state by a
/// thermal operation at bath temperature beta.
DiagonalState max_energy_final(double omega, InverseTemperature beta, std::size_t dim);

/// The saturating Gibbs-preserving matrix, truncated to dim levels: the
/// ground level is sent to the Gibbs distribution shifted up by length-1
/// levels, levels above the shift fall back to the ground level, the levels
/// in between stay put. Only defined when delta is (numerically) zero and
/// the shifted support fits, i.e. round(length) <= dim; throws
/// std::domain_error otherwise -- use max_energy_final for generic
/// frequencies.
ThermalProcessMatrix saturating_map_truncated(double omega, InverseTemperature beta,
                                              std::size_t dim);

struct SaturationRow {
  double omega;
  std::size_t dim;
  double length;        // shift parameter L
  double delta;         // distance of L to the nearest integer
  double bound;         // (1/beta) log Z_dim, the extraction bound
  double extracted;     // ergotropy of the max-energy reachable state
  double gap;           // bound - extracted (>= 0 up to rounding)
  bool truncation_ok;   // e^{-beta*omega*dim} < 1e-12: tail mass negligible
};

/// One row per (omega, dim) pair, sorted by omega then dim. Evaluated in
/// parallel on `workers` threads (0 = hardware concurrency).
std::vector<SaturationRow> saturation_sweep(InverseTemperature beta,
                                            const std::vector<double>& omegas,
                                            const std::vector<std::size_t>& dims,
                                            unsigned workers = 0);

}  // namespace ergoflow
