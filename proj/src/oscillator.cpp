#include "ergoflow/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergoflow/ergotropy.hpp"
#include "ergoflow/parallel.hpp"

namespace ergoflow {

namespace {
constexpr double kDeltaZero = 1e-9;
constexpr double kTailCutoff = 1e-12;
}  // namespace

ShiftParameter shift_parameter(double omega, InverseTemperature beta) {
  if (!(omega > 0.0)) throw std::domain_error("shift parameter requires omega > 0");
  if (beta.is_infinite()) throw std::domain_error("shift parameter requires finite beta");
  const double x = beta.value() * omega;
  const double log_z = -std::log1p(-std::exp(-x));  // log Z_inf = -log(1 - e^{-x})
  const double length = 1.0 + log_z / x;
  const double frac = length - std::floor(length);
  return {length, std::min(frac, 1.0 - frac)};
}

double delta_zero_frequency(InverseTemperature beta, int n) {
  if (n < 1) throw std::domain_error("delta-zero frequency requires n >= 1");
  if (beta.is_infinite()) throw std::domain_error("delta-zero frequency requires finite beta");
  // g(x) = -log(1 - e^{-x}) - n*x in x = beta*omega: +inf at 0+, negative for
  // large x, strictly decreasing.
  auto g = [&](double x) { return -std::log1p(-std::exp(-x)) - n * x; };
  double lo = 1e-12, hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / beta.value();
}

DiagonalState oscillator_ground_state(double omega, std::size_t dim) {
  if (dim < 2) throw std::domain_error("oscillator needs at least two levels");
  std::vector<double> probs(dim, 0.0);
  probs[0] = 1.0;
  return DiagonalState(Spectrum::harmonic(omega, dim), std::move(probs));
}

DiagonalState max_energy_final(double omega, InverseTemperature beta, std::size_t dim) {
  return max_energy_state(oscillator_ground_state(omega, dim), beta);
}

ThermalProcessMatrix saturating_map_truncated(double omega, InverseTemperature beta,
                                              std::size_t dim) {
  if (dim < 2) throw std::domain_error("oscillator needs at least two levels");
  const ShiftParameter sp = shift_parameter(omega, beta);
  if (sp.delta > kDeltaZero) {
    throw std::domain_error(
        "saturating map exists only at delta = 0 frequencies; "
        "use max_energy_final for generic omega");
  }
  const auto length = static_cast<std::size_t>(std::llround(sp.length));
  if (length > dim) {
    throw std::domain_error("shifted support does not fit the truncated oscillator");
  }
  const double x = beta.value() * omega;

  std::vector<double> a(dim * dim, 0.0);
  // Column 0: Gibbs shifted up by length-1 levels. With delta = 0 the
  // shifted weights are plain Boltzmann factors e^{-x r}; the truncated
  // tail is folded into the last level.
  double mass = 0.0;
  for (std::size_t r = length - 1; r + 1 < dim; ++r) {
    a[r * dim + 0] = std::exp(-x * static_cast<double>(r));
    mass += a[r * dim + 0];
  }
  a[(dim - 1) * dim + 0] = 1.0 - mass;
  // Levels strictly between the ground level and the shift stay put.
  for (std::size_t j = 1; j + 1 < length; ++j) a[j * dim + j] = 1.0;
  // Levels at or above the shift fall back to the ground level.
  for (std::size_t j = length - 1; j < dim; ++j) {
    if (j > 0) a[0 * dim + j] = 1.0;
  }

  // The matrix fixes the infinite-dimensional Gibbs weights exactly; on the
  // truncated Gibbs state the folded tail leaves a residue of the order of
  // the discarded mass.
  const double tail = std::exp(-x * static_cast<double>(dim - length + 1));
  const double tolerance = std::max(1e-10, 16.0 * tail);
  return ThermalProcessMatrix(std::move(a), Spectrum::harmonic(omega, dim), beta, tolerance);
}

std::vector<SaturationRow> saturation_sweep(InverseTemperature beta,
                                            const std::vector<double>& omegas,
                                            const std::vector<std::size_t>& dims,
                                            unsigned workers) {
  if (beta.is_infinite()) throw std::domain_error("saturation sweep requires finite beta");
  std::vector<double> sorted_omegas = omegas;
  std::vector<std::size_t> sorted_dims = dims;
  std::sort(sorted_omegas.begin(), sorted_omegas.end());
  std::sort(sorted_dims.begin(), sorted_dims.end());

  const std::size_t n = sorted_omegas.size() * sorted_dims.size();
  std::vector<SaturationRow> rows(n);
  if (workers == 0) workers = default_worker_count();
  parallel_for(n, workers, [&](std::size_t k) {
    const double omega = sorted_omegas[k / sorted_dims.size()];
    const std::size_t dim = sorted_dims[k % sorted_dims.size()];
    const ShiftParameter sp = shift_parameter(omega, beta);
    const DiagonalState ground = oscillator_ground_state(omega, dim);
    const double bound = extraction_bound(ground, beta);
    const double extracted = ergotropy(max_energy_state(ground, beta));
    rows[k] = {omega,
               dim,
               sp.length,
               sp.delta,
               bound,
               extracted,
               bound - extracted,
               std::exp(-beta.value() * omega * static_cast<double>(dim)) < kTailCutoff};
  });
  return rows;
}

}  // namespace ergoflow
