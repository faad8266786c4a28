#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergoflow/core.hpp"
#include "ergoflow/thermomaj.hpp"

namespace ergoflow {

/// One swept variable: `steps` values from min to max, linearly or
/// log-spaced. Recognized names: beta_hot, beta_cold, omega_1, omega_2, ...,
/// dim.
struct GridAxis {
  std::string name;
  double min;
  double max;
  std::size_t steps;
  bool log = false;

  GridAxis(std::string name, double min, double max, std::size_t steps, bool log = false);

  std::vector<double> values() const;
};

/// printf "%.17g": shortest text that round-trips a double exactly.
std::string format_value(double x);

/// Engine parameter sweep. Fixed values hold wherever an axis does not
/// override them; omegas are the level spacings above the ground level
/// (omega_1 < omega_2 < ...). A dim axis requires exactly one omega and
/// builds the equally spaced ladder. Output is a CSV string with columns
///   beta_hot, beta_cold, omega_1..omega_{d-1}, dim, work_max,
///   efficiency_max, optimal_protocol_label, carnot
/// one row per grid point, grid-major (first axis slowest). Points with
/// beta_hot >= beta_cold get zero work and label "0".
struct EngineSweepSpec {
  std::vector<double> omegas;
  double beta_hot = 0.0;
  double beta_cold = 0.0;
  std::vector<GridAxis> axes;
  unsigned workers = 0;           // 0 = hardware concurrency
  std::size_t max_dim = 0;        // 0 = default_dimension_cap()
};

std::string engine_sweep_csv(const EngineSweepSpec& spec);

/// Qutrit protocol map over a (beta_hot, beta_cold) grid. CSV columns
/// beta_hot, beta_cold, label; label "0" where no positive work exists
/// (including beta_hot >= beta_cold).
struct RegionMapSpec {
  double omega1 = 0.0;
  double omega2 = 0.0;
  GridAxis beta_hot_axis{"beta_hot", 1.0, 1.0, 1};
  GridAxis beta_cold_axis{"beta_cold", 1.0, 1.0, 1};
  unsigned workers = 0;
};

std::string region_map_csv(const RegionMapSpec& spec);

/// Oscillator saturation sweep. CSV columns omega, dim, length, delta,
/// bound, extracted, gap, truncation_ok.
std::string oscillator_csv(InverseTemperature beta, const std::vector<double>& omegas,
                           const std::vector<std::size_t>& dims, unsigned workers = 0);

/// Ergotropy/bound report for one state: ergotropy, passive state, beta*,
/// and the three bounds, as a JSON object (schema in docs/output.schema.json).
nlohmann::json bound_report(const DiagonalState& state, InverseTemperature beta);

/// One row per extremal point of the thermal polytope: probabilities,
/// beta-order label, energy, ergotropy.
std::string extremal_table_csv(const DiagonalState& state, InverseTemperature beta,
                               const EnumerationOptions& options = {});
nlohmann::json extremal_table_json(const DiagonalState& state, InverseTemperature beta,
                                   const EnumerationOptions& options = {});

}  // namespace ergoflow
