#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergoflow/core.hpp"
#include "ergoflow/thermomaj.hpp"

namespace ergoflow {

/// One open-cycle engine: a working body spectrum between a hot and a cold
/// bath, beta_hot < beta_cold.
struct EngineConfig {
  Spectrum spectrum;
  InverseTemperature beta_cold;
  InverseTemperature beta_hot;

  EngineConfig(Spectrum spectrum, InverseTemperature beta_cold, InverseTemperature beta_hot);

  double carnot_efficiency() const;
};

/// Heat drawn from the hot bath in the first stroke: E(final) - E(initial).
double heat(const DiagonalState& initial, const DiagonalState& final_state);

/// Work stored in the battery = ergotropy of the post-stroke state. The
/// engine starts from a passive (cold Gibbs) state; a non-passive initial
/// state violates the model and throws.
double work(const DiagonalState& initial, const DiagonalState& final_state);

/// work/heat. Empty when heat <= 1e-12 (final = initial gives 0/0).
std::optional<double> efficiency(const DiagonalState& initial, const DiagonalState& final_state);

struct ExtremalPerformance {
  DiagonalState state;
  double work;
  double heat;
  std::optional<double> efficiency;
  BetaOrder order;    // beta-order of the state at beta_hot
  std::string label;  // "3_(312)" for qutrits, the beta-order tuple otherwise
};

struct EngineReport {
  double work_max;
  double efficiency_max;
  DiagonalState work_optimal_state;
  DiagonalState efficiency_optimal_state;
  std::string work_optimal_label;
  std::string efficiency_optimal_label;
  double carnot;
  std::vector<ExtremalPerformance> per_extremal;  // sorted by probs, lexicographic
};

/// Full optimization over the extremal points of the thermal polytope of the
/// cold Gibbs state at the hot bath temperature.
EngineReport optimize(const EngineConfig& config, const EnumerationOptions& options = {});

struct QubitPerformance {
  double work;                       // clamped at 0 outside the operational region
  std::optional<double> efficiency;  // reported only when work > 0
};

/// Closed-form qubit optimum: W = omega (2 e^{-bH w}/(1 + e^{-bC w}) - 1),
/// eta = 1 - (1 - e^{-bH w})/(e^{-bH w} - e^{-bC w}).
QubitPerformance qubit_closed_form(const EngineConfig& config);

/// The minimal-coupling qubit engine, for comparison: same formulas with
/// e^{-bC w} replaced by e^{-(bC + bH) w}. Dominates the open cycle, with
/// equality as beta_cold -> infinity.
QubitPerformance minimal_coupling_reference(const EngineConfig& config);

struct QutritExtremal {
  int index;  // 1..6, the paper-order label of the extremal state
  DiagonalState state;
  double work;
  double heat;
  BetaOrder order;
};

struct QutritAnalytics {
  double beta0;  // root of e^{-b w1} + e^{-b w2} = 1
  bool near_branch_boundary;  // |beta_hot - beta0| < 1e-9: trust enumeration
  std::vector<QutritExtremal> extremals;  // 1..4, plus 5..6 when beta_hot < beta0
};

/// Closed-form qutrit extremal states with their literal work and heat
/// expressions (independent of the enumeration path).
QutritAnalytics qutrit_analytics(const EngineConfig& config);

}  // namespace ergoflow
