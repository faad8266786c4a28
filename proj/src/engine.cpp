#include "ergoflow/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ergoflow/ergotropy.hpp"

namespace ergoflow {

namespace {
constexpr double kHeatTolerance = 1e-12;
constexpr double kHeatSlack = 1e-10;
constexpr double kBranchProximity = 1e-9;

double boltzmann(InverseTemperature beta, double w) {
  if (beta.is_infinite()) return w > 0.0 ? 0.0 : 1.0;
  return std::exp(-beta.value() * w);
}

// Root of e^{-b w1} + e^{-b w2} = 1, +infinity when no finite root exists
// (degenerate w1 = 0). The function is strictly decreasing in b.
double solve_beta0(double w1, double w2) {
  auto f = [&](double b) { return std::exp(-b * w1) + std::exp(-b * w2) - 1.0; };
  double lo = 1e-9, hi = 1e4;
  int expansions = 0;
  while (f(hi) > 0.0) {
    hi *= 8.0;
    if (++expansions > 40) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool is_passive(const DiagonalState& state) {
  for (std::size_t i = 1; i < state.dim(); ++i) {
    if (state.prob(i) > state.prob(i - 1) + 1e-12) return false;
  }
  return true;
}

std::string protocol_label(const EngineConfig& config, const BetaOrder& order) {
  if (config.spectrum.dim() != 3) return order.label();
  const double beta0 = solve_beta0(config.spectrum.level(1), config.spectrum.level(2));
  const bool above = config.beta_hot.value() >= beta0;
  const auto& p = order.perm;
  int index = -1;
  if (p == std::vector<std::size_t>{1, 0, 2}) index = 1;        // (213)
  else if (p == std::vector<std::size_t>{0, 2, 1}) index = 2;   // (132)
  else if (p == std::vector<std::size_t>{2, 0, 1}) index = 3;   // (312)
  else if (p == std::vector<std::size_t>{1, 2, 0}) index = above ? 4 : 5;  // (231)
  else if (p == std::vector<std::size_t>{2, 1, 0}) index = above ? 4 : 6;  // (321)
  if (index < 0) return "S_" + order.label();
  return std::to_string(index) + "_" + order.label();
}
}  // namespace

EngineConfig::EngineConfig(Spectrum spectrum_in, InverseTemperature beta_cold_in,
                           InverseTemperature beta_hot_in)
    : spectrum(std::move(spectrum_in)), beta_cold(beta_cold_in), beta_hot(beta_hot_in) {
  if (beta_hot.is_infinite()) throw std::invalid_argument("beta_hot must be finite");
  if (!beta_cold.is_infinite() && !(beta_hot.value() < beta_cold.value())) {
    throw std::invalid_argument("engine requires beta_hot < beta_cold");
  }
}

double EngineConfig::carnot_efficiency() const {
  if (beta_cold.is_infinite()) return 1.0;
  return 1.0 - beta_hot.value() / beta_cold.value();
}

double heat(const DiagonalState& initial, const DiagonalState& final_state) {
  if (!(initial.spectrum() == final_state.spectrum())) {
    throw std::invalid_argument("heat requires a common spectrum");
  }
  return energy(final_state) - energy(initial);
}

double work(const DiagonalState& initial, const DiagonalState& final_state) {
  if (!is_passive(initial)) {
    throw std::invalid_argument("open-cycle work assumes a passive initial state");
  }
  if (!(initial.spectrum() == final_state.spectrum())) {
    throw std::invalid_argument("work requires a common spectrum");
  }
  return ergotropy(final_state);
}

std::optional<double> efficiency(const DiagonalState& initial, const DiagonalState& final_state) {
  const double q = heat(initial, final_state);
  if (q <= kHeatTolerance) return std::nullopt;
  return work(initial, final_state) / q;
}

EngineReport optimize(const EngineConfig& config, const EnumerationOptions& options) {
  const DiagonalState initial = gibbs_state(config.spectrum, config.beta_cold);
  const std::vector<DiagonalState> extremals =
      enumerate_extremal_states(initial, config.beta_hot, options);

  std::vector<ExtremalPerformance> rows;
  rows.reserve(extremals.size());
  for (const DiagonalState& state : extremals) {
    const double q = heat(initial, state);
    if (q < -kHeatSlack) {
      throw std::logic_error("extremal state draws negative heat from the hot bath");
    }
    const double w = work(initial, state);
    const BetaOrder order = beta_order(state, config.beta_hot);
    rows.push_back({state, w, q,
                    q > kHeatTolerance ? std::optional<double>(w / q) : std::nullopt, order,
                    protocol_label(config, order)});
  }

  std::size_t best_work = 0, best_eff = 0;
  bool have_eff = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].work > rows[best_work].work) best_work = i;
    if (rows[i].efficiency) {
      if (!have_eff || *rows[i].efficiency > *rows[best_eff].efficiency) {
        best_eff = i;
        have_eff = true;
      }
    }
  }
  if (!have_eff) best_eff = best_work;  // degenerate: only the initial state

  return {rows[best_work].work,
          have_eff ? *rows[best_eff].efficiency : 0.0,
          rows[best_work].state,
          rows[best_eff].state,
          rows[best_work].label,
          rows[best_eff].label,
          config.carnot_efficiency(),
          std::move(rows)};
}

QubitPerformance qubit_closed_form(const EngineConfig& config) {
  if (config.spectrum.dim() != 2) throw std::invalid_argument("qubit closed form requires d = 2");
  const double omega = config.spectrum.level(1);
  const double qh = boltzmann(config.beta_hot, omega);
  const double qc = boltzmann(config.beta_cold, omega);
  const double w = omega * (2.0 * qh / (1.0 + qc) - 1.0);
  if (w <= 0.0) return {0.0, std::nullopt};
  return {w, 1.0 - (1.0 - qh) / (qh - qc)};
}

QubitPerformance minimal_coupling_reference(const EngineConfig& config) {
  if (config.spectrum.dim() != 2) throw std::invalid_argument("minimal coupling requires d = 2");
  const double omega = config.spectrum.level(1);
  const double qh = boltzmann(config.beta_hot, omega);
  const double qhc = config.beta_cold.is_infinite()
                         ? 0.0
                         : std::exp(-(config.beta_cold.value() + config.beta_hot.value()) * omega);
  const double w = omega * (2.0 * qh / (1.0 + qhc) - 1.0);
  if (w <= 0.0) return {0.0, std::nullopt};
  return {w, 1.0 - (1.0 - qh) / (qh - qhc)};
}

QutritAnalytics qutrit_analytics(const EngineConfig& config) {
  if (config.spectrum.dim() != 3) throw std::invalid_argument("qutrit analytics requires d = 3");
  const double w1 = config.spectrum.level(1);
  const double w2 = config.spectrum.level(2);
  const double h10 = boltzmann(config.beta_hot, w1);
  const double h20 = boltzmann(config.beta_hot, w2);
  const double h21 = boltzmann(config.beta_hot, w2 - w1);
  const double h01 = 1.0 / h10;
  const double c10 = boltzmann(config.beta_cold, w1);
  const double c20 = boltzmann(config.beta_cold, w2);
  const double c21 = boltzmann(config.beta_cold, w2 - w1);
  const double zc = 1.0 + c10 + c20;

  const double beta0 = solve_beta0(w1, w2);
  const double beta_h = config.beta_hot.value();

  QutritAnalytics out;
  out.beta0 = beta0;
  out.near_branch_boundary = std::abs(beta_h - beta0) < kBranchProximity;

  auto make = [&](int index, std::vector<double> probs, double work_value, double heat_value) {
    DiagonalState state(config.spectrum, std::move(probs));
    const BetaOrder order = beta_order(state, config.beta_hot);
    out.extremals.push_back({index, std::move(state), std::max(0.0, work_value), heat_value, order});
  };

  make(1, {(1.0 - h10 + c10) / zc, h10 / zc, c20 / zc},
       (w1 / zc) * (2.0 * h10 - 1.0 - c10),
       (w1 / zc) * (h10 - c10));

  make(2, {1.0 / zc, ((1.0 - h21) * c10 + c20) / zc, h21 * c10 / zc},
       ((w2 - w1) / zc) * (2.0 * h21 * c10 - (c10 + c20)),
       ((w2 - w1) / zc) * c10 * (h21 - c21));

  make(3,
       {(1.0 - h20 + h21 * c10) / zc, ((1.0 - h21) * c10 + c20) / zc, h20 / zc},
       std::max(((w2 - w1) / zc) * (h20 - c20 - (1.0 - h21) * c10),
                (w2 / zc) * h20 - (w1 / zc) * ((1.0 - h20) + h21 * c10) -
                    ((w2 - w1) / zc) * ((1.0 - h21) * c10 + c20)),
       (h20 * w2 - c20 * (w2 - w1) - c10 * h21 * w1) / zc);

  if (beta_h >= beta0) {
    make(4, {(1.0 + c10 + c20 - h10 - h20) / zc, h10 / zc, h20 / zc},
         std::max((w1 / zc) * (2.0 * h10 + h20 - zc),
                  (w1 / zc) * (h10 - h20) + (w2 / zc) * (2.0 * h20 + h10 - zc)),
         ((h10 - c10) * w1 + (h20 - c20) * w2) / zc);
  } else {
    make(5,
         {((h01 - h21) * c10 + c20) / zc, h10 / zc,
          ((1.0 - h10) + (1.0 - h01 + h21) * c10) / zc},
         std::max((w1 / zc) * (h10 - (h01 - h21) * c10 - c20),
                  (w1 / zc) * (h10 - (1.0 - h10) - (1.0 - h01 + h21) * c10) +
                      (w2 / zc) * ((1.0 - h10) + (1.0 - h01 + h21) * c10 -
                                   (h01 - h21) * c10 - c20)),
         (h10 * (1.0 - c10 * h01) * w1 +
          (c10 * h20 * h01 - c20 + (1.0 - c10 * h01) * (1.0 - h10)) * w2) /
             zc);

    make(6,
         {(c10 * (h01 - h21) + c20) / zc, (1.0 - h20 + c10 * (1.0 - h01 + h21)) / zc, h20 / zc},
         std::max({((w2 - w1) / zc) * (2.0 * h20 - 1.0 - c10 * (1.0 + h21 - h01)),
                   (w1 / zc) * (1.0 - c20 - h20 + c10 * (1.0 + 2.0 * h21 - 2.0 * h01)),
                   (w1 / zc) * (c10 * (1.0 + h21 - h01) + 1.0 - 2.0 * h20) +
                       (w2 / zc) * (h20 - c20 + c10 * h21 - c10 * h01),
                   (w1 / zc) * (1.0 - c20 - h20 + c10 * (1.0 + 2.0 * h21 - 2.0 * h01)) -
                       (w2 / zc) * (1.0 - 2.0 * h20 + c10 * (1.0 + h21 - h01)),
                   (w2 / zc) * (h20 - c20 + c10 * (h21 - h01))}),
         ((1.0 - c10 * h01) * (1.0 - h20) * w1 + (h20 - c20) * w2) / zc);
  }
  return out;
}

}  // namespace ergoflow
