#include "ergoflow/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ergoflow/engine.hpp"
#include "ergoflow/ergotropy.hpp"
#include "ergoflow/oscillator.hpp"
#include "ergoflow/parallel.hpp"

namespace ergoflow {

namespace {
constexpr double kWorkTolerance = 1e-12;

bool is_omega_name(const std::string& name) {
  return name.rfind("omega_", 0) == 0 && name.size() > 6 &&
         name.find_first_not_of("0123456789", 6) == std::string::npos;
}

std::size_t omega_index(const std::string& name) {
  return static_cast<std::size_t>(std::stoul(name.substr(6)));
}
}  // namespace

GridAxis::GridAxis(std::string name_in, double min_in, double max_in, std::size_t steps_in,
                   bool log_in)
    : name(std::move(name_in)), min(min_in), max(max_in), steps(steps_in), log(log_in) {
  if (steps < 1) throw std::invalid_argument("grid axis needs at least one step");
  if (!(min <= max)) throw std::invalid_argument("grid axis needs min <= max");
  if (log && !(min > 0.0)) throw std::invalid_argument("log grid axis needs min > 0");
  if (name != "beta_hot" && name != "beta_cold" && name != "dim" && !is_omega_name(name)) {
    throw std::invalid_argument("unrecognized grid variable: " + name);
  }
}

std::vector<double> GridAxis::values() const {
  std::vector<double> out(steps);
  if (steps == 1) {
    out[0] = min;
    return out;
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    out[k] = log ? min * std::pow(max / min, t) : min + t * (max - min);
  }
  return out;
}

std::string format_value(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string engine_sweep_csv(const EngineSweepSpec& spec) {
  std::vector<std::vector<double>> axis_values;
  axis_values.reserve(spec.axes.size());
  std::size_t points = 1;
  int dim_axis = -1;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    axis_values.push_back(spec.axes[a].values());
    points *= axis_values.back().size();
    if (spec.axes[a].name == "dim") dim_axis = static_cast<int>(a);
  }
  if (spec.omegas.empty()) throw std::invalid_argument("engine sweep needs at least one omega");
  if (dim_axis >= 0 && spec.omegas.size() != 1) {
    throw std::invalid_argument("a dim axis requires exactly one omega (equally spaced ladder)");
  }

  std::size_t max_levels = spec.omegas.size();
  if (dim_axis >= 0) {
    for (double v : axis_values[static_cast<std::size_t>(dim_axis)]) {
      max_levels = std::max(max_levels, static_cast<std::size_t>(std::llround(v)) - 1);
    }
  }

  struct Row {
    double beta_hot, beta_cold;
    std::vector<double> omegas;
    std::size_t dim;
    double work_max, efficiency_max, carnot;
    std::string label;
  };
  std::vector<Row> rows(points);

  EnumerationOptions options;
  if (spec.max_dim != 0) options.max_dim = spec.max_dim;
  options.workers = 1;  // parallelism lives at the grid level

  unsigned workers = spec.workers == 0 ? default_worker_count() : spec.workers;
  parallel_for(points, workers, [&](std::size_t index) {
    Row row;
    row.beta_hot = spec.beta_hot;
    row.beta_cold = spec.beta_cold;
    row.omegas = spec.omegas;
    row.dim = spec.omegas.size() + 1;
    std::size_t rem = index;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const double v = axis_values[a][rem % axis_values[a].size()];
      rem /= axis_values[a].size();
      const std::string& name = spec.axes[a].name;
      if (name == "beta_hot") {
        row.beta_hot = v;
      } else if (name == "beta_cold") {
        row.beta_cold = v;
      } else if (name == "dim") {
        row.dim = static_cast<std::size_t>(std::llround(v));
      } else {
        const std::size_t i = omega_index(name);
        if (i < 1 || i > row.omegas.size()) {
          throw std::invalid_argument("omega index out of range: " + name);
        }
        row.omegas[i - 1] = v;
      }
    }
    if (row.dim != row.omegas.size() + 1) {
      if (row.omegas.size() != 1) {
        throw std::invalid_argument("dim sweep requires exactly one omega");
      }
      const double step = row.omegas[0];
      row.omegas.resize(row.dim - 1);
      for (std::size_t i = 0; i < row.dim - 1; ++i) {
        row.omegas[i] = step * static_cast<double>(i + 1);
      }
    }

    if (!(row.beta_hot < row.beta_cold)) {
      row.work_max = 0.0;
      row.efficiency_max = 0.0;
      row.carnot = 1.0 - row.beta_hot / row.beta_cold;
      row.label = "0";
      rows[index] = std::move(row);
      return;
    }

    std::vector<double> levels(row.dim, 0.0);
    std::copy(row.omegas.begin(), row.omegas.end(), levels.begin() + 1);
    EngineConfig config(Spectrum(std::move(levels)), InverseTemperature(row.beta_cold),
                        InverseTemperature(row.beta_hot));
    const EngineReport report = optimize(config, options);
    row.work_max = report.work_max;
    row.efficiency_max = report.efficiency_max;
    row.carnot = report.carnot;
    row.label = report.work_max > kWorkTolerance ? report.work_optimal_label : "0";
    rows[index] = std::move(row);
  });

  std::ostringstream out;
  out << "beta_hot,beta_cold";
  for (std::size_t i = 1; i <= max_levels; ++i) out << ",omega_" << i;
  out << ",dim,work_max,efficiency_max,optimal_protocol_label,carnot\n";
  for (const Row& row : rows) {
    out << format_value(row.beta_hot) << ',' << format_value(row.beta_cold);
    for (std::size_t i = 0; i < max_levels; ++i) {
      out << ',';
      if (i < row.omegas.size()) out << format_value(row.omegas[i]);
    }
    out << ',' << row.dim << ',' << format_value(row.work_max) << ','
        << format_value(row.efficiency_max) << ',' << row.label << ','
        << format_value(row.carnot) << '\n';
  }
  return out.str();
}

std::string region_map_csv(const RegionMapSpec& spec) {
  if (!(0.0 < spec.omega1 && spec.omega1 < spec.omega2)) {
    throw std::invalid_argument("region map requires 0 < omega1 < omega2");
  }
  if (spec.beta_hot_axis.name != "beta_hot" || spec.beta_cold_axis.name != "beta_cold") {
    throw std::invalid_argument("region map axes must be beta_hot and beta_cold");
  }
  const std::vector<double> hots = spec.beta_hot_axis.values();
  const std::vector<double> colds = spec.beta_cold_axis.values();
  const Spectrum spectrum = Spectrum::qutrit(spec.omega1, spec.omega2);

  const std::size_t points = hots.size() * colds.size();
  std::vector<std::string> labels(points);
  unsigned workers = spec.workers == 0 ? default_worker_count() : spec.workers;
  parallel_for(points, workers, [&](std::size_t index) {
    const double bh = hots[index / colds.size()];
    const double bc = colds[index % colds.size()];
    if (!(bh < bc)) {
      labels[index] = "0";
      return;
    }
    EngineConfig config(spectrum, InverseTemperature(bc), InverseTemperature(bh));
    const EngineReport report = optimize(config);
    labels[index] = report.work_max > kWorkTolerance ? report.work_optimal_label : "0";
  });

  std::ostringstream out;
  out << "beta_hot,beta_cold,label\n";
  for (std::size_t index = 0; index < points; ++index) {
    out << format_value(hots[index / colds.size()]) << ','
        << format_value(colds[index % colds.size()]) << ',' << labels[index] << '\n';
  }
  return out.str();
}

std::string oscillator_csv(InverseTemperature beta, const std::vector<double>& omegas,
                           const std::vector<std::size_t>& dims, unsigned workers) {
  const std::vector<SaturationRow> rows = saturation_sweep(beta, omegas, dims, workers);
  std::ostringstream out;
  out << "omega,dim,length,delta,bound,extracted,gap,truncation_ok\n";
  for (const SaturationRow& row : rows) {
    out << format_value(row.omega) << ',' << row.dim << ',' << format_value(row.length) << ','
        << format_value(row.delta) << ',' << format_value(row.bound) << ','
        << format_value(row.extracted) << ',' << format_value(row.gap) << ','
        << (row.truncation_ok ? 1 : 0) << '\n';
  }
  return out.str();
}

nlohmann::json bound_report(const DiagonalState& state, InverseTemperature beta) {
  nlohmann::json out;
  out["energies"] = state.spectrum().levels();
  out["probs"] = state.probs();
  out["ergotropy"] = ergotropy(state);
  out["passive_state"] = passive_state(state).probs();
  const BetaStar bs = beta_star(state);
  switch (bs.kind) {
    case BetaStar::Kind::Finite:
      out["beta_star"] = bs.beta;
      break;
    case BetaStar::Kind::Infinite:
      out["beta_star"] = "infinite";
      break;
    case BetaStar::Kind::ZeroPlus:
      out["beta_star"] = "zero";
      break;
  }
  out["bound_single_system"] = bound_single_system(state);
  out["bound_with_bath"] = bound_with_bath(state, beta);
  out["extraction_bound"] = extraction_bound(state, beta);
  out["beta"] = beta.is_infinite() ? nlohmann::json("infinite") : nlohmann::json(beta.value());
  return out;
}

namespace {
struct ExtremalRow {
  const DiagonalState* state;
  std::string order;
  double energy_value;
  double ergotropy_value;
};

std::vector<ExtremalRow> extremal_rows(const std::vector<DiagonalState>& states,
                                       InverseTemperature beta) {
  std::vector<ExtremalRow> rows;
  rows.reserve(states.size());
  for (const DiagonalState& s : states) {
    rows.push_back({&s, beta_order(s, beta).label(), energy(s), ergotropy(s)});
  }
  return rows;
}
}  // namespace

std::string extremal_table_csv(const DiagonalState& state, InverseTemperature beta,
                               const EnumerationOptions& options) {
  const std::vector<DiagonalState> states = enumerate_extremal_states(state, beta, options);
  std::ostringstream out;
  for (std::size_t i = 1; i <= state.dim(); ++i) out << "p_" << i << ',';
  out << "beta_order,energy,ergotropy\n";
  for (const ExtremalRow& row : extremal_rows(states, beta)) {
    for (double p : row.state->probs()) out << format_value(p) << ',';
    out << row.order << ',' << format_value(row.energy_value) << ','
        << format_value(row.ergotropy_value) << '\n';
  }
  return out.str();
}

nlohmann::json extremal_table_json(const DiagonalState& state, InverseTemperature beta,
                                   const EnumerationOptions& options) {
  const std::vector<DiagonalState> states = enumerate_extremal_states(state, beta, options);
  nlohmann::json rows = nlohmann::json::array();
  for (const ExtremalRow& row : extremal_rows(states, beta)) {
    rows.push_back({{"probs", row.state->probs()},
                    {"beta_order", row.order},
                    {"energy", row.energy_value},
                    {"ergotropy", row.ergotropy_value}});
  }
  nlohmann::json out;
  out["energies"] = state.spectrum().levels();
  out["extremal_states"] = std::move(rows);
  return out;
}

}  // namespace ergoflow
