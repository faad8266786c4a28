// ergoflow: ergotropy bounds, thermal-polytope enumeration, and open-cycle
// engine sweeps from the command line. See README.md for recipes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergoflow/core.hpp"
#include "ergoflow/sweep.hpp"
#include "ergoflow/thermomaj.hpp"

namespace {

using namespace ergoflow;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("malformed number in list: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty comma list");
  return out;
}

// VAR:MIN:MAX:STEPS[:log]
GridAxis parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4 && parts.size() != 5) {
    throw std::invalid_argument("--grid expects VAR:MIN:MAX:STEPS[:log], got: " + text);
  }
  bool log = false;
  if (parts.size() == 5) {
    if (parts[4] != "log") throw std::invalid_argument("--grid: unknown scale " + parts[4]);
    log = true;
  }
  return GridAxis(parts[0], std::stod(parts[1]), std::stod(parts[2]),
                  static_cast<std::size_t>(std::stoul(parts[3])), log);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!std::cout) throw std::ios_base::failure("failed writing to stdout");
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::ios_base::failure("cannot open output file: " + out_path);
  out << text;
  if (!out) throw std::ios_base::failure("failed writing output file: " + out_path);
}

DiagonalState make_state(const std::string& energies_text, const std::string& probs_text,
                         std::optional<double> beta_cold) {
  const Spectrum spectrum(parse_list(energies_text));
  if (!probs_text.empty() && beta_cold) {
    throw std::invalid_argument("give either --probs or --beta-cold, not both");
  }
  if (!probs_text.empty()) return DiagonalState(spectrum, parse_list(probs_text));
  if (beta_cold) return gibbs_state(spectrum, InverseTemperature(*beta_cold));
  throw std::invalid_argument("state needs --probs or --beta-cold");
}

int run(int argc, char** argv) {
  CLI::App app{"ergotropy extraction from heat baths: bounds, extremal states, engine sweeps"};
  app.require_subcommand(1);

  std::string energies, probs, out_path, format = "csv";
  std::optional<double> beta, beta_hot, beta_cold;
  std::vector<std::string> grids;
  unsigned workers = 0;
  std::size_t max_dim = 0, dim = 0;

  auto add_common = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--workers", workers, "worker threads (default: logical cores)");
    cmd->add_option("--max-dim", max_dim, "enumeration dimension cap");
    if (with_format) cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* cmd_bound = app.add_subcommand("bound", "ergotropy, passive state, beta*, and bounds (JSON)");
  cmd_bound->add_option("--energies", energies, "energy levels, comma list, ground = 0")->required();
  cmd_bound->add_option("--probs", probs, "level populations, comma list");
  cmd_bound->add_option("--beta-cold", beta_cold, "use the Gibbs state at this inverse temperature");
  cmd_bound->add_option("--beta,--beta-hot", beta, "bath inverse temperature")->required();
  add_common(cmd_bound, false);

  CLI::App* cmd_extremal = app.add_subcommand("extremal", "extremal points of the thermal polytope");
  cmd_extremal->add_option("--energies", energies, "energy levels, comma list, ground = 0")->required();
  cmd_extremal->add_option("--probs", probs, "level populations, comma list");
  cmd_extremal->add_option("--beta-cold", beta_cold, "use the Gibbs state at this inverse temperature");
  cmd_extremal->add_option("--beta,--beta-hot", beta, "bath inverse temperature")->required();
  add_common(cmd_extremal, true);

  CLI::App* cmd_engine = app.add_subcommand("engine-sweep", "open-cycle engine work/efficiency sweep (CSV)");
  cmd_engine->add_option("--energies", energies, "energy levels, comma list, ground = 0")->required();
  cmd_engine->add_option("--beta-hot", beta_hot, "fixed hot-bath inverse temperature");
  cmd_engine->add_option("--beta-cold", beta_cold, "fixed cold-bath inverse temperature");
  cmd_engine->add_option("--grid", grids, "swept variable, VAR:MIN:MAX:STEPS[:log]");
  add_common(cmd_engine, false);

  CLI::App* cmd_region = app.add_subcommand("region-map", "qutrit optimal-protocol map over (beta_hot, beta_cold) (CSV)");
  cmd_region->add_option("--energies", energies, "three energy levels 0,omega1,omega2")->required();
  cmd_region->add_option("--grid", grids, "beta_hot and beta_cold grids, VAR:MIN:MAX:STEPS[:log]")->required();
  add_common(cmd_region, false);

  CLI::App* cmd_osc = app.add_subcommand("oscillator", "truncated-oscillator saturation sweep (CSV)");
  cmd_osc->add_option("--beta,--beta-hot", beta, "bath inverse temperature")->required();
  cmd_osc->add_option("--grid", grids, "omega_1 and/or dim grids, VAR:MIN:MAX:STEPS[:log]");
  cmd_osc->add_option("--dim", dim, "single truncation dimension");
  add_common(cmd_osc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmd_bound->parsed()) {
    const DiagonalState state = make_state(energies, probs, beta_cold);
    emit(bound_report(state, InverseTemperature(*beta)).dump(2) + "\n", out_path);
    return 0;
  }

  if (cmd_extremal->parsed()) {
    const DiagonalState state = make_state(energies, probs, beta_cold);
    EnumerationOptions options;
    if (max_dim != 0) options.max_dim = max_dim;
    if (workers != 0) options.workers = workers;
    const InverseTemperature b(*beta);
    emit(format == "json" ? extremal_table_json(state, b, options).dump(2) + "\n"
                          : extremal_table_csv(state, b, options),
         out_path);
    return 0;
  }

  if (cmd_engine->parsed()) {
    const std::vector<double> levels = parse_list(energies);
    if (levels.size() < 2 || levels.front() != 0.0) {
      throw std::invalid_argument("--energies needs a ground level 0 and at least one gap");
    }
    EngineSweepSpec spec;
    spec.omegas.assign(levels.begin() + 1, levels.end());
    spec.beta_hot = beta_hot.value_or(0.0);
    spec.beta_cold = beta_cold.value_or(0.0);
    bool hot_set = beta_hot.has_value(), cold_set = beta_cold.has_value();
    for (const std::string& g : grids) {
      spec.axes.push_back(parse_grid(g));
      hot_set = hot_set || spec.axes.back().name == "beta_hot";
      cold_set = cold_set || spec.axes.back().name == "beta_cold";
    }
    if (!hot_set || !cold_set) {
      throw std::invalid_argument("engine-sweep needs beta_hot and beta_cold (fixed or gridded)");
    }
    spec.workers = workers;
    spec.max_dim = max_dim;
    emit(engine_sweep_csv(spec), out_path);
    return 0;
  }

  if (cmd_region->parsed()) {
    const std::vector<double> levels = parse_list(energies);
    if (levels.size() != 3 || levels.front() != 0.0) {
      throw std::invalid_argument("region-map needs exactly three levels 0,omega1,omega2");
    }
    std::optional<GridAxis> hot, cold;
    for (const std::string& g : grids) {
      GridAxis axis = parse_grid(g);
      if (axis.name == "beta_hot") hot = std::move(axis);
      else if (axis.name == "beta_cold") cold = std::move(axis);
      else throw std::invalid_argument("region-map grids must be beta_hot and beta_cold");
    }
    if (!hot || !cold) throw std::invalid_argument("region-map needs beta_hot and beta_cold grids");
    RegionMapSpec spec{levels[1], levels[2], *hot, *cold, workers};
    emit(region_map_csv(spec), out_path);
    return 0;
  }

  if (cmd_osc->parsed()) {
    std::vector<double> omegas;
    std::vector<std::size_t> dims;
    if (dim != 0) dims.push_back(dim);
    for (const std::string& g : grids) {
      const GridAxis axis = parse_grid(g);
      if (axis.name == "omega_1") {
        for (double v : axis.values()) omegas.push_back(v);
      } else if (axis.name == "dim") {
        for (double v : axis.values()) dims.push_back(static_cast<std::size_t>(std::llround(v)));
      } else {
        throw std::invalid_argument("oscillator grids must be omega_1 and dim");
      }
    }
    if (omegas.empty() || dims.empty()) {
      throw std::invalid_argument("oscillator needs an omega_1 grid and a dim (grid or --dim)");
    }
    emit(oscillator_csv(InverseTemperature(*beta), omegas, dims, workers), out_path);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "ergoflow: %s\n", e.what());
    return 4;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "ergoflow: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "ergoflow: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ergoflow: %s\n", e.what());
    return 3;
  }
}
