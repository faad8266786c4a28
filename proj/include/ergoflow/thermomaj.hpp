#pragma once

#include <string>
#include <vector>

#include "ergoflow/core.hpp"

namespace ergoflow {

/// A permutation of level indices: position k holds the k-th beta-ordered
/// level (0-based).
struct BetaOrder {
  std::vector<std::size_t> perm;

  static BetaOrder identity(std::size_t d);
  static BetaOrder descending(std::size_t d);

  /// Paper-style 1-based label, e.g. "(213)" for d <= 9, comma separated
  /// above that.
  std::string label() const;

  bool operator==(const BetaOrder&) const = default;
};

/// Piecewise-linear concave thermomajorization curve: d+1 elbow points
/// starting at (0,0), x running to Z_s = sum_i e^{-beta*w_i}, y to 1.
class ThermoCurve {
 public:
  ThermoCurve(std::vector<double> xs, std::vector<double> ys);

  std::size_t elbow_count() const { return xs_.size(); }
  double elbow_x(std::size_t k) const { return xs_[k]; }
  double elbow_y(std::size_t k) const { return ys_[k]; }
  double total_x() const { return xs_.back(); }

  /// Linear interpolation; x is clamped to [0, total_x()].
  double evaluate(double x) const;

 private:
  std::vector<double> xs_, ys_;
};

/// Permutation sorting p_i * e^{beta*w_i} non-increasing, ties broken by
/// ascending level index. Near-equal keys (1e-12 relative) count as ties so
/// Gibbs-like states get the identity order despite rounding.
BetaOrder beta_order(const DiagonalState& state, InverseTemperature beta);

ThermoCurve curve(const DiagonalState& state, InverseTemperature beta);

/// True iff every elbow of q's curve lies on or below p's curve
/// (tolerance 1e-10).
bool thermomajorizes(const DiagonalState& p, const DiagonalState& q, InverseTemperature beta);

/// The extremal state whose curve has all elbows ON the curve of `initial`,
/// with elbow x-coordinates laid out as cumulative Gibbs weights in `target`
/// order. Always a valid reachable state; ties can make its realized
/// beta-order differ from the target.
DiagonalState tight_extremal_state(const DiagonalState& initial, InverseTemperature beta,
                                   const BetaOrder& target);

struct EnumerationOptions {
  std::size_t max_dim;  // defaults to default_dimension_cap()
  unsigned workers;     // defaults to hardware concurrency

  EnumerationOptions();
};

/// Hard limit on the dimension enumerate_extremal_states will accept;
/// the number of candidate orders grows as d!. Default 9, overridable via
/// the ERGOFLOW_MAX_DIM environment variable.
std::size_t default_dimension_cap();

/// All extremal points of the thermal polytope of `initial` at bath
/// temperature beta: tight states over all d! target orders, deduplicated
/// at L-inf 1e-10, sorted lexicographically by probabilities. Contains the
/// initial state; every element is verified to be thermomajorized by it.
std::vector<DiagonalState> enumerate_extremal_states(const DiagonalState& initial,
                                                     InverseTemperature beta,
                                                     const EnumerationOptions& options = {});

/// The highest-energy state reachable by a thermal operation: the tight
/// state with descending beta-order.
DiagonalState max_energy_state(const DiagonalState& initial, InverseTemperature beta);

/// A column-stochastic matrix with the Gibbs vector at `beta` as a fixed
/// point. Both invariants are checked at construction.
class ThermalProcessMatrix {
 public:
  /// entries is row-major d*d. gibbs_tolerance is the per-component slack
  /// allowed on A*gamma = gamma (truncated maps need a little more room).
  ThermalProcessMatrix(std::vector<double> entries, Spectrum spectrum, InverseTemperature beta,
                       double gibbs_tolerance = 1e-10);

  const Spectrum& spectrum() const { return spectrum_; }
  InverseTemperature beta() const { return beta_; }
  std::size_t dim() const { return spectrum_.dim(); }
  double entry(std::size_t row, std::size_t col) const { return entries_[row * dim() + col]; }

  DiagonalState apply(const DiagonalState& state) const;

 private:
  std::vector<double> entries_;
  Spectrum spectrum_;
  InverseTemperature beta_;
};

DiagonalState apply_process(const ThermalProcessMatrix& process, const DiagonalState& state);

/// The named extremal thermal processes for a qutrit acting on a (123)
/// beta-ordered state. A12/A13 exist only below the crossover temperature
/// (e^{-beta*w1} + e^{-beta*w2} > 1); asking for them elsewhere throws
/// std::domain_error.
enum class QutritProcess { A1, A2, A5, A9, A12, A13 };

ThermalProcessMatrix qutrit_process_matrix(QutritProcess name, const Spectrum& spectrum,
                                           InverseTemperature beta);

}  // namespace ergoflow
