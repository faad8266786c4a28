#include "ergoflow/thermomaj.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ergoflow/parallel.hpp"

namespace ergoflow {

namespace {
constexpr double kCurveTolerance = 1e-10;
constexpr double kDedupeTolerance = 1e-10;
constexpr double kTieTolerance = 1e-12;

double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

unsigned long long factorial(std::size_t d) {
  unsigned long long f = 1;
  for (std::size_t k = 2; k <= d; ++k) f *= k;
  return f;
}

// k-th permutation of {0,...,d-1} in the factorial number system; used to
// partition the enumeration across workers without shared state.
std::vector<std::size_t> unrank_permutation(unsigned long long k, std::size_t d) {
  std::vector<std::size_t> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> perm;
  perm.reserve(d);
  unsigned long long radix = factorial(d);
  for (std::size_t i = 0; i < d; ++i) {
    radix /= (d - i);
    const std::size_t pick = static_cast<std::size_t>(k / radix);
    k %= radix;
    perm.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return perm;
}
}  // namespace

BetaOrder BetaOrder::identity(std::size_t d) {
  BetaOrder order;
  order.perm.resize(d);
  std::iota(order.perm.begin(), order.perm.end(), 0);
  return order;
}

BetaOrder BetaOrder::descending(std::size_t d) {
  BetaOrder order = identity(d);
  std::reverse(order.perm.begin(), order.perm.end());
  return order;
}

std::string BetaOrder::label() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (k > 0 && perm.size() > 9) os << ',';
    os << perm[k] + 1;
  }
  os << ')';
  return os.str();
}

ThermoCurve::ThermoCurve(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2 || xs_.front() != 0.0 || ys_.front() != 0.0) {
    throw std::invalid_argument("malformed thermomajorization curve");
  }
}

double ThermoCurve::evaluate(double x) const {
  x = std::clamp(x, 0.0, xs_.back());
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  if (k >= xs_.size()) k = xs_.size() - 1;
  if (k == 0) k = 1;
  const double x0 = xs_[k - 1], x1 = xs_[k];
  if (x1 == x0) return ys_[k];
  const double t = (x - x0) / (x1 - x0);
  return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
}

BetaOrder beta_order(const DiagonalState& state, InverseTemperature beta) {
  const double b = beta.value();
  const std::size_t d = state.dim();
  // Sort on log(p_i) + beta*w_i (the log of p_i/s_i); -inf for empty levels.
  std::vector<double> key(d);
  for (std::size_t i = 0; i < d; ++i) {
    key[i] = state.prob(i) > 0.0
                 ? std::log(state.prob(i)) + b * state.spectrum().level(i)
                 : -std::numeric_limits<double>::infinity();
  }
  BetaOrder order = BetaOrder::identity(d);
  std::stable_sort(order.perm.begin(), order.perm.end(),
                   [&](std::size_t a, std::size_t c) { return key[a] > key[c]; });
  // Rounding must not break analytic ties (all Gibbs ratios are equal):
  // re-sort runs of near-equal keys by ascending level index.
  std::size_t run_begin = 0;
  for (std::size_t k = 1; k <= d; ++k) {
    bool tied = false;
    if (k < d) {
      const double ka = key[order.perm[k]], kb = key[order.perm[k - 1]];
      // empty levels (-inf keys) tie only with each other
      tied = ka == kb ||
             (std::isfinite(ka) && std::isfinite(kb) &&
              std::abs(ka - kb) <=
                  kTieTolerance * std::max({1.0, std::abs(ka), std::abs(kb)}));
    }
    if (!tied) {
      std::sort(order.perm.begin() + static_cast<std::ptrdiff_t>(run_begin),
                order.perm.begin() + static_cast<std::ptrdiff_t>(k));
      run_begin = k;
    }
  }
  return order;
}

ThermoCurve curve(const DiagonalState& state, InverseTemperature beta) {
  const double b = beta.value();
  const BetaOrder order = beta_order(state, beta);
  const std::size_t d = state.dim();
  std::vector<double> xs(d + 1, 0.0), ys(d + 1, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t i = order.perm[k];
    xs[k + 1] = xs[k] + std::exp(-b * state.spectrum().level(i));
    ys[k + 1] = ys[k] + state.prob(i);
  }
  return ThermoCurve(std::move(xs), std::move(ys));
}

bool thermomajorizes(const DiagonalState& p, const DiagonalState& q, InverseTemperature beta) {
  if (!(p.spectrum() == q.spectrum())) {
    throw std::invalid_argument("thermomajorization requires a common spectrum");
  }
  const ThermoCurve cp = curve(p, beta);
  const ThermoCurve cq = curve(q, beta);
  for (std::size_t k = 0; k < cq.elbow_count(); ++k) {
    if (cq.elbow_y(k) > cp.evaluate(cq.elbow_x(k)) + kCurveTolerance) return false;
  }
  return true;
}

DiagonalState tight_extremal_state(const DiagonalState& initial, InverseTemperature beta,
                                   const BetaOrder& target) {
  if (target.perm.size() != initial.dim()) {
    throw std::invalid_argument("target order size does not match state dimension");
  }
  const double b = beta.value();
  const ThermoCurve initial_curve = curve(initial, beta);
  std::vector<double> probs(initial.dim(), 0.0);
  double x = 0.0, y_prev = 0.0;
  for (std::size_t k = 0; k < target.perm.size(); ++k) {
    const std::size_t level = target.perm[k];
    x += std::exp(-b * initial.spectrum().level(level));
    const double y = initial_curve.evaluate(x);
    probs[level] = y - y_prev;
    y_prev = y;
  }
  return DiagonalState(initial.spectrum(), std::move(probs));
}

std::size_t default_dimension_cap() {
  if (const char* env = std::getenv("ERGOFLOW_MAX_DIM")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 2) return static_cast<std::size_t>(v);
  }
  return 9;
}

EnumerationOptions::EnumerationOptions()
    : max_dim(default_dimension_cap()), workers(default_worker_count()) {}

std::vector<DiagonalState> enumerate_extremal_states(const DiagonalState& initial,
                                                     InverseTemperature beta,
                                                     const EnumerationOptions& options) {
  const std::size_t d = initial.dim();
  if (d > options.max_dim) {
    throw std::invalid_argument(
        "dimension " + std::to_string(d) + " exceeds the enumeration cap of " +
        std::to_string(options.max_dim) +
        "; raise it via EnumerationOptions::max_dim, the CLI flag --max-dim, or the "
        "ERGOFLOW_MAX_DIM environment variable (cost grows as d!)");
  }
  const unsigned long long total = factorial(d);
  std::vector<std::vector<double>> candidates(total);
  parallel_for(static_cast<std::size_t>(total), options.workers, [&](std::size_t k) {
    BetaOrder target{unrank_permutation(k, d)};
    candidates[k] = tight_extremal_state(initial, beta, target).probs();
  });
  candidates.push_back(initial.probs());

  std::sort(candidates.begin(), candidates.end());
  // Deterministic single-threaded merge: keep a candidate unless it matches a
  // kept state whose leading coordinate is within the dedupe window.
  std::vector<std::vector<double>> kept;
  for (const auto& c : candidates) {
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (c[0] - (*it)[0] > kDedupeTolerance) break;
      if (linf_distance(c, *it) <= kDedupeTolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(c);
  }

  std::vector<DiagonalState> states;
  states.reserve(kept.size());
  for (auto& probs : kept) states.emplace_back(initial.spectrum(), std::move(probs));
  // construction renormalizes, which can nudge coordinates: re-establish the
  // documented lexicographic order on the final probabilities
  std::sort(states.begin(), states.end(),
            [](const DiagonalState& a, const DiagonalState& b) { return a.probs() < b.probs(); });
  for (const DiagonalState& state : states) {
    if (!thermomajorizes(initial, state, beta)) {
      throw std::logic_error("enumerated extremal state escapes the thermal polytope");
    }
  }
  return states;
}

DiagonalState max_energy_state(const DiagonalState& initial, InverseTemperature beta) {
  return tight_extremal_state(initial, beta, BetaOrder::descending(initial.dim()));
}

ThermalProcessMatrix::ThermalProcessMatrix(std::vector<double> entries, Spectrum spectrum,
                                           InverseTemperature beta, double gibbs_tolerance)
    : entries_(std::move(entries)), spectrum_(std::move(spectrum)), beta_(beta) {
  const std::size_t d = spectrum_.dim();
  if (entries_.size() != d * d) throw std::invalid_argument("matrix size does not match spectrum");
  for (std::size_t col = 0; col < d; ++col) {
    double sum = 0.0;
    for (std::size_t row = 0; row < d; ++row) {
      const double a = entries_[row * d + col];
      if (a < -1e-12 || !std::isfinite(a)) {
        throw std::invalid_argument("thermal process entries must be non-negative");
      }
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("thermal process columns must sum to 1");
    }
  }
  const DiagonalState gibbs = gibbs_state(spectrum_, beta_);
  for (std::size_t row = 0; row < d; ++row) {
    double acc = 0.0;
    for (std::size_t col = 0; col < d; ++col) acc += entries_[row * d + col] * gibbs.prob(col);
    if (std::abs(acc - gibbs.prob(row)) > gibbs_tolerance) {
      throw std::invalid_argument("thermal process does not preserve the Gibbs vector");
    }
  }
}

DiagonalState ThermalProcessMatrix::apply(const DiagonalState& state) const {
  if (!(state.spectrum() == spectrum_)) {
    throw std::invalid_argument("thermal process applied to a state on a different spectrum");
  }
  const std::size_t d = dim();
  std::vector<double> out(d, 0.0);
  for (std::size_t row = 0; row < d; ++row) {
    for (std::size_t col = 0; col < d; ++col) out[row] += entry(row, col) * state.prob(col);
  }
  return DiagonalState(spectrum_, std::move(out));
}

DiagonalState apply_process(const ThermalProcessMatrix& process, const DiagonalState& state) {
  return process.apply(state);
}

ThermalProcessMatrix qutrit_process_matrix(QutritProcess name, const Spectrum& spectrum,
                                           InverseTemperature beta) {
  if (spectrum.dim() != 3) {
    throw std::invalid_argument("qutrit process matrices require a 3-level spectrum");
  }
  const double b = beta.value();
  const double w1 = spectrum.level(1), w2 = spectrum.level(2);
  const double q10 = std::exp(-b * w1);
  const double q20 = std::exp(-b * w2);
  const double q21 = std::exp(-b * (w2 - w1));
  const double q01 = std::exp(b * w1);

  std::vector<double> m;
  switch (name) {
    case QutritProcess::A1:
      m = {1 - q10, 1, 0, q10, 0, 0, 0, 0, 1};
      break;
    case QutritProcess::A2:
      m = {1, 0, 0, 0, 1 - q21, 1, 0, q21, 0};
      break;
    case QutritProcess::A5:
      m = {1 - q20, q21, 0, 0, 1 - q21, 1, q20, 0, 0};
      break;
    case QutritProcess::A9:
      m = {1 - q10 - q20, 1, 1, q10, 0, 0, q20, 0, 0};
      break;
    case QutritProcess::A12:
    case QutritProcess::A13: {
      if (q10 + q20 <= 1.0) {
        throw std::domain_error(
            "A12/A13 exist only below the crossover temperature "
            "(requires e^{-beta*w1} + e^{-beta*w2} > 1)");
      }
      if (name == QutritProcess::A12) {
        m = {0, q01 - q21, 1, q10, 0, 0, 1 - q10, 1 - q01 + q21, 0};
      } else {
        m = {0, q01 - q21, 1, 1 - q20, 1 - q01 + q21, 0, q20, 0, 0};
      }
      break;
    }
  }
  return ThermalProcessMatrix(std::move(m), spectrum, beta);
}

}  // namespace ergoflow
