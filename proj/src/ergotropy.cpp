#include "ergoflow/ergotropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ergoflow {

namespace {
constexpr double kEntropyTolerance = 1e-12;
constexpr double kBisectionTarget = 1e-10;
constexpr int kBisectionCap = 200;
}  // namespace

DiagonalState passive_state(const DiagonalState& state) {
  std::vector<std::size_t> idx(state.dim());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return state.prob(a) > state.prob(b); });
  std::vector<double> sorted(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) sorted[i] = state.prob(idx[i]);
  return DiagonalState(state.spectrum(), std::move(sorted));
}

double ergotropy(const DiagonalState& state) {
  return std::max(0.0, energy(state) - energy(passive_state(state)));
}

BetaStar beta_star(const DiagonalState& state) {
  const double target = entropy(state);
  const double max_entropy = std::log(static_cast<double>(state.dim()));
  if (target < kEntropyTolerance) return {BetaStar::Kind::Infinite, 0.0};
  if (target > max_entropy - kEntropyTolerance) return {BetaStar::Kind::ZeroPlus, 0.0};

  auto gibbs_entropy = [&](double b) {
    return entropy(gibbs_state(state.spectrum(), InverseTemperature(b)));
  };

  // Gibbs entropy is strictly decreasing in beta; bracket then bisect.
  double lo = 1e-9, hi = 1e4;
  int expansions = 0;
  while (gibbs_entropy(lo) < target && expansions++ < 60) lo /= 8.0;
  while (gibbs_entropy(hi) > target && expansions++ < 60) hi *= 8.0;
  if (gibbs_entropy(lo) < target || gibbs_entropy(hi) > target) {
    throw std::runtime_error("beta_star: failed to bracket the entropy target");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kBisectionCap; ++it) {
    mid = 0.5 * (lo + hi);
    const double s = gibbs_entropy(mid);
    if (std::abs(s - target) < kBisectionTarget) return {BetaStar::Kind::Finite, mid};
    (s > target ? lo : hi) = mid;
  }
  if (std::abs(gibbs_entropy(mid) - target) < kBisectionTarget) {
    return {BetaStar::Kind::Finite, mid};
  }
  throw std::runtime_error("beta_star: bisection did not converge");
}

double bound_single_system(const DiagonalState& state) {
  const BetaStar bs = beta_star(state);
  switch (bs.kind) {
    case BetaStar::Kind::Infinite:
      // Pure state: the beta* -> infinity limit of F(rho) - F(gamma_{beta*})
      // is the energy above the ground level.
      return energy(state) - state.spectrum().level(0);
    case BetaStar::Kind::ZeroPlus:
      // Maximally mixed: both sides of the bound vanish in the limit.
      return 0.0;
    case BetaStar::Kind::Finite: {
      const InverseTemperature beta(bs.beta);
      return relative_entropy(state, gibbs_state(state.spectrum(), beta)) / bs.beta;
    }
  }
  throw std::logic_error("unreachable");
}

double bound_with_bath(const DiagonalState& state, InverseTemperature beta) {
  return relative_entropy(state, gibbs_state(state.spectrum(), beta)) / beta.value();
}

double extraction_bound(const DiagonalState& state, InverseTemperature beta) {
  return bound_with_bath(passive_state(state), beta);
}

ErgotropyDecomposition decompose(const DiagonalState& initial, const DiagonalState& final_state,
                                 InverseTemperature beta) {
  if (!(initial.spectrum() == final_state.spectrum())) {
    throw std::invalid_argument("decompose requires a common spectrum");
  }
  const double b = beta.value();
  const DiagonalState gibbs = gibbs_state(initial.spectrum(), beta);
  const double s_initial = relative_entropy(initial, gibbs);
  const double s_final = relative_entropy(final_state, gibbs);
  const double s_final_passive = relative_entropy(passive_state(final_state), gibbs);
  return {s_initial / b, s_final_passive / b, (s_initial - s_final) / b};
}

}  // namespace ergoflow
