#include "ergoflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ergoflow {

namespace {
constexpr double kSumTolerance = 1e-9;
}

InverseTemperature::InverseTemperature(double beta) : beta_(beta), infinite_(false) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("inverse temperature must be finite and > 0");
  }
}

InverseTemperature InverseTemperature::infinite() { return InverseTemperature(); }

double InverseTemperature::value() const {
  if (infinite_) throw std::domain_error("inverse temperature is infinite");
  return beta_;
}

Spectrum::Spectrum(std::vector<double> energies) : energies_(std::move(energies)) {
  if (energies_.size() < 2) throw std::invalid_argument("spectrum needs at least 2 levels");
  if (energies_.front() != 0.0) throw std::invalid_argument("ground level must sit at energy 0");
  for (std::size_t i = 0; i < energies_.size(); ++i) {
    if (!std::isfinite(energies_[i])) throw std::invalid_argument("energies must be finite");
    if (i > 0 && energies_[i] < energies_[i - 1]) {
      throw std::invalid_argument("energies must be sorted non-decreasing");
    }
  }
}

Spectrum Spectrum::qubit(double omega) { return Spectrum({0.0, omega}); }

Spectrum Spectrum::qutrit(double omega1, double omega2) { return Spectrum({0.0, omega1, omega2}); }

Spectrum Spectrum::harmonic(double omega, std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("harmonic spectrum needs dim >= 2");
  std::vector<double> energies(dim);
  for (std::size_t n = 0; n < dim; ++n) energies[n] = static_cast<double>(n) * omega;
  return Spectrum(std::move(energies));
}

DiagonalState::DiagonalState(Spectrum spectrum, std::vector<double> probs)
    : spectrum_(std::move(spectrum)), probs_(std::move(probs)) {
  if (probs_.size() != spectrum_.dim()) {
    throw std::invalid_argument("probability vector length does not match spectrum dimension");
  }
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p)) throw std::invalid_argument("probabilities must be finite");
    if (p < 0.0) {
      if (p < -kSumTolerance) throw std::invalid_argument("negative probability");
      p = 0.0;  // construction noise
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("probabilities do not sum to 1");
  }
  // keep already-normalized inputs bit-exact (permutations stay permutations);
  // only renormalize genuine drift
  const double exact_window =
      8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(probs_.size());
  if (std::abs(sum - 1.0) > exact_window) {
    for (double& p : probs_) p /= sum;
  }
}

double log_partition(const Spectrum& spectrum, InverseTemperature beta) {
  const double b = beta.value();
  // log-sum-exp over -beta*w_i; the ground level pins the max exponent at 0.
  double max_exp = -std::numeric_limits<double>::infinity();
  for (double w : spectrum.levels()) max_exp = std::max(max_exp, -b * w);
  double acc = 0.0;
  for (double w : spectrum.levels()) acc += std::exp(-b * w - max_exp);
  return max_exp + std::log(acc);
}

DiagonalState gibbs_state(const Spectrum& spectrum, InverseTemperature beta) {
  const std::size_t d = spectrum.dim();
  std::vector<double> probs(d, 0.0);
  if (beta.is_infinite()) {
    std::size_t ground_count = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (spectrum.level(i) == spectrum.level(0)) ++ground_count;
    }
    for (std::size_t i = 0; i < ground_count; ++i) probs[i] = 1.0 / static_cast<double>(ground_count);
    return DiagonalState(spectrum, std::move(probs));
  }
  const double b = beta.value();
  const double log_z = log_partition(spectrum, beta);
  for (std::size_t i = 0; i < d; ++i) probs[i] = std::exp(-b * spectrum.level(i) - log_z);
  return DiagonalState(spectrum, std::move(probs));
}

double energy(const DiagonalState& state) {
  double e = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) e += state.prob(i) * state.spectrum().level(i);
  return e;
}

double entropy(const DiagonalState& state) {
  double s = 0.0;
  for (double p : state.probs()) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double free_energy(const DiagonalState& state, InverseTemperature beta) {
  return energy(state) - entropy(state) / beta.value();
}

double relative_entropy(const DiagonalState& p, const DiagonalState& q) {
  if (!(p.spectrum() == q.spectrum())) {
    throw std::invalid_argument("relative entropy requires a common spectrum");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double pi = p.prob(i);
    if (pi == 0.0) continue;
    const double qi = q.prob(i);
    if (qi == 0.0) return std::numeric_limits<double>::infinity();
    s += pi * (std::log(pi) - std::log(qi));
  }
  return std::max(s, 0.0);
}

}  // namespace ergoflow
