#pragma once

#include <cstddef>
#include <vector>

namespace ergoflow {

/// Inverse temperature of a bath. Either a finite positive value or the
/// explicit zero-temperature sentinel (infinite beta).
class InverseTemperature {
 public:
  explicit InverseTemperature(double beta);
  static InverseTemperature infinite();

  bool is_infinite() const { return infinite_; }
  double value() const;  // throws std::domain_error if infinite

 private:
  InverseTemperature() : beta_(0.0), infinite_(true) {}
  double beta_;
  bool infinite_;
};

/// A finite diagonal Hamiltonian: energy levels in frequency units
/// (hbar = k_B = 1), sorted non-decreasing, with the ground level at 0.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> energies);

  static Spectrum qubit(double omega);
  static Spectrum qutrit(double omega1, double omega2);
  /// Equally spaced levels 0, omega, 2*omega, ..., (dim-1)*omega.
  static Spectrum harmonic(double omega, std::size_t dim);

  std::size_t dim() const { return energies_.size(); }
  double level(std::size_t i) const { return energies_[i]; }
  const std::vector<double>& levels() const { return energies_; }

  bool operator==(const Spectrum&) const = default;

 private:
  std::vector<double> energies_;
};

/// The energy-diagonal of a density matrix: a probability vector over the
/// levels of a Spectrum. Immutable after construction. Inputs with total
/// probability within 1e-9 of one are renormalized; anything further off
/// is rejected.
class DiagonalState {
 public:
  DiagonalState(Spectrum spectrum, std::vector<double> probs);

  const Spectrum& spectrum() const { return spectrum_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob(std::size_t i) const { return probs_[i]; }
  std::size_t dim() const { return probs_.size(); }

 private:
  Spectrum spectrum_;
  std::vector<double> probs_;
};

/// log of the partition function, computed with log-sum-exp so large
/// beta*omega does not underflow. Requires finite beta.
double log_partition(const Spectrum& spectrum, InverseTemperature beta);

/// e^{-beta*w_i}/Z. beta = infinity gives the ground-level point mass,
/// uniform over degenerate ground levels.
DiagonalState gibbs_state(const Spectrum& spectrum, InverseTemperature beta);

double energy(const DiagonalState& state);

/// Shannon entropy of the diagonal (natural log, 0 log 0 = 0).
double entropy(const DiagonalState& state);

/// E(rho) - S(rho)/beta. Rejects infinite beta.
double free_energy(const DiagonalState& state, InverseTemperature beta);

/// sum_i p_i (log p_i - log q_i). Returns +infinity when support(p) is not
/// contained in support(q).
double relative_entropy(const DiagonalState& p, const DiagonalState& q);

}  // namespace ergoflow
