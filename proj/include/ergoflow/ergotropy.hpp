#pragma once

#include "ergoflow/core.hpp"

namespace ergoflow {

/// Minimal-energy permutation of the populations: probabilities sorted
/// non-increasing against the (non-decreasing) energies. Ties keep their
/// original level order.
DiagonalState passive_state(const DiagonalState& state);

/// E(rho) - E(rho_P): the maximum energy extractable by a unitary.
double ergotropy(const DiagonalState& state);

/// The inverse temperature whose Gibbs state matches the entropy of a given
/// state. A point mass pushes beta* to infinity, the maximally mixed state
/// pushes it to 0+.
struct BetaStar {
  enum class Kind { Finite, Infinite, ZeroPlus };
  Kind kind;
  double beta;  // valid only when kind == Finite
};

BetaStar beta_star(const DiagonalState& state);

/// (1/beta*) S(rho || gamma_{beta*}), the isolated-system ceiling on
/// ergotropy. Pure states report energy above the ground level.
double bound_single_system(const DiagonalState& state);

/// (1/beta) S(rho || gamma_beta) = F(rho) - F(gamma_beta): the ceiling on
/// final ergotropy under any Gibbs-preserving map at bath temperature beta.
double bound_with_bath(const DiagonalState& state, InverseTemperature beta);

/// (1/beta) S(rho_P || gamma_beta): the cap on the ergotropy *change*
/// R(final) - R(initial) over all Gibbs-preserving maps.
double extraction_bound(const DiagonalState& state, InverseTemperature beta);

/// The three contributions to the final state's ergotropy:
///   free_energy_resource - passivity_gap - entropy_production = R(final).
/// The two subtracted terms are reported as non-negative magnitudes.
struct ErgotropyDecomposition {
  double free_energy_resource;
  double passivity_gap;
  double entropy_production;
};

ErgotropyDecomposition decompose(const DiagonalState& initial, const DiagonalState& final_state,
                                 InverseTemperature beta);

}  // namespace ergoflow
