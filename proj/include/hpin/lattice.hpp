#pragma once

// Brute-force diamond lattices: exact enumeration of all N_n walk
// trajectories to evaluate the partition function directly, validating the
// recursion and the escape probabilities on small instances.
//
// A trajectory is represented by its branch-choice tree: one choice in [0,b)
// per diamond the walk enters, s sub-diamonds per chosen branch.  The wall
// occupies branch 0 of every wall-containing diamond (a symmetric choice the
// uniform law cannot see), so a leaf bond coincides with a wall bond exactly
// when the whole ancestor chain chose branch 0 inside wall-containing
// diamonds.

#include <cstdint>
#include <span>

#include "hpin/model.hpp"

namespace hpin {

struct DiamondLattice {
  int b = 2;
  int s = 2;
  int level = 0;
  std::uint64_t trajectories = 1;  // N_n, exact
};

// Throws std::runtime_error if N_n would exceed the 1e6 trajectory budget.
DiamondLattice diamond_lattice(int b, int s, int level);

// log R_n for one disorder assignment (omega has s^n entries, wall order).
// Factorized evaluation in linear space: non-wall branches contribute weight
// 1 per trajectory, the wall branch factorizes over its s sub-diamonds.
double enumerate_partition(const DiamondLattice& lattice,
                           std::span<const double> omega,
                           const ModelParams& params, const DisorderLaw& law);

// Same quantity by flat explicit enumeration: iterates every trajectory
// index, decodes its branch-choice tree, accumulates exp(wall energy) with
// compensated summation.  Independent cross-check route for small n.
double enumerate_partition_flat(const DiamondLattice& lattice,
                                std::span<const double> omega,
                                const ModelParams& params,
                                const DisorderLaw& law);

// Fraction of trajectories sharing no bond with the wall, by flat count.
double enumerate_escape_probability(const DiamondLattice& lattice);

}  // namespace hpin
