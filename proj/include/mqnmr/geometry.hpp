#pragma once

#include <Eigen/Dense>
#include <string>

#include "mqnmr/errors.hpp"

namespace mqnmr {

// A cluster of identical spin-1/2 nuclei with dimensionless dipolar
// couplings D_jk in units of the nearest-neighbour constant D1. Times are
// then in units of 1/D1 throughout the library.
struct SpinSystem {
    int n_spins = 0;
    Eigen::MatrixXd couplings; // symmetric, zero diagonal
    std::string label;

    void validate() const; // throws ValidationError on broken invariants
};

// Scalar dipolar constant D = gamma^2 * hbar / (2 r^3) * (1 - 3 cos^2 theta).
// Vanishes at the magic angle; negative along the field (theta = 0).
double coupling_from_geometry(double r, double theta, double gamma = 1.0,
                              double hbar = 1.0);

// Ring of n equally spaced spins in a plane perpendicular to the field:
// D_jk = d1 * [sin(pi/n) / sin(pi*|k-j|/n)]^3.
SpinSystem ring_couplings(int n_spins, double d1 = 1.0);

// Uniform linear chain: D_jk = d1 / |j-k|^3.
SpinSystem chain_couplings(int n_spins, double d1 = 1.0);

// Four protons of 1-chloro-4-nitrobenzene, labelled around the perimeter:
// short sides D_12 = D_34 = 1, diagonals D_13 = D_24 = 1/8,
// long sides D_14 = D_23 = 1/(3*sqrt(3)).
SpinSystem rectangle_couplings();

// Ten protons of cyclopentane (five CH2 groups on a C5 ring, one proton
// above and one below the carbon plane). Spins are indexed (2c-1, 2c) for
// carbon c = 1..5; carbon distance is min(|c-c'|, 5-|c-c'|). Constants
// (high-temperature limits, units of the geminal coupling):
//   same carbon            ->  1
//   distance 1, same side  -> -0.178   distance 1, opposite -> -0.002
//   distance 2, same side  -> -0.093   distance 2, opposite ->  0.026
SpinSystem cyclopentane_couplings();

// Load couplings from a UTF-8 text file: one "j,k,value" triple per line,
// 1-based indices, '#' comment lines ignored. n_spins is supplied by the
// caller, never inferred from the file.
SpinSystem load_couplings(const std::string& path, int n_spins);

} // namespace mqnmr
