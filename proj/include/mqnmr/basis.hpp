#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mqnmr/errors.hpp"

namespace mqnmr {

using CMatrix = Eigen::MatrixXcd;

// Default limit on cluster size; dense d x d complex matrices grow as
// 16 * 4^n bytes, so n = 12 (d = 4096, 256 MiB per matrix) is the sane
// desk-scale ceiling. Overridable wherever a basis is built.
inline constexpr int kDefaultMaxSpins = 12;

// Zeeman product basis for n spin-1/2 nuclei.
//
// Convention (1-based basis index p, stored 0-based as p0 = p - 1):
// bit (n - j) of p0 encodes spin j, with bit value 0 = up. Hence index
// p = 1 is |up...up> and p = 2^n is |down...down>, and
// m_z[p] = n/2 - popcount(p - 1).
struct BasisInfo {
    int n_spins = 0;
    int dim = 0;
    std::vector<double> mz; // mz[p0] for 0-based p0; half-integers when n is odd

    // m_z of a 0-based basis index.
    double mz_of(int p0) const { return mz[static_cast<std::size_t>(p0)]; }
};

// Build the basis table. Throws ValidationError when n_spins is outside
// [1, max_spins].
BasisInfo build_basis(int n_spins, int max_spins = kDefaultMaxSpins);

// Embedded spin-1/2 operators for spin j (1-based). Returns {Iz_j, I+_j, I-_j}.
struct SpinOps {
    CMatrix iz;
    CMatrix iplus;
    CMatrix iminus;
};
SpinOps single_spin_ops(int j, const BasisInfo& basis);

// Collective I_z = sum_j Iz_j: diagonal with entries m_z[p].
CMatrix collective_iz(const BasisInfo& basis);

// High-temperature equilibrium deviation density matrix, rho_eq = I_z.
CMatrix equilibrium_state(const BasisInfo& basis);

// Two-level intermediate state sign * (|up...up><up...up| - |down...down><down...down|),
// i.e. diag entries rho_11 = sign, rho_dd = -sign, all else zero.
// sign = -1 reproduces the "-e_{1,1} + e_{dim,dim}" initial states.
CMatrix intermediate_state(const BasisInfo& basis, int sign);

// max_pq |rho_pq - conj(rho_qp)|; used by hermiticity checks.
double hermiticity_defect(const CMatrix& rho);

// Throws ValidationError when rho is not Hermitian to tol.
void require_hermitian(const CMatrix& rho, double tol, const char* context);

} // namespace mqnmr
