#include "mqnmr/basis.hpp"

#include <bit>
#include <string>

namespace mqnmr {

BasisInfo build_basis(int n_spins, int max_spins) {
    if (n_spins < 1 || n_spins > max_spins) {
        throw ValidationError("build_basis: n_spins = " + std::to_string(n_spins) +
                              " outside [1, " + std::to_string(max_spins) +
                              "] (spin cap " + std::to_string(max_spins) + ")");
    }
    BasisInfo b;
    b.n_spins = n_spins;
    b.dim = 1 << n_spins;
    b.mz.resize(static_cast<std::size_t>(b.dim));
    for (int p0 = 0; p0 < b.dim; ++p0) {
        b.mz[static_cast<std::size_t>(p0)] =
            0.5 * n_spins - std::popcount(static_cast<unsigned>(p0));
    }
    return b;
}

SpinOps single_spin_ops(int j, const BasisInfo& basis) {
    if (j < 1 || j > basis.n_spins) {
        throw ValidationError("single_spin_ops: spin index " + std::to_string(j) +
                              " outside [1, " + std::to_string(basis.n_spins) + "]");
    }
    const int d = basis.dim;
    const int bit = basis.n_spins - j; // spin j lives in bit (n - j); bit 0 = up
    SpinOps ops{CMatrix::Zero(d, d), CMatrix::Zero(d, d), CMatrix::Zero(d, d)};
    const unsigned mask = 1u << bit;
    for (int p0 = 0; p0 < d; ++p0) {
        const bool down = (static_cast<unsigned>(p0) & mask) != 0;
        ops.iz(p0, p0) = down ? -0.5 : 0.5;
        if (down) {
            ops.iplus(p0 ^ static_cast<int>(mask), p0) = 1.0; // raise: down -> up
        } else {
            ops.iminus(p0 ^ static_cast<int>(mask), p0) = 1.0; // lower: up -> down
        }
    }
    return ops;
}

CMatrix collective_iz(const BasisInfo& basis) {
    CMatrix iz = CMatrix::Zero(basis.dim, basis.dim);
    for (int p0 = 0; p0 < basis.dim; ++p0) iz(p0, p0) = basis.mz_of(p0);
    return iz;
}

CMatrix equilibrium_state(const BasisInfo& basis) { return collective_iz(basis); }

CMatrix intermediate_state(const BasisInfo& basis, int sign) {
    if (sign != 1 && sign != -1) {
        throw ValidationError("intermediate_state: sign must be +1 or -1");
    }
    CMatrix rho = CMatrix::Zero(basis.dim, basis.dim);
    rho(0, 0) = sign;
    rho(basis.dim - 1, basis.dim - 1) = -sign;
    return rho;
}

double hermiticity_defect(const CMatrix& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const CMatrix& rho, double tol, const char* context) {
    const double defect = hermiticity_defect(rho);
    if (!(defect <= tol)) {
        throw ValidationError(std::string(context) +
                              ": matrix not Hermitian (defect " +
                              std::to_string(defect) + " > tol)");
    }
}

} // namespace mqnmr
