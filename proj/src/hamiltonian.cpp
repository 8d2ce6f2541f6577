#include "mqnmr/hamiltonian.hpp"

#include <Eigen/SparseCore>
#include <complex>

namespace mqnmr {

namespace {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

// Sparse single-spin operators in the product basis, identical in content to
// single_spin_ops but without the dense storage, so pairwise products stay
// cheap for large clusters.
struct SparseSpinOps {
    SparseOp iz, iplus, iminus;
};

SparseSpinOps sparse_spin_ops(int j, const BasisInfo& basis) {
    const int dim = basis.dim;
    const int bit = basis.n_spins - j;
    const unsigned mask = 1u << bit;

    SparseSpinOps ops{SparseOp(dim, dim), SparseOp(dim, dim),
                      SparseOp(dim, dim)};
    std::vector<Eigen::Triplet<std::complex<double>>> tz, tp, tm;
    tz.reserve(dim);
    tp.reserve(dim / 2);
    tm.reserve(dim / 2);
    for (int p0 = 0; p0 < dim; ++p0) {
        const bool down = (static_cast<unsigned>(p0) & mask) != 0;
        tz.emplace_back(p0, p0, down ? -0.5 : 0.5);
        const int q0 = p0 ^ static_cast<int>(mask);
        if (down) {
            tp.emplace_back(q0, p0, 1.0); // raise |down> -> |up>
        } else {
            tm.emplace_back(q0, p0, 1.0); // lower |up> -> |down>
        }
    }
    ops.iz.setFromTriplets(tz.begin(), tz.end());
    ops.iplus.setFromTriplets(tp.begin(), tp.end());
    ops.iminus.setFromTriplets(tm.begin(), tm.end());
    return ops;
}

// Accumulate sum over pairs of coeff * D_jk * (a_j * b_k + a2_j * b2_k)
// style terms; each caller supplies the per-pair contribution.
template <typename PairTerm>
CMatrix accumulate_pairs(const SpinSystem& system, PairTerm&& term) {
    system.validate();
    const BasisInfo basis = build_basis(system.n_spins);

    std::vector<SparseSpinOps> ops;
    ops.reserve(system.n_spins);
    for (int j = 1; j <= system.n_spins; ++j) {
        ops.push_back(sparse_spin_ops(j, basis));
    }

    SparseOp acc(basis.dim, basis.dim);
    for (int j = 0; j < system.n_spins; ++j) {
        for (int k = j + 1; k < system.n_spins; ++k) {
            const double d = system.couplings(j, k);
            if (d == 0.0) {
                continue;
            }
            SparseOp pair = term(ops[j], ops[k]);
            acc += std::complex<double>(d, 0.0) * pair;
        }
    }
    return CMatrix(acc);
}

} // namespace

CMatrix dipolar_secular(const SpinSystem& system) {
    return accumulate_pairs(
        system, [](const SparseSpinOps& a, const SparseSpinOps& b) {
            SparseOp pair = SparseOp(a.iz * b.iz) -
                            0.25 * SparseOp(a.iplus * b.iminus) -
                            0.25 * SparseOp(a.iminus * b.iplus);
            return pair;
        });
}

CMatrix dq_average(const SpinSystem& system) {
    return accumulate_pairs(
        system, [](const SparseSpinOps& a, const SparseSpinOps& b) {
            SparseOp pair = -0.5 * SparseOp(a.iplus * b.iplus) -
                            0.5 * SparseOp(a.iminus * b.iminus);
            return pair;
        });
}

} // namespace mqnmr
