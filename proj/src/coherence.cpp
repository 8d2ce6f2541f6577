#include "mqnmr/coherence.hpp"

#include <cmath>

#include "mqnmr/errors.hpp"
#include "mqnmr/hamiltonian.hpp"
#include "mqnmr/propagator.hpp"

namespace mqnmr {

namespace {

void require_basis_match(const CMatrix& rho, const BasisInfo& basis,
                         const char* context) {
    if (rho.rows() != basis.dim || rho.cols() != basis.dim) {
        throw ValidationError(std::string(context) +
                              ": density matrix dimension does not match "
                              "basis dimension " +
                              std::to_string(basis.dim));
    }
}

int order_of(const BasisInfo& basis, int p0, int q0) {
    return static_cast<int>(std::lround(basis.mz[p0] - basis.mz[q0]));
}

} // namespace

double CoherenceSpectrum::order(int k) const {
    if (k < -n_spins || k > n_spins) {
        throw ValidationError("CoherenceSpectrum::order: k=" +
                              std::to_string(k) + " outside [-n, n] for n=" +
                              std::to_string(n_spins));
    }
    return intensities[static_cast<std::size_t>(k + n_spins)];
}

int coherence_order(int p, int q, const BasisInfo& basis) {
    if (p < 1 || p > basis.dim || q < 1 || q > basis.dim) {
        throw ValidationError("coherence_order: basis index out of range "
                              "(expected 1.." +
                              std::to_string(basis.dim) + ")");
    }
    return order_of(basis, p - 1, q - 1);
}

double iz_square_trace(const BasisInfo& basis) {
    double sum = 0.0;
    for (int p0 = 0; p0 < basis.dim; ++p0) {
        sum += basis.mz[p0] * basis.mz[p0];
    }
    return sum;
}

CoherenceSpectrum mq_spectrum(const CMatrix& rho, const BasisInfo& basis,
                              double normalization) {
    require_basis_match(rho, basis, "mq_spectrum");
    if (!(normalization > 0.0)) {
        throw ValidationError("mq_spectrum: normalization must be positive");
    }

    CoherenceSpectrum spectrum;
    spectrum.n_spins = basis.n_spins;
    spectrum.intensities.assign(2 * basis.n_spins + 1, 0.0);
    spectrum.normalization = normalization;

    for (int p0 = 0; p0 < basis.dim; ++p0) {
        for (int q0 = 0; q0 < basis.dim; ++q0) {
            const double w = std::norm(rho(p0, q0));
            const int k = order_of(basis, p0, q0);
            spectrum.intensities[static_cast<std::size_t>(k + basis.n_spins)] +=
                w;
            if (k == 0) {
                (p0 == q0 ? spectrum.j0_diag : spectrum.j0_nondiag) += w;
            }
        }
    }
    for (double& v : spectrum.intensities) {
        v /= normalization;
    }
    spectrum.j0_diag /= normalization;
    spectrum.j0_nondiag /= normalization;
    return spectrum;
}

CMatrix mq_filter(const CMatrix& rho, const BasisInfo& basis, int k) {
    require_basis_match(rho, basis, "mq_filter");
    if (k < 0 || k > basis.n_spins) {
        throw ValidationError("mq_filter: order k=" + std::to_string(k) +
                              " outside [0, n_spins]");
    }
    CMatrix out = CMatrix::Zero(basis.dim, basis.dim);
    for (int p0 = 0; p0 < basis.dim; ++p0) {
        for (int q0 = 0; q0 < basis.dim; ++q0) {
            if (std::abs(order_of(basis, p0, q0)) == k) {
                out(p0, q0) = rho(p0, q0);
            }
        }
    }
    return out;
}

std::vector<CoherenceSpectrum> scan_trajectory(const SpinSystem& system,
                                               const CMatrix& initial,
                                               const std::vector<double>& times,
                                               double normalization) {
    const BasisInfo basis = build_basis(system.n_spins);
    require_basis_match(initial, basis, "scan_trajectory");

    const Propagator prop = diagonalize(dq_average(system));
    std::vector<CoherenceSpectrum> out(times.size());
    evolve_series(prop, initial, times,
                  [&](std::size_t i, const CMatrix& rho) {
                      out[i] = mq_spectrum(rho, basis, normalization);
                  });
    return out;
}

} // namespace mqnmr
