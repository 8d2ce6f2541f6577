#pragma once

#include <vector>

#include "mqnmr/basis.hpp"
#include "mqnmr/geometry.hpp"

namespace mqnmr {

// Multiple-quantum decomposition of a density matrix: intensity per
// coherence order k in [-n, n], with the zero-quantum intensity split into
// its diagonal (populations) and non-diagonal parts.
struct CoherenceSpectrum {
    int n_spins = 0;
    std::vector<double> intensities; // index k + n_spins
    double j0_diag = 0.0;
    double j0_nondiag = 0.0;
    double normalization = 1.0; // divisor applied to every intensity

    double order(int k) const; // J_kQ; k out of [-n, n] throws
};

// k = m_z[p] - m_z[q] for 1-based basis indices p, q.
int coherence_order(int p, int q, const BasisInfo& basis);

// J_kQ = (1/normalization) * sum over pairs with m_z[p]-m_z[q] = k of
// |rho_pq|^2. The default divisor is iz_square_trace(basis); pass
// Tr rho(0)^2 instead to normalize a two-level initial state to unit height.
CoherenceSpectrum mq_spectrum(const CMatrix& rho, const BasisInfo& basis,
                              double normalization);

// Tr I_z^2 = n * 2^(n-2), the conventional intensity divisor.
double iz_square_trace(const BasisInfo& basis);

// Keep exactly the elements of coherence order +k and -k, zero the rest.
// Keeping both signs preserves Hermiticity; the map is idempotent.
CMatrix mq_filter(const CMatrix& rho, const BasisInfo& basis, int k);

// Evolve `initial` under the double-quantum average Hamiltonian of `system`
// and return the coherence spectrum at each requested time.
std::vector<CoherenceSpectrum> scan_trajectory(const SpinSystem& system,
                                               const CMatrix& initial,
                                               const std::vector<double>& times,
                                               double normalization);

} // namespace mqnmr
