#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "mqnmr/basis.hpp"

namespace mqnmr {

// Sense of the effective evolution: forward applies e^{-iHt} rho e^{+iHt};
// reversed applies the conjugate propagator, undoing a forward period of the
// same duration (the time-reversal half of the conversion sequence).
enum class Direction { forward, reversed };

// Spectral form of a Hamiltonian, computed once and reused for evolution to
// arbitrarily many times.
struct Propagator {
    int dim = 0;
    Eigen::VectorXd eigenvalues; // ascending
    CMatrix eigenvectors;        // columns; unitary
};

// Eigendecompose a Hermitian operator. Throws ValidationError if the input
// is not Hermitian (tolerance 1e-10), NumericError if the solver fails.
Propagator diagonalize(const CMatrix& h);

// Basis-change helpers; evolve() composes them, and callers that pump many
// time points from one initial state can cache the eigenbasis image.
CMatrix to_eigenbasis(const Propagator& prop, const CMatrix& rho);
CMatrix from_eigenbasis(const Propagator& prop, const CMatrix& rho_tilde);

// Elementwise phase evolution in the eigenbasis:
// rho_tilde(t)_ab = rho_tilde0_ab * e^{-i(lambda_a - lambda_b) t} (forward),
// conjugate phases when reversed. O(dim^2) per time point.
CMatrix apply_phases(const Propagator& prop, const CMatrix& rho_tilde0,
                     double t, Direction direction);

// rho(t) = e^{-iHt} rho0 e^{+iHt} (forward) or its conjugate (reversed).
CMatrix evolve(const Propagator& prop, const CMatrix& rho0, double t,
               Direction direction = Direction::forward);

// Stream evolve(prop, rho0, times[i]) for each i in order, diagonalizing and
// rotating the initial state only once. Each emitted matrix is bit-identical
// to the corresponding single evolve() call.
void evolve_series(const Propagator& prop, const CMatrix& rho0,
                   const std::vector<double>& times,
                   const std::function<void(std::size_t, const CMatrix&)>& sink);

// Tracks one matrix element of the evolved state, rho(t)_(row,col), at
// O(dim^2) per time point without forming the full matrix. Used for dense
// scans of a single coherence amplitude.
class EntryEvaluator {
  public:
    EntryEvaluator(const Propagator& prop, const CMatrix& rho0, int row,
                   int col);
    std::complex<double> at(double t,
                            Direction direction = Direction::forward) const;

  private:
    Eigen::VectorXd eigenvalues_;
    CMatrix weighted_; // V_(row,a) * rho_tilde_ab * conj(V_(col,b))
};

// Performance switch for Hamiltonians that preserve the parity of m_z (both
// the secular dipolar and double-quantum forms do): diagonalize the even and
// odd popcount sectors separately. Off by default everywhere; results agree
// with the unblocked path to solver precision.
struct BlockedPropagator {
    int dim = 0;
    std::array<std::vector<int>, 2> indices; // basis rows per parity sector
    std::array<Eigen::VectorXd, 2> eigenvalues;
    std::array<CMatrix, 2> eigenvectors;
};

// Throws ValidationError if h has matrix elements connecting the two parity
// sectors (above 1e-12), since blocking would silently drop them.
BlockedPropagator diagonalize_blocked(const CMatrix& h, const BasisInfo& basis);

CMatrix evolve(const BlockedPropagator& prop, const CMatrix& rho0, double t,
               Direction direction = Direction::forward);

} // namespace mqnmr
