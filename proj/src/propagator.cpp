#include "mqnmr/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "mqnmr/errors.hpp"

namespace mqnmr {

namespace {

void require_matching(const Propagator& prop, const CMatrix& rho,
                      const char* context) {
    if (rho.rows() != prop.dim || rho.cols() != prop.dim) {
        throw ValidationError(std::string(context) +
                              ": density matrix dimension " +
                              std::to_string(rho.rows()) + "x" +
                              std::to_string(rho.cols()) +
                              " does not match propagator dimension " +
                              std::to_string(prop.dim));
    }
}

void require_finite_time(double t, const char* context) {
    if (!std::isfinite(t)) {
        throw ValidationError(std::string(context) + ": time must be finite");
    }
}

// Phase vector u_a = e^{-i lambda_a t} for forward evolution; reversed
// evolution conjugates every phase, i.e. negates the effective time.
Eigen::VectorXcd phase_vector(const Eigen::VectorXd& eigenvalues, double t,
                              Direction direction) {
    const double sign = (direction == Direction::forward) ? -1.0 : 1.0;
    Eigen::VectorXcd u(eigenvalues.size());
    for (Eigen::Index a = 0; a < eigenvalues.size(); ++a) {
        u(a) = std::polar(1.0, sign * eigenvalues(a) * t);
    }
    return u;
}

} // namespace

Propagator diagonalize(const CMatrix& h) {
    if (h.rows() != h.cols()) {
        throw ValidationError("diagonalize: operator must be square");
    }
    require_hermitian(h, 1e-10, "diagonalize");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericError("diagonalize: eigensolver failed to converge");
    }
    Propagator prop;
    prop.dim = static_cast<int>(h.rows());
    prop.eigenvalues = solver.eigenvalues();
    prop.eigenvectors = solver.eigenvectors();
    return prop;
}

CMatrix to_eigenbasis(const Propagator& prop, const CMatrix& rho) {
    require_matching(prop, rho, "to_eigenbasis");
    return prop.eigenvectors.adjoint() * rho * prop.eigenvectors;
}

CMatrix from_eigenbasis(const Propagator& prop, const CMatrix& rho_tilde) {
    require_matching(prop, rho_tilde, "from_eigenbasis");
    return prop.eigenvectors * rho_tilde * prop.eigenvectors.adjoint();
}

CMatrix apply_phases(const Propagator& prop, const CMatrix& rho_tilde0,
                     double t, Direction direction) {
    require_matching(prop, rho_tilde0, "apply_phases");
    require_finite_time(t, "apply_phases");
    const Eigen::VectorXcd u = phase_vector(prop.eigenvalues, t, direction);
    // out_ab = u_a * rho_ab * conj(u_b): scale columns, then rows.
    return u.asDiagonal() * (rho_tilde0 * u.conjugate().asDiagonal());
}

CMatrix evolve(const Propagator& prop, const CMatrix& rho0, double t,
               Direction direction) {
    return from_eigenbasis(
        prop, apply_phases(prop, to_eigenbasis(prop, rho0), t, direction));
}

void evolve_series(const Propagator& prop, const CMatrix& rho0,
                   const std::vector<double>& times,
                   const std::function<void(std::size_t, const CMatrix&)>& sink) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        require_finite_time(times[i], "evolve_series");
        if (i > 0 && times[i] < times[i - 1]) {
            throw ValidationError("evolve_series: times must be ascending");
        }
    }
    const CMatrix rho_tilde0 = to_eigenbasis(prop, rho0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        sink(i, from_eigenbasis(
                    prop, apply_phases(prop, rho_tilde0, times[i],
                                       Direction::forward)));
    }
}

EntryEvaluator::EntryEvaluator(const Propagator& prop, const CMatrix& rho0,
                               int row, int col)
    : eigenvalues_(prop.eigenvalues) {
    if (row < 0 || row >= prop.dim || col < 0 || col >= prop.dim) {
        throw ValidationError("EntryEvaluator: entry index out of range");
    }
    const CMatrix rho_tilde = to_eigenbasis(prop, rho0);
    // rho(t)_(row,col) = sum_ab w_ab e^{-i lambda_a t} e^{+i lambda_b t}
    const CMatrix outer = prop.eigenvectors.row(row).transpose() *
                          prop.eigenvectors.row(col).conjugate();
    weighted_ = outer.cwiseProduct(rho_tilde);
}

std::complex<double> EntryEvaluator::at(double t, Direction direction) const {
    require_finite_time(t, "EntryEvaluator::at");
    const Eigen::VectorXcd u = phase_vector(eigenvalues_, t, direction);
    return (u.transpose() * weighted_ * u.conjugate())(0, 0);
}

BlockedPropagator diagonalize_blocked(const CMatrix& h,
                                      const BasisInfo& basis) {
    if (h.rows() != basis.dim || h.cols() != basis.dim) {
        throw ValidationError(
            "diagonalize_blocked: operator dimension does not match basis");
    }
    require_hermitian(h, 1e-10, "diagonalize_blocked");

    BlockedPropagator prop;
    prop.dim = basis.dim;
    for (int p0 = 0; p0 < basis.dim; ++p0) {
        const int parity = std::popcount(static_cast<unsigned>(p0)) & 1;
        prop.indices[parity].push_back(p0);
    }

    for (int p0 = 0; p0 < basis.dim; ++p0) {
        const int pp = std::popcount(static_cast<unsigned>(p0)) & 1;
        for (int q0 = 0; q0 < basis.dim; ++q0) {
            const int qp = std::popcount(static_cast<unsigned>(q0)) & 1;
            if (pp != qp && std::abs(h(p0, q0)) > 1e-12) {
                throw ValidationError(
                    "diagonalize_blocked: operator couples opposite parity "
                    "sectors; use the unblocked path");
            }
        }
    }

    for (int s = 0; s < 2; ++s) {
        const auto& idx = prop.indices[s];
        const int ns = static_cast<int>(idx.size());
        CMatrix sub(ns, ns);
        for (int a = 0; a < ns; ++a) {
            for (int b = 0; b < ns; ++b) {
                sub(a, b) = h(idx[a], idx[b]);
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(sub);
        if (solver.info() != Eigen::Success) {
            throw NumericError(
                "diagonalize_blocked: eigensolver failed to converge");
        }
        prop.eigenvalues[s] = solver.eigenvalues();
        prop.eigenvectors[s] = solver.eigenvectors();
    }
    return prop;
}

CMatrix evolve(const BlockedPropagator& prop, const CMatrix& rho0, double t,
               Direction direction) {
    if (rho0.rows() != prop.dim || rho0.cols() != prop.dim) {
        throw ValidationError("evolve(blocked): density matrix dimension " +
                              std::to_string(rho0.rows()) + "x" +
                              std::to_string(rho0.cols()) +
                              " does not match propagator dimension " +
                              std::to_string(prop.dim));
    }
    require_finite_time(t, "evolve(blocked)");

    CMatrix out = CMatrix::Zero(prop.dim, prop.dim);
    for (int s = 0; s < 2; ++s) {
        const Eigen::VectorXcd us = phase_vector(prop.eigenvalues[s], t,
                                                 direction);
        for (int r = 0; r < 2; ++r) {
            const auto& rows = prop.indices[s];
            const auto& cols = prop.indices[r];
            CMatrix block(rows.size(), cols.size());
            for (std::size_t a = 0; a < rows.size(); ++a) {
                for (std::size_t b = 0; b < cols.size(); ++b) {
                    block(a, b) = rho0(rows[a], cols[b]);
                }
            }
            const Eigen::VectorXcd ur = phase_vector(prop.eigenvalues[r], t,
                                                     direction);
            CMatrix tilde = prop.eigenvectors[s].adjoint() * block *
                            prop.eigenvectors[r];
            tilde = us.asDiagonal() * (tilde * ur.conjugate().asDiagonal());
            block = prop.eigenvectors[s] * tilde *
                    prop.eigenvectors[r].adjoint();
            for (std::size_t a = 0; a < rows.size(); ++a) {
                for (std::size_t b = 0; b < cols.size(); ++b) {
                    out(rows[a], cols[b]) = block(a, b);
                }
            }
        }
    }
    return out;
}

} // namespace mqnmr
