#include "mqnmr/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "mqnmr/errors.hpp"
#include "mqnmr/hamiltonian.hpp"
#include "mqnmr/propagator.hpp"

namespace mqnmr {

namespace {

constexpr double kRefineResolution = 1e-4;
// Below this (relative to the scan maximum, or absolutely for a curve that
// never leaves the noise floor) an intensity counts as numerically zero.
constexpr double kNoiseFloor = 1e-14;
constexpr double kPeakFloor = 1e-12;

void require_grid(double t_max, double dt, const char* context) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw ValidationError(std::string(context) + ": t_max must be > 0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError(std::string(context) + ": dt must be > 0");
    }
}

// Golden-section minimization of f on [a, b], down to interval width `tol`.
double golden_minimize(const std::function<double(double)>& f, double a,
                       double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

bool is_diagonal(const CMatrix& rho) {
    for (Eigen::Index p = 0; p < rho.rows(); ++p) {
        for (Eigen::Index q = 0; q < rho.cols(); ++q) {
            if (p != q && std::abs(rho(p, q)) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

double nd0q_intensity(const CMatrix& rho, const BasisInfo& basis,
                      double normalization) {
    double sum = 0.0;
    for (int p0 = 0; p0 < basis.dim; ++p0) {
        for (int q0 = 0; q0 < basis.dim; ++q0) {
            if (p0 != q0 &&
                std::lround(basis.mz[p0] - basis.mz[q0]) == 0) {
                sum += std::norm(rho(p0, q0));
            }
        }
    }
    return sum / normalization;
}

} // namespace

std::vector<double> time_grid(double t_max, double dt) {
    require_grid(t_max, dt, "time_grid");
    std::vector<double> times;
    const auto count = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    times.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        times.push_back(static_cast<double>(i) * dt);
    }
    return times;
}

ZerosResult find_nd0q_zeros(const SpinSystem& system, const CMatrix& initial,
                            double t_max, double dt, double threshold) {
    require_grid(t_max, dt, "find_nd0q_zeros");
    if (!(threshold > 0.0)) {
        throw ValidationError("find_nd0q_zeros: threshold must be > 0");
    }
    const BasisInfo basis = build_basis(system.n_spins);
    if (initial.rows() != basis.dim || initial.cols() != basis.dim) {
        throw ValidationError(
            "find_nd0q_zeros: initial state dimension does not match system");
    }

    const double norm = iz_square_trace(basis);
    const Propagator prop = diagonalize(dq_average(system));
    const CMatrix rho_tilde0 = to_eigenbasis(prop, initial);
    const auto intensity_at = [&](double t) {
        const CMatrix rho = from_eigenbasis(
            prop, apply_phases(prop, rho_tilde0, t, Direction::forward));
        return nd0q_intensity(rho, basis, norm);
    };

    const std::vector<double> grid = time_grid(t_max, dt);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = intensity_at(grid[i]);
    }

    ZerosResult result;
    const double curve_max = *std::max_element(values.begin(), values.end());
    if (curve_max < kNoiseFloor) {
        result.identically_zero = true;
        return result;
    }
    const double cutoff = threshold * curve_max;
    const bool skip_origin = is_diagonal(initial);

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        bool candidate = false;
        if (i == 0) {
            candidate = !skip_origin && values[0] <= values[1];
        } else {
            candidate = values[i] <= values[i - 1] && values[i] <= values[i + 1];
        }
        if (!candidate) {
            continue;
        }
        const double lo = (i == 0) ? grid[0] : grid[i - 1];
        const double hi = grid[i + 1];
        const double t_min = golden_minimize(intensity_at, lo, hi,
                                             kRefineResolution);
        if (intensity_at(t_min) < cutoff) {
            result.times.push_back(t_min);
        }
    }
    return result;
}

std::vector<Peak> find_homqc_maxima(const SpinSystem& system,
                                    const CMatrix& initial, double t_max,
                                    double dt) {
    require_grid(t_max, dt, "find_homqc_maxima");
    const BasisInfo basis = build_basis(system.n_spins);
    if (initial.rows() != basis.dim || initial.cols() != basis.dim) {
        throw ValidationError(
            "find_homqc_maxima: initial state dimension does not match system");
    }

    const double norm = iz_square_trace(basis);
    const Propagator prop = diagonalize(dq_average(system));
    // Order n lives in the single corner element rho_{1,dim}.
    const EntryEvaluator corner(prop, initial, 0, basis.dim - 1);
    const auto intensity_at = [&](double t) {
        return std::norm(corner.at(t)) / norm;
    };

    const std::vector<double> grid = time_grid(t_max, dt);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = intensity_at(grid[i]);
    }

    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (values[i] < values[i - 1] || values[i] < values[i + 1]) {
            continue;
        }
        if (values[i] < kPeakFloor) {
            continue;
        }
        const auto negated = [&](double t) { return -intensity_at(t); };
        const double t_peak = golden_minimize(negated, grid[i - 1], grid[i + 1],
                                              kRefineResolution);
        peaks.push_back({t_peak, intensity_at(t_peak)});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        return a.intensity > b.intensity;
    });
    return peaks;
}

ProtocolResult run_protocol(const SpinSystem& system,
                            const ProtocolSchedule& schedule) {
    if (!(schedule.tau1 >= 0.0) || !(schedule.tau2 >= 0.0)) {
        throw ValidationError("run_protocol: tau1 and tau2 must be >= 0");
    }
    const BasisInfo basis = build_basis(system.n_spins);
    if (schedule.filter_order < 0 || schedule.filter_order > basis.n_spins) {
        throw ValidationError("run_protocol: filter_order outside [0, n_spins]");
    }

    const Propagator prop = diagonalize(dq_average(system));
    const CMatrix rho_eq = equilibrium_state(basis);
    const CMatrix prepared = evolve(prop, rho_eq, schedule.tau1,
                                    Direction::forward);
    const CMatrix filtered = mq_filter(prepared, basis, schedule.filter_order);
    const CMatrix intermediate = evolve(prop, filtered, schedule.tau2,
                                        Direction::reversed);

    ProtocolResult result;
    result.intermediate = intermediate;
    result.final_state =
        schedule.saturate ? partial_saturate(intermediate) : intermediate;

    const Eigen::VectorXcd diag = intermediate.diagonal();
    if (diag.imag().cwiseAbs().maxCoeff() > 1e-9) {
        throw NumericError(
            "run_protocol: intermediate diagonal is not real to 1e-9");
    }
    result.diagonal = diag.real();

    const PseudopureMetrics metrics = pseudopure_metrics(intermediate);
    result.diag_deviation = metrics.diag_deviation;
    result.offdiag_norm = metrics.offdiag_norm;
    result.sign_pattern = metrics.sign_pattern;
    return result;
}

CMatrix partial_saturate(const CMatrix& rho) {
    if (rho.rows() != rho.cols()) {
        throw ValidationError("partial_saturate: matrix must be square");
    }
    require_hermitian(rho, 1e-9, "partial_saturate");
    const Eigen::Index dim = rho.rows();
    if (dim == 1) {
        return rho;
    }

    // Already-saturated inputs (uniform diagonal background plus the
    // all-down population, no off-diagonals) return unchanged so the map is
    // exactly idempotent.
    bool saturated = true;
    for (Eigen::Index p = 0; p < dim && saturated; ++p) {
        for (Eigen::Index q = 0; q < dim && saturated; ++q) {
            if (p != q && rho(p, q) != std::complex<double>(0.0, 0.0)) {
                saturated = false;
            }
        }
    }
    for (Eigen::Index p = 1; p + 1 < dim && saturated; ++p) {
        if (rho(p, p) != rho(0, 0)) {
            saturated = false;
        }
    }
    if (saturated) {
        return rho;
    }

    double background = 0.0; // Tr rho - rho_dd, accumulated directly
    for (Eigen::Index p = 0; p + 1 < dim; ++p) {
        background += rho(p, p).real();
    }
    const double mean = background / static_cast<double>(dim - 1);

    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index p = 0; p + 1 < dim; ++p) {
        out(p, p) = mean;
    }
    out(dim - 1, dim - 1) = rho(dim - 1, dim - 1).real();
    return out;
}

PseudopureMetrics pseudopure_metrics(const CMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 2) {
        throw ValidationError(
            "pseudopure_metrics: matrix must be square with dim >= 2");
    }
    require_hermitian(rho, 1e-9, "pseudopure_metrics");
    const Eigen::Index dim = rho.rows();

    const double top = rho(0, 0).real();
    const double bottom = rho(dim - 1, dim - 1).real();
    const double corner = std::max(std::abs(top), std::abs(bottom));
    if (corner < 1e-12) {
        throw NumericError(
            "pseudopure_metrics: both corner populations vanish; "
            "no pseudopure reference scale");
    }

    double interior = 0.0;
    for (Eigen::Index p = 1; p + 1 < dim; ++p) {
        interior = std::max(interior, std::abs(rho(p, p).real()));
    }

    double off_sq = 0.0;
    double diag_sq = 0.0;
    for (Eigen::Index p = 0; p < dim; ++p) {
        for (Eigen::Index q = 0; q < dim; ++q) {
            const double w = std::norm(rho(p, q));
            (p == q ? diag_sq : off_sq) += w;
        }
    }

    PseudopureMetrics metrics;
    metrics.diag_deviation = interior / corner;
    metrics.offdiag_norm =
        diag_sq > 0.0 ? std::sqrt(off_sq / diag_sq) : 0.0;
    metrics.sign_pattern.push_back(top >= 0.0 ? '+' : '-');
    metrics.sign_pattern.push_back(bottom >= 0.0 ? '+' : '-');
    return metrics;
}

} // namespace mqnmr
