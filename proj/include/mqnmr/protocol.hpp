#pragma once

#include <string>
#include <vector>

#include "mqnmr/basis.hpp"
#include "mqnmr/coherence.hpp"
#include "mqnmr/geometry.hpp"

namespace mqnmr {

// Four-stage pseudopure-state preparation: forward evolution for tau1 under
// the double-quantum average Hamiltonian, coherence-order filtering,
// time-reversed evolution for tau2, then optional partial saturation.
struct ProtocolSchedule {
    double tau1 = 0.0;        // preparatory period, units 1/D1
    int filter_order = 0;     // coherence order kept (both signs)
    double tau2 = 0.0;        // time-reversal period, units 1/D1
    bool saturate = false;    // apply partial saturation as stage iv
};

struct ProtocolResult {
    CMatrix intermediate;      // after the time-reversal stage
    CMatrix final_state;       // after optional saturation
    Eigen::VectorXd diagonal;  // real diagonal of `intermediate`
    double diag_deviation = 0.0;
    double offdiag_norm = 0.0;
    std::string sign_pattern;  // "+-", "++", "--" or "-+" for (rho_11, rho_dd)
};

struct PseudopureMetrics {
    double diag_deviation = 0.0; // max interior |rho_pp| / max corner
    double offdiag_norm = 0.0;   // ||offdiag||_F / ||diag||_F
    std::string sign_pattern;
};

// Times where the non-diagonal zero-quantum intensity touches zero. When the
// curve never rises above numerical noise the search is meaningless and the
// sentinel flag is set instead.
struct ZerosResult {
    bool identically_zero = false;
    std::vector<double> times; // ascending
};

// A refined local maximum of the highest-order coherence intensity.
struct Peak {
    double time = 0.0;
    double intensity = 0.0;
};

// Uniform grid 0, dt, 2*dt, ... up to (and including, when it lands on a
// grid point) t_max. Throws ValidationError unless t_max > 0 and dt > 0.
std::vector<double> time_grid(double t_max, double dt);

// Scan j0_nondiag(t) on [0, t_max] with grid step dt under the
// double-quantum average Hamiltonian of `system`, then golden-section refine
// every interior local minimum to time resolution 1e-4. A refined minimum
// counts as a zero when its value is below threshold * (curve maximum) —
// the threshold is relative, so the normalization convention cancels.
// t = 0 is excluded when the initial state is diagonal (trivial zero).
ZerosResult find_nd0q_zeros(const SpinSystem& system, const CMatrix& initial,
                            double t_max, double dt, double threshold);

// Grid-scan the order-n intensity J_NQ(t) = |rho_{1,dim}(t)|^2 / Tr I_z^2 on
// [0, t_max], refine each interior local maximum to resolution 1e-4, and
// return the peaks sorted by descending intensity. Maxima below 1e-12 are
// discarded as numerically zero (orders that are never excited produce only
// rounding noise). Tracks the single corner matrix element, so the scan
// costs O(dim^2) per grid point.
std::vector<Peak> find_homqc_maxima(const SpinSystem& system,
                                    const CMatrix& initial, double t_max,
                                    double dt);

// Stages i-iv from the equilibrium state. Metrics are computed on the
// intermediate (pre-saturation) state.
ProtocolResult run_protocol(const SpinSystem& system,
                            const ProtocolSchedule& schedule);

// Idealized saturation: zero all off-diagonal elements, keep the all-down
// population rho_dd, and set every other diagonal entry to the common mean
// (Tr rho - rho_dd)/(dim - 1). Inputs already of that form pass through
// unchanged, which makes the map exactly idempotent.
CMatrix partial_saturate(const CMatrix& rho);

// Quantifies how close rho is to the two-level corner mixture. Throws
// NumericError when both corner populations are below 1e-12 (no sign
// pattern or deviation scale is defined there).
PseudopureMetrics pseudopure_metrics(const CMatrix& rho);

} // namespace mqnmr
