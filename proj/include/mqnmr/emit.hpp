#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mqnmr/coherence.hpp"
#include "mqnmr/protocol.hpp"

namespace mqnmr {

// All emitters print numbers with 15 significant digits via a fixed format,
// so a rerun on identical inputs produces a byte-identical file.

// Header then one row per time: t, J_-NQ ... J_+NQ, J_0Q_diag, J_0Q_nondiag
// (2N + 4 columns).
void emit_scan_csv(const std::vector<CoherenceSpectrum>& spectra,
                   const std::vector<double>& times, std::ostream& out);
void emit_scan_csv(const std::vector<CoherenceSpectrum>& spectra,
                   const std::vector<double>& times, const std::string& path);

// "index,time" rows, or a single "# identically zero" marker line when the
// intensity never left the noise floor.
void emit_zeros_csv(const ZerosResult& zeros, std::ostream& out);
void emit_zeros_csv(const ZerosResult& zeros, const std::string& path);

// "index,time,intensity" rows sorted by descending intensity.
void emit_maxima_csv(const std::vector<Peak>& peaks, std::ostream& out);
void emit_maxima_csv(const std::vector<Peak>& peaks, const std::string& path);

// "index,diagonal" rows (1-based, all 2^N of them) followed by a
// '#'-prefixed summary block: diag_deviation, offdiag_norm, sign_pattern,
// tau1, tau2, filter_order.
void emit_protocol_report(const ProtocolResult& result,
                          const ProtocolSchedule& schedule, std::ostream& out);
void emit_protocol_report(const ProtocolResult& result,
                          const ProtocolSchedule& schedule,
                          const std::string& path);

} // namespace mqnmr
