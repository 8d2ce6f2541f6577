#include "mqnmr/emit.hpp"

#include <cstdio>
#include <fstream>

#include "mqnmr/errors.hpp"

namespace mqnmr {

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

std::ofstream open_output(const std::string& path, const char* context) {
    std::ofstream out(path);
    if (!out) {
        throw IoError(std::string(context) + ": cannot write '" + path + "'");
    }
    return out;
}

void check_stream(const std::ostream& out, const char* context) {
    if (!out) {
        throw IoError(std::string(context) + ": write failed");
    }
}

} // namespace

void emit_scan_csv(const std::vector<CoherenceSpectrum>& spectra,
                   const std::vector<double>& times, std::ostream& out) {
    if (spectra.size() != times.size()) {
        throw ValidationError(
            "emit_scan_csv: spectra and times lengths differ");
    }
    if (spectra.empty()) {
        throw ValidationError("emit_scan_csv: nothing to emit");
    }
    const int n = spectra.front().n_spins;

    out << "t";
    for (int k = -n; k <= n; ++k) {
        out << ",J_" << (k > 0 ? "+" : "") << k << "Q";
    }
    out << ",J_0Q_diag,J_0Q_nondiag\n";

    for (std::size_t i = 0; i < times.size(); ++i) {
        const CoherenceSpectrum& s = spectra[i];
        if (s.n_spins != n) {
            throw ValidationError(
                "emit_scan_csv: mixed system sizes in spectra");
        }
        out << fmt(times[i]);
        for (int k = -n; k <= n; ++k) {
            out << ',' << fmt(s.order(k));
        }
        out << ',' << fmt(s.j0_diag) << ',' << fmt(s.j0_nondiag) << '\n';
    }
    check_stream(out, "emit_scan_csv");
}

void emit_scan_csv(const std::vector<CoherenceSpectrum>& spectra,
                   const std::vector<double>& times, const std::string& path) {
    auto out = open_output(path, "emit_scan_csv");
    emit_scan_csv(spectra, times, out);
}

void emit_zeros_csv(const ZerosResult& zeros, std::ostream& out) {
    out << "index,time\n";
    if (zeros.identically_zero) {
        out << "# identically zero\n";
    } else {
        for (std::size_t i = 0; i < zeros.times.size(); ++i) {
            out << (i + 1) << ',' << fmt(zeros.times[i]) << '\n';
        }
    }
    check_stream(out, "emit_zeros_csv");
}

void emit_zeros_csv(const ZerosResult& zeros, const std::string& path) {
    auto out = open_output(path, "emit_zeros_csv");
    emit_zeros_csv(zeros, out);
}

void emit_maxima_csv(const std::vector<Peak>& peaks, std::ostream& out) {
    out << "index,time,intensity\n";
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        out << (i + 1) << ',' << fmt(peaks[i].time) << ','
            << fmt(peaks[i].intensity) << '\n';
    }
    check_stream(out, "emit_maxima_csv");
}

void emit_maxima_csv(const std::vector<Peak>& peaks, const std::string& path) {
    auto out = open_output(path, "emit_maxima_csv");
    emit_maxima_csv(peaks, out);
}

void emit_protocol_report(const ProtocolResult& result,
                          const ProtocolSchedule& schedule, std::ostream& out) {
    out << "index,diagonal\n";
    for (Eigen::Index p = 0; p < result.diagonal.size(); ++p) {
        out << (p + 1) << ',' << fmt(result.diagonal(p)) << '\n';
    }
    out << "# diag_deviation = " << fmt(result.diag_deviation) << '\n';
    out << "# offdiag_norm = " << fmt(result.offdiag_norm) << '\n';
    out << "# sign_pattern = " << result.sign_pattern << '\n';
    out << "# tau1 = " << fmt(schedule.tau1) << '\n';
    out << "# tau2 = " << fmt(schedule.tau2) << '\n';
    out << "# filter_order = " << schedule.filter_order << '\n';
    check_stream(out, "emit_protocol_report");
}

void emit_protocol_report(const ProtocolResult& result,
                          const ProtocolSchedule& schedule,
                          const std::string& path) {
    auto out = open_output(path, "emit_protocol_report");
    emit_protocol_report(result, schedule, out);
}

} // namespace mqnmr
