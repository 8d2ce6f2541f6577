#include "mqnmr/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mqnmr {

namespace {

constexpr double kPi = 3.14159265358979323846;

SpinSystem make_system(int n_spins, const std::string& label) {
    SpinSystem sys;
    sys.n_spins = n_spins;
    sys.couplings = Eigen::MatrixXd::Zero(n_spins, n_spins);
    sys.label = label;
    return sys;
}

void require_size(int n_spins, const char* builder) {
    if (n_spins < 2) {
        throw ValidationError(std::string(builder) +
                              ": n_spins must be at least 2, got " +
                              std::to_string(n_spins));
    }
}

} // namespace

void SpinSystem::validate() const {
    if (n_spins < 1) {
        throw ValidationError("SpinSystem: n_spins must be positive, got " +
                              std::to_string(n_spins));
    }
    if (couplings.rows() != n_spins || couplings.cols() != n_spins) {
        throw ValidationError("SpinSystem: coupling matrix must be " +
                              std::to_string(n_spins) + "x" +
                              std::to_string(n_spins));
    }
    for (int j = 0; j < n_spins; ++j) {
        for (int k = 0; k < n_spins; ++k) {
            const double v = couplings(j, k);
            if (!std::isfinite(v)) {
                throw ValidationError("SpinSystem: non-finite coupling at (" +
                                      std::to_string(j + 1) + "," +
                                      std::to_string(k + 1) + ")");
            }
            if (std::abs(v - couplings(k, j)) > 1e-12) {
                throw ValidationError("SpinSystem: coupling matrix is not "
                                      "symmetric at (" +
                                      std::to_string(j + 1) + "," +
                                      std::to_string(k + 1) + ")");
            }
        }
        if (couplings(j, j) != 0.0) {
            throw ValidationError("SpinSystem: diagonal coupling D_jj must be "
                                  "zero at j=" +
                                  std::to_string(j + 1));
        }
    }
}

double coupling_from_geometry(double r, double theta, double gamma,
                              double hbar) {
    if (!(r > 0.0)) {
        throw ValidationError("coupling_from_geometry: r must be positive");
    }
    const double c = std::cos(theta);
    return gamma * gamma * hbar / (2.0 * r * r * r) * (1.0 - 3.0 * c * c);
}

SpinSystem ring_couplings(int n_spins, double d1) {
    require_size(n_spins, "ring_couplings");
    SpinSystem sys = make_system(n_spins, "ring-" + std::to_string(n_spins));
    const double s1 = std::sin(kPi / n_spins);
    for (int j = 0; j < n_spins; ++j) {
        for (int k = j + 1; k < n_spins; ++k) {
            // Chord-length rule: spins sit on a circle, couplings scale as
            // the inverse cube of the chord between sites j and k.
            const double ratio = s1 / std::sin(kPi * (k - j) / n_spins);
            sys.couplings(j, k) = sys.couplings(k, j) = d1 * ratio * ratio * ratio;
        }
    }
    return sys;
}

SpinSystem chain_couplings(int n_spins, double d1) {
    require_size(n_spins, "chain_couplings");
    SpinSystem sys = make_system(n_spins, "chain-" + std::to_string(n_spins));
    for (int j = 0; j < n_spins; ++j) {
        for (int k = j + 1; k < n_spins; ++k) {
            const double sep = k - j;
            sys.couplings(j, k) = sys.couplings(k, j) = d1 / (sep * sep * sep);
        }
    }
    return sys;
}

SpinSystem rectangle_couplings() {
    SpinSystem sys = make_system(4, "rectangle");
    const double d_short = 1.0;
    const double d_diag = 1.0 / 8.0;
    const double d_long = 1.0 / (3.0 * std::sqrt(3.0));
    sys.couplings(0, 1) = sys.couplings(1, 0) = d_short;
    sys.couplings(2, 3) = sys.couplings(3, 2) = d_short;
    sys.couplings(0, 2) = sys.couplings(2, 0) = d_diag;
    sys.couplings(1, 3) = sys.couplings(3, 1) = d_diag;
    sys.couplings(0, 3) = sys.couplings(3, 0) = d_long;
    sys.couplings(1, 2) = sys.couplings(2, 1) = d_long;
    return sys;
}

SpinSystem cyclopentane_couplings() {
    const double d_gem = 1.0;
    const double d_near_same = -0.178;
    const double d_near_cross = -0.002;
    const double d_far_same = -0.093;
    const double d_far_cross = 0.026;

    SpinSystem sys = make_system(10, "cyclopentane");
    for (int a = 1; a <= 10; ++a) {
        for (int b = a + 1; b <= 10; ++b) {
            const int ca = (a + 1) / 2; // carbon site 1..5
            const int cb = (b + 1) / 2;
            double value = 0.0;
            if (ca == cb) {
                value = d_gem;
            } else {
                const int gap = std::abs(ca - cb);
                const int dist = std::min(gap, 5 - gap);
                // Same side of the carbon plane when both indices share
                // parity (both unprimed or both primed).
                const bool same_side = (a % 2) == (b % 2);
                if (dist == 1) {
                    value = same_side ? d_near_same : d_near_cross;
                } else {
                    value = same_side ? d_far_same : d_far_cross;
                }
            }
            sys.couplings(a - 1, b - 1) = sys.couplings(b - 1, a - 1) = value;
        }
    }
    return sys;
}

SpinSystem load_couplings(const std::string& path, int n_spins) {
    if (n_spins < 1) {
        throw ValidationError("load_couplings: n_spins must be positive, got " +
                              std::to_string(n_spins));
    }
    std::ifstream in(path);
    if (!in) {
        throw IoError("load_couplings: cannot open '" + path + "'");
    }

    SpinSystem sys = make_system(n_spins, "file:" + path);
    Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(n_spins, n_spins);

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip leading whitespace, skip blanks and '#' comments.
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') {
            continue;
        }

        int j = 0;
        int k = 0;
        double value = 0.0;
        char trailing = '\0';
        const int got = std::sscanf(line.c_str() + start, "%d ,%d ,%lf %c", &j,
                                    &k, &value, &trailing);
        if (got != 3) {
            throw IoError("load_couplings: parse error at line " +
                          std::to_string(line_no) + " of '" + path +
                          "' (expected \"j,k,value\")");
        }
        if (j < 1 || j > n_spins || k < 1 || k > n_spins || j == k) {
            throw ValidationError("load_couplings: index out of range at line " +
                                  std::to_string(line_no) + " of '" + path +
                                  "' (pair " + std::to_string(j) + "," +
                                  std::to_string(k) + " with n_spins=" +
                                  std::to_string(n_spins) + ")");
        }
        const int r = j - 1;
        const int c = k - 1;
        if (seen(r, c) != 0.0 &&
            std::abs(sys.couplings(r, c) - value) > 1e-12) {
            throw ValidationError(
                "load_couplings: conflicting duplicate for pair " +
                std::to_string(j) + "," + std::to_string(k) + " at line " +
                std::to_string(line_no) + " of '" + path + "'");
        }
        seen(r, c) = seen(c, r) = 1.0;
        sys.couplings(r, c) = sys.couplings(c, r) = value;
    }
    return sys;
}

} // namespace mqnmr
