#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqnmr/basis.hpp"
#include "mqnmr/coherence.hpp"
#include "mqnmr/emit.hpp"
#include "mqnmr/errors.hpp"
#include "mqnmr/geometry.hpp"
#include "mqnmr/hamiltonian.hpp"
#include "mqnmr/propagator.hpp"
#include "mqnmr/protocol.hpp"
#include "mqnmr/run_config.hpp"

using namespace mqnmr;
using nlohmann::json;

namespace {

std::string message_of(const std::function<void()>& thrower) {
    try {
        thrower();
    } catch (const std::exception& err) {
        return err.what();
    }
    return "";
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("parse_config reads every field") {
    const json doc = json::parse(R"({
        "task": "protocol",
        "system": {"type": "ring", "n": 6, "d1": 0.5},
        "initial": "down-up",
        "normalize": "initial",
        "tmax": 12.5,
        "dt": 0.02,
        "threshold": 0.01,
        "tau1": 6.08,
        "tau2": 12.19,
        "filter": 6,
        "saturate": true,
        "out": "run.csv",
        "max_spins": 11
    })");
    const RunConfig c = parse_config(doc);
    CHECK(c.task == Task::protocol);
    CHECK(c.system_type == SystemType::ring);
    CHECK(c.n_spins == 6);
    CHECK(c.d1 == 0.5);
    CHECK_FALSE(c.couplings_file.has_value());
    CHECK(c.initial == InitialState::down_up);
    CHECK(c.normalization == NormalizationMode::initial);
    CHECK(c.t_max == 12.5);
    CHECK(c.dt == 0.02);
    CHECK(c.threshold == 0.01);
    CHECK(c.tau1 == 6.08);
    CHECK(c.tau2 == 12.19);
    CHECK(c.filter_order == 6);
    CHECK(c.saturate);
    CHECK(c.out_path == "run.csv");
    CHECK(c.max_spins == 11);
}

TEST_CASE("parse_config leaves unset fields unset") {
    const RunConfig c = parse_config(json::parse(R"({"dt": 0.1})"));
    CHECK_FALSE(c.task.has_value());
    CHECK_FALSE(c.system_type.has_value());
    CHECK_FALSE(c.n_spins.has_value());
    CHECK_FALSE(c.t_max.has_value());
    CHECK_FALSE(c.tau1.has_value());
    CHECK_FALSE(c.filter_order.has_value());
    CHECK(c.initial == InitialState::equilibrium);
    CHECK(c.normalization == NormalizationMode::eq6);
    CHECK(c.dt == 0.1);
    CHECK(c.threshold == 1e-3);
    CHECK_FALSE(c.saturate);
    CHECK(c.max_spins == kDefaultMaxSpins);
}

TEST_CASE("parse_config rejects unknown keys and lists them all") {
    const std::string msg = message_of([] {
        parse_config(json::parse(R"({"tmax": 1.0, "bogus": 1, "extra": 2})"));
    });
    CHECK(msg.find("unknown key") != std::string::npos);
    CHECK(msg.find("'bogus'") != std::string::npos);
    CHECK(msg.find("'extra'") != std::string::npos);

    CHECK_THROWS_AS(
        parse_config(json::parse(R"({"system": {"type": "ring", "nn": 4}})")),
        ValidationError);
    const std::string sys_msg = message_of([] {
        parse_config(json::parse(R"({"system": {"type": "ring", "nn": 4}})"));
    });
    CHECK(sys_msg.find("'system' object") != std::string::npos);
    CHECK(sys_msg.find("'nn'") != std::string::npos);
}

TEST_CASE("parse_config names the field on a type error") {
    CHECK(message_of([] {
              parse_config(json::parse(R"({"tmax": "ten"})"));
          }).find("'tmax'") != std::string::npos);
    CHECK(message_of([] {
              parse_config(json::parse(R"({"filter": 2.5})"));
          }).find("'filter'") != std::string::npos);
    CHECK(message_of([] {
              parse_config(json::parse(R"({"saturate": 1})"));
          }).find("'saturate'") != std::string::npos);
    CHECK(message_of([] {
              parse_config(json::parse(R"({"system": {"n": "four"}})"));
          }).find("'system.n'") != std::string::npos);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"task": "sweep"})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"initial": "thermal"})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"normalize": "unit"})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(json::parse(R"([1, 2])")), ValidationError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"system": 3})")),
                    ValidationError);
}

TEST_CASE("parse_config_file handles missing and malformed files") {
    CHECK_THROWS_AS(parse_config_file("/no/such/config.json"), IoError);

    const auto bad = temp_file("mqnmr_bad_config.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(parse_config_file(bad.string()), ValidationError);

    const auto good = temp_file("mqnmr_good_config.json");
    std::ofstream(good) << R"({"task": "scan",
                              "system": {"type": "chain", "n": 3},
                              "tmax": 5.0})";
    const RunConfig c = parse_config_file(good.string());
    CHECK(c.task == Task::scan);
    CHECK(c.system_type == SystemType::chain);
    CHECK(c.n_spins == 3);
    CHECK(c.t_max == 5.0);
    std::filesystem::remove(bad);
    std::filesystem::remove(good);
}

TEST_CASE("dump_config round trips through parse_config") {
    RunConfig c;
    c.task = Task::zeros;
    c.system_type = SystemType::chain;
    c.n_spins = 4;
    c.d1 = 2.0;
    c.initial = InitialState::up_down;
    c.normalization = NormalizationMode::initial;
    c.t_max = 90.0;
    c.dt = 0.005;
    c.threshold = 0.02;
    c.saturate = true;
    c.out_path = "zeros.csv";

    const RunConfig back = parse_config(dump_config(c));
    CHECK(back.task == c.task);
    CHECK(back.system_type == c.system_type);
    CHECK(back.n_spins == c.n_spins);
    CHECK(back.d1 == c.d1);
    CHECK(back.initial == c.initial);
    CHECK(back.normalization == c.normalization);
    CHECK(back.t_max == c.t_max);
    CHECK(back.dt == c.dt);
    CHECK(back.threshold == c.threshold);
    CHECK(back.saturate == c.saturate);
    CHECK(back.out_path == c.out_path);
    CHECK(back.max_spins == c.max_spins);

    // Unset optionals stay unset through the round trip.
    const json doc = dump_config(RunConfig{});
    CHECK_FALSE(doc.contains("task"));
    CHECK_FALSE(doc.contains("system"));
    CHECK_FALSE(doc.contains("tmax"));
    CHECK_FALSE(doc.contains("tau1"));
    CHECK_FALSE(doc.contains("out"));
}

TEST_CASE("token helpers round trip and reject junk") {
    for (Task t : {Task::scan, Task::zeros, Task::maxima, Task::protocol,
                   Task::config_dump}) {
        CHECK(task_from_token(to_token(t)) == t);
    }
    for (SystemType s :
         {SystemType::ring, SystemType::chain, SystemType::rectangle,
          SystemType::cyclopentane, SystemType::custom}) {
        CHECK(system_type_from_token(to_token(s)) == s);
    }
    for (InitialState i : {InitialState::equilibrium, InitialState::up_down,
                           InitialState::down_up}) {
        CHECK(initial_from_token(to_token(i)) == i);
    }
    for (NormalizationMode m :
         {NormalizationMode::eq6, NormalizationMode::initial}) {
        CHECK(normalization_from_token(to_token(m)) == m);
    }
    CHECK(to_token(Task::config_dump) == "config-dump");
    CHECK(to_token(InitialState::up_down) == "up-down");
    CHECK_THROWS_AS(task_from_token("walk"), ValidationError);
    CHECK_THROWS_AS(system_type_from_token("square"), ValidationError);
}

TEST_CASE("validate_config demands task-specific fields by name") {
    RunConfig c;
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("system type") != std::string::npos);

    c.system_type = SystemType::ring;
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("'system.n'") != std::string::npos);

    c.n_spins = 4;
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("'tmax'") != std::string::npos);

    c.t_max = 10.0;
    CHECK_NOTHROW(validate_config(c, Task::scan));
    CHECK_NOTHROW(validate_config(c, Task::zeros));
    CHECK_NOTHROW(validate_config(c, Task::maxima));

    CHECK(message_of([&] { validate_config(c, Task::protocol); })
              .find("'tau1'") != std::string::npos);
    c.tau1 = 1.0;
    CHECK(message_of([&] { validate_config(c, Task::protocol); })
              .find("'tau2'") != std::string::npos);
    c.tau2 = 1.0;
    CHECK(message_of([&] { validate_config(c, Task::protocol); })
              .find("'filter'") != std::string::npos);
    c.filter_order = 2;
    CHECK_NOTHROW(validate_config(c, Task::protocol));

    c.filter_order = 5; // > n
    CHECK_THROWS_AS(validate_config(c, Task::protocol), ValidationError);
    c.filter_order = -1;
    CHECK_THROWS_AS(validate_config(c, Task::protocol), ValidationError);
    c.filter_order = 2;
    c.tau1 = -0.5;
    CHECK_THROWS_AS(validate_config(c, Task::protocol), ValidationError);
}

TEST_CASE("validate_config enforces system shape rules") {
    RunConfig c;
    c.system_type = SystemType::ring;
    c.n_spins = 1;
    c.t_max = 1.0;
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);

    c.n_spins = 20; // beyond the default cap
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("max_spins=12") != std::string::npos);
    c.max_spins = 20;
    CHECK_NOTHROW(validate_config(c, Task::scan));
    c.max_spins = kDefaultMaxSpins;

    c.system_type = SystemType::rectangle;
    c.n_spins = 5;
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.n_spins.reset(); // implied n = 4
    CHECK_NOTHROW(validate_config(c, Task::scan));
    c.d1 = 0.5; // d1 is a ring/chain knob only
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.d1.reset();

    c.system_type = SystemType::cyclopentane;
    c.n_spins = 4;
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.n_spins = 10;
    CHECK_NOTHROW(validate_config(c, Task::scan));

    c.system_type = SystemType::chain;
    c.n_spins = 3;
    c.d1 = 0.0;
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.d1 = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.d1 = 1.5;
    CHECK_NOTHROW(validate_config(c, Task::scan));
    c.couplings_file = "anything"; // file is a custom-system knob only
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.couplings_file.reset();

    c.dt = 0.0;
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
    c.dt = 0.01;
    c.threshold = -1.0;
    CHECK_THROWS_AS(validate_config(c, Task::scan), ValidationError);
}

TEST_CASE("validate_config checks the custom coupling file") {
    RunConfig c;
    c.system_type = SystemType::custom;
    c.t_max = 1.0;
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("'system.file'") != std::string::npos);

    c.couplings_file = "/no/such/file.txt";
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("does not exist") != std::string::npos);

    const auto path = temp_file("mqnmr_couplings.txt");
    std::ofstream(path) << "1,2,1.0\n";
    c.couplings_file = path.string();
    CHECK(message_of([&] { validate_config(c, Task::scan); })
              .find("'system.n'") != std::string::npos);
    c.n_spins = 2;
    CHECK_NOTHROW(validate_config(c, Task::scan));
    std::filesystem::remove(path);
}

TEST_CASE("config resolution produces the right system and state") {
    RunConfig c;
    c.system_type = SystemType::ring;
    c.n_spins = 4;
    c.d1 = 1.0;
    const SpinSystem ring = system_from_config(c);
    CHECK((ring.couplings - ring_couplings(4).couplings)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    c.system_type = SystemType::rectangle;
    c.d1.reset();
    CHECK(system_from_config(c).couplings(0, 1) == 1.0);

    const BasisInfo basis = build_basis(4);
    c.initial = InitialState::equilibrium;
    CHECK((initial_from_config(c, basis) - equilibrium_state(basis))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    c.initial = InitialState::up_down;
    CHECK(initial_from_config(c, basis)(0, 0).real() == 1.0);
    c.initial = InitialState::down_up;
    CHECK(initial_from_config(c, basis)(0, 0).real() == -1.0);

    // eq6 norm is Tr I_z^2; initial norm is Tr rho0^2 (2 for the two-level
    // state). A zero initial state cannot be normalized to itself.
    const CMatrix rho_int = intermediate_state(basis, +1);
    c.normalization = NormalizationMode::eq6;
    CHECK(normalization_from_config(c, basis, rho_int) == 16.0);
    c.normalization = NormalizationMode::initial;
    CHECK(normalization_from_config(c, basis, rho_int) ==
          doctest::Approx(2.0));
    CHECK_THROWS_AS(
        normalization_from_config(c, basis, CMatrix::Zero(16, 16)),
        ValidationError);
}

TEST_CASE("scan CSV layout and determinism") {
    const SpinSystem sys = rectangle_couplings();
    const BasisInfo basis = build_basis(4);
    const std::vector<double> times = {0.0, 0.5, 1.0};
    const Propagator prop = diagonalize(dq_average(sys));
    std::vector<CoherenceSpectrum> spectra;
    for (double t : times) {
        spectra.push_back(mq_spectrum(evolve(prop, equilibrium_state(basis), t),
                                      basis, iz_square_trace(basis)));
    }

    std::ostringstream first;
    emit_scan_csv(spectra, times, first);
    const std::string text = first.str();

    std::istringstream lines(text);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "t,J_-4Q,J_-3Q,J_-2Q,J_-1Q,J_0Q,J_+1Q,J_+2Q,J_+3Q,J_+4Q,"
          "J_0Q_diag,J_0Q_nondiag");

    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') ==
              2 * 4 + 3); // 2N + 4 columns
    }
    CHECK(rows == 3);

    // Byte-identical on a rerun.
    std::ostringstream second;
    emit_scan_csv(spectra, times, second);
    CHECK(text == second.str());

    // The t = 0 row leads with the exact grid time.
    const std::size_t first_row = text.find('\n') + 1;
    CHECK(text.substr(first_row, 2) == "0,");
    CHECK(text.find("\n0.5,") != std::string::npos);

    CHECK_THROWS_AS(emit_scan_csv(spectra, {0.0}, first), ValidationError);
    CHECK_THROWS_AS(emit_scan_csv({}, {}, first), ValidationError);
}

TEST_CASE("zeros CSV rows and the identically-zero marker") {
    ZerosResult zeros;
    zeros.times = {1.5, 2.25};
    std::ostringstream out;
    emit_zeros_csv(zeros, out);
    CHECK(out.str() == "index,time\n1,1.5\n2,2.25\n");

    ZerosResult none;
    none.identically_zero = true;
    std::ostringstream marker;
    emit_zeros_csv(none, marker);
    CHECK(marker.str() == "index,time\n# identically zero\n");
}

TEST_CASE("maxima CSV rows") {
    std::vector<Peak> peaks = {{6.115, 0.0702}, {2.5, 0.001}};
    std::ostringstream out;
    emit_maxima_csv(peaks, out);
    CHECK(out.str() == "index,time,intensity\n"
                       "1,6.115,0.0702\n"
                       "2,2.5,0.001\n");

    std::ostringstream empty;
    emit_maxima_csv({}, empty);
    CHECK(empty.str() == "index,time,intensity\n");
}

TEST_CASE("protocol report has populations and a summary block") {
    ProtocolSchedule schedule;
    schedule.tau1 = 7.86;
    schedule.filter_order = 2;
    schedule.tau2 = 7.86;
    const ProtocolResult r = run_protocol(rectangle_couplings(), schedule);

    std::ostringstream out;
    emit_protocol_report(r, schedule, out);
    const std::string text = out.str();

    std::istringstream lines(text);
    std::string line;
    int data_rows = 0;
    int comment_rows = 0;
    std::getline(lines, line);
    CHECK(line == "index,diagonal");
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] == '#') {
            ++comment_rows;
        } else {
            ++data_rows;
        }
    }
    CHECK(data_rows == 16);
    CHECK(comment_rows == 6);
    CHECK(text.find("# diag_deviation = ") != std::string::npos);
    CHECK(text.find("# offdiag_norm = ") != std::string::npos);
    CHECK(text.find("# sign_pattern = +-") != std::string::npos);
    CHECK(text.find("# tau1 = 7.86") != std::string::npos);
    CHECK(text.find("# tau2 = 7.86") != std::string::npos);
    CHECK(text.find("# filter_order = 2") != std::string::npos);
}

TEST_CASE("path overloads write the same bytes and reject bad paths") {
    ZerosResult zeros;
    zeros.times = {3.14159};
    const auto path = temp_file("mqnmr_zeros_test.csv");
    emit_zeros_csv(zeros, path.string());
    std::ostringstream expected;
    emit_zeros_csv(zeros, expected);
    CHECK(slurp(path) == expected.str());
    std::filesystem::remove(path);

    CHECK_THROWS_AS(
        emit_zeros_csv(zeros, "/no-such-dir/zeros.csv"), IoError);
    CHECK_THROWS_AS(
        emit_maxima_csv({}, "/no-such-dir/maxima.csv"), IoError);
}
