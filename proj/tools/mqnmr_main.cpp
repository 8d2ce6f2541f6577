#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "mqnmr/coherence.hpp"
#include "mqnmr/emit.hpp"
#include "mqnmr/errors.hpp"
#include "mqnmr/protocol.hpp"
#include "mqnmr/run_config.hpp"

namespace {

using namespace mqnmr;

// Raw flag values; presence is tracked through CLI11 option counts so an
// explicitly passed default still overrides the config file.
struct Flags {
    std::string config;
    std::string system;
    int n = 0;
    double d1 = 1.0;
    std::string couplings;
    std::string initial;
    double tmax = 0.0;
    double dt = 0.01;
    double tau1 = 0.0;
    double tau2 = 0.0;
    int filter = 0;
    bool saturate = false;
    std::string normalize;
    std::string out;
    double threshold = 1e-3;
    int max_spins = kDefaultMaxSpins;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config, "JSON config file; flags override its fields");
    cmd->add_option("--system", flags.system, "System type: ring|chain|rectangle|cyclopentane|custom");
    cmd->add_option("--n", flags.n, "Number of spins (ring, chain, custom)");
    cmd->add_option("--d1", flags.d1, "Nearest-neighbour coupling scale (ring, chain)");
    cmd->add_option("--couplings", flags.couplings, "Coupling file for custom systems (j,k,value lines)");
    cmd->add_option("--initial", flags.initial, "Initial state: equilibrium|up-down|down-up");
    cmd->add_option("--tmax", flags.tmax, "Scan end time, units 1/D1");
    cmd->add_option("--dt", flags.dt, "Scan grid step (default 0.01)");
    cmd->add_option("--tau1", flags.tau1, "Preparatory period for the protocol");
    cmd->add_option("--tau2", flags.tau2, "Time-reversal period for the protocol");
    cmd->add_option("--filter", flags.filter, "Coherence order kept by the protocol filter");
    cmd->add_flag("--saturate", flags.saturate, "Apply partial saturation as the final stage");
    cmd->add_option("--normalize", flags.normalize, "Intensity divisor: eq6 (Tr Iz^2) or initial (Tr rho0^2)");
    cmd->add_option("--out", flags.out, "Output path (default: stdout)");
    cmd->add_option("--threshold", flags.threshold, "Zero threshold, relative to the curve maximum (default 1e-3)");
    cmd->add_option("--max-spins", flags.max_spins, "Spin-count cap (default 12)");
}

void apply_overrides(const CLI::App* cmd, const Flags& flags,
                     RunConfig& config) {
    if (cmd->count("--system") > 0) {
        config.system_type = system_type_from_token(flags.system);
    }
    if (cmd->count("--n") > 0) {
        config.n_spins = flags.n;
    }
    if (cmd->count("--d1") > 0) {
        config.d1 = flags.d1;
    }
    if (cmd->count("--couplings") > 0) {
        config.couplings_file = flags.couplings;
    }
    if (cmd->count("--initial") > 0) {
        config.initial = initial_from_token(flags.initial);
    }
    if (cmd->count("--tmax") > 0) {
        config.t_max = flags.tmax;
    }
    if (cmd->count("--dt") > 0) {
        config.dt = flags.dt;
    }
    if (cmd->count("--tau1") > 0) {
        config.tau1 = flags.tau1;
    }
    if (cmd->count("--tau2") > 0) {
        config.tau2 = flags.tau2;
    }
    if (cmd->count("--filter") > 0) {
        config.filter_order = flags.filter;
    }
    if (cmd->count("--saturate") > 0) {
        config.saturate = flags.saturate;
    }
    if (cmd->count("--normalize") > 0) {
        config.normalization = normalization_from_token(flags.normalize);
    }
    if (cmd->count("--out") > 0) {
        config.out_path = flags.out;
    }
    if (cmd->count("--threshold") > 0) {
        config.threshold = flags.threshold;
    }
    if (cmd->count("--max-spins") > 0) {
        config.max_spins = flags.max_spins;
    }
}

// Route a finished text payload either to --out or to stdout.
template <typename EmitToStream, typename EmitToFile>
void deliver(const RunConfig& config, EmitToStream&& to_stream,
             EmitToFile&& to_file) {
    if (config.out_path) {
        to_file(*config.out_path);
    } else {
        to_stream(std::cout);
    }
}

int run_task(Task task, const RunConfig& config) {
    if (task == Task::config_dump) {
        validate_config(config, config.task.value_or(Task::config_dump));
        const std::string text = dump_config(config).dump(2) + "\n";
        deliver(
            config, [&](std::ostream& out) { out << text; },
            [&](const std::string& path) {
                std::ofstream out(path);
                if (!out) {
                    throw IoError("config-dump: cannot write '" + path + "'");
                }
                out << text;
            });
        return 0;
    }

    validate_config(config, task);
    const SpinSystem system = system_from_config(config);
    const BasisInfo basis = build_basis(system.n_spins, config.max_spins);
    const CMatrix initial = initial_from_config(config, basis);

    switch (task) {
    case Task::scan: {
        const std::vector<double> times = time_grid(*config.t_max, config.dt);
        const double norm = normalization_from_config(config, basis, initial);
        const auto spectra = scan_trajectory(system, initial, times, norm);
        deliver(
            config,
            [&](std::ostream& out) { emit_scan_csv(spectra, times, out); },
            [&](const std::string& path) { emit_scan_csv(spectra, times, path); });
        break;
    }
    case Task::zeros: {
        const ZerosResult zeros = find_nd0q_zeros(
            system, initial, *config.t_max, config.dt, config.threshold);
        deliver(
            config, [&](std::ostream& out) { emit_zeros_csv(zeros, out); },
            [&](const std::string& path) { emit_zeros_csv(zeros, path); });
        break;
    }
    case Task::maxima: {
        const auto peaks =
            find_homqc_maxima(system, initial, *config.t_max, config.dt);
        deliver(
            config, [&](std::ostream& out) { emit_maxima_csv(peaks, out); },
            [&](const std::string& path) { emit_maxima_csv(peaks, path); });
        break;
    }
    case Task::protocol: {
        ProtocolSchedule schedule;
        schedule.tau1 = *config.tau1;
        schedule.tau2 = *config.tau2;
        schedule.filter_order = *config.filter_order;
        schedule.saturate = config.saturate;
        const ProtocolResult result = run_protocol(system, schedule);
        deliver(
            config,
            [&](std::ostream& out) { emit_protocol_report(result, schedule, out); },
            [&](const std::string& path) {
                emit_protocol_report(result, schedule, path);
            });
        break;
    }
    case Task::config_dump:
        break; // handled above
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple-quantum NMR dynamics of dipolar-coupled spin-1/2 "
                 "clusters: coherence scans, characteristic times and "
                 "pseudopure-state preparation"};
    app.require_subcommand(1);

    Flags flags;
    CLI::App* scan = app.add_subcommand("scan", "Coherence intensities vs time, as CSV");
    CLI::App* zeros = app.add_subcommand("zeros", "Times where the non-diagonal 0Q intensity vanishes");
    CLI::App* maxima = app.add_subcommand("maxima", "Local maxima of the highest-order coherence");
    CLI::App* protocol = app.add_subcommand("protocol", "Four-stage pseudopure-state preparation report");
    CLI::App* dump = app.add_subcommand("config-dump", "Echo the fully resolved configuration as JSON");
    for (CLI::App* cmd : {scan, zeros, maxima, protocol, dump}) {
        add_common_flags(cmd, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) {
            return app.exit(err); // --help and friends
        }
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }

    try {
        Task task = Task::config_dump;
        const CLI::App* cmd = dump;
        if (scan->parsed()) {
            task = Task::scan;
            cmd = scan;
        } else if (zeros->parsed()) {
            task = Task::zeros;
            cmd = zeros;
        } else if (maxima->parsed()) {
            task = Task::maxima;
            cmd = maxima;
        } else if (protocol->parsed()) {
            task = Task::protocol;
            cmd = protocol;
        }

        RunConfig config;
        if (cmd->count("--config") > 0) {
            config = parse_config_file(flags.config);
        }
        apply_overrides(cmd, flags, config);
        if (task != Task::config_dump) {
            config.task = task;
        }
        return run_task(task, config);
    } catch (const ValidationError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const IoError& err) {
        std::cerr << "io error: " << err.what() << "\n";
        return 4;
    } catch (const NumericError& err) {
        std::cerr << "numeric error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
