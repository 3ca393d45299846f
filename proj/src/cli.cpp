#include "fracpme/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <sstream>

#include "fracpme/analysis.hpp"
#include "fracpme/config.hpp"
#include "fracpme/error.hpp"
#include "fracpme/output.hpp"

namespace fracpme::cli {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

void require_decreasing(const std::vector<double>& dx) {
    if (dx.empty()) throw Error(ErrorCode::ValidationError, "dx list is empty");
    for (std::size_t i = 0; i < dx.size(); ++i) {
        if (!(dx[i] > 0.0)) throw Error(ErrorCode::ValidationError, "dx values must be positive");
        if (i > 0 && !(dx[i] < dx[i - 1])) {
            throw Error(ErrorCode::ValidationError, "dx list must be strictly decreasing");
        }
    }
}

RunConfig load_with_flags(const std::filesystem::path& path, const Flags& flags) {
    RunConfig cfg = load_config(path);
    cfg.strict_cfl = cfg.strict_cfl || flags.strict_cfl;
    cfg.full_field = cfg.full_field || flags.full_field;
    return cfg;
}

void log_cfl(const CflResolution& res, const Flags& flags, std::ostream& out, std::ostream& err) {
    if (res.adjusted) err << "warning: " << res.warning << '\n';
    if (!flags.quiet) {
        out << "C(phi,f)=" << format_number(res.constant.value)
            << " (derivative bound " << format_number(res.constant.derivative_bound)
            << ", power-law formula " << format_number(res.constant.literal_power_law)
            << "), dt=" << format_number(res.dt) << ", J=" << res.steps << '\n';
    }
}

int do_run(const Run& cmd, const Flags& flags, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_with_flags(cmd.config, flags);
    const RunResult result = run(cfg);
    log_cfl(result.cfl, flags, out, err);
    write_run(flags.out, result, cfg.grid);
    if (!flags.quiet) {
        out << "wrote " << result.snapshots.size() << " snapshot(s) to " << flags.out.string() << '\n';
    }
    return kSuccess;
}

int write_table(const ErrorTable& table, const Flags& flags, std::ostream& out) {
    ensure_dir(flags.out);
    write_file(flags.out / "error_table.tsv", [&](std::ostream& os) { write_error_table(os, table); });
    if (!flags.quiet) write_error_table(out, table);
    return kSuccess;
}

int do_converge_self(const ConvergeSelf& cmd, const Flags& flags, std::ostream& out, std::ostream&) {
    require_decreasing(cmd.dx_list);
    const RunConfig cfg = load_with_flags(cmd.config, flags);
    if (!flags.quiet) {
        out << "# self-convergence; absolute values depend on the chosen domain, T and data\n";
    }
    return write_table(self_convergence_study(cfg, cmd.dx_list, cmd.dx_ref), flags, out);
}

int do_converge_exact(const ConvergeExact& cmd, const Flags& flags, std::ostream& out, std::ostream&) {
    require_decreasing(cmd.dx_list);
    return write_table(exact_convergence_study_m1(cmd.dx_list), flags, out);
}

int do_verify(const Verify& cmd, const Flags& flags, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_with_flags(cmd.config, flags);
    std::optional<RunConfig> pair;
    if (cmd.pair) pair = load_with_flags(*cmd.pair, flags);
    const PropertyReport report = property_suite(cfg, pair ? &*pair : nullptr);
    if (report.cfl_violation) {
        err << "error: " << report.diagnostic << '\n';
        return kInvalidInput;
    }
    ensure_dir(flags.out);
    write_file(flags.out / "verify_report.tsv",
               [&](std::ostream& os) { write_property_report(os, report); });
    if (!flags.quiet) write_property_report(out, report);
    if (!report.all_passed()) {
        err << "error: property suite failed\n";
        return kPropertyFailure;
    }
    return kSuccess;
}

int do_info(const Info& cmd, const Flags& flags, std::ostream& out, std::ostream& err) {
    if (!cmd.config) {
        out << "fracpme: explicit finite differences for u_t + (-Delta)^{1/2} phi(u) = 0 in 1-D\n"
            << "commands: run, converge-self, converge-exact, verify, info\n";
        return kSuccess;
    }
    const RunConfig cfg = load_with_flags(*cmd.config, flags);
    const CflResolution res = resolve_timestep(cfg);
    out << render_config(cfg);
    out << "\n# resolved\n";
    out << "# dx=" << format_number(cfg.grid.dx()) << " nodes=" << cfg.grid.node_count() << '\n';
    out << "# u_min=" << format_number(res.bounds.u_min) << " u_max=" << format_number(res.bounds.u_max)
        << " b_min=" << format_number(res.bounds.b_min) << " b_max=" << format_number(res.bounds.b_max)
        << '\n';
    out << "# ";
    log_cfl(res, Flags{flags.out, flags.strict_cfl, flags.full_field, false}, out, err);
    if (cfg.phi.kind() == Phi::Kind::PowerLaw) {
        const auto samples = sample_initial(cfg.initial, cfg.grid);
        const double mass = trace_mass(samples, cfg.grid.dx());
        if (mass > 0.0) {
            out << "# tail bound at X (C_prof = initial mass " << format_number(mass) << "): "
                << format_number(barenblatt_tail_bound(cfg.grid.half_width(), cfg.time.final_time,
                                                       cfg.phi.exponent(), 1, mass))
                << '\n';
        }
    }
    return kSuccess;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonConvergence:
        case ErrorCode::DegenerateError:
            return kNumericalFailure;
        case ErrorCode::DomainError:
            return kNumericalFailure;
        default:
            return kInvalidInput;
    }
}

}  // namespace

int execute(const Command& command, const Flags& flags, std::ostream& out, std::ostream& err) {
    std::ostringstream sink;
    std::ostream& progress = flags.quiet ? static_cast<std::ostream&>(sink) : out;
    try {
        return std::visit(
            [&](const auto& cmd) -> int {
                using T = std::decay_t<decltype(cmd)>;
                if constexpr (std::is_same_v<T, Run>) return do_run(cmd, flags, progress, err);
                if constexpr (std::is_same_v<T, ConvergeSelf>) return do_converge_self(cmd, flags, progress, err);
                if constexpr (std::is_same_v<T, ConvergeExact>) return do_converge_exact(cmd, flags, progress, err);
                if constexpr (std::is_same_v<T, Verify>) return do_verify(cmd, flags, progress, err);
                if constexpr (std::is_same_v<T, Info>) return do_info(cmd, flags, out, err);
            },
            command);
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-difference solver for the fractional porous medium equation"};
    app.require_subcommand(1);
    Flags flags;
    std::string out_dir = flags.out.string();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--strict-cfl", flags.strict_cfl, "Fail instead of shrinking dt on a CFL violation");
    app.add_flag("--full-field", flags.full_field, "Also write the full extension field");
    app.add_flag("--quiet", flags.quiet, "Only print diagnostics");

    Run run_cmd;
    auto* run_app = app.add_subcommand("run", "Run a configuration and write trace snapshots");
    run_app->add_option("config", run_cmd.config, "Configuration file")->required()->check(CLI::ExistingFile);

    ConvergeSelf self_cmd;
    auto* self_app = app.add_subcommand("converge-self", "Self-convergence study against a fine grid");
    self_app->add_option("config", self_cmd.config, "Configuration file")->required()->check(CLI::ExistingFile);
    self_app->add_option("--dx", self_cmd.dx_list, "Decreasing grid spacings")->required()->delimiter(',');
    self_app->add_option("--dx-ref", self_cmd.dx_ref, "Reference spacing")->required();

    ConvergeExact exact_cmd;
    auto* exact_app = app.add_subcommand("converge-exact", "m=1 study against the exact source solution");
    exact_app->add_option("--dx", exact_cmd.dx_list, "Decreasing grid spacings")->delimiter(',')
        ->capture_default_str();

    Verify verify_cmd;
    std::string pair_path;
    auto* verify_app = app.add_subcommand("verify", "Check the discrete maximum principle and related properties");
    verify_app->add_option("config", verify_cmd.config, "Configuration file")->required()->check(CLI::ExistingFile);
    verify_app->add_option("--pair", pair_path, "Configuration with pointwise smaller data")
        ->check(CLI::ExistingFile);

    Info info_cmd;
    std::string info_path;
    auto* info_app = app.add_subcommand("info", "Print the resolved configuration and CFL constants");
    info_app->add_option("config", info_path, "Configuration file")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream help;
        const int code = app.exit(e, help, help);
        (code == 0 ? out : err) << help.str();
        return code == 0 ? kSuccess : kInvalidInput;
    }
    flags.out = out_dir;

    Command command;
    if (*run_app) {
        command = run_cmd;
    } else if (*self_app) {
        command = self_cmd;
    } else if (*exact_app) {
        command = exact_cmd;
    } else if (*verify_app) {
        if (!pair_path.empty()) verify_cmd.pair = pair_path;
        command = verify_cmd;
    } else {
        if (!info_path.empty()) info_cmd.config = info_path;
        command = info_cmd;
    }
    return execute(command, flags, out, err);
}

}  // namespace fracpme::cli
