#include "fracpme/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fracpme/error.hpp"

namespace fracpme {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<double> interior_bottom(std::span<const double> samples) {
    if (samples.size() < 2) return {};
    return {samples.begin() + 1, samples.end() - 1};
}

}  // namespace

TimeSpec TimeSpec::make(double final_time, int steps) {
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw Error(ErrorCode::ValidationError, "final time T must be positive");
    }
    if (steps < 1) {
        throw Error(ErrorCode::ValidationError, "number of time steps J must be >= 1");
    }
    return TimeSpec{final_time, steps};
}

double bump_profile(double x, double amplitude) {
    if (!(std::abs(x) < 1.0)) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / ((1.0 - x) * (1.0 + x)));
}

std::vector<double> sample_initial(const InitialData& data, const GridSpec& grid) {
    const int n_x = grid.intervals_x();
    std::vector<double> f(grid.row_size(), 0.0);
    std::visit(
        overloaded{
            [&](const initial::Bump& b) {
                for (int i = 0; i <= n_x; ++i) f[i] = bump_profile(grid.x(i), b.amplitude);
            },
            [&](const initial::CauchyKernel&) {
                for (int i = 0; i <= n_x; ++i) {
                    const double x = grid.x(i);
                    f[i] = std::numbers::inv_pi / (x * x + 1.0);
                }
            },
            [&](const initial::DiracLike& d) {
                int nearest = 0;
                for (int i = 1; i <= n_x; ++i) {
                    if (std::abs(grid.x(i)) < std::abs(grid.x(nearest))) nearest = i;
                }
                f[nearest] = d.mass / grid.dx();
            },
            [&](const initial::Sampled& s) {
                if (s.values.size() != f.size()) {
                    throw Error(ErrorCode::LengthMismatch,
                                "sampled initial data has " + std::to_string(s.values.size()) +
                                    " values, expected " + std::to_string(f.size()));
                }
                f = s.values;
            },
        },
        data);
    for (const double v : f) {
        if (!std::isfinite(v)) throw Error(ErrorCode::DomainError, "initial data must be finite");
    }
    return f;
}

CflResolution resolve_timestep(const RunConfig& config) {
    CflResolution res;
    const auto samples = sample_initial(config.initial, config.grid);
    const auto active = interior_bottom(samples);
    res.bounds = data_bounds(active, config.phi);
    res.constant = cfl_analysis(config.phi, res.bounds);
    res.requested_dt = config.time.dt();
    res.dt = res.requested_dt;
    res.steps = config.time.steps;

    const double dx = config.grid.dx();
    if (validate_timestep(res.requested_dt, dx, res.constant.value)) return res;

    const std::string diagnostic = "CFL violated: dt=" + format_number(res.requested_dt) +
                                   ", C*dx=" + format_number(res.constant.value * dx);
    if (config.strict_cfl) throw Error(ErrorCode::CflViolation, diagnostic);

    const double bound = res.constant.value * dx;
    int steps = static_cast<int>(std::ceil(config.time.final_time / bound));
    while (!validate_timestep(config.time.final_time / steps, dx, res.constant.value)) ++steps;
    res.steps = steps;
    res.dt = config.time.final_time / steps;
    res.adjusted = true;
    res.warning = diagnostic + "; reduced to dt=" + format_number(res.dt) + " with J=" +
                  std::to_string(steps);
    return res;
}

std::vector<double> boundary_update(const SchemeState& state, const Phi& phi, double dt,
                                    double dx, double cfl) {
    if (!validate_timestep(dt, dx, cfl)) {
        throw Error(ErrorCode::CflViolation, "CFL violated: dt=" + format_number(dt) +
                                                 ", C*dx=" + format_number(cfl * dx));
    }
    const Field& w = state.field;
    const int n_x = w.grid().intervals_x();
    std::vector<double> out(w.grid().row_size(), 0.0);
    const double ratio = dt / dx;
    for (int i = 1; i < n_x; ++i) {
        const double u = ratio * (w.at(i, 1) - w.at(i, 0)) + phi.inverse(w.at(i, 0));
        out[i] = phi.apply(u);
    }
    return out;
}

Scheme::Scheme(const RunConfig& config, std::optional<double> cfl)
    : config_(config),
      samples_(sample_initial(config.initial, config.grid)),
      bounds_(data_bounds(interior_bottom(samples_), config.phi)),
      cfl_(cfl ? *cfl : cfl_constant(config.phi, bounds_)),
      solver_(config.grid, config.solver) {
    const double dt = config_.time.dt();
    const double dx = config_.grid.dx();
    if (!validate_timestep(dt, dx, cfl_)) {
        throw Error(ErrorCode::CflViolation, "CFL violated: dt=" + format_number(dt) +
                                                 ", C*dx=" + format_number(cfl_ * dx));
    }
}

SchemeState Scheme::initialize() const {
    const int n_x = config_.grid.intervals_x();
    std::vector<double> trace(samples_.size(), 0.0);
    std::vector<double> bottom(samples_.size(), 0.0);
    for (int i = 1; i < n_x; ++i) {
        trace[i] = samples_[i];
        bottom[i] = config_.phi.apply(samples_[i]);
    }
    return SchemeState{solver_.solve(bottom), std::move(trace), 0, 0.0};
}

SchemeState Scheme::step(const SchemeState& state) const {
    const GridSpec& grid = config_.grid;
    const int n_x = grid.intervals_x();
    const double ratio = config_.time.dt() / grid.dx();
    const Field& w = state.field;

    // The update is carried out on the trace u = phi^{-1}(w) directly.
    std::vector<double> trace(grid.row_size(), 0.0);
    std::vector<double> bottom(grid.row_size(), 0.0);
    for (int i = 1; i < n_x; ++i) {
        trace[i] = ratio * (w.at(i, 1) - w.at(i, 0)) + state.trace[i];
        bottom[i] = config_.phi.apply(trace[i]);
    }
    const int j = state.j + 1;
    return SchemeState{solver_.solve(bottom, &w), std::move(trace), j, config_.time.time(j)};
}

SchemeState initialize(const RunConfig& config) { return Scheme(config).initialize(); }

SchemeState step(const SchemeState& state, const RunConfig& config) {
    return Scheme(config).step(state);
}

RunResult run(const RunConfig& config) {
    RunResult result;
    result.cfl = resolve_timestep(config);
    RunConfig resolved = config;
    resolved.time = TimeSpec::make(config.time.final_time, result.cfl.steps);
    result.time = resolved.time;
    const Scheme scheme(resolved);

    const int steps = resolved.time.steps;
    const double dt = resolved.time.dt();
    std::map<int, double> wanted;
    for (const double t : config.snapshot_times) {
        if (!(t >= 0.0) || t > resolved.time.final_time * (1.0 + 1e-12)) {
            throw Error(ErrorCode::ValidationError,
                        "snapshot time " + format_number(t) + " is outside [0, T]");
        }
        const int j = std::clamp(static_cast<int>(std::lround(t / dt)), 0, steps);
        wanted.try_emplace(j, t);
    }
    wanted.try_emplace(0, 0.0);
    wanted.try_emplace(steps, resolved.time.final_time);

    auto record = [&](const SchemeState& s) {
        const auto it = wanted.find(s.j);
        if (it == wanted.end()) return;
        Snapshot snap{s.j, s.time, it->second, s.trace, std::nullopt};
        if (config.full_field) snap.field = s.field;
        result.snapshots.push_back(std::move(snap));
    };

    SchemeState state = scheme.initialize();
    record(state);
    for (int j = 1; j <= steps; ++j) {
        state = scheme.step(state);
        record(state);
    }
    return result;
}

}  // namespace fracpme
