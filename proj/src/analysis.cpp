#include "fracpme/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracpme/error.hpp"

namespace fracpme {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pair_order(const ErrorRow& a, const ErrorRow& b) {
    return std::log(a.error / b.error) / std::log(a.dx / b.dx);
}

std::vector<double> orders_or_nan(const ErrorTable& table) {
    std::vector<double> orders;
    for (std::size_t r = 0; r + 1 < table.rows.size(); ++r) {
        const auto& a = table.rows[r];
        const auto& b = table.rows[r + 1];
        orders.push_back(a.error > 0.0 && b.error > 0.0 ? pair_order(a, b) : kNaN);
    }
    return orders;
}

int steps_for(double final_time, double dt) {
    const double ratio = final_time / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio) {
        throw Error(ErrorCode::IncommensurateGrids,
                    "T=" + std::to_string(final_time) + " is not a multiple of dt=" + std::to_string(dt));
    }
    return static_cast<int>(n);
}

// Final trace of `base` rerun on spacing dx with dt = dx and a hard CFL check.
std::vector<double> final_trace_at(const RunConfig& base, double dx) {
    RunConfig cfg = base;
    cfg.grid = GridSpec::from_spacing(base.grid.half_width(), base.grid.height(), dx);
    cfg.time = TimeSpec::make(base.time.final_time, steps_for(base.time.final_time, dx));
    cfg.strict_cfl = true;
    cfg.full_field = false;
    cfg.snapshot_times.clear();
    if (cfg.solver.method != SolverMethod::DirectFactorization) {
        cfg.solver.tolerance = std::min(cfg.solver.tolerance, default_tolerance(dx, cfg.time.dt()));
    }
    auto result = run(cfg);
    return std::move(result.snapshots.back().trace);
}

}  // namespace

double poisson_kernel_solution(double x, double t) {
    return std::numbers::inv_pi * t / (x * x + t * t);
}

double riesz_constant(int n_dims) {
    if (n_dims < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    const double a = 0.5 * (n_dims + 1);
    return std::pow(std::numbers::pi, -a) * std::tgamma(a);
}

BarenblattExponents barenblatt_exponents(double m, int n_dims) {
    if (!(m >= 1.0) || n_dims < 1) {
        throw Error(ErrorCode::InvalidArgument, "Barenblatt exponents need m >= 1 and N >= 1");
    }
    const double denom = n_dims * (m + 1.0) + 1.0;
    return BarenblattExponents{n_dims / denom, 1.0 / denom, m, n_dims};
}

double barenblatt_tail_bound(double half_width, double final_time, double m, int n_dims,
                             double c_prof) {
    if (!(half_width > 0.0) || !(final_time > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tail bound needs X > 0 and T > 0");
    }
    const auto e = barenblatt_exponents(m, n_dims);
    return c_prof * std::pow(final_time + 1.0, e.beta) / std::pow(half_width, n_dims + 1);
}

double truncation_residual(const ExactExtension& w_exact, const GridSpec& grid, double dt, int j,
                           const Phi& phi) {
    if (j < 1) throw Error(ErrorCode::InvalidArgument, "truncation residual needs j >= 1");
    const double dx = grid.dx();
    const double t_prev = (j - 1) * dt;
    const double t_next = j * dt;
    const int n_x = grid.intervals_x();
    const int n_y = grid.intervals_y();
    double worst = 0.0;
    for (int k = 1; k < n_y; ++k) {
        for (int i = 1; i < n_x; ++i) {
            const double x = grid.x(i);
            const double y = grid.y(k);
            const double sum = w_exact(grid.x(i + 1), y, t_prev) + w_exact(grid.x(i - 1), y, t_prev) +
                               w_exact(x, grid.y(k + 1), t_prev) + w_exact(x, grid.y(k - 1), t_prev) -
                               4.0 * w_exact(x, y, t_prev);
            worst = std::max(worst, std::abs(sum) / (dx * dx));
        }
    }
    const double y1 = grid.y(1);
    for (int i = 1; i < n_x; ++i) {
        const double x = grid.x(i);
        const double w0 = w_exact(x, 0.0, t_prev);
        const double defect = dt / dx * (w_exact(x, y1, t_prev) - w0) + phi.inverse(w0) -
                              phi.inverse(w_exact(x, 0.0, t_next));
        worst = std::max(worst, std::abs(defect));
    }
    return worst;
}

double max_error(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::LengthMismatch, "traces have different lengths");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double trace_mass(std::span<const double> trace, double dx) {
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < trace.size(); ++i) sum += trace[i];
    return dx * sum;
}

std::vector<double> observed_order(const ErrorTable& table) {
    if (table.rows.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "observed order needs at least two rows");
    }
    for (const auto& row : table.rows) {
        if (!(row.error > 0.0)) {
            throw Error(ErrorCode::DegenerateError, "observed order undefined for a zero error");
        }
    }
    return orders_or_nan(table);
}

ErrorTable self_convergence_study(const RunConfig& base, std::span<const double> dx_list,
                                  double dx_ref) {
    if (dx_list.empty()) throw Error(ErrorCode::InvalidArgument, "empty dx list");
    for (std::size_t r = 0; r < dx_list.size(); ++r) {
        if (dx_list[r] < dx_ref * (1.0 - 1e-12)) {
            throw Error(ErrorCode::IncommensurateGrids, "dx_ref must not exceed any listed dx");
        }
        if (r > 0 && !(dx_list[r] < dx_list[r - 1])) {
            throw Error(ErrorCode::InvalidArgument, "dx list must be strictly decreasing");
        }
    }
    std::vector<int> strides;
    for (const double dx : dx_list) {
        const double ratio = dx / dx_ref;
        const double s = std::round(ratio);
        if (std::abs(ratio - s) > 1e-9 * ratio) {
            throw Error(ErrorCode::IncommensurateGrids,
                        "dx_ref=" + std::to_string(dx_ref) + " does not divide dx=" + std::to_string(dx));
        }
        strides.push_back(static_cast<int>(s));
    }

    const auto reference = final_trace_at(base, dx_ref);
    ErrorTable table;
    for (std::size_t r = 0; r < dx_list.size(); ++r) {
        const double dx = dx_list[r];
        const auto trace = final_trace_at(base, dx);
        std::vector<double> restricted(trace.size());
        for (std::size_t i = 0; i < trace.size(); ++i) restricted[i] = reference[i * strides[r]];
        const int nodes = static_cast<int>(trace.size()) - 1;
        table.rows.push_back(ErrorRow{dx, dx, nodes, max_error(trace, restricted)});
    }
    table.orders = orders_or_nan(table);
    return table;
}

ErrorTable exact_convergence_study_m1(std::span<const double> dx_list) {
    constexpr double kHalfWidth = 100.0;
    constexpr double kHeight = 100.0;
    constexpr double kFinalTime = 1.0;
    ErrorTable table;
    for (const double dx : dx_list) {
        const GridSpec grid = GridSpec::from_spacing(kHalfWidth, kHeight, dx);
        RunConfig cfg{grid,
                      TimeSpec::make(kFinalTime, steps_for(kFinalTime, dx)),
                      Phi::power_law(1.0),
                      initial::CauchyKernel{},
                      SolverOptions{},
                      {},
                      std::nullopt,
                      true,
                      false};
        const auto result = run(cfg);
        const auto& trace = result.snapshots.back().trace;
        double err = 0.0;
        for (int i = 1; i < grid.intervals_x(); ++i) {
            err = std::max(err, std::abs(trace[i] - poisson_kernel_solution(grid.x(i), 1.0 + kFinalTime)));
        }
        table.rows.push_back(ErrorRow{dx, cfg.time.dt(), grid.intervals_x(), err});
    }
    table.orders = orders_or_nan(table);
    return table;
}

bool PropertyReport::all_passed() const {
    if (cfl_violation) return false;
    return std::all_of(results.begin(), results.end(),
                       [](const PropertyResult& r) { return r.passed; });
}

PropertyReport property_suite(const RunConfig& config, const RunConfig* pair) {
    PropertyReport report;
    if (pair != nullptr) {
        if (!(pair->grid == config.grid) || !(pair->time == config.time) ||
            pair->phi.kind() != config.phi.kind() || pair->phi.exponent() != config.phi.exponent()) {
            throw Error(ErrorCode::ValidationError,
                        "paired configuration must share grid, time and phi");
        }
    }

    RunConfig main_cfg = config;
    std::optional<RunConfig> pair_cfg;
    double cfl = 0.0;
    try {
        // Strict configs throw CflViolation here for their own data.
        auto res = resolve_timestep(config);
        cfl = res.constant.value;
        int steps = res.steps;
        if (pair != nullptr) {
            cfl = std::min(cfl, resolve_timestep(*pair).constant.value);
            const double dx = config.grid.dx();
            const double final_time = config.time.final_time;
            if (!validate_timestep(final_time / steps, dx, cfl)) {
                if (config.strict_cfl) {
                    throw Error(ErrorCode::CflViolation,
                                "CFL violated: dt=" + std::to_string(final_time / steps) +
                                    ", C*dx=" + std::to_string(cfl * dx));
                }
                steps = static_cast<int>(std::ceil(final_time / (cfl * dx)));
                while (!validate_timestep(final_time / steps, dx, cfl)) ++steps;
            }
        }
        main_cfg.time = TimeSpec::make(config.time.final_time, steps);
        if (pair != nullptr) {
            pair_cfg = *pair;
            pair_cfg->time = main_cfg.time;
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::CflViolation) throw;
        report.cfl_violation = true;
        report.diagnostic = e.what();
        return report;
    }

    const double eps = 10.0 * config.solver.tolerance;
    report.solver_slack = eps;
    const GridSpec& grid = main_cfg.grid;
    const int n_x = grid.intervals_x();
    const double dx = grid.dx();
    const int steps = main_cfg.time.steps;

    const Scheme scheme(main_cfg, cfl);
    std::optional<Scheme> pair_scheme;
    if (pair_cfg) pair_scheme.emplace(*pair_cfg, cfl);

    auto named = [](const char* name, double allowed) {
        PropertyResult r;
        r.name = name;
        r.allowed = allowed;
        return r;
    };
    PropertyResult max_principle = named("max_principle", eps);
    PropertyResult comparison = named("comparison", eps);
    PropertyResult contraction = named("l1_contraction", eps * n_x);
    PropertyResult decay = named("mass_decay", eps * n_x);
    PropertyResult conservation = named("approximate_conservation", 0.0);

    if (!pair_cfg) {
        comparison.applicable = contraction.applicable = false;
        comparison.note = contraction.note = "no paired configuration";
    }
    const DataBounds& bounds = scheme.bounds();
    const bool nonnegative = bounds.u_min >= 0.0;
    if (!nonnegative) {
        decay.applicable = conservation.applicable = false;
        decay.note = conservation.note = "initial data changes sign";
    }

    auto field_excess = [](const Field& f, const DataBounds& b) {
        double excess = 0.0;
        for (const double w : f.values()) {
            excess = std::max({excess, w - b.b_max, b.b_min - w});
        }
        return excess;
    };
    auto sum_interior = [&](std::span<const double> t) {
        double s = 0.0;
        for (int i = 1; i < n_x; ++i) s += t[i];
        return s;
    };

    SchemeState state = scheme.initialize();
    std::optional<SchemeState> pstate;
    if (pair_scheme) pstate = pair_scheme->initialize();
    const double mass0 = trace_mass(state.trace, dx);
    double prev_sum = sum_interior(state.trace);
    double prev_diff = 0.0;
    if (pstate) {
        for (int i = 1; i < n_x; ++i) prev_diff += state.trace[i] - pstate->trace[i];
    }

    for (int j = 0;; ++j) {
        max_principle.measured = std::max(max_principle.measured, field_excess(state.field, bounds));
        if (pstate) {
            max_principle.measured =
                std::max(max_principle.measured, field_excess(pstate->field, pair_scheme->bounds()));
            double worst = 0.0;
            double diff = 0.0;
            for (int i = 0; i <= n_x; ++i) {
                worst = std::max(worst, pstate->trace[i] - state.trace[i]);
                if (i > 0 && i < n_x) diff += state.trace[i] - pstate->trace[i];
            }
            comparison.measured = std::max(comparison.measured, worst);
            if (j > 0) contraction.measured = std::max(contraction.measured, diff - prev_diff);
            prev_diff = diff;
        }
        const double sum = sum_interior(state.trace);
        if (j > 0) decay.measured = std::max(decay.measured, sum - prev_sum);
        prev_sum = sum;

        if (j == steps) break;
        state = scheme.step(state);
        if (pstate) pstate = pair_scheme->step(*pstate);
    }

    if (nonnegative && main_cfg.growing_domain) {
        const double m = config.phi.kind() == Phi::Kind::PowerLaw ? config.phi.exponent() : 1.0;
        const double tail = barenblatt_tail_bound(grid.half_width(), main_cfg.time.final_time, m, 1,
                                                  std::max(mass0, 0.0));
        conservation.measured = std::abs(trace_mass(state.trace, dx) - mass0);
        conservation.allowed = std::max(100.0 * eps * n_x * dx, 10.0 * tail * grid.half_width());
        conservation.note = "tail bound at X: " + std::to_string(tail);
    } else if (nonnegative) {
        conservation.applicable = false;
        conservation.note = "domain not sized for the tail bound";
    }

    for (PropertyResult* r : {&max_principle, &comparison, &contraction, &decay, &conservation}) {
        r->passed = !r->applicable || r->measured <= r->allowed;
        report.results.push_back(*r);
    }
    return report;
}

}  // namespace fracpme
