#include "fracpme/laplace.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "fracpme/error.hpp"

namespace fracpme {

namespace {

thread_local int g_last_iterations = 0;

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void check_bottom(std::span<const double> bottom, const GridSpec& grid) {
    if (bottom.size() != grid.row_size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "bottom data has " + std::to_string(bottom.size()) + " entries, expected " +
                        std::to_string(grid.row_size()));
    }
    if (bottom.front() != 0.0 || bottom.back() != 0.0) {
        throw Error(ErrorCode::CornerViolation, "bottom corner values must be zero");
    }
    for (const double b : bottom) {
        if (!std::isfinite(b)) {
            throw Error(ErrorCode::DomainError, "bottom data must be finite");
        }
    }
}

// Stencil defect W(i+1,k)+W(i-1,k)+W(i,k+1)+W(i,k-1)-4W(i,k), unscaled.
inline double defect(std::span<const double> w, std::size_t idx, std::size_t stride) {
    return w[idx + 1] + w[idx - 1] + w[idx + stride] + w[idx - stride] - 4.0 * w[idx];
}

double max_defect(const Field& field) {
    const GridSpec& g = field.grid();
    const auto w = field.values();
    const std::size_t stride = g.row_size();
    double worst = 0.0;
    for (int k = 1; k < g.intervals_y(); ++k) {
        for (int i = 1; i < g.intervals_x(); ++i) {
            worst = std::max(worst, std::abs(defect(w, g.index(i, k), stride)));
        }
    }
    return worst;
}

}  // namespace

double default_tolerance(double dx, double dt) { return 1e-2 * dx * dx * dt; }

// Sine-transform diagonalization in x plus per-mode Thomas factors in y.
struct HarmonicSolver::SineFactorization {
    int modes = 0;  // I - 1
    int rows = 0;   // K - 1
    // cprime[(k-1) * modes + p]: modified super-diagonal of mode p at row k.
    std::vector<double> cprime;
    fftw_plan plan = nullptr;

    SineFactorization(const GridSpec& grid) : modes(grid.intervals_x() - 1), rows(grid.intervals_y() - 1) {
        const int n_x = grid.intervals_x();
        cprime.resize(static_cast<std::size_t>(modes) * rows);
        for (int p = 0; p < modes; ++p) {
            const double s = std::sin(std::numbers::pi * (p + 1) / (2.0 * n_x));
            const double diag = -(2.0 + 4.0 * s * s);
            double c = 1.0 / diag;
            cprime[p] = c;
            for (int k = 1; k < rows; ++k) {
                c = 1.0 / (diag - c);
                cprime[static_cast<std::size_t>(k) * modes + p] = c;
            }
        }
        std::vector<double> scratch(static_cast<std::size_t>(modes));
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_1d(modes, scratch.data(), scratch.data(), FFTW_RODFT00,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    ~SineFactorization() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    SineFactorization(const SineFactorization&) = delete;
    SineFactorization& operator=(const SineFactorization&) = delete;

    void transform(double* data) const { fftw_execute_r2r(plan, data, data); }
};

HarmonicSolver::HarmonicSolver(const GridSpec& grid, const SolverOptions& options)
    : grid_(grid), options_(options) {
    if (!(options.tolerance > 0.0) || options.max_iterations < 1) {
        throw Error(ErrorCode::ValidationError, "solver tolerance must be > 0 and max_iterations >= 1");
    }
    if (options.method == SolverMethod::DirectFactorization) {
        factorization_ = std::make_unique<SineFactorization>(grid);
    }
}

HarmonicSolver::~HarmonicSolver() = default;
HarmonicSolver::HarmonicSolver(HarmonicSolver&&) noexcept = default;
HarmonicSolver& HarmonicSolver::operator=(HarmonicSolver&&) noexcept = default;

int HarmonicSolver::last_iterations() noexcept { return g_last_iterations; }

Field HarmonicSolver::solve(std::span<const double> bottom, const Field* seed) const {
    check_bottom(bottom, grid_);
    Field field(grid_);
    const bool use_seed = seed != nullptr && options_.warm_start &&
                          options_.method != SolverMethod::DirectFactorization &&
                          seed->grid() == grid_;
    if (use_seed) {
        for (int k = 1; k < grid_.intervals_y(); ++k) {
            for (int i = 1; i < grid_.intervals_x(); ++i) field.at(i, k) = seed->at(i, k);
        }
    }
    std::copy(bottom.begin(), bottom.end(), field.row(0).begin());

    switch (options_.method) {
        case SolverMethod::DirectFactorization: solve_direct(field); break;
        case SolverMethod::IterativeRelaxation: solve_relaxation(field); break;
        case SolverMethod::ConjugateDirection: solve_conjugate_direction(field); break;
    }
    return field;
}

void HarmonicSolver::solve_direct(Field& field) const {
    const SineFactorization& f = *factorization_;
    const int n = f.modes;
    const int rows = f.rows;
    g_last_iterations = 0;

    std::vector<double> bhat(field.row(0).begin() + 1, field.row(0).begin() + 1 + n);
    f.transform(bhat.data());

    // Forward sweep: the right-hand side only has the row-1 term -bhat.
    auto row_ptr = [&](int k) { return field.row(k).data() + 1; };
    {
        double* r = row_ptr(1);
        for (int p = 0; p < n; ++p) r[p] = -bhat[p] * f.cprime[p];
    }
    for (int k = 2; k <= rows; ++k) {
        const double* prev = row_ptr(k - 1);
        double* r = row_ptr(k);
        const double* c = f.cprime.data() + static_cast<std::size_t>(k - 1) * n;
        for (int p = 0; p < n; ++p) r[p] = -prev[p] * c[p];
    }
    // Back substitution.
    for (int k = rows - 1; k >= 1; --k) {
        const double* next = row_ptr(k + 1);
        double* r = row_ptr(k);
        const double* c = f.cprime.data() + static_cast<std::size_t>(k - 1) * n;
        for (int p = 0; p < n; ++p) r[p] -= c[p] * next[p];
    }
    // Back to physical space; RODFT00 is its own inverse up to 2(n+1) = 2I.
    const double scale = 1.0 / (2.0 * grid_.intervals_x());
    for (int k = 1; k <= rows; ++k) {
        double* r = row_ptr(k);
        f.transform(r);
        for (int p = 0; p < n; ++p) r[p] *= scale;
    }
}

void HarmonicSolver::solve_relaxation(Field& field) const {
    const int ni = grid_.intervals_x();
    const int nk = grid_.intervals_y();
    const std::size_t stride = grid_.row_size();
    const double limit = options_.tolerance * grid_.dx() * grid_.dx();
    const double rho = 0.5 * (std::cos(std::numbers::pi / ni) + std::cos(std::numbers::pi / nk));
    const double omega = 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho * rho)));
    auto w = field.values();

    for (int sweep = 1; sweep <= options_.max_iterations; ++sweep) {
        for (int color = 0; color < 2; ++color) {
            for (int k = 1; k < nk; ++k) {
                for (int i = 1 + ((k + 1 + color) & 1); i < ni; i += 2) {
                    const std::size_t idx = grid_.index(i, k);
                    w[idx] += 0.25 * omega * defect(w, idx, stride);
                }
            }
        }
        if (max_defect(field) <= limit) {
            g_last_iterations = sweep;
            return;
        }
    }
    g_last_iterations = options_.max_iterations;
    throw Error(ErrorCode::NonConvergence,
                "relaxation did not reach tolerance in " + std::to_string(options_.max_iterations) +
                    " sweeps");
}

void HarmonicSolver::solve_conjugate_direction(Field& field) const {
    const int ni = grid_.intervals_x();
    const int nk = grid_.intervals_y();
    const std::size_t stride = grid_.row_size();
    const std::size_t count = grid_.node_count();
    const double limit = options_.tolerance * grid_.dx() * grid_.dx();
    auto w = field.values();

    // Solve A v = rhs with A = -(5-point stencil) on interior unknowns; vectors
    // are full-grid arrays whose boundary entries stay zero.
    std::vector<double> r(count, 0.0), d(count, 0.0), ad(count, 0.0);
    auto for_interior = [&](auto&& body) {
        for (int k = 1; k < nk; ++k) {
            for (std::size_t idx = grid_.index(1, k), end = grid_.index(ni, k); idx < end; ++idx) {
                body(idx);
            }
        }
    };
    auto true_residual = [&] {
        double rr = 0.0;
        for_interior([&](std::size_t idx) {
            r[idx] = defect(w, idx, stride);
            rr += r[idx] * r[idx];
        });
        return rr;
    };

    double rr = true_residual();
    d = r;
    for (int it = 1; it <= options_.max_iterations; ++it) {
        if (max_defect(field) <= limit) {
            g_last_iterations = it - 1;
            return;
        }
        double dad = 0.0;
        for_interior([&](std::size_t idx) {
            ad[idx] = -defect(d, idx, stride);
            dad += d[idx] * ad[idx];
        });
        if (!(dad > 0.0)) break;
        const double alpha = rr / dad;
        double rr_new = 0.0;
        for_interior([&](std::size_t idx) {
            w[idx] += alpha * d[idx];
            r[idx] -= alpha * ad[idx];
            rr_new += r[idx] * r[idx];
        });
        const double beta = rr_new / rr;
        rr = rr_new;
        for_interior([&](std::size_t idx) { d[idx] = r[idx] + beta * d[idx]; });
        // Periodically replace the recursive residual by the true one.
        if (it % 50 == 0) {
            rr = true_residual();
            d = r;
        }
    }
    if (max_defect(field) <= limit) {
        g_last_iterations = options_.max_iterations;
        return;
    }
    g_last_iterations = options_.max_iterations;
    throw Error(ErrorCode::NonConvergence,
                "conjugate direction iteration did not reach tolerance in " +
                    std::to_string(options_.max_iterations) + " iterations");
}

Field harmonic_extension(std::span<const double> bottom, const GridSpec& grid,
                         const SolverOptions& options, const Field* seed) {
    return HarmonicSolver(grid, options).solve(bottom, seed);
}

double stencil_residual(const Field& field) {
    const double dx = field.grid().dx();
    return max_defect(field) / (dx * dx);
}

}  // namespace fracpme
