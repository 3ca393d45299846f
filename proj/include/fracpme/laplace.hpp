#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fracpme/grid.hpp"

namespace fracpme {

/// Grid function of extension values w, row-major by k then i.
class Field {
public:
    explicit Field(const GridSpec& grid)
        : grid_(grid), values_(grid.node_count(), 0.0) {}

    [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }

    [[nodiscard]] double at(int i, int k) const noexcept { return values_[grid_.index(i, k)]; }
    double& at(int i, int k) noexcept { return values_[grid_.index(i, k)]; }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    /// The k-th row, i = 0..I.
    [[nodiscard]] std::span<const double> row(int k) const noexcept {
        return std::span<const double>(values_).subspan(grid_.index(0, k), grid_.row_size());
    }
    [[nodiscard]] std::span<double> row(int k) noexcept {
        return std::span<double>(values_).subspan(grid_.index(0, k), grid_.row_size());
    }

    friend bool operator==(const Field&, const Field&) = default;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

enum class SolverMethod { DirectFactorization, IterativeRelaxation, ConjugateDirection };

struct SolverOptions {
    SolverMethod method = SolverMethod::DirectFactorization;
    /// Bound on the max-norm interior stencil residual (divided by dx^2).
    double tolerance = 1e-10;
    int max_iterations = 100000;
    bool warm_start = true;

    friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

/// Default tolerance dx^2 dt / 100, below the local truncation error of a step.
double default_tolerance(double dx, double dt);

/// Discrete harmonic extension of bottom data into the grid.
///
/// Solves the 5-point Laplace equation at interior nodes with the given values
/// on the active bottom row and zero on every other boundary node. The direct
/// method diagonalizes the x-direction operator with a type-I sine transform
/// and factors one tridiagonal system per mode; the factorization is built once
/// and `solve` is const and safe to call concurrently.
class HarmonicSolver {
public:
    HarmonicSolver(const GridSpec& grid, const SolverOptions& options);
    ~HarmonicSolver();
    HarmonicSolver(HarmonicSolver&&) noexcept;
    HarmonicSolver& operator=(HarmonicSolver&&) noexcept;
    HarmonicSolver(const HarmonicSolver&) = delete;
    HarmonicSolver& operator=(const HarmonicSolver&) = delete;

    /// `bottom` has I+1 entries with zero corners (CornerViolation otherwise).
    /// `seed` is used as the initial iterate by the iterative methods when
    /// warm starting. Throws NonConvergence if an iterative method runs out of
    /// iterations.
    [[nodiscard]] Field solve(std::span<const double> bottom, const Field* seed = nullptr) const;

    [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
    [[nodiscard]] const SolverOptions& options() const noexcept { return options_; }
    /// Iterations used by the most recent iterative solve on this thread.
    [[nodiscard]] static int last_iterations() noexcept;

private:
    struct SineFactorization;

    void solve_direct(Field& field) const;
    void solve_relaxation(Field& field) const;
    void solve_conjugate_direction(Field& field) const;

    GridSpec grid_;
    SolverOptions options_;
    std::unique_ptr<SineFactorization> factorization_;
};

/// One-shot convenience wrapper around HarmonicSolver.
Field harmonic_extension(std::span<const double> bottom, const GridSpec& grid,
                         const SolverOptions& options, const Field* seed = nullptr);

/// max over interior nodes of |W(i+1,k)+W(i-1,k)+W(i,k+1)+W(i,k-1)-4W(i,k)| / dx^2.
double stencil_residual(const Field& field);

}  // namespace fracpme
