#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracpme/grid.hpp"
#include "fracpme/nonlinearity.hpp"
#include "fracpme/scheme.hpp"

namespace fracpme {

/// Source solution for m = 1, N = 1: (1/pi) t / (x^2 + t^2).
double poisson_kernel_solution(double x, double t);

/// pi^{-(N+1)/2} Gamma((N+1)/2).
double riesz_constant(int n_dims);

struct BarenblattExponents {
    double alpha;
    double beta;
    double m;
    int n_dims;
};

BarenblattExponents barenblatt_exponents(double m, int n_dims);

/// C_prof (T+1)^beta / X^(N+1): bound on the self-similar upper solution at |x| = X.
double barenblatt_tail_bound(double half_width, double final_time, double m, int n_dims,
                             double c_prof);

using ExactExtension = std::function<double(double x, double y, double t)>;

/// Local truncation defect of the scheme for an exact extension w(x, y, t),
/// between t_{j-1} and t_j: the 5-point residual (over dx^2) at interior nodes
/// and the boundary-update defect at active bottom nodes; returns the maximum.
double truncation_residual(const ExactExtension& w_exact, const GridSpec& grid, double dt, int j,
                           const Phi& phi);

/// Max-norm distance between two traces; LengthMismatch for unequal lengths.
double max_error(std::span<const double> a, std::span<const double> b);

/// dx * sum_{i=1}^{I-1} trace[i].
double trace_mass(std::span<const double> trace, double dx);

struct ErrorRow {
    double dx;
    double dt;
    int nodes;
    double error;
};

struct ErrorTable {
    std::vector<ErrorRow> rows;
    /// Observed order between consecutive rows; NaN where an error is zero.
    std::vector<double> orders;
};

/// p_k = log(e_k / e_{k+1}) / log(dx_k / dx_{k+1}); DegenerateError on a zero error.
std::vector<double> observed_order(const ErrorTable& table);

/// Runs `base` at every dx in `dx_list` (dt = dx, same X, Y and T) and at
/// `dx_ref`, and reports the max error of the final trace against the
/// reference restricted to the coarse nodes. dx_ref must divide every dx.
ErrorTable self_convergence_study(const RunConfig& base, std::span<const double> dx_list,
                                  double dx_ref);

/// Cauchy-kernel data on [-100, 100] x [0, 100] with m = 1 and dt = dx, run to
/// T = 1 and compared with the source solution at t = 2.
ErrorTable exact_convergence_study_m1(std::span<const double> dx_list);

struct PropertyResult {
    std::string name;
    bool applicable = true;
    bool passed = true;
    /// Worst violation margin observed (0 when none) and the slack allowed.
    double measured = 0.0;
    double allowed = 0.0;
    std::string note;
};

struct PropertyReport {
    bool cfl_violation = false;
    std::string diagnostic;
    double solver_slack = 0.0;
    std::vector<PropertyResult> results;

    [[nodiscard]] bool all_passed() const;
};

/// Steps `config` (and `pair`, whose data must lie pointwise below) through
/// every time level and checks the maximum principle, comparison, L1
/// contraction, mass decay and approximate mass conservation.
PropertyReport property_suite(const RunConfig& config, const RunConfig* pair = nullptr);

}  // namespace fracpme
