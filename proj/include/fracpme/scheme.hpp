#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracpme/grid.hpp"
#include "fracpme/laplace.hpp"
#include "fracpme/nonlinearity.hpp"

namespace fracpme {

/// J uniform steps of length dt = T / J.
struct TimeSpec {
    double final_time = 1.0;
    int steps = 1;

    [[nodiscard]] double dt() const noexcept { return final_time / steps; }
    [[nodiscard]] double time(int j) const noexcept { return (final_time * j) / steps; }

    /// Throws ValidationError for T <= 0 or J < 1.
    static TimeSpec make(double final_time, int steps);

    friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

namespace initial {

/// a e exp(-1/((1-x)(1+x))) on |x| < 1, so that max f = a.
struct Bump {
    double amplitude = 1.0;
    friend bool operator==(const Bump&, const Bump&) = default;
};
/// (1/pi) / (x^2 + 1), the m = 1 source solution at t = 1.
struct CauchyKernel {
    friend bool operator==(const CauchyKernel&, const CauchyKernel&) = default;
};
/// mass / dx at the node nearest x = 0.
struct DiracLike {
    double mass = 1.0;
    friend bool operator==(const DiracLike&, const DiracLike&) = default;
};
/// Explicit nodal values, I+1 entries.
struct Sampled {
    std::vector<double> values;
    friend bool operator==(const Sampled&, const Sampled&) = default;
};

}  // namespace initial

using InitialData =
    std::variant<initial::Bump, initial::CauchyKernel, initial::DiracLike, initial::Sampled>;

double bump_profile(double x, double amplitude);

/// Nodal values f(x_i), i = 0..I. Corners are not zeroed here.
std::vector<double> sample_initial(const InitialData& data, const GridSpec& grid);

struct RunConfig {
    GridSpec grid;
    TimeSpec time;
    Phi phi;
    InitialData initial;
    SolverOptions solver;
    std::vector<double> snapshot_times;
    /// When set, the grid was sized so that X >= K_dom / dx.
    std::optional<double> growing_domain;
    /// Refuse to shrink dt when it violates the CFL bound.
    bool strict_cfl = false;
    bool full_field = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// The CFL bound of a configuration and the time step actually used.
struct CflResolution {
    DataBounds bounds;
    CflReport constant;
    double requested_dt = 0.0;
    double dt = 0.0;
    int steps = 0;
    bool adjusted = false;
    std::string warning;
};

/// Computes C(phi, f) and, unless strict, shrinks dt to C dx keeping T fixed.
/// Throws CflViolation with a "CFL violated: ..." message in strict mode.
CflResolution resolve_timestep(const RunConfig& config);

struct SchemeState {
    Field field;
    /// u = phi^{-1}(w) on the bottom row; zero at the corners.
    std::vector<double> trace;
    int j = 0;
    double time = 0.0;
};

/// New bottom row phi(dt/dx (W(i,1) - W(i,0)) + phi^{-1}(W(i,0))), corners 0.
/// Throws CflViolation when dt > C dx.
std::vector<double> boundary_update(const SchemeState& state, const Phi& phi, double dt,
                                    double dx, double cfl);

/// Explicit boundary update followed by a harmonic extension solve, reusing one
/// factorization of the interior operator for every step.
class Scheme {
public:
    /// The configuration's dt must already satisfy the CFL bound; `cfl`
    /// overrides the constant computed from the configuration's own data.
    explicit Scheme(const RunConfig& config, std::optional<double> cfl = std::nullopt);

    [[nodiscard]] SchemeState initialize() const;
    [[nodiscard]] SchemeState step(const SchemeState& state) const;

    [[nodiscard]] const RunConfig& config() const noexcept { return config_; }
    [[nodiscard]] double cfl() const noexcept { return cfl_; }
    [[nodiscard]] const DataBounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] const std::vector<double>& initial_samples() const noexcept { return samples_; }

private:
    RunConfig config_;
    std::vector<double> samples_;
    DataBounds bounds_;
    double cfl_;
    HarmonicSolver solver_;
};

SchemeState initialize(const RunConfig& config);
SchemeState step(const SchemeState& state, const RunConfig& config);

struct Snapshot {
    int j = 0;
    double time = 0.0;
    /// Time that was asked for; the snapshot is taken at the nearest step.
    double requested_time = 0.0;
    std::vector<double> trace;
    std::optional<Field> field;
};

struct RunResult {
    CflResolution cfl;
    TimeSpec time;
    std::vector<Snapshot> snapshots;
};

/// Runs to T, recording snapshots at the steps nearest to the requested times
/// plus t = 0 and t = T.
RunResult run(const RunConfig& config);

}  // namespace fracpme
