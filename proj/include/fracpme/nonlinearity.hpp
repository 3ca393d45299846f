#pragma once

#include <functional>
#include <span>
#include <string>

namespace fracpme {

/// Monotone nonlinearity phi acting on the trace u, with its derivative and inverse.
///
/// Power laws are signed, phi(u) = |u|^(m-1) u, so sign-changing data is handled.
/// The logarithmic law is phi(u) = log(1 + u), defined for u > -1.
class Phi {
public:
    enum class Kind { PowerLaw, Logarithmic, Custom };
    using Function = std::function<double(double)>;

    /// Throws ValidationError for m < 1.
    static Phi power_law(double m);
    static Phi logarithmic();

    /// A user supplied triple, checked on 64 probe points of [u_lo, u_hi] for
    /// monotonicity, inverse consistency and derivative consistency. Throws
    /// ValidationError if any check fails.
    static Phi custom(Function forward, Function derivative, Function inverse, double u_lo,
                      double u_hi);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    /// Exponent of a power law; 0 for the other kinds.
    [[nodiscard]] double exponent() const noexcept { return m_; }

    [[nodiscard]] double apply(double u) const;
    [[nodiscard]] double inverse(double w) const;
    [[nodiscard]] double derivative(double u) const;

    [[nodiscard]] std::string describe() const;

    /// Custom triples never compare equal, not even to themselves.
    friend bool operator==(const Phi& a, const Phi& b) {
        return a.kind_ == b.kind_ && a.kind_ != Kind::Custom && a.m_ == b.m_;
    }

private:
    Phi() = default;

    Kind kind_ = Kind::PowerLaw;
    double m_ = 1.0;
    Function forward_;
    Function derivative_;
    Function inverse_;
};

struct DataBounds {
    double u_min = 0.0;
    double u_max = 0.0;
    double b_min = 0.0;
    double b_max = 0.0;
};

/// Extremes of f and phi(f) over the samples, always including zero.
DataBounds data_bounds(std::span<const double> f_samples, const Phi& phi);

/// Both candidate CFL constants and the one in force.
struct CflReport {
    /// 1 / sup{phi'(u) : u in [u_min, u_max]}.
    double derivative_bound;
    /// [m b_max^(m-1)]^-1 for power laws; equal to derivative_bound otherwise.
    double literal_power_law;
    /// min of the two; +infinity when phi' vanishes on the whole data range.
    double value;
};

CflReport cfl_analysis(const Phi& phi, const DataBounds& bounds);
double cfl_constant(const Phi& phi, const DataBounds& bounds);

/// dt <= C dx, with a few ulps of allowance so that dt == dx computed along
/// different floating point paths is not rejected. Infinite C always passes.
bool validate_timestep(double dt, double dx, double cfl);

}  // namespace fracpme
