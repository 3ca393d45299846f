#include "fracpme/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracpme/error.hpp"

namespace fracpme {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double signed_root(double w, double m) {
    const double a = std::abs(w);
    double r;
    if (m == 1.0) {
        r = a;
    } else if (m == 2.0) {
        r = std::sqrt(a);
    } else if (m == 3.0) {
        r = std::cbrt(a);
    } else {
        r = std::pow(a, 1.0 / m);
    }
    return std::copysign(r, w);
}

void require_log_domain(double u) {
    if (!(u > -1.0)) {
        throw Error(ErrorCode::DomainError, "log(1+u) requires u > -1, got " + std::to_string(u));
    }
}

}  // namespace

Phi Phi::power_law(double m) {
    if (!(m >= 1.0) || !std::isfinite(m)) {
        throw Error(ErrorCode::ValidationError, "m must be >= 1");
    }
    Phi phi;
    phi.kind_ = Kind::PowerLaw;
    phi.m_ = m;
    return phi;
}

Phi Phi::logarithmic() {
    Phi phi;
    phi.kind_ = Kind::Logarithmic;
    phi.m_ = 0.0;
    return phi;
}

Phi Phi::custom(Function forward, Function derivative, Function inverse, double u_lo,
                double u_hi) {
    if (!forward || !derivative || !inverse) {
        throw Error(ErrorCode::ValidationError, "custom phi needs forward, derivative and inverse");
    }
    if (!(u_lo < u_hi)) {
        throw Error(ErrorCode::ValidationError, "custom phi needs a nonempty data range");
    }
    constexpr int kProbes = 64;
    for (int p = 0; p < kProbes; ++p) {
        const double u = u_lo + (u_hi - u_lo) * p / (kProbes - 1);
        const double w = forward(u);
        const double back = inverse(w);
        if (!std::isfinite(w) || std::abs(back - u) > 1e-12 * std::max(1.0, std::abs(u))) {
            throw Error(ErrorCode::ValidationError,
                        "custom phi: inverse(forward(u)) != u at u=" + std::to_string(u));
        }
        const double d = derivative(u);
        if (!(d >= 0.0)) {
            throw Error(ErrorCode::ValidationError,
                        "custom phi: derivative is negative at u=" + std::to_string(u));
        }
        // Central difference, kept inside the declared range.
        const double h = 1e-5 * std::max(1.0, std::abs(u));
        const double lo = std::max(u_lo, u - h);
        const double hi = std::min(u_hi, u + h);
        const double fd = (forward(hi) - forward(lo)) / (hi - lo);
        if (std::abs(fd - d) > 1e-4 * std::max(1.0, std::abs(d))) {
            throw Error(ErrorCode::ValidationError,
                        "custom phi: derivative inconsistent with forward at u=" + std::to_string(u));
        }
    }
    Phi phi;
    phi.kind_ = Kind::Custom;
    phi.m_ = 0.0;
    phi.forward_ = std::move(forward);
    phi.derivative_ = std::move(derivative);
    phi.inverse_ = std::move(inverse);
    return phi;
}

double Phi::apply(double u) const {
    switch (kind_) {
        case Kind::PowerLaw:
            if (m_ == 1.0) return u;
            if (m_ == 2.0) return std::abs(u) * u;
            return std::copysign(std::pow(std::abs(u), m_), u);
        case Kind::Logarithmic:
            require_log_domain(u);
            return std::log1p(u);
        case Kind::Custom: {
            const double w = forward_(u);
            if (!std::isfinite(w)) {
                throw Error(ErrorCode::DomainError, "custom phi undefined at u=" + std::to_string(u));
            }
            return w;
        }
    }
    return u;
}

double Phi::inverse(double w) const {
    switch (kind_) {
        case Kind::PowerLaw:
            return signed_root(w, m_);
        case Kind::Logarithmic:
            return std::expm1(w);
        case Kind::Custom: {
            const double u = inverse_(w);
            if (!std::isfinite(u)) {
                throw Error(ErrorCode::DomainError,
                            "w=" + std::to_string(w) + " is outside the range of custom phi");
            }
            return u;
        }
    }
    return w;
}

double Phi::derivative(double u) const {
    switch (kind_) {
        case Kind::PowerLaw:
            if (m_ == 1.0) return 1.0;
            if (u == 0.0) return 0.0;
            return m_ * std::pow(std::abs(u), m_ - 1.0);
        case Kind::Logarithmic:
            require_log_domain(u);
            return 1.0 / (1.0 + u);
        case Kind::Custom:
            return derivative_(u);
    }
    return 1.0;
}

std::string Phi::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::PowerLaw: os << "power(m=" << m_ << ")"; break;
        case Kind::Logarithmic: os << "log(1+u)"; break;
        case Kind::Custom: os << "custom"; break;
    }
    return os.str();
}

DataBounds data_bounds(std::span<const double> f_samples, const Phi& phi) {
    DataBounds b;
    for (const double f : f_samples) {
        if (!std::isfinite(f)) {
            throw Error(ErrorCode::DomainError, "initial data must be finite");
        }
        const double w = phi.apply(f);
        b.u_min = std::min(b.u_min, f);
        b.u_max = std::max(b.u_max, f);
        b.b_min = std::min(b.b_min, w);
        b.b_max = std::max(b.b_max, w);
    }
    return b;
}

CflReport cfl_analysis(const Phi& phi, const DataBounds& bounds) {
    double sup_derivative = 0.0;
    switch (phi.kind()) {
        case Phi::Kind::PowerLaw:
            // m|u|^(m-1) grows with |u|.
            sup_derivative = phi.derivative(std::max(-bounds.u_min, bounds.u_max));
            break;
        case Phi::Kind::Logarithmic:
            // 1/(1+u) is largest at the left end of the range.
            sup_derivative = phi.derivative(bounds.u_min);
            break;
        case Phi::Kind::Custom: {
            constexpr int kSamples = 1025;
            for (int s = 0; s < kSamples; ++s) {
                const double u = bounds.u_min + (bounds.u_max - bounds.u_min) * s / (kSamples - 1);
                sup_derivative = std::max(sup_derivative, phi.derivative(u));
            }
            break;
        }
    }
    CflReport report{};
    report.derivative_bound = sup_derivative > 0.0 ? 1.0 / sup_derivative : kInf;
    report.literal_power_law = report.derivative_bound;
    if (phi.kind() == Phi::Kind::PowerLaw) {
        const double m = phi.exponent();
        const double denom = m * std::pow(bounds.b_max, m - 1.0);
        report.literal_power_law = denom > 0.0 ? 1.0 / denom : kInf;
    }
    report.value = std::min(report.derivative_bound, report.literal_power_law);
    return report;
}

double cfl_constant(const Phi& phi, const DataBounds& bounds) {
    return cfl_analysis(phi, bounds).value;
}

bool validate_timestep(double dt, double dx, double cfl) {
    if (std::isinf(cfl)) return true;
    return dt <= cfl * dx * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
}

}  // namespace fracpme
