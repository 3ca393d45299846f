#include "fracpme/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracpme/error.hpp"

namespace fracpme {

namespace {

int intervals_for(double length, double dx, const char* what) {
    const double ratio = length / dx;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
        throw Error(ErrorCode::IncommensurateGrids,
                    std::string(what) + " is not a multiple of dx=" + std::to_string(dx));
    }
    if (n > static_cast<double>(std::numeric_limits<int>::max())) {
        throw Error(ErrorCode::InvalidExtent, std::string(what) + " needs too many intervals");
    }
    return static_cast<int>(n);
}

}  // namespace

GridSpec::GridSpec(double half_width, double height, int intervals_x, int intervals_y)
    : half_width_(half_width),
      height_(height),
      intervals_x_(intervals_x),
      intervals_y_(intervals_y),
      dx_(2.0 * half_width / intervals_x),
      dy_(height / intervals_y) {}

GridSpec GridSpec::build(double half_width, double height, int intervals_x, int intervals_y) {
    if (!(half_width > 0.0) || !(height > 0.0) || !std::isfinite(half_width) ||
        !std::isfinite(height)) {
        throw Error(ErrorCode::InvalidExtent, "domain extents X and Y must be positive and finite");
    }
    if (intervals_x < 2 || intervals_y < 2) {
        throw Error(ErrorCode::InvalidArgument, "I and K must be at least 2");
    }
    GridSpec grid(half_width, height, intervals_x, intervals_y);
    const double scale = std::max(grid.dx_, grid.dy_);
    if (std::abs(grid.dx_ - grid.dy_) > 2.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw Error(ErrorCode::MeshAnisotropy,
                    "mesh must be isotropic: dx=" + std::to_string(grid.dx_) +
                        " dy=" + std::to_string(grid.dy_));
    }
    return grid;
}

GridSpec GridSpec::from_spacing(double half_width, double height, double dx) {
    if (!(dx > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dx must be positive");
    }
    if (!(half_width > 0.0) || !(height > 0.0)) {
        throw Error(ErrorCode::InvalidExtent, "domain extents X and Y must be positive");
    }
    return build(half_width, height, intervals_for(2.0 * half_width, dx, "2X"),
                 intervals_for(height, dx, "Y"));
}

// Written so that x(0) == -X and x(I) == X hold exactly.
double GridSpec::x(int i) const noexcept {
    return (2.0 * half_width_ * i) / intervals_x_ - half_width_;
}

double GridSpec::y(int k) const noexcept {
    return (height_ * k) / intervals_y_;
}

NodeClass GridSpec::classify(int i, int k) const {
    if (i < 0 || i > intervals_x_ || k < 0 || k > intervals_y_) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "node (" + std::to_string(i) + ", " + std::to_string(k) + ") is outside the grid");
    }
    if (i == 0 || i == intervals_x_ || k == intervals_y_) return NodeClass::ZeroBoundary;
    return k == 0 ? NodeClass::ActiveBottom : NodeClass::Interior;
}

double sized_half_width(double dx, double k_dom) {
    if (!(dx > 0.0) || !(k_dom > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dx and K_dom must be positive");
    }
    // Number of dx-steps needed to reach k_dom/dx; an exact integer ratio is
    // kept as is instead of being bumped by rounding noise.
    const double ratio = k_dom / (dx * dx);
    double steps = std::ceil(ratio);
    if (steps - ratio > 1.0 - 1e-9 * std::max(1.0, ratio)) steps -= 1.0;
    double half_width = steps * dx;
    if (half_width < k_dom / dx * (1.0 - 1e-12)) half_width += dx;
    return half_width;
}

}  // namespace fracpme
