#pragma once

#include <cstddef>

namespace fracpme {

enum class NodeClass { Interior, ActiveBottom, ZeroBoundary };

/// Uniform mesh of the truncated extension domain [-X, X] x [0, Y].
///
/// Nodes are x_i = -X + 2X i / I (i = 0..I) and y_k = Y k / K (k = 0..K).
/// The bottom row k = 0 minus its two corners carries the dynamic data; all
/// other boundary nodes are held at zero. Storage order everywhere is row-major
/// by k, then i (bottom row first).
class GridSpec {
public:
    /// Throws MeshAnisotropy unless 2X/I == Y/K, InvalidExtent for X, Y <= 0.
    static GridSpec build(double half_width, double height, int intervals_x, int intervals_y);

    /// Builds the grid with spacing dx on [-X, X] x [0, Y]; X and Y must be
    /// multiples of dx up to rounding.
    static GridSpec from_spacing(double half_width, double height, double dx);

    [[nodiscard]] double half_width() const noexcept { return half_width_; }
    [[nodiscard]] double height() const noexcept { return height_; }
    [[nodiscard]] int intervals_x() const noexcept { return intervals_x_; }
    [[nodiscard]] int intervals_y() const noexcept { return intervals_y_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] double dy() const noexcept { return dy_; }

    [[nodiscard]] double x(int i) const noexcept;
    [[nodiscard]] double y(int k) const noexcept;

    [[nodiscard]] std::size_t row_size() const noexcept {
        return static_cast<std::size_t>(intervals_x_) + 1;
    }
    [[nodiscard]] std::size_t node_count() const noexcept {
        return row_size() * (static_cast<std::size_t>(intervals_y_) + 1);
    }
    [[nodiscard]] std::size_t index(int i, int k) const noexcept {
        return static_cast<std::size_t>(k) * row_size() + static_cast<std::size_t>(i);
    }

    /// Throws IndexOutOfRange outside 0..I x 0..K.
    [[nodiscard]] NodeClass classify(int i, int k) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    GridSpec(double half_width, double height, int intervals_x, int intervals_y);

    double half_width_;
    double height_;
    int intervals_x_;
    int intervals_y_;
    double dx_;
    double dy_;
};

/// Half-width satisfying X >= k_dom / dx, rounded up to a multiple of dx.
double sized_half_width(double dx, double k_dom);

}  // namespace fracpme
