#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracpme/error.hpp"
#include "fracpme/grid.hpp"

using namespace fracpme;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected fracpme::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("build_grid rejects anisotropic meshes and bad extents") {
    CHECK(code_of([] { (void)GridSpec::build(1, 1, 4, 3); }) == ErrorCode::MeshAnisotropy);
    CHECK(code_of([] { (void)GridSpec::build(0, 1, 4, 2); }) == ErrorCode::InvalidExtent);
    CHECK(code_of([] { (void)GridSpec::build(1, -1, 4, 2); }) == ErrorCode::InvalidExtent);
    CHECK(code_of([] { (void)GridSpec::build(1, 1, 1, 1); }) == ErrorCode::InvalidArgument);
    // 2*1/4 == 1/2, so this one is legal.
    CHECK_NOTHROW((void)GridSpec::build(1, 1, 4, 2));
}

TEST_CASE("unit-spacing domain on [-100, 100] x [0, 100]") {
    const auto g = GridSpec::build(100, 100, 200, 100);
    CHECK(g.dx() == 1.0);
    CHECK(g.dy() == 1.0);
    CHECK(g.node_count() == 201u * 101u);
    CHECK(g.x(0) == -100.0);
    CHECK(g.x(200) == 100.0);
    CHECK(g.x(100) == 0.0);
    CHECK(g.y(100) == 100.0);
}

TEST_CASE("smallest legal grid has a single interior node") {
    const auto g = GridSpec::build(1, 2, 2, 2);
    int interior = 0;
    for (int k = 0; k <= 2; ++k) {
        for (int i = 0; i <= 2; ++i) {
            if (g.classify(i, k) == NodeClass::Interior) {
                ++interior;
                CHECK(g.x(i) == 0.0);
                CHECK(g.y(k) == 1.0);
            }
        }
    }
    CHECK(interior == 1);
}

TEST_CASE("classify") {
    const auto g = GridSpec::build(2, 3, 4, 3);
    CHECK(g.classify(0, 0) == NodeClass::ZeroBoundary);
    CHECK(g.classify(4, 0) == NodeClass::ZeroBoundary);
    CHECK(g.classify(1, 0) == NodeClass::ActiveBottom);
    CHECK(g.classify(2, 1) == NodeClass::Interior);
    CHECK(g.classify(2, 3) == NodeClass::ZeroBoundary);
    CHECK(code_of([&] { (void)g.classify(5, 0); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { (void)g.classify(1, -1); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("node classes by exhaustive enumeration, I, K <= 16") {
    for (int n_x = 2; n_x <= 16; ++n_x) {
        for (int n_y = 2; n_y <= 16; ++n_y) {
            // dx = 1: X = I/2, Y = K.
            const auto g = GridSpec::build(0.5 * n_x, n_y, n_x, n_y);
            int interior = 0, bottom = 0, zero = 0;
            for (int k = 0; k <= n_y; ++k) {
                for (int i = 0; i <= n_x; ++i) {
                    switch (g.classify(i, k)) {
                        case NodeClass::Interior: ++interior; break;
                        case NodeClass::ActiveBottom: ++bottom; break;
                        case NodeClass::ZeroBoundary: ++zero; break;
                    }
                }
            }
            CHECK(bottom == n_x - 1);
            CHECK(interior == (n_x - 1) * (n_y - 1));
            CHECK(static_cast<std::size_t>(interior + bottom + zero) == g.node_count());
        }
    }
}

TEST_CASE("node coordinates are affine with exact endpoints") {
    const auto g = GridSpec::from_spacing(3.0, 3.0, 0.0125);
    CHECK(g.intervals_x() == 480);
    CHECK(g.intervals_y() == 240);
    CHECK(g.x(0) == -3.0);
    CHECK(g.x(480) == 3.0);
    CHECK(g.y(0) == 0.0);
    CHECK(g.y(240) == 3.0);
    for (int i = 1; i < 480; ++i) {
        CHECK(g.x(i) - g.x(i - 1) == doctest::Approx(g.dx()).epsilon(1e-9));
    }
}

TEST_CASE("storage is row-major by k, bottom row first") {
    const auto g = GridSpec::build(2, 2, 4, 2);
    CHECK(g.index(0, 0) == 0u);
    CHECK(g.index(4, 0) == 4u);
    CHECK(g.index(0, 1) == 5u);
    CHECK(g.index(3, 2) == 13u);
}

TEST_CASE("from_spacing rejects incommensurate extents") {
    CHECK(code_of([] { (void)GridSpec::from_spacing(1.0, 1.0, 0.3); }) ==
          ErrorCode::IncommensurateGrids);
}

TEST_CASE("sized_half_width") {
    CHECK(sized_half_width(0.5, 10) == 20.0);
    CHECK(sized_half_width(1.0, 100) == 100.0);

    // ceil(K_dom / dx^2) dx, the smallest multiple of dx with X >= K_dom / dx.
    const double x = sized_half_width(0.3, 10);
    CHECK(x == doctest::Approx(112 * 0.3));
    CHECK(x >= 10 / 0.3);
    CHECK(std::abs(x / 0.3 - std::round(x / 0.3)) < 1e-9);

    for (double dx : {0.1, 0.25, 0.3, 0.7, 1.0}) {
        for (double k_dom : {0.5, 3.0, 10.0, 77.7}) {
            const double hw = sized_half_width(dx, k_dom);
            CHECK(hw >= k_dom / dx * (1 - 1e-12));
            CHECK(hw - dx < k_dom / dx);
            if (hw >= 2 * dx) CHECK_NOTHROW((void)GridSpec::from_spacing(hw, hw, dx));
        }
    }
}
