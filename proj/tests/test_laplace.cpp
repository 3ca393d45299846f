#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "fracpme/error.hpp"
#include "fracpme/laplace.hpp"

using namespace fracpme;

namespace {

// Independent oracle: assemble the interior 5-point system and solve it with Eigen.
Field sparse_oracle(const GridSpec& g, const std::vector<double>& bottom) {
    const int n_x = g.intervals_x(), n_y = g.intervals_y();
    const int nx = n_x - 1, ny = n_y - 1, n = nx * ny;
    auto id = [&](int i, int k) { return (k - 1) * nx + (i - 1); };
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int k = 1; k < n_y; ++k) {
        for (int i = 1; i < n_x; ++i) {
            const int r = id(i, k);
            trips.emplace_back(r, r, -4.0);
            const int di[4] = {1, -1, 0, 0}, dk[4] = {0, 0, 1, -1};
            for (int s = 0; s < 4; ++s) {
                const int ii = i + di[s], kk = k + dk[s];
                if (ii > 0 && ii < n_x && kk > 0 && kk < n_y) {
                    trips.emplace_back(r, id(ii, kk), 1.0);
                } else if (kk == 0) {
                    rhs[r] -= bottom[ii];
                }
            }
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
    const Eigen::VectorXd sol = lu.solve(rhs);
    Field f(g);
    for (int i = 0; i <= n_x; ++i) f.at(i, 0) = bottom[i];
    for (int k = 1; k < n_y; ++k)
        for (int i = 1; i < n_x; ++i) f.at(i, k) = sol[id(i, k)];
    return f;
}

std::vector<double> random_bottom(const GridSpec& g, std::mt19937_64& rng, double lo = -1, double hi = 1) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> b(g.row_size(), 0.0);
    for (int i = 1; i < g.intervals_x(); ++i) b[i] = dist(rng);
    return b;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0;
    for (std::size_t n = 0; n < a.values().size(); ++n) m = std::max(m, std::abs(a.values()[n] - b.values()[n]));
    return m;
}

}  // namespace

TEST_CASE("I = K = 4 exact values") {
    const auto g = GridSpec::build(1, 2, 4, 4);
    const std::vector<double> bottom{0, 1, 1, 1, 0};
    const Field w = harmonic_extension(bottom, g, SolverOptions{});
    const double expect[3][3] = {{3.0 / 7, 59.0 / 112, 3.0 / 7},
                                 {3.0 / 16, 1.0 / 4, 3.0 / 16},
                                 {1.0 / 14, 11.0 / 112, 1.0 / 14}};
    for (int k = 1; k <= 3; ++k)
        for (int i = 1; i <= 3; ++i) CHECK(w.at(i, k) == doctest::Approx(expect[k - 1][i - 1]).epsilon(1e-13));
    for (int i = 0; i <= 4; ++i) {
        CHECK(w.at(i, 4) == 0.0);
        CHECK(w.at(i, 0) == bottom[i]);
    }
    for (int k = 0; k <= 4; ++k) {
        CHECK(w.at(0, k) == 0.0);
        CHECK(w.at(4, k) == 0.0);
    }
}

TEST_CASE("zero data gives the zero field") {
    const auto g = GridSpec::build(4, 8, 8, 8);
    const std::vector<double> bottom(g.row_size(), 0.0);
    for (auto method : {SolverMethod::DirectFactorization, SolverMethod::IterativeRelaxation,
                        SolverMethod::ConjugateDirection}) {
        SolverOptions opt;
        opt.method = method;
        const Field w = harmonic_extension(bottom, g, opt);
        for (double v : w.values()) CHECK(v == 0.0);
    }
}

TEST_CASE("direct solver matches the assembled system on all small grids") {
    std::mt19937_64 rng(1);
    double worst = 0;
    for (int n_x = 2; n_x <= 8; ++n_x) {
        for (int n_y = 2; n_y <= 8; ++n_y) {
            const auto g = GridSpec::build(0.5 * n_x, n_y, n_x, n_y);
            const auto b = random_bottom(g, rng);
            worst = std::max(worst, max_diff(harmonic_extension(b, g, SolverOptions{}), sparse_oracle(g, b)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("all methods agree with the oracle on a larger grid") {
    std::mt19937_64 rng(2);
    const auto g = GridSpec::build(3.2, 3.2, 64, 32);
    const auto b = random_bottom(g, rng);
    const Field ref = sparse_oracle(g, b);
    CHECK(max_diff(harmonic_extension(b, g, SolverOptions{}), ref) <= 1e-12);
    for (auto method : {SolverMethod::IterativeRelaxation, SolverMethod::ConjugateDirection}) {
        SolverOptions opt;
        opt.method = method;
        opt.tolerance = 1e-9;
        const Field w = harmonic_extension(b, g, opt);
        CHECK(stencil_residual(w) <= 1e-9);
        CHECK(max_diff(w, ref) <= 1e-8);
    }
}

TEST_CASE("direct solve leaves a round-off stencil residual") {
    std::mt19937_64 rng(3);
    const auto g = GridSpec::build(5, 5, 200, 100);
    const auto b = random_bottom(g, rng);
    const Field w = harmonic_extension(b, g, SolverOptions{});
    CHECK(stencil_residual(w) * g.dx() * g.dx() <= 1e-12);
}

TEST_CASE("discrete maximum principle") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = GridSpec::build(2.0, 2.0, 20 + 2 * trial, 10 + trial);
        const auto b = random_bottom(g, rng, -0.5, 2.0);
        const Field w = harmonic_extension(b, g, SolverOptions{});
        const double lo = std::min(0.0, *std::min_element(b.begin(), b.end()));
        const double hi = std::max(0.0, *std::max_element(b.begin(), b.end()));
        for (double v : w.values()) {
            CHECK(v >= lo - 1e-13);
            CHECK(v <= hi + 1e-13);
        }
    }
}

TEST_CASE("linearity") {
    std::mt19937_64 rng(5);
    const auto g = GridSpec::build(3, 3, 60, 30);
    const auto a = random_bottom(g, rng), b = random_bottom(g, rng);
    const double alpha = 1.7, beta = -0.4;
    std::vector<double> c(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) c[n] = alpha * a[n] + beta * b[n];
    const Field wa = harmonic_extension(a, g, SolverOptions{});
    const Field wb = harmonic_extension(b, g, SolverOptions{});
    const Field wc = harmonic_extension(c, g, SolverOptions{});
    double worst = 0;
    for (std::size_t n = 0; n < wc.values().size(); ++n)
        worst = std::max(worst, std::abs(wc.values()[n] - alpha * wa.values()[n] - beta * wb.values()[n]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("reflection symmetry") {
    const auto g = GridSpec::build(4, 4, 80, 40);
    std::vector<double> b(g.row_size(), 0.0);
    for (int i = 1; i < 80; ++i) b[i] = std::exp(-g.x(i) * g.x(i));
    const Field w = harmonic_extension(b, g, SolverOptions{});
    double worst = 0;
    for (int k = 0; k <= 40; ++k)
        for (int i = 0; i <= 80; ++i) worst = std::max(worst, std::abs(w.at(i, k) - w.at(80 - i, k)));
    CHECK(worst <= 1e-14);
}

TEST_CASE("input validation") {
    const auto g = GridSpec::build(2, 2, 4, 2);
    const HarmonicSolver solver(g, SolverOptions{});
    const std::vector<double> short_row(4, 0.0);
    const std::vector<double> corner{1, 0, 0, 0, 0};
    auto code_of = [&](const std::vector<double>& b) {
        try {
            (void)solver.solve(b);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    CHECK(code_of(short_row) == ErrorCode::LengthMismatch);
    CHECK(code_of(corner) == ErrorCode::CornerViolation);
    CHECK(code_of({0, 1, std::nan(""), 0, 0}) == ErrorCode::DomainError);
}

TEST_CASE("iterative methods report non-convergence") {
    std::mt19937_64 rng(6);
    const auto g = GridSpec::build(3.2, 3.2, 64, 32);
    const auto b = random_bottom(g, rng);
    for (auto method : {SolverMethod::IterativeRelaxation, SolverMethod::ConjugateDirection}) {
        SolverOptions opt;
        opt.method = method;
        opt.tolerance = 1e-12;
        opt.max_iterations = 3;
        try {
            (void)harmonic_extension(b, g, opt);
            FAIL("expected NonConvergence");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonConvergence);
        }
    }
}

TEST_CASE("warm start from the exact field needs no iterations") {
    std::mt19937_64 rng(7);
    const auto g = GridSpec::build(1.6, 1.6, 32, 16);
    const auto b = random_bottom(g, rng);
    const Field exact = harmonic_extension(b, g, SolverOptions{});
    SolverOptions opt;
    opt.method = SolverMethod::IterativeRelaxation;
    opt.tolerance = 1e-8;
    (void)harmonic_extension(b, g, opt, &exact);
    CHECK(HarmonicSolver::last_iterations() <= 1);
    (void)harmonic_extension(b, g, opt);
    CHECK(HarmonicSolver::last_iterations() > 1);
}

TEST_CASE("concurrent solves on a shared solver are identical to serial ones") {
    const auto g = GridSpec::build(6.4, 6.4, 128, 64);
    const HarmonicSolver solver(g, SolverOptions{});
    std::mt19937_64 rng(8);
    std::vector<std::vector<double>> inputs;
    for (int n = 0; n < 8; ++n) inputs.push_back(random_bottom(g, rng));
    std::vector<Field> serial;
    for (const auto& b : inputs) serial.push_back(solver.solve(b));
    std::vector<Field> parallel(inputs.size(), Field(g));
    std::vector<std::thread> threads;
    for (std::size_t n = 0; n < inputs.size(); ++n)
        threads.emplace_back([&, n] { parallel[n] = solver.solve(inputs[n]); });
    for (auto& t : threads) t.join();
    for (std::size_t n = 0; n < inputs.size(); ++n) CHECK(parallel[n] == serial[n]);
}

TEST_CASE("default_tolerance") {
    CHECK(default_tolerance(0.1, 0.1) == doctest::Approx(1e-5));
}

TEST_CASE("single interior node is the average of its neighbours") {
    const auto g = GridSpec::build(1, 2, 2, 2);
    const std::vector<double> bottom{0, 0.8, 0};
    const Field w = harmonic_extension(bottom, g, SolverOptions{});
    CHECK(w.at(1, 1) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("stencil_residual") {
    const auto g = GridSpec::build(2, 2, 8, 4);
    Field zero(g);
    CHECK(stencil_residual(zero) == 0.0);

    Field linear(g);
    for (int k = 0; k <= 4; ++k)
        for (int i = 0; i <= 8; ++i) linear.at(i, k) = g.x(i) + 2 * g.y(k);
    CHECK(stencil_residual(linear) <= 1e-13);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1, 1);
    Field noise(g);
    for (double& v : noise.values()) v = dist(rng);
    double expect = 0;
    const double h2 = g.dx() * g.dx();
    for (int k = 1; k < 4; ++k) {
        for (int i = 1; i < 8; ++i) {
            const double lap = noise.at(i - 1, k) + noise.at(i + 1, k) + noise.at(i, k - 1) +
                               noise.at(i, k + 1) - 4 * noise.at(i, k);
            expect = std::max(expect, std::abs(lap) / h2);
        }
    }
    CHECK(stencil_residual(noise) == doctest::Approx(expect).epsilon(1e-14));
}
