#pragma once

#include <vector>

#include "fracpme/error.hpp"
#include "fracpme/scheme.hpp"

namespace fracpme::testing {

inline RunConfig make_config(const GridSpec& grid, double final_time, int steps, const Phi& phi,
                             const InitialData& data, SolverOptions solver = {}) {
    return RunConfig{grid, TimeSpec::make(final_time, steps), phi, data, solver, {}, std::nullopt,
                     false, false};
}

template <class F>
ErrorCode error_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(-1);
}

}  // namespace fracpme::testing
