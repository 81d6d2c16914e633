#ifndef LEAPGRAD_TYPES_HPP
#define LEAPGRAD_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace leapgrad {

/// ODE state z(t). Components are plain doubles; the dimension is fixed per
/// problem instance.
using StateVec = std::vector<double>;

/// Flat parameter vector theta. For structured fields (e.g. an MLP) the
/// flattening order is fixed and documented by the field.
using ParamVec = std::vector<double>;

/// The tuple (z, v, t) advanced by the asynchronous leapfrog step, where v is
/// the running approximation of dz/dt.
struct AugmentedState {
    StateVec z;
    StateVec v;
    double t = 0.0;
};

/// Caller-owned cost counters. Field evaluations and vector-Jacobian products
/// charge themselves here; there is no global state.
struct EvalCounters {
    std::int64_t f_evals = 0;        // number of field evaluations
    std::int64_t f_eval_units = 0;   // accumulated eval_units (N_f * N_z per eval)
    std::int64_t vjp_evals = 0;      // number of vjp_z / vjp_theta calls
};

inline bool all_finite(std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

inline double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double l2_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace leapgrad

#endif
