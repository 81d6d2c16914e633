#include "leapgrad/alf.hpp"

#include <cmath>
#include <stdexcept>

#include "leapgrad/errors.hpp"

namespace leapgrad {

Damping::Damping(double eta) : eta_(eta) {
    if (!(eta > 0.5) || !(eta <= 1.0))
        throw std::invalid_argument("damping eta must lie in (0.5, 1], got " +
                                    std::to_string(eta));
}

namespace {

void check_step_args(const AugmentedState& s, double h) {
    if (s.z.size() != s.v.size())
        throw std::invalid_argument("augmented state z and v dimensions differ");
    if (h == 0.0) throw std::invalid_argument("stepsize h must be nonzero");
    if (std::abs(h) < 1e-14 * (1.0 + std::abs(s.t))) throw NoProgressError(s.t, h);
    if (!all_finite(s.z) || !all_finite(s.v) || !std::isfinite(s.t))
        throw NonFiniteError("step input", s.t, s.z);
}

}  // namespace

StepEval alf_step_detailed(const VectorField& field, const AugmentedState& in, double h,
                           std::span<const double> theta, Damping damping,
                           EvalCounters& counters) {
    check_step_args(in, h);
    const double eta = damping.eta();
    const std::size_t n = in.z.size();

    StepEval ev;
    ev.s1 = in.t + h / 2.0;
    ev.k1.resize(n);
    for (std::size_t i = 0; i < n; ++i) ev.k1[i] = in.z[i] + in.v[i] * (h / 2.0);
    if (!all_finite(ev.k1)) throw NonFiniteError("alf_step k1", in.t, in.z);

    ev.u1 = field.eval(ev.k1, ev.s1, theta, counters);

    ev.out.t = in.t + h;
    ev.out.v.resize(n);
    ev.out.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev.out.v[i] = in.v[i] + 2.0 * eta * (ev.u1[i] - in.v[i]);
        ev.out.z[i] = ev.k1[i] + ev.out.v[i] * (h / 2.0);
    }
    if (!all_finite(ev.out.v)) throw NonFiniteError("alf_step v_out", in.t, in.z);
    if (!all_finite(ev.out.z)) throw NonFiniteError("alf_step z_out", in.t, in.z);
    return ev;
}

AugmentedState alf_step(const VectorField& field, const AugmentedState& in, double h,
                        std::span<const double> theta, Damping damping,
                        EvalCounters& counters) {
    return alf_step_detailed(field, in, h, theta, damping, counters).out;
}

AugmentedState alf_inverse(const VectorField& field, const AugmentedState& out, double h,
                           std::span<const double> theta, Damping damping,
                           EvalCounters& counters) {
    check_step_args(out, h);
    const double eta = damping.eta();
    const std::size_t n = out.z.size();

    const double s1 = out.t - h / 2.0;
    StateVec k1(n);
    for (std::size_t i = 0; i < n; ++i) k1[i] = out.z[i] - out.v[i] * (h / 2.0);
    if (!all_finite(k1)) throw NonFiniteError("alf_inverse k1", out.t, out.z);

    const StateVec u1 = field.eval(k1, s1, theta, counters);

    AugmentedState in;
    in.t = out.t - h;
    in.v.resize(n);
    in.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.v[i] = (out.v[i] - 2.0 * eta * u1[i]) / (1.0 - 2.0 * eta);
        in.z[i] = k1[i] - in.v[i] * (h / 2.0);
    }
    if (!all_finite(in.v)) throw NonFiniteError("alf_inverse v_in", out.t, out.z);
    if (!all_finite(in.z)) throw NonFiniteError("alf_inverse z_in", out.t, out.z);
    return in;
}

StepResult estimate_error(const VectorField& field, const AugmentedState& in, double h,
                          std::span<const double> theta, Damping damping, double rtol,
                          double atol, EvalCounters& counters) {
    const AugmentedState full = alf_step(field, in, h, theta, damping, counters);
    const AugmentedState mid = alf_step(field, in, h / 2.0, theta, damping, counters);
    const AugmentedState half = alf_step(field, mid, h / 2.0, theta, damping, counters);

    double sum = 0.0;
    const std::size_t n = in.z.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = atol + rtol * std::max(std::abs(in.z[i]), std::abs(half.z[i]));
        const double e = (full.z[i] - half.z[i]) / scale;
        sum += e * e;
    }

    StepResult res;
    res.err_norm = std::sqrt(sum / static_cast<double>(n));
    res.state_out = half;
    res.state_mid = mid;
    res.f_evals = 3;
    return res;
}

}  // namespace leapgrad
