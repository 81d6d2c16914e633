#ifndef LEAPGRAD_ALF_HPP
#define LEAPGRAD_ALF_HPP

#include "leapgrad/field.hpp"
#include "leapgrad/types.hpp"

namespace leapgrad {

/// Damping coefficient eta for the v-update v_out = v_in + 2*eta*(u1 - v_in).
/// eta = 1 is the undamped integrator. The inverse divides by 1 - 2*eta, so
/// eta must stay strictly above 1/2.
class Damping {
public:
    explicit Damping(double eta);
    double eta() const { return eta_; }

private:
    double eta_;
};

/// One step plus the intermediates the gradient backends need: the midpoint
/// input k1 = z_in + v_in*h/2, its time s1, and u1 = f(k1, s1, theta).
struct StepEval {
    AugmentedState out;
    StateVec k1;
    StateVec u1;
    double s1 = 0.0;
};

/// Step-doubling verdict for one trial step of size h.
struct StepResult {
    AugmentedState state_out;  // result of the two half steps
    AugmentedState state_mid;  // after the first half step (enters the grid)
    double err_norm = 0.0;     // tolerance-scaled RMS error estimate
    int f_evals = 3;
};

/// Advances (z, v, t) by h == one application of the step map:
///   s1 = t + h/2, k1 = z + v*h/2, u1 = f(k1, s1, theta),
///   v_out = v + 2*eta*(u1 - v), z_out = k1 + v_out*h/2, t_out = t + h.
/// Exactly one field evaluation. Negative h integrates backward in time.
AugmentedState alf_step(const VectorField& field, const AugmentedState& in, double h,
                        std::span<const double> theta, Damping damping, EvalCounters& counters);

/// alf_step returning the intermediates.
StepEval alf_step_detailed(const VectorField& field, const AugmentedState& in, double h,
                           std::span<const double> theta, Damping damping,
                           EvalCounters& counters);

/// Exact algebraic inverse of alf_step: reconstructs state_in from state_out
/// and the same h, with one field evaluation.
///   s1 = t_out - h/2, k1 = z_out - v_out*h/2, u1 = f(k1, s1, theta),
///   v_in = (v_out - 2*eta*u1) / (1 - 2*eta), z_in = k1 - v_in*h/2.
/// At eta = 1 the v-line reduces to v_in = 2*u1 - v_out.
AugmentedState alf_inverse(const VectorField& field, const AugmentedState& out, double h,
                           std::span<const double> theta, Damping damping,
                           EvalCounters& counters);

/// Step-doubling error estimate: one full step of size h against two half
/// steps from the same input. err_norm is the RMS over z components of
/// (z_full - z_half) / (atol + rtol*max(|z_in|, |z_half|)); the accepted
/// candidate is the half-step result so every accepted sub-step remains an
/// exact step-map application. No local extrapolation.
StepResult estimate_error(const VectorField& field, const AugmentedState& in, double h,
                          std::span<const double> theta, Damping damping, double rtol,
                          double atol, EvalCounters& counters);

}  // namespace leapgrad

#endif
