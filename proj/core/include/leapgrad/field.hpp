#ifndef LEAPGRAD_FIELD_HPP
#define LEAPGRAD_FIELD_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "leapgrad/types.hpp"

namespace leapgrad {

/// A parametric vector field f(z, t, theta) with reverse-mode
/// vector-Jacobian products w.r.t. z and theta.
///
/// Fields are immutable after construction and hold no evaluation state, so
/// one instance may serve any number of concurrent integrations. All cost
/// accounting goes through the caller-owned EvalCounters.
class VectorField {
public:
    virtual ~VectorField() = default;

    virtual int dim_state() const = 0;
    virtual int dim_params() const = 0;

    /// Abstract cost of one evaluation in state units (N_f * N_z).
    virtual std::int64_t eval_units() const = 0;

    /// Computation-graph depth of one evaluation (N_f, the layer count).
    virtual std::int64_t depth_units() const = 0;

    /// f(z, t, theta). Validates dimensions, charges the counters, and
    /// rejects non-finite outputs.
    StateVec eval(std::span<const double> z, double t, std::span<const double> theta,
                  EvalCounters& counters) const;

    /// (df/dz)^T a evaluated at (z, t, theta).
    StateVec vjp_z(std::span<const double> z, double t, std::span<const double> theta,
                   std::span<const double> a, EvalCounters& counters) const;

    /// (df/dtheta)^T a evaluated at (z, t, theta).
    ParamVec vjp_theta(std::span<const double> z, double t, std::span<const double> theta,
                       std::span<const double> a, EvalCounters& counters) const;

protected:
    virtual void eval_impl(std::span<const double> z, double t, std::span<const double> theta,
                           std::span<double> out, EvalCounters& counters) const = 0;
    virtual void vjp_z_impl(std::span<const double> z, double t, std::span<const double> theta,
                            std::span<const double> a, std::span<double> out,
                            EvalCounters& counters) const = 0;
    virtual void vjp_theta_impl(std::span<const double> z, double t,
                                std::span<const double> theta, std::span<const double> a,
                                std::span<double> out, EvalCounters& counters) const = 0;

    /// Composite fields that delegate to an inner field return false so only
    /// the inner calls are charged.
    virtual bool charges_counters() const { return true; }

private:
    void check_args(std::span<const double> z, std::span<const double> theta) const;
};

/// f(z, t, theta) = alpha * z with theta = [alpha]. The integration and
/// gradient test bed: the flow and the loss gradients have closed forms.
class LinearScalarField final : public VectorField {
public:
    explicit LinearScalarField(int dim = 1);

    int dim_state() const override { return dim_; }
    int dim_params() const override { return 1; }
    std::int64_t eval_units() const override { return dim_; }  // N_f = 1
    std::int64_t depth_units() const override { return 1; }

protected:
    void eval_impl(std::span<const double> z, double t, std::span<const double> theta,
                   std::span<double> out, EvalCounters& counters) const override;
    void vjp_z_impl(std::span<const double> z, double t, std::span<const double> theta,
                    std::span<const double> a, std::span<double> out,
                    EvalCounters& counters) const override;
    void vjp_theta_impl(std::span<const double> z, double t, std::span<const double> theta,
                        std::span<const double> a, std::span<double> out,
                        EvalCounters& counters) const override;

private:
    int dim_;
};

/// A small fully connected tanh network f(z, t, theta). The time t is
/// appended to the input vector, so the field is genuinely time dependent.
///
/// widths = {dim_state, hidden..., dim_state}; the network input dimension is
/// widths.front() + 1 because of the time slot. Parameters are flattened
/// layer-major: for each layer, row-major weight matrix first, then the bias.
/// VJPs run a per-call tape: the forward pass caches layer activations, the
/// backward pass replays them in reverse.
class MlpField final : public VectorField {
public:
    MlpField(std::vector<int> widths, std::uint64_t seed);

    int dim_state() const override { return widths_.front(); }
    int dim_params() const override { return static_cast<int>(n_params_); }
    std::int64_t eval_units() const override;
    std::int64_t depth_units() const override { return static_cast<std::int64_t>(widths_.size()) - 1; }

    const std::vector<int>& widths() const { return widths_; }
    std::uint64_t seed() const { return seed_; }

    /// Deterministic default parameters for this architecture and seed
    /// (uniform in +-1/sqrt(fan_in), drawn from a seeded mt19937_64).
    ParamVec init_params() const;

    /// Writes widths, seed and a flat parameter vector as CSV; load restores
    /// the field and parameters exactly (17 significant digits round-trip).
    void save_weights(const std::string& path, std::span<const double> theta) const;
    static std::pair<MlpField, ParamVec> load_weights(const std::string& path);

protected:
    void eval_impl(std::span<const double> z, double t, std::span<const double> theta,
                   std::span<double> out, EvalCounters& counters) const override;
    void vjp_z_impl(std::span<const double> z, double t, std::span<const double> theta,
                    std::span<const double> a, std::span<double> out,
                    EvalCounters& counters) const override;
    void vjp_theta_impl(std::span<const double> z, double t, std::span<const double> theta,
                        std::span<const double> a, std::span<double> out,
                        EvalCounters& counters) const override;

private:
    struct Tape;  // layer activations cached by the forward pass
    void forward(std::span<const double> z, double t, std::span<const double> theta,
                 Tape* tape, std::span<double> out) const;

    std::vector<int> widths_;
    std::uint64_t seed_;
    std::size_t n_params_;
};

}  // namespace leapgrad

#endif
