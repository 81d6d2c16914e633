#include "leapgrad/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "leapgrad/errors.hpp"

namespace leapgrad {

void VectorField::check_args(std::span<const double> z, std::span<const double> theta) const {
    if (static_cast<int>(z.size()) != dim_state())
        throw std::invalid_argument("state dimension " + std::to_string(z.size()) +
                                    " does not match field dim_state " +
                                    std::to_string(dim_state()));
    if (static_cast<int>(theta.size()) != dim_params())
        throw std::invalid_argument("parameter dimension " + std::to_string(theta.size()) +
                                    " does not match field dim_params " +
                                    std::to_string(dim_params()));
}

StateVec VectorField::eval(std::span<const double> z, double t, std::span<const double> theta,
                           EvalCounters& counters) const {
    check_args(z, theta);
    StateVec out(dim_state());
    eval_impl(z, t, theta, out, counters);
    if (charges_counters()) {
        counters.f_evals += 1;
        counters.f_eval_units += eval_units();
    }
    if (!all_finite(out)) throw NonFiniteError("field evaluation", t, StateVec(z.begin(), z.end()));
    return out;
}

StateVec VectorField::vjp_z(std::span<const double> z, double t, std::span<const double> theta,
                            std::span<const double> a, EvalCounters& counters) const {
    check_args(z, theta);
    if (a.size() != z.size())
        throw std::invalid_argument("cotangent dimension does not match dim_state");
    StateVec out(dim_state());
    vjp_z_impl(z, t, theta, a, out, counters);
    if (charges_counters()) counters.vjp_evals += 1;
    if (!all_finite(out)) throw NonFiniteError("vjp_z", t, StateVec(z.begin(), z.end()));
    return out;
}

ParamVec VectorField::vjp_theta(std::span<const double> z, double t, std::span<const double> theta,
                                std::span<const double> a, EvalCounters& counters) const {
    check_args(z, theta);
    if (static_cast<int>(a.size()) != dim_state())
        throw std::invalid_argument("cotangent dimension does not match dim_state");
    ParamVec out(dim_params());
    vjp_theta_impl(z, t, theta, a, out, counters);
    if (charges_counters()) counters.vjp_evals += 1;
    if (!all_finite(out)) throw NonFiniteError("vjp_theta", t, StateVec(z.begin(), z.end()));
    return out;
}

// ---------------------------------------------------------------------------
// LinearScalarField

LinearScalarField::LinearScalarField(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("LinearScalarField dimension must be positive");
}

void LinearScalarField::eval_impl(std::span<const double> z, double, std::span<const double> theta,
                                  std::span<double> out, EvalCounters&) const {
    const double alpha = theta[0];
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = alpha * z[i];
}

void LinearScalarField::vjp_z_impl(std::span<const double>, double, std::span<const double> theta,
                                   std::span<const double> a, std::span<double> out,
                                   EvalCounters&) const {
    const double alpha = theta[0];
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i];
}

void LinearScalarField::vjp_theta_impl(std::span<const double> z, double,
                                       std::span<const double>, std::span<const double> a,
                                       std::span<double> out, EvalCounters&) const {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += a[i] * z[i];
    out[0] = s;
}

// ---------------------------------------------------------------------------
// MlpField

namespace {

std::size_t param_count(const std::vector<int>& widths) {
    std::size_t n = 0;
    int in = widths.front() + 1;  // time appended to the input
    for (std::size_t l = 1; l < widths.size(); ++l) {
        n += static_cast<std::size_t>(widths[l]) * in + widths[l];
        in = widths[l];
    }
    return n;
}

// mt19937_64 output mapped to [-1, 1); bit-reproducible across platforms,
// unlike std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

struct MlpField::Tape {
    // inputs[l] is the input vector of layer l; preact[l] its affine output
    // before the activation (last layer has no activation).
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> preact;
};

MlpField::MlpField(std::vector<int> widths, std::uint64_t seed)
    : widths_(std::move(widths)), seed_(seed) {
    if (widths_.size() < 2) throw std::invalid_argument("MlpField needs at least two widths");
    for (int w : widths_)
        if (w < 1) throw std::invalid_argument("MlpField widths must be positive");
    if (widths_.front() != widths_.back())
        throw std::invalid_argument("MlpField first and last widths must equal dim_state");
    n_params_ = param_count(widths_);
}

std::int64_t MlpField::eval_units() const {
    return depth_units() * static_cast<std::int64_t>(dim_state());
}

ParamVec MlpField::init_params() const {
    ParamVec theta(n_params_);
    std::mt19937_64 rng(seed_);
    std::size_t k = 0;
    int in = widths_.front() + 1;
    for (std::size_t l = 1; l < widths_.size(); ++l) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(in));
        const std::size_t n_w = static_cast<std::size_t>(widths_[l]) * in;
        for (std::size_t i = 0; i < n_w; ++i) theta[k++] = scale * unit_draw(rng);
        for (int i = 0; i < widths_[l]; ++i) theta[k++] = scale * unit_draw(rng);
        in = widths_[l];
    }
    return theta;
}

void MlpField::forward(std::span<const double> z, double t, std::span<const double> theta,
                       Tape* tape, std::span<double> out) const {
    std::vector<double> x(z.begin(), z.end());
    x.push_back(t);

    std::size_t k = 0;
    int in = static_cast<int>(x.size());
    const std::size_t n_layers = widths_.size() - 1;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int rows = widths_[l + 1];
        std::vector<double> y(rows);
        const double* w = theta.data() + k;
        const double* b = theta.data() + k + static_cast<std::size_t>(rows) * in;
        for (int r = 0; r < rows; ++r) {
            double s = b[r];
            for (int c = 0; c < in; ++c) s += w[r * in + c] * x[c];
            y[r] = s;
        }
        k += static_cast<std::size_t>(rows) * in + rows;
        if (tape) {
            tape->inputs.push_back(x);
            tape->preact.push_back(y);
        }
        if (l + 1 < n_layers)
            for (double& v : y) v = std::tanh(v);
        x = std::move(y);
        in = rows;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i];
}

void MlpField::eval_impl(std::span<const double> z, double t, std::span<const double> theta,
                         std::span<double> out, EvalCounters&) const {
    forward(z, t, theta, nullptr, out);
}

void MlpField::vjp_z_impl(std::span<const double> z, double t, std::span<const double> theta,
                          std::span<const double> a, std::span<double> out,
                          EvalCounters&) const {
    Tape tape;
    std::vector<double> y(dim_state());
    forward(z, t, theta, &tape, y);

    // Backward sweep: propagate the cotangent through each layer; weights are
    // constants here, only the input adjoint is carried.
    std::vector<double> grad(a.begin(), a.end());
    const std::size_t n_layers = widths_.size() - 1;
    std::size_t layer_base = n_params_;
    for (std::size_t l = n_layers; l-- > 0;) {
        const int rows = widths_[l + 1];
        const int in = static_cast<int>(tape.inputs[l].size());
        layer_base -= static_cast<std::size_t>(rows) * in + rows;
        const double* w = theta.data() + layer_base;

        if (l + 1 < n_layers) {
            for (int r = 0; r < rows; ++r) {
                const double th = std::tanh(tape.preact[l][r]);
                grad[r] *= 1.0 - th * th;
            }
        }
        std::vector<double> gin(in, 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < in; ++c) gin[c] += w[r * in + c] * grad[r];
        grad = std::move(gin);
    }
    // Drop the time slot: d/dz only.
    for (int i = 0; i < dim_state(); ++i) out[i] = grad[i];
}

void MlpField::vjp_theta_impl(std::span<const double> z, double t, std::span<const double> theta,
                              std::span<const double> a, std::span<double> out,
                              EvalCounters&) const {
    Tape tape;
    std::vector<double> y(dim_state());
    forward(z, t, theta, &tape, y);

    std::vector<double> grad(a.begin(), a.end());
    const std::size_t n_layers = widths_.size() - 1;
    std::size_t layer_base = n_params_;
    for (std::size_t l = n_layers; l-- > 0;) {
        const int rows = widths_[l + 1];
        const int in = static_cast<int>(tape.inputs[l].size());
        layer_base -= static_cast<std::size_t>(rows) * in + rows;
        const double* w = theta.data() + layer_base;
        double* gw = out.data() + layer_base;
        double* gb = gw + static_cast<std::size_t>(rows) * in;

        if (l + 1 < n_layers) {
            for (int r = 0; r < rows; ++r) {
                const double th = std::tanh(tape.preact[l][r]);
                grad[r] *= 1.0 - th * th;
            }
        }
        const std::vector<double>& x = tape.inputs[l];
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < in; ++c) gw[r * in + c] = grad[r] * x[c];
            gb[r] = grad[r];
        }
        std::vector<double> gin(in, 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < in; ++c) gin[c] += w[r * in + c] * grad[r];
        grad = std::move(gin);
    }
}

void MlpField::save_weights(const std::string& path, std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != dim_params())
        throw std::invalid_argument("save_weights: parameter dimension mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "widths";
    for (int w : widths_) out << "," << w;
    out << "\nseed," << seed_ << "\n";
    char buf[64];
    for (double v : theta) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << "\n";
    }
}

std::pair<MlpField, ParamVec> MlpField::load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("widths,", 0) != 0)
        throw std::runtime_error(path + ": expected widths header");
    std::vector<int> widths;
    {
        std::stringstream ss(line.substr(7));
        std::string tok;
        while (std::getline(ss, tok, ',')) widths.push_back(std::stoi(tok));
    }
    if (!std::getline(in, line) || line.rfind("seed,", 0) != 0)
        throw std::runtime_error(path + ": expected seed header");
    const std::uint64_t seed = std::stoull(line.substr(5));

    MlpField field(widths, seed);
    ParamVec theta;
    theta.reserve(param_count(widths));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        theta.push_back(std::stod(line));
    }
    if (static_cast<int>(theta.size()) != field.dim_params())
        throw std::runtime_error(path + ": parameter count does not match widths");
    return {std::move(field), std::move(theta)};
}

}  // namespace leapgrad
