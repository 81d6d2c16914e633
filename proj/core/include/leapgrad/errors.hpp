#ifndef LEAPGRAD_ERRORS_HPP
#define LEAPGRAD_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace leapgrad {

/// Base class for runtime failures of an integration or gradient computation.
/// Contract violations (bad dimensions, invalid configuration) throw
/// std::invalid_argument instead.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A non-finite value appeared. Carries the last good time and state so the
/// caller can report where the dynamics blew up.
class NonFiniteError : public SolverError {
public:
    NonFiniteError(const std::string& where, double t, std::vector<double> z)
        : SolverError("non-finite value in " + where + " at t=" + std::to_string(t)),
          where_(where), t_(t), z_(std::move(z)) {}

    const std::string& where() const { return where_; }
    double t() const { return t_; }
    const std::vector<double>& last_state() const { return z_; }

private:
    std::string where_;
    double t_;
    std::vector<double> z_;
};

/// The adaptive loop rejected more trials for one step than
/// max_rejects_per_step allows.
class ToleranceError : public SolverError {
public:
    ToleranceError(double t, int rejects)
        : SolverError("tolerance unreachable at t=" + std::to_string(t) + " after " +
                      std::to_string(rejects) + " rejected trials"),
          t_(t) {}
    double t() const { return t_; }

private:
    double t_;
};

/// The step controller drove |h| below h_min away from the interval end.
class StiffnessError : public SolverError {
public:
    StiffnessError(double t, double h)
        : SolverError("stepsize " + std::to_string(h) + " fell below h_min at t=" +
                      std::to_string(t)),
          t_(t), h_(h) {}
    double t() const { return t_; }
    double h() const { return h_; }

private:
    double t_;
    double h_;
};

/// |h| is too small relative to |t| for t + h to make progress.
class NoProgressError : public SolverError {
public:
    NoProgressError(double t, double h)
        : SolverError("degenerate stepsize " + std::to_string(h) + " at t=" + std::to_string(t)) {}
};

}  // namespace leapgrad

#endif
