#ifndef LEAPGRAD_MEMORY_HPP
#define LEAPGRAD_MEMORY_HPP

#include <cassert>
#include <cstdint>

namespace leapgrad {

/// Abstract storage accounting in "state units" (one unit = one stored scalar
/// slot). A stored StateVec costs N_z units, an AugmentedState 2*N_z, and a
/// retained field-evaluation graph eval_units = N_f*N_z. The meter only
/// tracks what the algorithms explicitly allocate; it is how the memory rows
/// of the method comparison are measured, not a heap profiler.
class MemoryMeter {
public:
    void allocate(std::int64_t units) {
        current_ += units;
        if (current_ > peak_) peak_ = current_;
    }

    void release(std::int64_t units) {
        current_ -= units;
        assert(current_ >= 0);
    }

    std::int64_t current() const { return current_; }
    std::int64_t peak() const { return peak_; }

private:
    std::int64_t current_ = 0;
    std::int64_t peak_ = 0;
};

/// RAII helper for transient allocations (graphs that are freed as soon as
/// the evaluation result has been consumed).
class ScopedUnits {
public:
    ScopedUnits(MemoryMeter* meter, std::int64_t units) : meter_(meter), units_(units) {
        if (meter_) meter_->allocate(units_);
    }
    ~ScopedUnits() {
        if (meter_) meter_->release(units_);
    }
    ScopedUnits(const ScopedUnits&) = delete;
    ScopedUnits& operator=(const ScopedUnits&) = delete;

private:
    MemoryMeter* meter_;
    std::int64_t units_;
};

}  // namespace leapgrad

#endif
