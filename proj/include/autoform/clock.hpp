#pragma once

#include <chrono>
#include <cstdint>
#include <memory>

namespace autoform {

// Millisecond clock behind an interface so search budgets and rate limits
// can be exercised with a scripted clock in tests.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
};

class SteadyClock final : public Clock {
public:
    std::int64_t now_ms() override {
        using namespace std::chrono;
        return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
    }
};

class ManualClock final : public Clock {
public:
    explicit ManualClock(std::int64_t start = 0) : t_(start) {}
    std::int64_t now_ms() override { return t_; }
    void advance_ms(std::int64_t delta) { t_ += delta; }

private:
    std::int64_t t_;
};

}  // namespace autoform
