#pragma once

#include <cstdint>
#include <string>

#include "autoform/errors.hpp"

namespace autoform {

// Exact proved/attempted ratio; rendering works in integer arithmetic so
// reported percentages never drift with floating point.
struct Rate {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    // Percent with one decimal, rounded half-up: Rate{782,3363} -> "23.3%".
    std::string percent() const {
        if (denominator == 0) {
            throw Error("rate with zero denominator");
        }
        // value in tenths of a percent, half-up
        const std::uint64_t tenths =
            (numerator * 2000 + denominator) / (2 * denominator);
        return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
    }
};

}  // namespace autoform
