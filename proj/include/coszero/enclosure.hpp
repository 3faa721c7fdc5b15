#pragma once

#include <algorithm>
#include <cmath>

namespace coszero {

/// A closed interval [lower, upper] known to contain a real quantity.
struct Enclosure {
    double lower = 0, upper = 0;
    double mid() const { return (lower + upper) / 2; }
    double width() const { return upper - lower; }
    double magnitude() const { return std::max(std::abs(lower), std::abs(upper)); }
    bool contains(double x) const { return lower <= x && x <= upper; }
};

}  // namespace coszero
