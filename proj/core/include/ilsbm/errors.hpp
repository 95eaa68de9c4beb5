#pragma once

#include <stdexcept>
#include <string>

namespace ilsbm {

// Input data violates a format or model invariant (bad CSV row, segment
// lengths not summing to the horizon, overlapping intervals, ...).
// The CLI maps this to exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation produced NaN / infinities or otherwise lost numerical
// meaning. The CLI maps this to exit code 2.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ilsbm
