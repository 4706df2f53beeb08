#pragma once

#include <stdexcept>
#include <string>

namespace elk {

// Thrown when an iterative numeric procedure fails to reach its target;
// carries the best estimate achieved and the remaining error bound.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

class unsupported_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace elk
