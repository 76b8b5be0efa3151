#pragma once

#include <stdexcept>
#include <string>

namespace cesaro {

/// A numerical routine (quadrature, root finding) failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cesaro
