#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace reslab {

/// Base class for every failure raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the domain an operation is defined on.
class domain_error : public error {
public:
    using error::error;
};

/// A precondition on the inputs (class membership, parameter range) fails.
class contract_error : public error {
public:
    using error::error;
};

/// A map could not be evaluated (pole, non-finite value).
class evaluation_error : public error {
public:
    evaluation_error(const std::string& what, std::complex<double> at)
        : error(what), point(at) {}
    std::complex<double> point;
};

/// An iterative method failed; carries the residual history.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, std::vector<double> residuals)
        : error(what), trace(std::move(residuals)) {}
    std::vector<double> trace;
};

}  // namespace reslab
