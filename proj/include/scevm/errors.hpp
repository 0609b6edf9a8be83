// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_ERRORS_HPP
#define SCEVM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scevm {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of a function (e.g. log_gamma(0)).
class domain_error : public error {
public:
    using error::error;
};

/// Result not representable, or the evaluation lost too many digits to cancellation.
class range_error : public error {
public:
    using error::error;
};

/// Argument valid mathematically but outside what the implementation covers.
class unsupported_domain : public error {
public:
    using error::error;
};

/// SystemConfig that violates one of its invariants or has no implementation.
class unsupported_configuration : public error {
public:
    using error::error;
};

/// The requested moment does not exist; the EVM is infinite.
class divergent_moment : public error {
public:
    using error::error;
};

class validation_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

/// Quadrature stopped before meeting its tolerance; carries the best estimate.
class accuracy_not_reached : public error {
public:
    accuracy_not_reached(const std::string& what, double best_estimate, double abs_error_estimate)
        : error(what), best_estimate_(best_estimate), abs_error_estimate_(abs_error_estimate) {}

    [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }
    [[nodiscard]] double abs_error_estimate() const noexcept { return abs_error_estimate_; }

private:
    double best_estimate_;
    double abs_error_estimate_;
};

} // namespace scevm

#endif // SCEVM_ERRORS_HPP
