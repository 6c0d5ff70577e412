#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace isocs {

/// A precondition on an argument was violated. The message names the precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative procedure ran out of budget before meeting its tolerance.
/// Carries the best estimate reached so callers can still report it.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, std::complex<double> partial, std::size_t terms)
        : std::runtime_error(what), partial_(partial), terms_(terms) {}

    std::complex<double> partial() const noexcept { return partial_; }
    std::size_t terms() const noexcept { return terms_; }

private:
    std::complex<double> partial_;
    std::size_t terms_;
};

/// A quadrature rule cannot integrate the requested integrand exactly.
class RuleTooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool ok, const char* precondition) {
    if (!ok) throw DomainError(std::string("precondition violated: ") + precondition);
}

}  // namespace detail
}  // namespace isocs
