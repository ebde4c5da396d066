#pragma once

#include <stdexcept>
#include <string>

namespace molnar {

/// Input outside the mathematical domain of an operation (bad parameter,
/// argument off the strip, point on the branch cut, ...).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// The requested value exists but cannot be computed to the promised
/// accuracy in double precision (degenerate modulus, strip boundary, ...).
class precision_loss_error : public std::runtime_error {
public:
    explicit precision_loss_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative scheme failed to settle (boundary-limit extrapolation, ...).
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematically impossible state was reached; indicates a bug in a
/// numerical kernel rather than bad input.
class consistency_error : public std::logic_error {
public:
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace molnar
