#pragma once

#include <stdexcept>
#include <string>

namespace perpput {

/// Base class for all numerical failures raised by this library.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An integrand, RHS or model formula produced NaN/Inf.
class NonFiniteError : public NumericsError {
public:
    explicit NonFiniteError(const std::string& msg) : NumericsError(msg) {}
};

/// Iteration/subdivision budget exhausted before reaching the tolerance.
class BudgetError : public NumericsError {
public:
    explicit BudgetError(const std::string& msg) : NumericsError(msg) {}
};

/// Root bracketing failed: endpoints have the same sign.
class NoBracketError : public NumericsError {
public:
    explicit NoBracketError(const std::string& msg) : NumericsError(msg) {}
};

/// Argument outside the admissible domain of a model or formula.
class DomainError : public NumericsError {
public:
    explicit DomainError(const std::string& msg) : NumericsError(msg) {}
};

/// Model parameters violate the admissibility assumptions.
class ModelError : public NumericsError {
public:
    explicit ModelError(const std::string& msg) : NumericsError(msg) {}
};

/// Grid too coarse or index unusable for finite-difference checks.
class GridError : public NumericsError {
public:
    explicit GridError(const std::string& msg) : NumericsError(msg) {}
};

}  // namespace perpput
