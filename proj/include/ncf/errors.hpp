#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ncf {

/// Base for every error thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (x <= 0, Z outside the gap, ...).
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// A pole of the evaluated expression was hit.
class PoleError : public DomainError
{
  public:
    using DomainError::DomainError;
};

/// Numerical failure: a limit did not converge, a step size underflowed.
class NumericalError : public Error
{
  public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error
{
  public:
    using Error::Error;
};

/// Structurally valid input that violates one or more record invariants.
class ValidationError : public Error
{
  public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations))
    {
    }

    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v)
    {
        std::string out = "validation failed";
        for (const auto& s : v)
        {
            out += "\n  - ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

} // namespace ncf
