#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpdiff {

//! Invalid user input. `field()` names the offending configuration field.
class ValidationError : public std::invalid_argument
{
public:
  ValidationError(std::string field, const std::string& msg)
    : std::invalid_argument(field + ": " + msg)
    , field_(std::move(field))
  {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

class QuadratureError : public std::runtime_error
{
public:
  QuadratureError(const std::string& msg, double value, double error)
    : std::runtime_error(msg + " (value " + std::to_string(value) +
                         ", error estimate " + std::to_string(error) + ")")
    , value_(value)
    , error_(error)
  {}
  double value() const { return value_; }
  double error() const { return error_; }

private:
  double value_;
  double error_;
};

class SimulationError : public std::runtime_error
{
public:
  SimulationError(const std::string& msg, std::size_t step)
    : std::runtime_error(msg + " at substep " + std::to_string(step))
    , step_(step)
  {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

class GridResolutionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace jumpdiff
