// Copyright The hamrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HAMROM_ERRORS_HPP
#define HAMROM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamrom
{

// Base for every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

// Invalid construction parameters (grid size, time step, variant combinations, ...).
class ConfigError : public Error
{
public:
  using Error::Error;
};

// Base for failures of a numerical procedure on valid input.
class NumericalError : public Error
{
public:
  using Error::Error;
};

class PicardDivergence : public NumericalError
{
public:
  PicardDivergence(const std::string &what, double residual, std::size_t step)
    : NumericalError(what), residual_(residual), step_(step)
  {
  }

  double residual() const { return residual_; }
  std::size_t step() const { return step_; }

private:
  double residual_;
  std::size_t step_;
};

class RankDeficient : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class SingularInterpolation : public NumericalError
{
public:
  SingularInterpolation(const std::string &what, std::size_t step)
    : NumericalError(what), step_(step)
  {
  }

  // 1-based greedy step at which the interpolation matrix became singular.
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

class IoError : public Error
{
public:
  using Error::Error;
};

// Structurally invalid file content: bad magic, truncated section, overflow.
class FormatError : public IoError
{
public:
  using IoError::IoError;
};

namespace detail
{

inline void CheckDim(std::ptrdiff_t got, std::ptrdiff_t expected, const char *what)
{
  if (got != expected)
  {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace detail

}  // namespace hamrom

#endif  // HAMROM_ERRORS_HPP
