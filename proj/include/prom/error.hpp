// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_ERROR_HPP
#define PROM_ERROR_HPP

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace prom
{

// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

// A parameter lies outside the admissible set of an operator.
class DomainError : public Error
{
public:
  using Error::Error;
};

// Factorization of a matrix that must be positive definite failed.
class DefinitenessError : public Error
{
public:
  using Error::Error;
};

class InsufficientData : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

class SolverFailure : public Error
{
public:
  SolverFailure(const std::string &what, int iterations, double worst_residual)
    : Error(what), iterations_(iterations), worst_residual_(worst_residual)
  {
  }
  int iterations() const { return iterations_; }
  double worst_residual() const { return worst_residual_; }

private:
  int iterations_;
  double worst_residual_;
};

// Warning sink. Defaults to stderr; tests and the CLI may redirect it.
inline std::function<void(const std::string &)> &warning_sink()
{
  static std::function<void(const std::string &)> sink = [](const std::string &msg)
  { std::cerr << "warning: " << msg << '\n'; };
  return sink;
}

inline void warn(const std::string &msg)
{
  if (warning_sink())
  {
    warning_sink()(msg);
  }
}

}  // namespace prom

#endif  // PROM_ERROR_HPP
