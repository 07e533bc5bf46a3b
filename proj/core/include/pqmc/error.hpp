// Copyright 2026 The PQMC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PQMC_ERROR_HPP
#define PQMC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

/**
 * \file
 * \brief Exception types raised by the library.
 */

namespace pqmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested dimension exceeds a built-in table (e.g. Sobol' direction numbers).
class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix is not symmetric positive definite.
class CovarianceError : public Error {
 public:
  using Error::Error;
};

/// Input size exceeds a configured memory or cost limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Every importance weight is zero (all log-weights are -inf) or non-finite.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

/// Invalid mixture or target definition.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Covariance adaptation produced an unusable matrix.
class AdaptationError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid run or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A population run stopped early; carries the failing iteration (1-based).
class RunAbortedError : public Error {
 public:
  RunAbortedError(std::size_t iteration, const std::string& reason)
      : Error("run aborted at iteration " + std::to_string(iteration) + ": " + reason),
        iteration_{iteration} {}

  [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace pqmc

#endif
