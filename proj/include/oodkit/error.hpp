// Copyright 2026 The oodkit Authors
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

#ifndef OODKIT__ERROR_HPP_
#define OODKIT__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace oodkit
{

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A parameter value lies outside its documented range (k, sigma, jitter, ...).
class ParameterError : public Error
{
public:
  using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// Malformed, truncated or unreadable input data.
class DataError : public Error
{
public:
  using Error::Error;
};

/// A numerical procedure failed (factorization, divergence).
class NumericalError : public Error
{
public:
  using Error::Error;
};

namespace detail
{
inline std::string shape_str(std::size_t rows, std::size_t cols)
{
  return std::to_string(rows) + "x" + std::to_string(cols);
}
}  // namespace detail

}  // namespace oodkit

#endif  // OODKIT__ERROR_HPP_
