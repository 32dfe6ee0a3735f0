// Copyright 2026 The mpbs Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace mpbs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed config, out-of-range knobs. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The model itself has no answer for the request. Maps to CLI exit code 3.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class PreconditionViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ZetaZero : public DomainError {
 public:
  ZetaZero() : DomainError("zeta is zero; use build_matrix_zeta_limit") {}
};

class DegenerateChannel : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoSolution : public DomainError {
 public:
  NoSolution(const std::string& what, double attained_min, double attained_max)
      : DomainError(what), attained_min_(attained_min), attained_max_(attained_max) {}

  double attained_min() const noexcept { return attained_min_; }
  double attained_max() const noexcept { return attained_max_; }

 private:
  double attained_min_;
  double attained_max_;
};

class StepTooCoarse : public DomainError {
 public:
  using DomainError::DomainError;
};

class RankDeficient : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotContraction : public DomainError {
 public:
  NotContraction(const std::string& what, double sigma1) : DomainError(what), sigma1_(sigma1) {}
  double sigma1() const noexcept { return sigma1_; }

 private:
  double sigma1_;
};

class TruncationTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

class VacuumPort : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientCounts : public DomainError {
 public:
  using DomainError::DomainError;
};

class MismatchedConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace mpbs
