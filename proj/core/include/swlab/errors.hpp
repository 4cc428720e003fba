// Copyright 2026 The swlab authors
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

namespace swlab {

// Base for every error the library raises. `kind()` is a stable
// machine-readable tag used by the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& m) : Error("invalid_argument", m) {}
};

class BallTooLarge : public Error {
 public:
  explicit BallTooLarge(const std::string& m) : Error("ball_too_large", m) {}
};

class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string& m) : Error("too_large", m) {}
};

class DegenerateTail : public Error {
 public:
  explicit DegenerateTail(const std::string& m) : Error("degenerate_tail", m) {}
};

class Divergent : public Error {
 public:
  explicit Divergent(const std::string& m) : Error("divergent", m) {}
};

class QuadratureFailure : public Error {
 public:
  explicit QuadratureFailure(const std::string& m) : Error("quadrature_failure", m) {}
};

class DomainExceeded : public Error {
 public:
  explicit DomainExceeded(const std::string& m) : Error("domain_exceeded", m) {}
};

class NoBracket : public Error {
 public:
  explicit NoBracket(const std::string& m) : Error("no_bracket", m) {}
};

class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& m) : Error("convergence_failure", m) {}
};

class InvalidSample : public Error {
 public:
  explicit InvalidSample(const std::string& m) : Error("invalid_sample", m) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& m) : Error("precision", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace swlab
