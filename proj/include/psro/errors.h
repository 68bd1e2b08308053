// Copyright 2026 The psro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSRO_ERRORS_H_
#define PSRO_ERRORS_H_

#include <stdexcept>
#include <string>

namespace psro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments, shapes or configs.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Valid input outside what a routine supports (e.g. Nash LP on a 3-player
// game).
class Unsupported : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A reproduced result disagrees with its reference.
class Mismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace psro

#endif  // PSRO_ERRORS_H_
