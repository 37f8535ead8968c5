// Copyright 2026 The mfland Authors. All Rights Reserved.
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

namespace mfland {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvalidSelection : public Error {
 public:
  using Error::Error;
};

class NotCritical : public Error {
 public:
  using Error::Error;
};

class NotASaddle : public Error {
 public:
  using Error::Error;
};

class SingularGroupElement : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class StiffnessFailure : public Error {
 public:
  using Error::Error;
};

/// The numerical rank of W sits on the tolerance boundary; both candidates
/// are reported.
class RankAmbiguous : public Error {
 public:
  RankAmbiguous(int lower, int upper)
      : Error("rank of W is ambiguous at the requested tolerance: " +
              std::to_string(lower) + " or " + std::to_string(upper)),
        lower_(lower),
        upper_(upper) {}

  int lower() const { return lower_; }
  int upper() const { return upper_; }

 private:
  int lower_;
  int upper_;
};

}  // namespace mfland
