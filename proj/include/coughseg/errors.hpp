// Copyright 2026 The coughseg Authors.
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

#ifndef COUGHSEG_ERRORS_HPP_
#define COUGHSEG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace coughseg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// RIFF/WAVE container is malformed or truncated.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Container is readable but the codec is not PCM/IEEE-float.
class UnsupportedCodecError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (bad label, ragged grid, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Fleiss' kappa is undefined because expected agreement equals 1.
class DegenerateKappaError : public Error {
 public:
  using Error::Error;
};

}  // namespace coughseg

#endif  // COUGHSEG_ERRORS_HPP_
