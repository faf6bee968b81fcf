// Copyright 2026 The drivescope Authors
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

namespace drivescope {

// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: unknown keys, out-of-range parameters, malformed rules.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad input data: schema violations, unreadable files, empty results.
class InputError : public Error {
 public:
  using Error::Error;
};

// A channel required by an operation is absent from the trip.
class MissingChannelError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace drivescope
