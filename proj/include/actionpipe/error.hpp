/* Copyright 2026 The ActionPipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ACTIONPIPE_ERROR_HPP_
#define ACTIONPIPE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace actionpipe {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad extent, bad k, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed: wrong magic, truncated, duplicate key.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input/output failure on the filesystem.
class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename E = InvalidArgument>
inline void require(bool condition, const std::string& message) {
  if (!condition) throw E(message);
}

}  // namespace detail
}  // namespace actionpipe

#endif  // ACTIONPIPE_ERROR_HPP_
