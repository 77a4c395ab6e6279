// Copyright 2026 The objseq Authors.
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

#ifndef OBJSEQ_ERROR_H_
#define OBJSEQ_ERROR_H_

#include <stdexcept>
#include <string>

namespace objseq {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input data is structurally malformed or violates a declared invariant.
// `where` names the offending file and field, e.g. "scene.json:proposals[3]".
class ValidationError : public Error {
 public:
  ValidationError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// A caller violated an operation's precondition (bad index, size mismatch).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace objseq

#endif  // OBJSEQ_ERROR_H_
