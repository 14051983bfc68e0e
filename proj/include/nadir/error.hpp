// Copyright 2026 The nadir authors
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

#ifndef NADIR__ERROR_HPP_
#define NADIR__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nadir
{

/// Error categories. Values match the status codes of the C API so the
/// boundary layer can translate without a lookup table.
enum class ErrorCode {
  io = 1,       // unreadable or unwritable file
  parse = 2,    // malformed input data
  config = 3,   // invalid or incomplete scene configuration
  invalid = 4,  // argument violates a documented precondition
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message)
  : std::runtime_error(message), code_(code)
  {
  }

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_io(const std::string & m) { throw Error(ErrorCode::io, m); }
[[noreturn]] inline void throw_parse(const std::string & m) { throw Error(ErrorCode::parse, m); }
[[noreturn]] inline void throw_config(const std::string & m) { throw Error(ErrorCode::config, m); }
[[noreturn]] inline void throw_invalid(const std::string & m) { throw Error(ErrorCode::invalid, m); }

}  // namespace nadir

#endif  // NADIR__ERROR_HPP_
