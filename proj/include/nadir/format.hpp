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

#ifndef NADIR__FORMAT_HPP_
#define NADIR__FORMAT_HPP_

#include <charconv>
#include <cstdio>
#include <string>

namespace nadir
{

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Fixed-point with the given number of decimals (round half away from
/// zero is whatever snprintf does: round half to even).
inline std::string format_fixed(double v, int decimals)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return std::string(buf);
}

/// Fixed-point truncated (not rounded) toward zero at the given number of
/// decimals. Matches reporting conventions that cut percentages short.
std::string format_truncated(double v, int decimals);

}  // namespace nadir

#endif  // NADIR__FORMAT_HPP_
