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

#include "nadir/format.hpp"

namespace nadir
{

std::string format_truncated(double v, int decimals)
{
  // Print with three guard digits, then cut. Rounding at decimals+3 can
  // only flip the truncated digits for values within 5e-(decimals+4) of a
  // boundary, which is below the resolution anything here reports.
  std::string s = format_fixed(v, decimals + 3);
  const size_t dot = s.find('.');
  if (dot == std::string::npos) return s;
  if (decimals == 0) return s.substr(0, dot);
  return s.substr(0, dot + 1 + static_cast<size_t>(decimals));
}

}  // namespace nadir
