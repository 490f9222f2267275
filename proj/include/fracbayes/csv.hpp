/*
 * Copyright 2026 The fracbayes authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRACBAYES_CSV_HPP_
#define FRACBAYES_CSV_HPP_

#include <cstdio>
#include <string>

namespace fracbayes {

// Shortest round-trip decimal formatting; keeps CSV output byte-stable for
// identical doubles across runs.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // trim to the shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char trial[40];
    std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(trial, "%lf", &back);
    if (back == v || (back != back && v != v)) return trial;
  }
  return buf;
}

}  // namespace fracbayes

#endif  // FRACBAYES_CSV_HPP_
