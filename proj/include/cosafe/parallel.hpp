// Copyright 2026 The cosafe Authors
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

#ifndef COSAFE_PARALLEL_HPP
#define COSAFE_PARALLEL_HPP

#include <cstddef>
#include <cstdint>

#include "cosafe/types.hpp"

namespace cosafe {

// Applies fn(i) for i in [0, n). fn must not throw and must write only to
// slot i of its outputs; under that contract the serial and OpenMP loops
// give identical results.
template <typename Fn>
void for_each_index(Execution exec, std::size_t n, Fn&& fn) {
  const auto count = static_cast<std::int64_t>(n);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  }
}

}  // namespace cosafe

#endif  // COSAFE_PARALLEL_HPP
