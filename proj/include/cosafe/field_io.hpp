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

#ifndef COSAFE_FIELD_IO_HPP
#define COSAFE_FIELD_IO_HPP

#include <iosfwd>
#include <string>

#include "cosafe/grid.hpp"

namespace cosafe {

// Binary layout, all integers u64 and all reals f64, little-endian:
//
//   magic        8 bytes  "COSAFEVF"
//   axis count   d
//   per axis     lo, hi, n
//   time count   m
//   times        m reals
//   slices       m * prod(n) reals, slice by slice, row-major nodes
//
// Metadata (kind, config hash, unreliable nodes) lives in a JSON sidecar at
// "<path>.json".

void write_field_binary(std::ostream& out, const ValueField& field);
ValueField read_field_binary(std::istream& in);

/// Writes the container to path and the metadata sidecar to path + ".json".
void save_field(const std::string& path, const ValueField& field);
/// Reads both files; a missing sidecar leaves metadata empty.
ValueField load_field(const std::string& path);

}  // namespace cosafe

#endif  // COSAFE_FIELD_IO_HPP
