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

#include "cosafe/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace cosafe {

namespace {

constexpr char kMagic[8] = {'C', 'O', 'S', 'A', 'F', 'E', 'V', 'F'};
// Guards against absurd headers before allocating.
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 32;

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  put_u64(out, bits);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ConfigError("value field: truncated container");
  return to_little(v);
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_field_binary(std::ostream& out, const ValueField& field) {
  out.write(kMagic, sizeof kMagic);
  const GridSpec& g = field.grid;
  put_u64(out, static_cast<std::uint64_t>(g.dims()));
  for (int i = 0; i < g.dims(); ++i) {
    put_f64(out, g.lo()[i]);
    put_f64(out, g.hi()[i]);
    put_u64(out, static_cast<std::uint64_t>(g.n()[i]));
  }
  put_u64(out, field.times.size());
  for (double t : field.times) put_f64(out, t);
  for (const auto& slice : field.slices) {
    for (double v : slice) put_f64(out, v);
  }
  if (!out) throw ConfigError("value field: write failed");
}

ValueField read_field_binary(std::istream& in) {
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ConfigError("value field: bad magic");
  }
  const std::uint64_t d = get_u64(in);
  if (d == 0 || d > static_cast<std::uint64_t>(kMaxDim)) {
    throw ConfigError("value field: bad axis count");
  }
  std::vector<double> lo(d), hi(d);
  std::vector<int> n(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    lo[i] = get_f64(in);
    hi[i] = get_f64(in);
    const std::uint64_t ni = get_u64(in);
    if (ni > kMaxEntries) throw ConfigError("value field: bad node count");
    n[i] = static_cast<int>(ni);
  }
  ValueField field;
  field.grid = GridSpec(lo, hi, n);
  const std::uint64_t m = get_u64(in);
  if (m > kMaxEntries) throw ConfigError("value field: bad time count");
  field.times.resize(m);
  for (auto& t : field.times) t = get_f64(in);
  field.slices.assign(m, std::vector<double>(field.grid.num_nodes()));
  for (auto& slice : field.slices) {
    for (auto& v : slice) v = get_f64(in);
  }
  field.validate();
  return field;
}

void save_field(const std::string& path, const ValueField& field) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    write_field_binary(out, field);
  }
  nlohmann::json meta;
  meta["format"] = "cosafe-value-field";
  meta["axes"] = field.grid.dims();
  meta["lo"] = field.grid.lo();
  meta["hi"] = field.grid.hi();
  meta["n"] = field.grid.n();
  meta["time_count"] = field.times.size();
  meta["t_first"] = field.times.front();
  meta["t_last"] = field.times.back();
  meta["kind"] = field.meta.kind;
  meta["config_hash"] = field.meta.config_hash;
  meta["unreliable_nodes"] = field.meta.unreliable_nodes;
  std::ofstream side(path + ".json");
  if (!side) throw ConfigError("cannot open " + path + ".json for writing");
  side << meta.dump(2) << '\n';
}

ValueField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  ValueField field = read_field_binary(in);
  std::ifstream side(path + ".json");
  if (side) {
    try {
      const auto meta = nlohmann::json::parse(side);
      field.meta.kind = meta.value("kind", "");
      field.meta.config_hash = meta.value("config_hash", "");
      field.meta.unreliable_nodes =
          meta.value("unreliable_nodes", std::vector<std::size_t>{});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ".json: " + e.what());
    }
  }
  return field;
}

}  // namespace cosafe
