#pragma once

// File formats: DensityField binary container, JSON export for small
// fields, diagnostics CSV, trajectory CSV.
//
// Binary layout: 16-byte header (magic "LIOU", version u16, M u16, n u32,
// reserved u32), then f64 little-endian u_min, u_max, then n^M f64
// little-endian cell values in flattening order (axis 0 slowest).

#include "liou/ensemble.hpp"
#include "liou/liouville.hpp"
#include "liou/phase_space.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace liou {

inline constexpr std::uint16_t kFieldFormatVersion = 1;

inline void write_field(const DensityField& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[4] = {'L', 'I', 'O', 'U'};
  const std::uint16_t version = kFieldFormatVersion;
  const std::uint16_t axes = static_cast<std::uint16_t>(p.grid.axes_count);
  const std::uint32_t levels = static_cast<std::uint32_t>(p.grid.levels);
  const std::uint32_t reserved = 0;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 2);
  out.write(reinterpret_cast<const char*>(&axes), 2);
  out.write(reinterpret_cast<const char*>(&levels), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  out.write(reinterpret_cast<const char*>(&p.grid.u_min), 8);
  out.write(reinterpret_cast<const char*>(&p.grid.u_max), 8);
  out.write(reinterpret_cast<const char*>(p.values.data()),
            static_cast<std::streamsize>(p.values.size() * 8));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline DensityField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint16_t version, axes;
  std::uint32_t levels, reserved;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 2);
  in.read(reinterpret_cast<char*>(&axes), 2);
  in.read(reinterpret_cast<char*>(&levels), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || std::memcmp(magic, "LIOU", 4) != 0)
    throw std::runtime_error("not a density field file: " + path);
  if (version != kFieldFormatVersion)
    throw std::runtime_error("unsupported field format version");
  double u_min, u_max;
  in.read(reinterpret_cast<char*>(&u_min), 8);
  in.read(reinterpret_cast<char*>(&u_max), 8);
  PhaseGrid grid = build_phase_grid(axes, static_cast<int>(levels), u_min, u_max);
  DensityField p(grid);
  in.read(reinterpret_cast<char*>(p.values.data()),
          static_cast<std::streamsize>(p.values.size() * 8));
  if (!in) throw std::runtime_error("truncated field file: " + path);
  return p;
}

inline nlohmann::json field_to_json(const DensityField& p) {
  nlohmann::json j;
  j["axes"] = p.grid.axes_count;
  j["levels"] = p.grid.levels;
  j["u_min"] = p.grid.u_min;
  j["u_max"] = p.grid.u_max;
  j["values"] = std::vector<double>(p.values.begin(), p.values.end());
  return j;
}

inline DensityField field_from_json(const nlohmann::json& j) {
  PhaseGrid grid = build_phase_grid(j.at("axes").get<int>(),
                                    j.at("levels").get<int>(),
                                    j.at("u_min").get<double>(),
                                    j.at("u_max").get<double>());
  auto vals = j.at("values").get<std::vector<double>>();
  DensityField p(grid);
  if (static_cast<std::int64_t>(vals.size()) != grid.cell_count())
    throw std::runtime_error("json field value count mismatch");
  for (size_t i = 0; i < vals.size(); ++i) p.values[i] = vals[i];
  return p;
}

// 17 significant digits, '.' decimal — round-trips doubles exactly.
inline std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_diagnostics_csv(const std::vector<StepDiagnostics>& diags,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "step,time,mass,min_value,boundary_mass\n";
  for (const auto& d : diags)
    out << d.step << "," << csv_double(d.time) << "," << csv_double(d.mass)
        << "," << csv_double(d.min_value) << "," << csv_double(d.boundary_mass)
        << "\n";
}

// One row per realization per slice: t, u_0 .. u_{N-1}.
inline void write_bundle_csv(const TrajectoryBundle& bundle,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "realization,t";
  const int n = bundle.states.empty() ? 0 : int(bundle.states[0].cols());
  for (int j = 0; j < n; ++j) out << ",u_" << j;
  out << "\n";
  for (int r = 0; r < bundle.realizations(); ++r)
    for (int s = 0; s < bundle.slices(); ++s) {
      out << r << "," << csv_double(s * bundle.dt);
      for (int j = 0; j < n; ++j)
        out << "," << csv_double(bundle.states[r](s, j));
      out << "\n";
    }
}

}  // namespace liou
