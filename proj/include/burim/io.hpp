#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "burim/fields.hpp"
#include "burim/inversion.hpp"
#include "burim/preprocess.hpp"

namespace burim::io {

// Binary formats are little-endian with self-describing headers
// (magic, version, grid layout) and float64 payloads laid out exactly as
// the in-memory fields: row-major, x fastest, re/im interleaved,
// frequency-major for multi-frequency stacks.

void write_dataset(const std::filesystem::path& path, const MultiFrequencyData& data);
MultiFrequencyData read_dataset(const std::filesystem::path& path);

void write_coefficient(const std::filesystem::path& path, const Coefficient& c);
Coefficient read_coefficient(const std::filesystem::path& path);

void write_footprint(const std::filesystem::path& path, const TargetFootprint& fp);
TargetFootprint read_footprint(const std::filesystem::path& path);

void write_completed_data(const std::filesystem::path& path, const CompletedData& data);
CompletedData read_completed_data(const std::filesystem::path& path);

// Legacy structured-points volume for scientific viewers.
void write_vtk_volume(const std::filesystem::path& path, const Coefficient& c,
                      const std::string& field_name = "dielectric");

// CSV exports.
void write_plane_csv(const std::filesystem::path& path, const PlaneData& p);
void write_curve_csv(const std::filesystem::path& path, const std::string& x_name,
                     const std::vector<double>& x, const std::string& y_name,
                     const std::vector<double>& y);
void write_coefficient_slices_csv(const std::filesystem::path& dir, const std::string& stem,
                                  const Coefficient& c);

// Triangle mesh of the isosurface c = level (marching tetrahedra), as OBJ.
// Returns the triangle count (0 leaves a valid empty mesh file).
std::size_t write_isosurface_obj(const std::filesystem::path& path, const Coefficient& c,
                                 double level);

// Axis-aligned bounds of the isosurface vertices; false when empty.
bool isosurface_bounds(const Coefficient& c, double level, std::array<double, 3>& lo,
                       std::array<double, 3>& hi);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace burim::io
