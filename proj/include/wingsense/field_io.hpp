#pragma once

// File formats. Field files are a text header terminated by "end_header\n"
// followed by the sensors x time matrix as little-endian float64, row-major
// (one sensor's series after another).

#include "wingsense/classify.hpp"
#include "wingsense/encode.hpp"
#include "wingsense/plate.hpp"
#include "wingsense/sspoc.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace wingsense {

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

void write_field(std::ostream& os, const StrainField& f);
void write_field(std::ostream& os, const EncodedField& f);
StrainField read_strain_field(std::istream& is);
EncodedField read_encoded_field(std::istream& is);

/// "strain" or "encoded"; reads only the header.
std::string peek_field_kind(const std::filesystem::path& path);

void save_field(const std::filesystem::path& path, const StrainField& f);
void save_field(const std::filesystem::path& path, const EncodedField& f);
StrainField load_strain_field(const std::filesystem::path& path);
EncodedField load_encoded_field(const std::filesystem::path& path);

void write_sensor_set(std::ostream& os, const SensorSet& set, const SensorGrid& grid);
SensorSet read_sensor_set(std::istream& is);
void save_sensor_set(const std::filesystem::path& path, const SensorSet& set, const SensorGrid& grid);
SensorSet load_sensor_set(const std::filesystem::path& path);

void save_model(const std::filesystem::path& path, const LdaModel& model);
LdaModel load_model(const std::filesystem::path& path);

}  // namespace wingsense
