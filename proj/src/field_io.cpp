#include "wingsense/field_io.hpp"

#include "wingsense/errors.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wingsense {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using Header = std::map<std::string, std::string>;

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("malformed number '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("malformed integer '" + s + "'");
  return v;
}

const std::string& need(const Header& h, const std::string& key) {
  auto it = h.find(key);
  if (it == h.end()) throw ConfigError("field header lacks '" + key + "'");
  return it->second;
}

Header read_header(std::istream& is) {
  Header h;
  std::string line;
  if (!std::getline(is, line) || line != "wingsense-field v1") throw ConfigError("not a wingsense field file");
  while (std::getline(is, line)) {
    if (line == "end_header") return h;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw ConfigError("malformed header line '" + line + "'");
    h[line.substr(0, sp)] = line.substr(sp + 1);
  }
  throw ConfigError("field header not terminated");
}

void write_common(std::ostream& os, const char* kind, const SensorGrid& g, long samples, double rate, double t0,
                  double discard, const std::string& hash) {
  os << "wingsense-field v1\n";
  os << "kind " << kind << "\n";
  os << "n_chord " << g.n_chord << "\n";
  os << "n_span " << g.n_span << "\n";
  os << "spacing " << format_double(g.spacing) << "\n";
  os << "samples " << samples << "\n";
  os << "sample_rate_hz " << format_double(rate) << "\n";
  os << "t0_ms " << format_double(t0) << "\n";
  os << "discard_ms " << format_double(discard) << "\n";
  os << "drive_hash " << (hash.empty() ? "-" : hash) << "\n";
}

void write_matrix(std::ostream& os, const RowMatrix& m) {
  const auto n = static_cast<std::size_t>(m.size());
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      auto bits = std::bit_cast<uint64_t>(m.data()[i]);
      bits = __builtin_bswap64(bits);
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!os) throw std::runtime_error("failed writing field data");
}

RowMatrix read_matrix(std::istream& is, long rows, long cols) {
  RowMatrix m(rows, cols);
  const auto n = static_cast<std::size_t>(m.size());
  is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != n * sizeof(double)) throw ConfigError("field data truncated");
  if constexpr (std::endian::native != std::endian::little) {
    for (std::size_t i = 0; i < n; ++i) {
      auto bits = std::bit_cast<uint64_t>(m.data()[i]);
      m.data()[i] = std::bit_cast<double>(__builtin_bswap64(bits));
    }
  }
  return m;
}

template <class Field>
void read_common(const Header& h, Field& f, long& samples) {
  f.grid.n_chord = static_cast<int>(parse_long(need(h, "n_chord")));
  f.grid.n_span = static_cast<int>(parse_long(need(h, "n_span")));
  f.grid.spacing = parse_double(need(h, "spacing"));
  samples = parse_long(need(h, "samples"));
  f.sample_rate_hz = parse_double(need(h, "sample_rate_hz"));
  f.t0_ms = parse_double(need(h, "t0_ms"));
  f.discard_ms = parse_double(need(h, "discard_ms"));
  f.drive_hash = need(h, "drive_hash");
  if (f.drive_hash == "-") f.drive_hash.clear();
  if (f.grid.n_chord < 1 || f.grid.n_span < 1 || samples < 0) throw ConfigError("invalid field dimensions");
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  return is;
}

}  // namespace

void write_field(std::ostream& os, const StrainField& f) {
  write_common(os, "strain", f.grid, f.samples(), f.sample_rate_hz, f.t0_ms, f.discard_ms, f.drive_hash);
  os << "end_header\n";
  write_matrix(os, f.values);
}

void write_field(std::ostream& os, const EncodedField& f) {
  write_common(os, "encoded", f.grid, f.samples(), f.sample_rate_hz, f.t0_ms, f.discard_ms, f.drive_hash);
  const EncoderSpec& e = f.encoder;
  os << "sta_kind " << (e.sta_kind == StaKind::Kernel ? "kernel" : "identity") << "\n";
  os << "sta_frequency " << format_double(e.sta.frequency) << "\n";
  os << "sta_delay " << format_double(e.sta.delay) << "\n";
  os << "sta_width " << format_double(e.sta.width) << "\n";
  os << "sta_window " << e.sta.window << "\n";
  os << "activation " << (e.activation == Activation::Sigmoid ? "sigmoid" : "linear") << "\n";
  os << "nla_slope " << format_double(e.nla.slope) << "\n";
  os << "nla_half_max " << format_double(e.nla.half_max) << "\n";
  os << "c_xi " << format_double(f.c_xi) << "\n";
  os << "end_header\n";
  write_matrix(os, f.values);
}

StrainField read_strain_field(std::istream& is) {
  const Header h = read_header(is);
  if (need(h, "kind") != "strain") throw ConfigError("expected a strain field");
  StrainField f;
  long samples = 0;
  read_common(h, f, samples);
  f.values = read_matrix(is, f.grid.size(), samples);
  return f;
}

EncodedField read_encoded_field(std::istream& is) {
  const Header h = read_header(is);
  if (need(h, "kind") != "encoded") throw ConfigError("expected an encoded field");
  EncodedField f;
  long samples = 0;
  read_common(h, f, samples);
  EncoderSpec& e = f.encoder;
  const std::string kind = need(h, "sta_kind"), act = need(h, "activation");
  if (kind != "kernel" && kind != "identity") throw ConfigError("unknown sta_kind '" + kind + "'");
  if (act != "sigmoid" && act != "linear") throw ConfigError("unknown activation '" + act + "'");
  e.sta_kind = kind == "kernel" ? StaKind::Kernel : StaKind::Identity;
  e.activation = act == "sigmoid" ? Activation::Sigmoid : Activation::Linear;
  e.sta.frequency = parse_double(need(h, "sta_frequency"));
  e.sta.delay = parse_double(need(h, "sta_delay"));
  e.sta.width = parse_double(need(h, "sta_width"));
  e.sta.window = static_cast<int>(parse_long(need(h, "sta_window")));
  e.nla.slope = parse_double(need(h, "nla_slope"));
  e.nla.half_max = parse_double(need(h, "nla_half_max"));
  f.c_xi = parse_double(need(h, "c_xi"));
  f.values = read_matrix(is, f.grid.size(), samples);
  return f;
}

std::string peek_field_kind(const std::filesystem::path& path) {
  auto is = open_in(path);
  return need(read_header(is), "kind");
}

void save_field(const std::filesystem::path& path, const StrainField& f) {
  auto os = open_out(path);
  write_field(os, f);
}

void save_field(const std::filesystem::path& path, const EncodedField& f) {
  auto os = open_out(path);
  write_field(os, f);
}

StrainField load_strain_field(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_strain_field(is);
}

EncodedField load_encoded_field(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_encoded_field(is);
}

void write_sensor_set(std::ostream& os, const SensorSet& set, const SensorGrid& grid) {
  os << "# wingsense sensor set v1\n";
  os << "provenance " << to_string(set.provenance) << "\n";
  os << "seed " << set.seed << "\n";
  os << "q " << set.q() << "\n";
  os << "truncated " << (set.truncated ? 1 : 0) << "\n";
  os << "# index x_m y_m\n";
  for (int id : set.indices) os << id << ' ' << format_double(grid.x(id)) << ' ' << format_double(grid.y(id)) << "\n";
}

SensorSet read_sensor_set(std::istream& is) {
  SensorSet set;
  std::string line;
  long q = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "provenance") {
      std::string v;
      ls >> v;
      try {
        set.provenance = provenance_from_string(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "seed") {
      ls >> set.seed;
    } else if (key == "q") {
      ls >> q;
    } else if (key == "truncated") {
      int t = 0;
      ls >> t;
      set.truncated = t != 0;
    } else {
      set.indices.push_back(static_cast<int>(parse_long(key)));
    }
  }
  if (q != static_cast<long>(set.indices.size())) throw ConfigError("sensor set count does not match q");
  return set;
}

void save_sensor_set(const std::filesystem::path& path, const SensorSet& set, const SensorGrid& grid) {
  auto os = open_out(path);
  write_sensor_set(os, set, grid);
}

SensorSet load_sensor_set(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_sensor_set(is);
}

void save_model(const std::filesystem::path& path, const LdaModel& model) {
  auto os = open_out(path);
  write_model(os, model);
}

LdaModel load_model(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_model(is);
}

}  // namespace wingsense
