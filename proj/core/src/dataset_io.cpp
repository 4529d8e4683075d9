#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "geots/dataset_io.hpp"
#include "rng.hpp"

namespace geots {

namespace {

[[noreturn]] void line_error(const std::string& name, std::size_t line, const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, const std::string& name) {
  std::vector<GeoTimeSeries> series;
  std::unordered_set<SeriesId> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_fields = 0;  // 0 until the first data row fixes n

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);

    std::uint64_t id = 0;
    if (!parse_u64(fields[0], id)) {
      // a non-numeric first cell on the first row is a header
      if (series.empty() && expected_fields == 0) continue;
      line_error(name, line_no, "invalid id '" + std::string(fields[0]) + "'");
    }

    if (fields.size() < 4)
      line_error(name, line_no, "expected id,x,y and at least one value");
    if (expected_fields == 0)
      expected_fields = fields.size();
    else if (fields.size() != expected_fields)
      line_error(name, line_no,
                 "expected " + std::to_string(expected_fields - 3) + " values, got " +
                     std::to_string(fields.size() - 3));

    GeoTimeSeries t;
    t.id = id;
    if (!parse_double(fields[1], t.loc.x) || !std::isfinite(t.loc.x))
      line_error(name, line_no, "invalid x coordinate '" + std::string(fields[1]) + "'");
    if (!parse_double(fields[2], t.loc.y) || !std::isfinite(t.loc.y))
      line_error(name, line_no, "invalid y coordinate '" + std::string(fields[2]) + "'");
    t.values.reserve(fields.size() - 3);
    for (std::size_t i = 3; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v) || !std::isfinite(v))
        line_error(name, line_no, "invalid value '" + std::string(fields[i]) + "'");
      t.values.push_back(v);
    }
    if (!seen.insert(id).second) line_error(name, line_no, "duplicate id " + std::to_string(id));
    series.push_back(std::move(t));
  }

  if (series.empty()) throw std::runtime_error(name + ": no data rows");
  return make_dataset(std::move(series));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  return read_dataset_csv(in, path.string());
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");

  out << "id,x,y";
  for (std::size_t i = 1; i <= data.n; ++i) out << ",v" << i;
  out << '\n';

  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (const auto& t : data.series) {
    out << t.id;
    put(t.loc.x);
    put(t.loc.y);
    for (double v : t.values) put(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Dataset synthesize(const Dataset& base, std::size_t factor, std::uint64_t seed) {
  if (factor < 2) throw std::invalid_argument("synthesize: factor must be >= 2");

  detail::Rng rng(seed);
  const double jitter_x = 0.005 * (base.bbox.hi.x - base.bbox.lo.x);
  const double jitter_y = 0.005 * (base.bbox.hi.y - base.bbox.lo.y);

  SeriesId next_id = 0;
  for (const auto& t : base.series) next_id = std::max(next_id, t.id);
  ++next_id;

  std::vector<GeoTimeSeries> series = base.series;
  series.reserve(base.series.size() * factor);
  for (std::size_t copy = 1; copy < factor; ++copy) {
    for (const auto& src : base.series) {
      GeoTimeSeries t;
      t.id = next_id++;
      t.loc.x = src.loc.x + rng.real(-jitter_x, jitter_x);
      t.loc.y = src.loc.y + rng.real(-jitter_y, jitter_y);
      t.values.reserve(src.values.size());
      for (double v : src.values) {
        const double mag = static_cast<double>(rng.integer(1, 10));
        t.values.push_back(v + (rng.flip() ? mag : -mag));
      }
      series.push_back(std::move(t));
    }
  }
  return make_dataset(std::move(series));
}

}  // namespace geots
