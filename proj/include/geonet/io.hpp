#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geonet/clustering.hpp"
#include "geonet/isolation.hpp"
#include "geonet/simulate.hpp"
#include "geonet/threshold.hpp"

namespace geonet::io {

// Malformed input content. line is 1-based (header is line 1).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Round-trip-safe decimal form of a double (up to 17 significant digits).
std::string format_double(double v);

struct PointTable {
  std::vector<Point> points;
  std::optional<std::vector<bool>> active;      // present when an `active` column exists
  std::optional<std::vector<ClusterId>> labels; // present when a `label` column exists
};

// Accepts headers `x,y`, `x,y,active` and `x,y,active,label`. Coordinates
// must lie in [0,1]; active must be 0 or 1; label a nonnegative integer or
// `isolated`. Blank lines are skipped.
PointTable read_points_csv(std::istream& in);
PointTable read_points_csv(const std::filesystem::path& path);

void write_points_csv(std::ostream& out, std::span<const Point> points);
void write_marked_csv(std::ostream& out, const MarkedPointSet& marked);
void write_labels_csv(std::ostream& out, const MarkedPointSet& marked,
                      const ClusterLabeling& labeling);
void write_event_log_csv(std::ostream& out, std::span<const EventRecord> events,
                         std::uint64_t first_event_count = 1);

// Deterministic scatter plot on a 1000x1000 viewBox mapping [0,1]^2 (y up).
// Cluster members are filled circles colored by id; isolated points are crosses.
void write_svg(std::ostream& out, std::span<const Point> points, const ClusterLabeling& labeling);

// Fixed palette color for a cluster id.
std::string cluster_color(ClusterId id);

nlohmann::ordered_json to_json(const SimParams& params);
nlohmann::ordered_json to_json(const PoissonFit& fit);
nlohmann::ordered_json to_json(const IsolationCounts& counts, bool with_ids = true);
nlohmann::ordered_json to_json(const RegularityReport& report);
nlohmann::ordered_json to_json(const AlphaStarResult& alpha);
nlohmann::ordered_json to_json(const PsiReport& psi);

// Writes to `path` via the stream callback, throwing IoError on failure.
template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace geonet::io

#include <fstream>

namespace geonet::io {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace geonet::io
