#include "geonet/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace geonet::io {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_coordinate(const std::string& field, std::size_t line, const char* name) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ParseError(line, std::string("column ") + name + ": '" + field + "' is not a number");
  }
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParseError(line, std::string("column ") + name + ": " + field + " outside [0,1]");
  }
  return v;
}

}  // namespace

PointTable read_points_csv(std::istream& in) {
  PointTable table;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    const auto fields = split_fields(raw);
    if (columns == 0) {
      const std::vector<std::string> full = {"x", "y", "active", "label"};
      if (fields.size() < 2 || fields.size() > 4 ||
          !std::equal(fields.begin(), fields.end(), full.begin())) {
        throw ParseError(line_no, "expected header x,y[,active[,label]], got '" + raw + "'");
      }
      columns = fields.size();
      if (columns >= 3) table.active.emplace();
      if (columns == 4) table.labels.emplace();
      continue;
    }
    if (fields.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    table.points.push_back({parse_coordinate(fields[0], line_no, "x"),
                            parse_coordinate(fields[1], line_no, "y")});
    if (columns >= 3) {
      if (fields[2] != "0" && fields[2] != "1") {
        throw ParseError(line_no, "column active: '" + fields[2] + "' is not 0 or 1");
      }
      table.active->push_back(fields[2] == "1");
    }
    if (columns == 4) {
      if (fields[3] == "isolated") {
        table.labels->push_back(kIsolated);
      } else {
        ClusterId id = 0;
        const auto& f = fields[3];
        const auto res = std::from_chars(f.data(), f.data() + f.size(), id);
        if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || id < 0) {
          throw ParseError(line_no, "column label: '" + f + "' is not a cluster id or 'isolated'");
        }
        table.labels->push_back(id);
      }
    }
  }
  if (columns == 0) throw ParseError(line_no == 0 ? 1 : line_no, "missing header x,y");
  return table;
}

PointTable read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, std::span<const Point> points) {
  out << "x,y\n";
  for (const Point& p : points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_marked_csv(std::ostream& out, const MarkedPointSet& marked) {
  out << "x,y,active\n";
  for (std::size_t i = 0; i < marked.points.size(); ++i) {
    out << format_double(marked.points[i].x) << ',' << format_double(marked.points[i].y) << ','
        << (marked.active[i] ? '1' : '0') << '\n';
  }
}

void write_labels_csv(std::ostream& out, const MarkedPointSet& marked,
                      const ClusterLabeling& labeling) {
  out << "x,y,active,label\n";
  for (std::size_t i = 0; i < marked.points.size(); ++i) {
    out << format_double(marked.points[i].x) << ',' << format_double(marked.points[i].y) << ','
        << (marked.active[i] ? '1' : '0') << ',';
    if (labeling.labels[i] == kIsolated) {
      out << "isolated";
    } else {
      out << labeling.labels[i];
    }
    out << '\n';
  }
}

void write_event_log_csv(std::ostream& out, std::span<const EventRecord> events,
                         std::uint64_t first_event_count) {
  out << "event_count,time,kind,x,y,member_index\n";
  std::uint64_t count = first_event_count;
  for (const EventRecord& ev : events) {
    out << count++ << ',' << format_double(ev.time) << ',' << to_string(ev.kind) << ',';
    if (ev.position) {
      out << format_double(ev.position->x) << ',' << format_double(ev.position->y);
    } else {
      out << ',';
    }
    out << ',';
    if (ev.member_index) out << *ev.member_index;
    out << '\n';
  }
}

std::string cluster_color(ClusterId id) {
  static constexpr std::array<const char*, 12> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
  if (id < 0) return "#000000";
  return kPalette[static_cast<std::size_t>(id) % kPalette.size()];
}

void write_svg(std::ostream& out, std::span<const Point> points, const ClusterLabeling& labeling) {
  const auto coord = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v * 1000.0,
                                   std::chars_format::fixed, 2);
    return std::string(buf.data(), res.ptr);
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" "
         "width=\"1000\" height=\"1000\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string cx = coord(points[i].x);
    const std::string cy = coord(1.0 - points[i].y);
    const ClusterId id = labeling.labels[i];
    if (id == kIsolated) {
      out << "<path d=\"M" << cx << ' ' << cy << " m-4 -4 l8 8 m0 -8 l-8 8\" "
          << "stroke=\"black\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    } else {
      out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"2\" fill=\""
          << cluster_color(id) << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

nlohmann::ordered_json to_json(const SimParams& p) {
  return {
      {"v_r", p.invitation_rate},
      {"d_r", p.departure_rate},
      {"A_f", p.max_affinity_rate},
      {"a_f", p.affinity_radius},
      {"sigma", p.sigma},
      {"p", p.activity_probability},
      {"s0", p.initial_size},
      {"invitation_kernel", "gaussian_truncated"},
      {"affinity_proposal", to_string(p.affinity_proposal)},
      {"metric", to_string(p.metric)},
      {"max_resample", p.max_resample},
  };
}

nlohmann::ordered_json to_json(const PoissonFit& fit) {
  nlohmann::ordered_json pmf = nlohmann::ordered_json::array();
  for (const auto& row : fit.pmf_table) {
    pmf.push_back({{"m", row.m}, {"emp", row.empirical}, {"pois", row.poisson}});
  }
  return {
      {"mean", fit.sample_mean},
      {"variance", fit.sample_variance},
      {"dispersion", fit.dispersion_index},
      {"tv", fit.tv_distance},
      {"n", fit.n},
      {"degenerate", fit.degenerate},
      {"pmf", pmf},
  };
}

nlohmann::ordered_json to_json(const IsolationCounts& c, bool with_ids) {
  nlohmann::ordered_json j = {{"n0", c.n0}, {"na", c.na}};
  if (with_ids) j["isolated_ids"] = c.isolated_ids;
  return j;
}

nlohmann::ordered_json to_json(const RegularityReport& r) {
  return {
      {"gamma", r.gamma},
      {"nu", r.nu},
      {"size", r.size},
      {"radius", r.radius},
      {"box_side", r.box_side},
      {"expected_per_box", r.expected_per_box},
      {"boxes_per_axis", r.boxes_per_axis},
      {"boxes_total", r.boxes_total},
      {"boxes_regular", r.boxes_regular},
      {"fraction", r.fraction},
      {"boundary_boxes", r.boundary_boxes},
      {"boundary_regular", r.boundary_regular},
  };
}

nlohmann::ordered_json to_json(const AlphaStarResult& a) {
  return {
      {"alpha", a.alpha},
      {"feasible", a.feasible},
      {"lambert_arg", a.lambert_arg},
      {"log_neg_arg", a.log_neg_arg},
      {"branch", to_string(a.branch)},
      {"residual", a.residual},
  };
}

nlohmann::ordered_json to_json(const PsiReport& p) {
  return {{"psi", p.psi}, {"positive", p.positive}, {"ratio_to_s", p.ratio_to_s}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  write_file(path, [&](std::ostream& out) { out << content; });
}

}  // namespace geonet::io
