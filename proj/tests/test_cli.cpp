#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geonet/cli.hpp"
#include "geonet/io.hpp"

using namespace geonet;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "geonet");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }
  std::string str(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string blobs_csv() {
  Rng rng(3);
  std::ostringstream s;
  s << "x,y\n";
  for (int i = 0; i < 200; ++i) {
    const double cx = i % 2 ? 0.25 : 0.75;
    const Point q = Point::clamped(cx + 0.02 * rng.normal(), 0.5 + 0.02 * rng.normal());
    s << io::format_double(q.x) << ',' << io::format_double(q.y) << '\n';
  }
  return s.str();
}

}  // namespace

TEST_CASE("threshold command") {
  SUBCASE("reference radius") {
    const auto r = call({"threshold", "--size", "14102", "--p", "1", "--af", "0.1", "--json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(std::fabs(j["l"].get<double>() - 0.6378047) < 1e-6);
    CHECK(std::fabs(j["a_f_star"].get<double>() - 0.1) < 1e-3);
    CHECK(j["alpha_star"]["feasible"] == false);
    CHECK(j["seed"] == 42);
  }
  SUBCASE("exponent") {
    const auto r = call({"threshold", "--size", "10000", "--p", "1", "--l", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("a_f_star: 0.056418958354775") != std::string::npos);
    CHECK(r.out.find("seed: 42") != std::string::npos);
  }
  SUBCASE("bound violation") {
    const auto r = call({"threshold", "--size", "100", "--p", "1", "--af", "0.001"});
    CHECK(r.code == 2);
    CHECK(r.err.find("must exceed 1") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(call({"threshold", "--size", "100"}).code == 2);
    CHECK(call({"threshold", "--size", "100", "--l", "0.5", "--af", "0.1"}).code == 2);
    CHECK(call({"threshold", "--l", "0.5"}).code == 2);
    CHECK(call({"threshold", "--size", "100", "--l", "0.5", "--branch", "third"}).code == 2);
    CHECK(call({"threshold", "--size", "abc", "--l", "0.5"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
  }
  SUBCASE("secondary branch is accepted") {
    CHECK(call({"threshold", "--size", "100", "--l", "0.5", "--branch", "secondary"}).code == 0);
  }
}

TEST_CASE("version and help") {
  const auto v = call({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out == std::string(cli::kToolVersion) + "\n");
  const auto h = call({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("poisson-check") != std::string::npos);
}

TEST_CASE("isolated command") {
  TempDir dir("geonet_cli_isolated");
  write(dir / "one.csv", "x,y\n0.5,0.5\n");
  SUBCASE("one point") {
    const auto r = call({"isolated", "--points", dir.str("one.csv"), "--radius", "0.1", "--json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["n0"] == 1);
    CHECK(j["na"] == 1);
    CHECK(j["isolated_ids"] == json::array({0}));
  }
  SUBCASE("malformed row") {
    write(dir / "bad.csv", "x,y\n0.5,0.5\n0.2;0.3\n");
    const auto r = call({"isolated", "--points", dir.str("bad.csv"), "--radius", "0.1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
  }
  SUBCASE("missing file") {
    CHECK(call({"isolated", "--points", dir.str("nope.csv"), "--radius", "0.1"}).code == 3);
  }
  SUBCASE("radius rules") {
    CHECK(call({"isolated", "--points", dir.str("one.csv")}).code == 2);
    CHECK(call({"isolated", "--points", dir.str("one.csv"), "--radius", "0.1", "--l", "0.5"}).code ==
          2);
    CHECK(call({"isolated", "--points", dir.str("one.csv"), "--radius", "0.7"}).code == 2);
    // a_f* needs s >= 2.
    CHECK(call({"isolated", "--points", dir.str("one.csv"), "--l", "0.5"}).code == 2);
    CHECK(call({"isolated", "--points", dir.str("one.csv"), "--metric", "sphere", "--radius",
                "0.1"})
              .code == 2);
  }
  SUBCASE("parity with the library on a generated fixture") {
    Rng rng(8);
    std::vector<Point> pts;
    for (int i = 0; i < 1500; ++i) pts.push_back({rng.uniform(), rng.uniform()});
    Rng mr(9);
    const auto marked = mark_activity(pts, 0.7, mr);
    io::write_file(dir / "marked.csv", [&](std::ostream& o) { io::write_marked_csv(o, marked); });
    for (const char* metric : {"torus", "bounded"}) {
      const auto r = call({"isolated", "--points", dir.str("marked.csv"), "--radius", "0.02",
                           "--metric", metric, "--json"});
      REQUIRE(r.code == 0);
      const auto lib = isolated_counts(marked, 0.02, metric_from_string(metric));
      const auto j = json::parse(r.out);
      CHECK(j["n0"] == lib.n0);
      CHECK(j["na"] == lib.na);
      CHECK(j["isolated_ids"].get<std::vector<std::size_t>>() == lib.isolated_ids);
    }
  }
  SUBCASE("marks drawn from the seed when the file has none") {
    write(dir / "pair.csv", "x,y\n0.5,0.5\n0.52,0.5\n");
    const auto a = call({"isolated", "--points", dir.str("pair.csv"), "--radius", "0.1", "--p",
                         "0.5", "--seed", "7", "--json"});
    const auto b = call({"isolated", "--points", dir.str("pair.csv"), "--radius", "0.1", "--p",
                         "0.5", "--seed", "7", "--json"});
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out)["seed"] == 7);
  }
}

TEST_CASE("poisson-check command") {
  SUBCASE("connectivity regime") {
    const auto r = call({"poisson-check", "--uniform", "500", "--C", "0", "--reps", "200",
                         "--json", "--threads", "2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["dette_henze"]["theoretical"].get<double>() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::isfinite(j["n0"]["dispersion"].get<double>()));
    CHECK(std::isfinite(j["n0"]["tv"].get<double>()));
    CHECK(j["reps"] == 200);
    // Thread count does not change the output.
    const auto one = call({"poisson-check", "--uniform", "500", "--C", "0", "--reps", "200",
                           "--json", "--threads", "1"});
    CHECK(one.out == r.out);
  }
  SUBCASE("single replication is degenerate") {
    const auto r = call({"poisson-check", "--uniform", "500", "--C", "0", "--reps", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("warning: degenerate") != std::string::npos);
    const auto j = json::parse(
        call({"poisson-check", "--uniform", "500", "--C", "0", "--reps", "1", "--json"}).out);
    CHECK(j["degenerate"] == true);
  }
  SUBCASE("other point laws") {
    CHECK(call({"poisson-check", "--poisson-points", "800", "--l", "0.5", "--reps", "20"}).code ==
          0);
    CHECK(call({"poisson-check", "--poisson-points", "800", "--af", "0.05", "--reps", "20"}).code ==
          0);
    CHECK(call({"poisson-check", "--simulated", "--events", "500", "--radius", "0.05", "--reps",
                "3"})
              .code == 0);
  }
  SUBCASE("usage errors") {
    CHECK(call({"poisson-check", "--C", "0"}).code == 2);
    CHECK(call({"poisson-check", "--uniform", "500"}).code == 2);
    CHECK(call({"poisson-check", "--uniform", "500", "--C", "0", "--radius", "0.1"}).code == 2);
    CHECK(call({"poisson-check", "--uniform", "500", "--C", "0", "--reps", "0"}).code == 2);
    CHECK(call({"poisson-check", "--simulated", "--C", "0"}).code == 2);
    CHECK(call({"poisson-check", "--uniform", "5", "--poisson-points", "5", "--C", "0"}).code == 2);
  }
}

TEST_CASE("cluster command") {
  TempDir dir("geonet_cli_cluster");
  write(dir / "blobs.csv", blobs_csv());
  SUBCASE("two blobs with a k-means comparison") {
    const auto r = call({"cluster", "--points", dir.str("blobs.csv"), "--radius", "0.05",
                         "--kmeans", "2", "--json", "--output", dir.str("labels.csv"), "--svg",
                         dir.str("plot.svg")});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["n_clusters"] == 2);
    CHECK(j["kmeans"]["n_isolated"] == 0);
    CHECK(j["kmeans"]["pair_agreement"].get<double>() == doctest::Approx(1.0));
    CHECK(fs::exists(dir / "plot.svg"));
    const auto table = io::read_points_csv(dir / "labels.csv");
    CHECK(table.labels->size() == 200);
  }
  SUBCASE("labels go to stdout and the summary to stderr by default") {
    const auto r = call({"cluster", "--points", dir.str("blobs.csv"), "--radius", "0.05"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,y,active,label\n", 0) == 0);
    CHECK(r.err.find("n_clusters: 2") != std::string::npos);
  }
  SUBCASE("labels round-trip through the isolated command") {
    Rng rng(2);
    std::ostringstream s;
    s << "x,y\n";
    for (int i = 0; i < 800; ++i) s << rng.uniform() << ',' << rng.uniform() << '\n';
    write(dir / "u.csv", s.str());
    REQUIRE(call({"cluster", "--points", dir.str("u.csv"), "--radius", "0.03", "--output",
                  dir.str("u_labels.csv")})
                .code == 0);
    const auto table = io::read_points_csv(dir / "u_labels.csv");
    std::vector<std::size_t> from_labels;
    for (std::size_t i = 0; i < table.labels->size(); ++i) {
      if ((*table.labels)[i] == kIsolated) from_labels.push_back(i);
    }
    const auto r = call({"isolated", "--points", dir.str("u_labels.csv"), "--radius", "0.03",
                         "--json"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["isolated_ids"].get<std::vector<std::size_t>>() == from_labels);
  }
  SUBCASE("svg output is byte-identical across runs") {
    for (const char* name : {"a.svg", "b.svg"}) {
      REQUIRE(call({"cluster", "--points", dir.str("blobs.csv"), "--radius", "0.05", "--svg",
                    dir.str(name), "--output", dir.str("l.csv")})
                  .code == 0);
    }
    CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
  }
  SUBCASE("errors") {
    CHECK(call({"cluster", "--points", dir.str("blobs.csv"), "--radius", "0.05", "--kmeans",
                "500"})
              .code == 2);
    CHECK(call({"cluster", "--points", dir.str("blobs.csv"), "--radius", "0.05", "--svg",
                dir.str("no/such/dir.svg")})
              .code == 3);
  }
}

TEST_CASE("regularity command") {
  TempDir dir("geonet_cli_regularity");
  const auto pts = draw_points(UniformPoisson{20000}, 1, 0);
  io::write_file(dir / "p.csv", [&](std::ostream& o) { io::write_points_csv(o, pts); });
  const auto r = call({"regularity", "--points", dir.str("p.csv"), "--gamma", "3", "--nu", "0.5"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const auto lib = regularity_report(pts, 3.0, 0.5);
  CHECK(j["boxes_regular"] == lib.boxes_regular);
  CHECK(j["expected_per_box"].get<double>() == lib.expected_per_box);
  CHECK(call({"regularity", "--points", dir.str("p.csv"), "--nu", "1.5"}).code == 2);
}

TEST_CASE("simulate command") {
  TempDir dir("geonet_cli_simulate");
  SUBCASE("zero iterations") {
    const auto r = call({"simulate", "--iterations", "0", "--output-dir", dir.str("zero")});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "zero/manifest.json"));
    CHECK(fs::exists(dir / "zero/snapshot_0.csv"));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "zero")) ++files;
    CHECK(files == 2);
    const auto m = json::parse(slurp(dir / "zero/manifest.json"));
    CHECK(m["final_size"] == 100);
    CHECK(m["event_count"] == 0);
    CHECK_FALSE(m.contains("wall_clock_seconds"));
  }
  SUBCASE("byte-identical replay") {
    for (const char* out : {"a", "b"}) {
      REQUIRE(call({"simulate", "--iterations", "3000", "--snapshot-every", "1000", "--events",
                    "--seed", "11", "--output-dir", dir.str(out)})
                  .code == 0);
    }
    for (const char* f : {"manifest.json", "events.csv", "snapshot_1000.csv", "snapshot_3000.csv"}) {
      CHECK(slurp(dir / "a" / f).size() > 0);
      // The manifest echoes the output directory, so compare it with that field dropped.
      if (std::string(f) == "manifest.json") {
        auto ma = json::parse(slurp(dir / "a" / f));
        auto mb = json::parse(slurp(dir / "b" / f));
        ma["config"].erase("output_dir");
        mb["config"].erase("output_dir");
        CHECK(ma == mb);
      } else {
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
      }
    }
    const auto m = json::parse(slurp(dir / "a/manifest.json"));
    CHECK(m["seed"] == 11);
    CHECK(m["snapshots"].size() == 4);
    CHECK(m["config"]["v_r"] == 3.0);
  }
  SUBCASE("snapshot rows carry round-trip precision") {
    REQUIRE(call({"simulate", "--iterations", "10", "--output-dir", dir.str("prec")}).code == 0);
    const auto t = io::read_points_csv(dir / "prec/snapshot_0.csv");
    Rng rng = Rng::derive(42, 0, StreamTag::Simulation);
    CHECK(t.points.front().x == rng.uniform());
  }
  SUBCASE("timing is opt-in") {
    REQUIRE(call({"simulate", "--iterations", "10", "--timing", "--output-dir", dir.str("t")})
                .code == 0);
    CHECK(json::parse(slurp(dir / "t/manifest.json")).contains("wall_clock_seconds"));
  }
  SUBCASE("invalid parameters name the field") {
    const auto r = call({"simulate", "--af", "0.9", "--output-dir", dir.str("x")});
    CHECK(r.code == 2);
    CHECK(r.err.find("a_f") != std::string::npos);
    CHECK(call({"simulate", "--affinity-proposal", "weird", "--output-dir", dir.str("x")}).code ==
          2);
  }
  SUBCASE("unwritable output") {
    write(dir / "file", "x");
    CHECK(call({"simulate", "--iterations", "1", "--output-dir", dir.str("file/sub")}).code == 3);
  }
  SUBCASE("config file with flag override") {
    write(dir / "run.cfg",
          "# run config\nvr = 0\nAf = 0\ndr = 1\ns0 = 7\niterations = 100\nevents = true\n");
    const auto r = call({"simulate", "--config", dir.str("run.cfg"), "--s0", "4", "--output-dir",
                         dir.str("cfg")});
    REQUIRE(r.code == 0);
    const auto m = json::parse(slurp(dir / "cfg/manifest.json"));
    CHECK(m["config"]["s0"] == 4);
    CHECK(m["config"]["v_r"] == 0.0);
    CHECK(m["event_count"] == 4);
    CHECK(m["extinct"] == true);
    CHECK(fs::exists(dir / "cfg/events.csv"));
    write(dir / "bad.cfg", "nonsense = 1\n");
    CHECK(call({"simulate", "--config", dir.str("bad.cfg")}).code == 2);
    write(dir / "broken.cfg", "vr 3\n");
    CHECK(call({"simulate", "--config", dir.str("broken.cfg")}).code == 2);
    CHECK(call({"simulate", "--config", dir.str("absent.cfg")}).code == 3);
  }
}

TEST_CASE("config parsing") {
  const auto e = cli::parse_config("a = 1 # trailing\n\n# full line\nb=two words\n");
  REQUIRE(e.size() == 2);
  CHECK(e[0] == std::pair<std::string, std::string>{"a", "1"});
  CHECK(e[1].second == "two words");
  try {
    cli::parse_config("a=1\nbroken\n");
    FAIL("expected ParseError");
  } catch (const io::ParseError& err) {
    CHECK(err.line() == 2);
  }
  CHECK_THROWS_AS(cli::parse_config("=3\n"), io::ParseError);
}
