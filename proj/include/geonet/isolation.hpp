#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "geonet/geometry.hpp"
#include "geonet/rng.hpp"
#include "geonet/simulate.hpp"

namespace geonet {

struct MarkedPointSet {
  std::vector<Point> points;
  std::vector<bool> active;
  double p = 1.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

// i.i.d. Bernoulli(p) activity marks. Throws DomainError unless p in (0, 1].
MarkedPointSet mark_activity(std::span<const Point> points, double p, Rng& rng);

// Wraps points with explicit marks (e.g. read from a file).
MarkedPointSet with_marks(std::vector<Point> points, std::vector<bool> active);

struct IsolationCounts {
  // Members with no active member other than themselves within r.
  std::uint64_t n0 = 0;
  // Isolated members that are themselves active.
  std::uint64_t na = 0;
  std::vector<std::size_t> isolated_ids;  // ascending
};

// Exact isolation count via the grid index. Throws DomainError unless r in (0, 1/2].
IsolationCounts isolated_counts(const MarkedPointSet& marked, double r, Metric metric);

// Radius chosen per replication from its own size s as a_f*(s, p, l).
struct AdaptiveRadius {
  double l = 0.5;
};
using RadiusRule = std::variant<double, AdaptiveRadius>;

double resolve_radius(const RadiusRule& rule, std::size_t size, double p);

// Point laws for replication.
struct UniformPoisson {
  double mean = 1000.0;  // Poisson(mean) many i.i.d. uniform points
};
struct UniformFixed {
  std::size_t n = 1000;  // exactly n i.i.d. uniform points
};
struct Simulated {
  SimParams params;
  std::uint64_t events = 100000;
};
using PointLaw = std::variant<UniformPoisson, UniformFixed, Simulated>;

// Points of replication `rep`, drawn from the derived stream (seed, rep, Points)
// or, for Simulated, the final state of run(params, events, derived seed).
std::vector<Point> draw_points(const PointLaw& law, std::uint64_t seed, std::size_t rep);

// Marks of replication `rep` come from the derived stream (seed, rep, Marking).
std::vector<IsolationCounts> replicate_counts(const PointLaw& law, const RadiusRule& radius,
                                              double p, std::size_t reps, std::uint64_t seed,
                                              Metric metric = Metric::Torus,
                                              unsigned threads = 1);

struct PmfRow {
  std::uint64_t m = 0;
  double empirical = 0.0;
  double poisson = 0.0;
};

struct PoissonFit {
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double dispersion_index = 0.0;
  double tv_distance = 0.0;
  std::size_t n = 0;
  // Rows for m = 0..max_observed+10; the last row's Poisson mass also holds
  // the remaining upper tail.
  std::vector<PmfRow> pmf_table;
  // Fewer than two samples or zero variance: the fit carries no information.
  bool degenerate = false;
};

// Throws DomainError on an empty sample.
PoissonFit poisson_fit(std::span<const std::uint64_t> samples);

struct ConcentrationResult {
  double empirical_tail = 0.0;  // P(|X - lambda| >= delta lambda)
  double bound = 0.0;           // 2 exp(-lambda delta^2 / 3)
  std::size_t n_samples = 0;
};

ConcentrationResult concentration_check(double lambda, double delta, std::size_t n_samples,
                                        std::uint64_t seed);

struct RegularityReport {
  double gamma = 0.0;
  double nu = 0.0;
  double size = 0.0;
  double radius = 0.0;            // a'_f = gamma sqrt(ln s / s)
  double box_side = 0.0;          // a'_f / sqrt 2
  double expected_per_box = 0.0;  // s a'_f^2 / 2
  std::size_t boxes_per_axis = 0;
  std::uint64_t boxes_total = 0;  // interior (full) boxes
  std::uint64_t boxes_regular = 0;
  double fraction = 0.0;          // boxes_regular / boxes_total
  std::uint64_t boundary_boxes = 0;
  std::uint64_t boundary_regular = 0;
};

RegularityReport regularity_report(std::span<const Point> points, double gamma, double nu,
                                   std::optional<double> size_override = std::nullopt);

struct DetteHenzeResult {
  double radius = 0.0;
  double empirical_p_no_isolated = 0.0;
  double theoretical = 0.0;  // exp(-exp(-C))
  std::vector<std::uint64_t> n0_samples;
};

// n fixed uniform points per replication, torus, p = 1, radius
// sqrt((ln n + C) / (pi n)).
DetteHenzeResult dette_henze_check(std::size_t n, double c, std::size_t reps, std::uint64_t seed,
                                   unsigned threads = 1);

}  // namespace geonet
