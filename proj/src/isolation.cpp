#include "geonet/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geonet/errors.hpp"
#include "geonet/parallel.hpp"
#include "geonet/stats.hpp"
#include "geonet/threshold.hpp"

namespace geonet {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("activity probability " + std::to_string(p) + " outside (0, 1]");
  }
}

void check_radius(double r) {
  if (!(r > 0.0 && r <= 0.5)) {
    throw DomainError("radius " + std::to_string(r) + " outside (0, 1/2]");
  }
}

std::vector<Point> uniform_points(std::size_t n, Rng& rng) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    pts.push_back({x, y});
  }
  return pts;
}

}  // namespace

MarkedPointSet mark_activity(std::span<const Point> points, double p, Rng& rng) {
  check_probability(p);
  MarkedPointSet out;
  out.points.assign(points.begin(), points.end());
  out.active.reserve(points.size());
  out.p = p;
  out.seed = rng.seed();
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.active.push_back(p >= 1.0 || rng.bernoulli(p));
  }
  return out;
}

MarkedPointSet with_marks(std::vector<Point> points, std::vector<bool> active) {
  if (points.size() != active.size()) {
    throw DomainError("marks and points differ in length");
  }
  MarkedPointSet out;
  out.points = std::move(points);
  out.active = std::move(active);
  const auto n_active = std::count(out.active.begin(), out.active.end(), true);
  out.p = out.points.empty() ? 1.0 : static_cast<double>(n_active) / out.points.size();
  return out;
}

IsolationCounts isolated_counts(const MarkedPointSet& marked, double r, Metric metric) {
  check_radius(r);
  IsolationCounts out;
  if (marked.points.empty()) return out;
  const SpatialIndex index(marked.points, r, metric);
  for (std::size_t i = 0; i < marked.points.size(); ++i) {
    const bool has_active_neighbor = index.any_within(
        marked.points[i], r, [&](std::size_t j) { return j != i && marked.active[j]; });
    if (!has_active_neighbor) {
      ++out.n0;
      if (marked.active[i]) ++out.na;
      out.isolated_ids.push_back(i);
    }
  }
  return out;
}

double resolve_radius(const RadiusRule& rule, std::size_t size, double p) {
  if (const double* r = std::get_if<double>(&rule)) return *r;
  const auto& adaptive = std::get<AdaptiveRadius>(rule);
  return a_f_star(static_cast<double>(size), p, adaptive.l);
}

std::vector<Point> draw_points(const PointLaw& law, std::uint64_t seed, std::size_t rep) {
  if (const auto* sim = std::get_if<Simulated>(&law)) {
    RunOptions opts;
    opts.max_events = sim->events;
    const Trajectory traj = run(sim->params, opts, mix64(seed ^ mix64(rep)));
    return traj.snapshots.back().state.points;
  }
  Rng rng = Rng::derive(seed, rep, StreamTag::Points);
  if (const auto* poisson = std::get_if<UniformPoisson>(&law)) {
    return uniform_points(rng.poisson(poisson->mean), rng);
  }
  return uniform_points(std::get<UniformFixed>(law).n, rng);
}

std::vector<IsolationCounts> replicate_counts(const PointLaw& law, const RadiusRule& radius,
                                              double p, std::size_t reps, std::uint64_t seed,
                                              Metric metric, unsigned threads) {
  check_probability(p);
  if (reps < 1) throw DomainError("replications must be >= 1");
  std::vector<IsolationCounts> out(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    const std::vector<Point> pts = draw_points(law, seed, rep);
    Rng marks = Rng::derive(seed, rep, StreamTag::Marking);
    const MarkedPointSet marked = mark_activity(pts, p, marks);
    if (pts.size() < 2 && std::holds_alternative<AdaptiveRadius>(radius)) {
      // a_f* needs s >= 2; a lone member is isolated by definition.
      IsolationCounts c;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        c.n0 = 1;
        c.na = marked.active[i] ? 1 : 0;
        c.isolated_ids = {i};
      }
      out[rep] = std::move(c);
      return;
    }
    out[rep] = isolated_counts(marked, resolve_radius(radius, pts.size(), p), metric);
  });
  return out;
}

PoissonFit poisson_fit(std::span<const std::uint64_t> samples) {
  if (samples.empty()) throw DomainError("poisson_fit: empty sample");
  PoissonFit fit;
  const stats::Moments m = stats::moments(samples);
  fit.n = samples.size();
  fit.sample_mean = m.mean;
  fit.sample_variance = m.variance;
  fit.dispersion_index = m.mean > 0.0 ? m.variance / m.mean : 0.0;
  fit.degenerate = samples.size() < 2 || m.variance == 0.0;

  const std::uint64_t max_obs = *std::max_element(samples.begin(), samples.end());
  const std::uint64_t cutoff = max_obs + 10;
  std::vector<std::uint64_t> hist(cutoff + 1, 0);
  for (auto v : samples) ++hist[v];
  const double n = static_cast<double>(samples.size());
  double poisson_cdf = 0.0;
  double tv = 0.0;
  fit.pmf_table.reserve(cutoff + 1);
  for (std::uint64_t k = 0; k <= cutoff; ++k) {
    double pk = std::exp(stats::poisson_log_pmf(k, m.mean));
    if (k == cutoff) pk = std::max(0.0, 1.0 - poisson_cdf);  // fold the tail
    poisson_cdf += pk;
    const double emp = static_cast<double>(hist[k]) / n;
    tv += std::fabs(emp - pk);
    fit.pmf_table.push_back({k, emp, pk});
  }
  fit.tv_distance = std::clamp(0.5 * tv, 0.0, 1.0);
  return fit;
}

ConcentrationResult concentration_check(double lambda, double delta, std::size_t n_samples,
                                        std::uint64_t seed) {
  if (!(lambda > 0.0)) throw DomainError("concentration_check: lambda must be > 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw DomainError("concentration_check: delta must lie in (0, 1]");
  }
  if (n_samples < 1) throw DomainError("concentration_check: need at least one sample");
  Rng rng = Rng::derive(seed, 0, StreamTag::Poisson);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = static_cast<double>(rng.poisson(lambda));
    if (std::fabs(x - lambda) >= delta * lambda) ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(n_samples),
          2.0 * std::exp(-lambda * delta * delta / 3.0), n_samples};
}

RegularityReport regularity_report(std::span<const Point> points, double gamma, double nu,
                                   std::optional<double> size_override) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("nu must lie in (0, 1)");
  const double s = size_override.value_or(static_cast<double>(points.size()));
  if (!(s >= 3.0)) throw DomainError("regularity needs s >= 3, got " + std::to_string(s));

  RegularityReport rep;
  rep.gamma = gamma;
  rep.nu = nu;
  rep.size = s;
  rep.radius = gamma * std::sqrt(std::log(s) / s);
  rep.box_side = rep.radius / std::numbers::sqrt2;
  if (rep.box_side >= 1.0) {
    throw DomainError("box side " + std::to_string(rep.box_side) +
                      " >= 1: s too small for gamma = " + std::to_string(gamma));
  }
  rep.expected_per_box = s * rep.radius * rep.radius / 2.0;

  const auto full = static_cast<std::size_t>(std::floor(1.0 / rep.box_side));
  const auto per_axis = static_cast<std::size_t>(std::ceil(1.0 / rep.box_side));
  rep.boxes_per_axis = per_axis;
  std::vector<std::uint64_t> counts(per_axis * per_axis, 0);
  for (const Point& pt : points) {
    const auto bx = std::min(per_axis - 1, static_cast<std::size_t>(pt.x / rep.box_side));
    const auto by = std::min(per_axis - 1, static_cast<std::size_t>(pt.y / rep.box_side));
    ++counts[bx * per_axis + by];
  }
  const double lo = (1.0 - nu) * rep.expected_per_box;
  const double hi = (1.0 + nu) * rep.expected_per_box;
  for (std::size_t bx = 0; bx < per_axis; ++bx) {
    for (std::size_t by = 0; by < per_axis; ++by) {
      const double c = static_cast<double>(counts[bx * per_axis + by]);
      const bool regular = c >= lo && c <= hi;
      if (bx < full && by < full) {
        ++rep.boxes_total;
        if (regular) ++rep.boxes_regular;
      } else {
        ++rep.boundary_boxes;
        if (regular) ++rep.boundary_regular;
      }
    }
  }
  rep.fraction = rep.boxes_total > 0
                     ? static_cast<double>(rep.boxes_regular) / static_cast<double>(rep.boxes_total)
                     : 0.0;
  return rep;
}

DetteHenzeResult dette_henze_check(std::size_t n, double c, std::size_t reps, std::uint64_t seed,
                                   unsigned threads) {
  if (n < 100) throw DomainError("dette_henze_check: n must be >= 100");
  if (reps < 100) throw DomainError("dette_henze_check: reps must be >= 100");
  const double nd = static_cast<double>(n);
  const double radius = std::sqrt((std::log(nd) + c) / (std::numbers::pi * nd));
  if (!(radius > 0.0 && radius <= 0.5)) {
    throw DomainError("dette_henze_check: radius " + std::to_string(radius) +
                      " outside (0, 1/2]");
  }
  const auto counts =
      replicate_counts(UniformFixed{n}, radius, 1.0, reps, seed, Metric::Torus, threads);
  DetteHenzeResult out;
  out.radius = radius;
  out.theoretical = std::exp(-std::exp(-c));
  std::size_t zero = 0;
  out.n0_samples.reserve(reps);
  for (const auto& cnt : counts) {
    out.n0_samples.push_back(cnt.n0);
    if (cnt.n0 == 0) ++zero;
  }
  out.empirical_p_no_isolated = static_cast<double>(zero) / static_cast<double>(reps);
  return out;
}

}  // namespace geonet
