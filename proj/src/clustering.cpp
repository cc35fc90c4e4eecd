#include "geonet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "geonet/errors.hpp"
#include "geonet/rng.hpp"

namespace geonet {

std::vector<std::size_t> ClusterLabeling::isolated_ids() const {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kIsolated) ids.push_back(i);
  }
  return ids;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

namespace {

void check_radius(double r) {
  if (!(r > 0.0 && r <= 0.5)) {
    throw DomainError("radius " + std::to_string(r) + " outside (0, 1/2]");
  }
}

}  // namespace

ClusterLabeling afstar_cluster(const MarkedPointSet& marked, double r, Metric metric,
                               const ClusterOptions& options) {
  check_radius(r);
  const std::size_t n = marked.points.size();
  ClusterLabeling out;
  out.labels.assign(n, kIsolated);
  if (n == 0) return out;

  const SpatialIndex index(marked.points, r, metric);
  std::vector<bool> dense(n, options.min_active_neighbors == 0);
  if (options.min_active_neighbors > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t active = 0;
      dense[i] = index.any_within(marked.points[i], r, [&](std::size_t j) {
        if (j != i && marked.active[j]) ++active;
        return active >= options.min_active_neighbors;
      });
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (options.shuffle_seed) {
    Rng rng = Rng::derive(*options.shuffle_seed, 0, StreamTag::VisitOrder);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }

  ClusterId next_id = 0;
  std::deque<std::size_t> queue;
  for (std::size_t seed : order) {
    if (out.labels[seed] != kIsolated || !dense[seed]) continue;
    const ClusterId id = next_id++;
    out.labels[seed] = id;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      for (std::size_t j : index.neighbors_within(marked.points[q], r)) {
        if (out.labels[j] != kIsolated) continue;
        out.labels[j] = id;
        if (dense[j]) queue.push_back(j);
      }
    }
  }
  out.n_clusters = static_cast<std::size_t>(next_id);
  out.n_isolated = static_cast<std::size_t>(std::count(out.labels.begin(), out.labels.end(), kIsolated));
  return out;
}

namespace {

double sq_planar(const Point& a, const Point& b) {
  return distance_squared(a, b, Metric::BoundedSquare);
}

}  // namespace

KMeansResult kmeans(std::span<const Point> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter, double tol) {
  const std::size_t n = points.size();
  if (k < 1 || k > n) {
    throw DomainError("kmeans: k = " + std::to_string(k) + " must lie in [1, n = " +
                      std::to_string(n) + "]");
  }
  Rng rng = Rng::derive(seed, 0, StreamTag::KMeans);
  KMeansResult res;

  // k-means++ seeding: each new center drawn with probability proportional to
  // squared distance from the nearest existing center.
  res.centroids.push_back(points[rng.uniform_index(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_planar(points[i], res.centroids[0]);
  while (res.centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_index(n);
    }
    res.centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_planar(points[i], res.centroids.back()));
    }
  }

  res.labels.assign(n, 0);
  std::vector<double> sx(k);
  std::vector<double> sy(k);
  std::vector<std::size_t> cnt(k);
  for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iter, 1); ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      ClusterId best_c = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_planar(points[i], res.centroids[c]);
        if (d < best) {
          best = d;
          best_c = static_cast<ClusterId>(c);
        }
      }
      res.labels[i] = best_c;
      inertia += best;
    }
    res.inertia_trace.push_back(inertia);
    res.inertia = inertia;
    res.iterations = iter + 1;

    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sy.begin(), sy.end(), 0.0);
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sx[res.labels[i]] += points[i].x;
      sy[res.labels[i]] += points[i].y;
      ++cnt[res.labels[i]];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (cnt[c] == 0) continue;  // empty cluster keeps its centroid
      const Point next{sx[c] / cnt[c], sy[c] / cnt[c]};
      shift = std::max(shift, std::sqrt(sq_planar(next, res.centroids[c])));
      res.centroids[c] = next;
    }
    if (shift < tol) break;
  }
  // Final inertia against the converged centroids without reassignment.
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) inertia += sq_planar(points[i], res.centroids[res.labels[i]]);
  res.inertia = inertia;
  return res;
}

ClusterLabeling to_labeling(const KMeansResult& km) {
  ClusterLabeling out;
  out.labels = km.labels;
  // Renumber by first appearance so ids are contiguous even with empty clusters.
  std::map<ClusterId, ClusterId> remap;
  for (ClusterId& l : out.labels) {
    auto [it, inserted] = remap.try_emplace(l, static_cast<ClusterId>(remap.size()));
    l = it->second;
  }
  out.n_clusters = remap.size();
  out.n_isolated = 0;
  return out;
}

bool ComponentReport::connected() const {
  return components.size() == 1 && detached_inactive.empty();
}

ComponentReport active_components(const MarkedPointSet& marked, double r, Metric metric) {
  check_radius(r);
  const std::size_t n = marked.points.size();
  ComponentReport rep;
  if (n == 0) return rep;
  std::vector<Point> active_pts;
  std::vector<std::size_t> active_ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (marked.active[i]) {
      active_pts.push_back(marked.points[i]);
      active_ids.push_back(i);
    }
  }
  const SpatialIndex index(active_pts, r, metric);
  UnionFind uf(active_pts.size());
  for (std::size_t a = 0; a < active_pts.size(); ++a) {
    index.any_within(active_pts[a], r, [&](std::size_t b) {
      if (b > a) uf.unite(a, b);
      return false;
    });
  }
  std::map<std::size_t, std::size_t> root_to_component;
  for (std::size_t a = 0; a < active_pts.size(); ++a) {
    const std::size_t root = uf.find(a);
    auto [it, inserted] = root_to_component.try_emplace(root, rep.components.size());
    if (inserted) rep.components.emplace_back();
    rep.components[it->second].push_back(active_ids[a]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (marked.active[i]) continue;
    const bool attached = index.any_within(marked.points[i], r, [](std::size_t) { return true; });
    (attached ? rep.attached_inactive : rep.detached_inactive).push_back(i);
  }
  return rep;
}

LabelingComparison compare_labelings(const ClusterLabeling& a, const ClusterLabeling& b) {
  if (a.labels.size() != b.labels.size()) {
    throw DomainError("compare_labelings: sizes differ (" + std::to_string(a.labels.size()) +
                      " vs " + std::to_string(b.labels.size()) + ")");
  }
  const std::size_t n = a.labels.size();
  LabelingComparison out;
  out.n_clusters_delta = static_cast<long long>(a.n_clusters) - static_cast<long long>(b.n_clusters);
  out.n_isolated_delta = static_cast<long long>(a.n_isolated) - static_cast<long long>(b.n_isolated);
  if (n < 2) return out;

  // Isolated points become singleton groups with ids past the real clusters.
  const auto group = [](const ClusterLabeling& l, std::size_t i) -> std::int64_t {
    return l.labels[i] == kIsolated ? -1 - static_cast<std::int64_t>(i) : l.labels[i];
  };
  std::map<std::int64_t, std::uint64_t> count_a;
  std::map<std::int64_t, std::uint64_t> count_b;
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> joint;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ga = group(a, i);
    const auto gb = group(b, i);
    ++count_a[ga];
    ++count_b[gb];
    ++joint[{ga, gb}];
  }
  const auto pairs = [](std::uint64_t m) { return static_cast<double>(m) * (m - 1) / 2.0; };
  double same_a = 0.0;
  double same_b = 0.0;
  double same_both = 0.0;
  for (const auto& [g, m] : count_a) same_a += pairs(m);
  for (const auto& [g, m] : count_b) same_b += pairs(m);
  for (const auto& [g, m] : joint) same_both += pairs(m);
  const double total = pairs(n);
  const double agree = total - same_a - same_b + 2.0 * same_both;
  out.pair_agreement = agree / total;
  return out;
}

}  // namespace geonet
