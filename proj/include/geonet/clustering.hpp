#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geonet/geometry.hpp"
#include "geonet/isolation.hpp"

namespace geonet {

using ClusterId = std::int32_t;
inline constexpr ClusterId kIsolated = -1;

struct ClusterLabeling {
  std::vector<ClusterId> labels;  // 0..n_clusters-1 or kIsolated
  std::size_t n_clusters = 0;
  std::size_t n_isolated = 0;

  std::vector<std::size_t> isolated_ids() const;
};

struct ClusterOptions {
  // A point is dense (core) when its closed r-ball holds at least this many
  // active points besides itself.
  std::size_t min_active_neighbors = 1;
  // Seed points are visited in index order unless a shuffle seed is given.
  std::optional<std::uint64_t> shuffle_seed;
};

// a_f*-neighborhood clustering. Clusters grow breadth-first from dense points
// through their r-neighborhoods; non-dense points reached from a dense point
// join its cluster; points never reached are Isolated. Ids follow discovery
// order. Throws DomainError unless r in (0, 1/2].
ClusterLabeling afstar_cluster(const MarkedPointSet& marked, double r, Metric metric,
                               const ClusterOptions& options = {});

struct KMeansResult {
  std::vector<Point> centroids;
  std::vector<ClusterId> labels;
  double inertia = 0.0;
  std::size_t iterations = 0;
  // Inertia after each assignment step.
  std::vector<double> inertia_trace;
};

// Lloyd iterations from a k-means++ start, planar (non-wrapping) distances.
// Throws DomainError unless 1 <= k <= n.
KMeansResult kmeans(std::span<const Point> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 100, double tol = 1e-6);

ClusterLabeling to_labeling(const KMeansResult& km);

struct ComponentReport {
  // Components of the graph on active points, each sorted ascending; ordered
  // by smallest member.
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> attached_inactive;  // within r of an active point
  std::vector<std::size_t> detached_inactive;

  // One active component and no detached inactive member.
  bool connected() const;
};

ComponentReport active_components(const MarkedPointSet& marked, double r, Metric metric);

struct LabelingComparison {
  double pair_agreement = 1.0;  // Rand index, Isolated as singletons
  long long n_clusters_delta = 0;  // a - b
  long long n_isolated_delta = 0;
};

LabelingComparison compare_labelings(const ClusterLabeling& a, const ClusterLabeling& b);

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t component_size(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace geonet
