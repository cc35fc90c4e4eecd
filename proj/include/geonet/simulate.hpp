#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "geonet/geometry.hpp"
#include "geonet/rng.hpp"

namespace geonet {

enum class InvitationKernel { GaussianTruncated };
enum class AffinityProposal { Uniform, GaussianAroundMember };

const char* to_string(AffinityProposal p);
AffinityProposal affinity_proposal_from_string(const char* name);

struct SimParams {
  double invitation_rate = 3.0;    // v_r, per member
  double departure_rate = 1.6;     // d_r, per member
  double max_affinity_rate = 2.0;  // A_f
  double affinity_radius = 0.1;    // a_f, in (0, 1/2]
  double sigma = 0.01;             // dispersal std-dev of the Gaussian kernels
  double activity_probability = 1.0;
  std::size_t initial_size = 100;
  InvitationKernel invitation_kernel = InvitationKernel::GaussianTruncated;
  AffinityProposal affinity_proposal = AffinityProposal::Uniform;
  Metric metric = Metric::BoundedSquare;
  int max_resample = 1000;

  // Throws DomainError naming the first offending field.
  void validate() const;
};

struct NetworkState {
  double time = 0.0;
  std::vector<Point> points;
  std::uint64_t event_count = 0;

  std::size_t size() const { return points.size(); }
  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

enum class EventKind { Invitation, Departure, AffinityRecruit, RejectedInvitation, RejectedAffinity };

const char* to_string(EventKind k);

struct EventRecord {
  EventKind kind = EventKind::Invitation;
  double time = 0.0;
  // Accepted or proposed position; absent for departures and exhausted invitations.
  std::optional<Point> position;
  // Drawn member (pre-event index).
  std::optional<std::size_t> member_index;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct Snapshot {
  std::uint64_t event_count = 0;
  NetworkState state;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<EventRecord> events;  // empty unless requested
  std::uint64_t seed = 0;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// aff(x, y) = A_f 1{|x - y| <= a_f}.
double local_affinity(const Point& x, const Point& y, const SimParams& params);

// Sum of local affinities of y with every member of the state.
double affinity_field(const Point& y, const NetworkState& state, const SimParams& params);

// Global clock rate H = (v_r + A_f + d_r) s. Throws ExtinctError when s = 0.
double total_rate(const NetworkState& state, const SimParams& params);

enum class StepMode {
  Apply,
  // Draws the waiting time and the proposal exactly as Apply but leaves the
  // configuration untouched (frozen-size measurement).
  ProposeOnly,
};

// One iteration of the exact jump chain: exponential waiting time, event type
// by the three clock shares, then the mechanism with its acceptance step.
// Throws ExtinctError at s = 0 and ContractViolation when the total rate is 0.
EventRecord step(NetworkState& state, const SimParams& params, Rng& rng,
                 StepMode mode = StepMode::Apply);

// Initial configuration: s0 i.i.d. uniform points.
NetworkState initial_state(const SimParams& params, Rng& rng);

struct RunOptions {
  std::uint64_t max_events = 100000;
  // 0 keeps only the initial and final snapshots.
  std::uint64_t snapshot_every = 0;
  bool record_events = false;
};

// Runs until max_events iterations or extinction. The stream for seed s is
// Rng::derive(s, 0, StreamTag::Simulation).
Trajectory run(const SimParams& params, const RunOptions& options, std::uint64_t seed);

struct ExtinctionInfo {
  double time = 0.0;
  std::uint64_t event_count = 0;
};

std::optional<ExtinctionInfo> extinction_time(const Trajectory& trajectory);

struct DriftEstimate {
  // Per-capita growth rate: net accepted births minus deaths per unit of
  // member-time, pooled over replications.
  double measured = 0.0;
  double measured_se = 0.0;
  // Generator prediction v_r q_inv + A_f q_af - d_r with the acceptance
  // frequencies q observed in the same runs.
  double predicted = 0.0;
  double q_invitation = 1.0;
  double q_affinity = 1.0;
  std::size_t reps = 0;
};

DriftEstimate drift_estimate(const SimParams& params, double horizon, std::size_t reps,
                             std::uint64_t seed, unsigned threads = 1);

}  // namespace geonet
