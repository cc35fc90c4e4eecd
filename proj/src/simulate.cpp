#include "geonet/simulate.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "geonet/errors.hpp"
#include "geonet/parallel.hpp"

namespace geonet {

const char* to_string(AffinityProposal p) {
  return p == AffinityProposal::Uniform ? "uniform" : "gaussian";
}

AffinityProposal affinity_proposal_from_string(const char* name) {
  if (std::strcmp(name, "uniform") == 0) return AffinityProposal::Uniform;
  if (std::strcmp(name, "gaussian") == 0) return AffinityProposal::GaussianAroundMember;
  throw DomainError(std::string("unknown affinity proposal '") + name +
                    "' (expected uniform|gaussian)");
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Invitation:
      return "invitation";
    case EventKind::Departure:
      return "departure";
    case EventKind::AffinityRecruit:
      return "affinity";
    case EventKind::RejectedInvitation:
      return "rejected_invitation";
    case EventKind::RejectedAffinity:
      return "rejected_affinity";
  }
  return "?";
}

void SimParams::validate() const {
  const auto rate = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
    }
  };
  rate(invitation_rate, "v_r");
  rate(departure_rate, "d_r");
  rate(max_affinity_rate, "A_f");
  if (!(affinity_radius > 0.0 && affinity_radius <= 0.5)) {
    throw DomainError("a_f must lie in (0, 1/2], got " + std::to_string(affinity_radius));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be > 0, got " + std::to_string(sigma));
  }
  if (!(activity_probability > 0.0 && activity_probability <= 1.0)) {
    throw DomainError("p must lie in (0, 1], got " + std::to_string(activity_probability));
  }
  if (initial_size < 1) throw DomainError("s0 must be >= 1");
  if (max_resample < 1) throw DomainError("max_resample must be >= 1");
}

double local_affinity(const Point& x, const Point& y, const SimParams& params) {
  return within_radius(x, y, params.affinity_radius, params.metric) ? params.max_affinity_rate
                                                                    : 0.0;
}

double affinity_field(const Point& y, const NetworkState& state, const SimParams& params) {
  double sum = 0.0;
  for (const Point& x : state.points) sum += local_affinity(x, y, params);
  return sum;
}

double total_rate(const NetworkState& state, const SimParams& params) {
  if (state.points.empty()) throw ExtinctError("network is extinct (s = 0)");
  return (params.invitation_rate + params.max_affinity_rate + params.departure_rate) *
         static_cast<double>(state.points.size());
}

namespace {

// Gaussian offset around `center`, resampled until it lands in [0,1]^2.
std::optional<Point> truncated_gaussian(const Point& center, const SimParams& params, Rng& rng) {
  for (int attempt = 0; attempt < params.max_resample; ++attempt) {
    const Point y{center.x + params.sigma * rng.normal(), center.y + params.sigma * rng.normal()};
    if (in_unit_square(y)) return y;
  }
  return std::nullopt;
}

}  // namespace

EventRecord step(NetworkState& state, const SimParams& params, Rng& rng, StepMode mode) {
  const double rate = total_rate(state, params);
  if (!(rate > 0.0)) throw ContractViolation("total event rate is zero; the chain cannot move");
  const std::uint64_t s = state.points.size();

  state.time += rng.exponential(rate);
  ++state.event_count;

  const double clock = params.invitation_rate + params.max_affinity_rate + params.departure_rate;
  const double alpha_v = params.invitation_rate / clock;
  const double alpha_d = params.departure_rate / clock;
  const double u = rng.uniform();

  EventRecord ev;
  ev.time = state.time;
  const bool apply = mode == StepMode::Apply;

  if (u < alpha_v) {
    const std::size_t i = rng.uniform_index(s);
    ev.member_index = i;
    if (auto y = truncated_gaussian(state.points[i], params, rng)) {
      ev.kind = EventKind::Invitation;
      ev.position = *y;
      if (apply) state.points.push_back(*y);
    } else {
      ev.kind = EventKind::RejectedInvitation;
    }
  } else if (u < alpha_v + alpha_d) {
    const std::size_t i = rng.uniform_index(s);
    ev.kind = EventKind::Departure;
    ev.member_index = i;
    if (apply) {
      state.points[i] = state.points.back();
      state.points.pop_back();
    }
  } else {
    std::optional<Point> y;
    if (params.affinity_proposal == AffinityProposal::Uniform) {
      y = Point{rng.uniform(), rng.uniform()};
    } else {
      const std::size_t center = rng.uniform_index(s);
      y = truncated_gaussian(state.points[center], params, rng);
    }
    const std::size_t i = rng.uniform_index(s);
    ev.member_index = i;
    ev.position = y;
    // Acceptance ratio aff / A_f reduces to the ball indicator.
    if (y && local_affinity(state.points[i], *y, params) > 0.0) {
      ev.kind = EventKind::AffinityRecruit;
      if (apply) state.points.push_back(*y);
    } else {
      ev.kind = EventKind::RejectedAffinity;
    }
  }
  return ev;
}

NetworkState initial_state(const SimParams& params, Rng& rng) {
  NetworkState st;
  st.points.reserve(params.initial_size);
  for (std::size_t i = 0; i < params.initial_size; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    st.points.push_back({x, y});
  }
  return st;
}

Trajectory run(const SimParams& params, const RunOptions& options, std::uint64_t seed) {
  params.validate();
  Rng rng = Rng::derive(seed, 0, StreamTag::Simulation);
  Trajectory traj;
  traj.seed = seed;
  NetworkState state = initial_state(params, rng);
  traj.snapshots.push_back({0, state});

  const double clock = params.invitation_rate + params.max_affinity_rate + params.departure_rate;
  while (state.event_count < options.max_events && !state.points.empty() && clock > 0.0) {
    EventRecord ev = step(state, params, rng);
    if (options.record_events) traj.events.push_back(ev);
    if (options.snapshot_every > 0 && state.event_count % options.snapshot_every == 0 &&
        state.event_count < options.max_events && !state.points.empty()) {
      traj.snapshots.push_back({state.event_count, state});
    }
  }
  if (traj.snapshots.back().event_count != state.event_count) {
    traj.snapshots.push_back({state.event_count, state});
  }
  return traj;
}

std::optional<ExtinctionInfo> extinction_time(const Trajectory& trajectory) {
  for (const Snapshot& snap : trajectory.snapshots) {
    if (snap.state.points.empty()) return ExtinctionInfo{snap.state.time, snap.event_count};
  }
  return std::nullopt;
}

namespace {

struct DriftTally {
  double net = 0.0;          // accepted births - deaths
  double exposure = 0.0;     // integral of s dt
  double inv_proposed = 0.0;
  double inv_accepted = 0.0;
  double af_proposed = 0.0;
  double af_accepted = 0.0;
};

DriftTally drift_replication(const SimParams& params, double horizon, std::uint64_t seed,
                             std::size_t rep) {
  Rng rng = Rng::derive(seed, rep, StreamTag::Simulation);
  NetworkState state = initial_state(params, rng);
  DriftTally t;
  const double clock = params.invitation_rate + params.max_affinity_rate + params.departure_rate;
  if (clock <= 0.0) {
    t.exposure = horizon * static_cast<double>(state.size());
    return t;
  }
  while (!state.points.empty()) {
    const double s = static_cast<double>(state.size());
    const double before = state.time;
    const EventRecord ev = step(state, params, rng);
    // An event past the horizon ends the replication and is not counted.
    if (state.time > horizon) {
      t.exposure += s * (horizon - before);
      break;
    }
    t.exposure += s * (state.time - before);
    switch (ev.kind) {
      case EventKind::Invitation:
        t.inv_proposed += 1;
        t.inv_accepted += 1;
        t.net += 1;
        break;
      case EventKind::RejectedInvitation:
        t.inv_proposed += 1;
        break;
      case EventKind::AffinityRecruit:
        t.af_proposed += 1;
        t.af_accepted += 1;
        t.net += 1;
        break;
      case EventKind::RejectedAffinity:
        t.af_proposed += 1;
        break;
      case EventKind::Departure:
        t.net -= 1;
        break;
    }
  }
  return t;
}

}  // namespace

DriftEstimate drift_estimate(const SimParams& params, double horizon, std::size_t reps,
                             std::uint64_t seed, unsigned threads) {
  params.validate();
  if (!(horizon > 0.0)) throw DomainError("drift horizon must be positive");
  if (reps < 2) throw DomainError("drift estimate needs at least 2 replications");
  std::vector<DriftTally> tallies(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    tallies[r] = drift_replication(params, horizon, seed, r);
  });

  DriftTally total;
  for (const auto& t : tallies) {
    total.net += t.net;
    total.exposure += t.exposure;
    total.inv_proposed += t.inv_proposed;
    total.inv_accepted += t.inv_accepted;
    total.af_proposed += t.af_proposed;
    total.af_accepted += t.af_accepted;
  }
  DriftEstimate out;
  out.reps = reps;
  out.measured = total.exposure > 0.0 ? total.net / total.exposure : 0.0;
  // Ratio-estimator standard error across replications.
  const double n = static_cast<double>(reps);
  const double mean_exposure = total.exposure / n;
  double ss = 0.0;
  for (const auto& t : tallies) {
    const double resid = t.net - out.measured * t.exposure;
    ss += resid * resid;
  }
  out.measured_se = mean_exposure > 0.0 ? std::sqrt(ss / (n - 1.0) / n) / mean_exposure : 0.0;
  out.q_invitation = total.inv_proposed > 0.0 ? total.inv_accepted / total.inv_proposed : 1.0;
  out.q_affinity = total.af_proposed > 0.0 ? total.af_accepted / total.af_proposed : 1.0;
  out.predicted = params.invitation_rate * out.q_invitation +
                  params.max_affinity_rate * out.q_affinity - params.departure_rate;
  return out;
}

}  // namespace geonet
