#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "geonet/errors.hpp"
#include "geonet/simulate.hpp"
#include "geonet/stats.hpp"

using namespace geonet;

namespace {

SimParams pure_death(std::size_t s0) {
  SimParams p;
  p.invitation_rate = 0.0;
  p.max_affinity_rate = 0.0;
  p.departure_rate = 1.0;
  p.initial_size = s0;
  return p;
}

NetworkState state_of(std::vector<Point> pts) {
  NetworkState st;
  st.points = std::move(pts);
  return st;
}

bool throws_naming(const SimParams& p, const std::string& field) {
  try {
    p.validate();
  } catch (const DomainError& e) {
    return std::string(e.what()).rfind(field, 0) == 0;
  }
  return false;
}

}  // namespace

TEST_CASE("parameter validation names the field") {
  SimParams ok;
  CHECK_NOTHROW(ok.validate());
  auto p = ok;
  p.invitation_rate = -1;
  CHECK(throws_naming(p, "v_r"));
  p = ok;
  p.departure_rate = std::nan("");
  CHECK(throws_naming(p, "d_r"));
  p = ok;
  p.max_affinity_rate = INFINITY;
  CHECK(throws_naming(p, "A_f"));
  p = ok;
  p.affinity_radius = 0.0;
  CHECK(throws_naming(p, "a_f"));
  p.affinity_radius = 0.51;
  CHECK(throws_naming(p, "a_f"));
  p.affinity_radius = 0.5;
  CHECK_NOTHROW(p.validate());
  p = ok;
  p.sigma = 0.0;
  CHECK(throws_naming(p, "sigma"));
  p = ok;
  p.activity_probability = 0.0;
  CHECK(throws_naming(p, "p "));
  p = ok;
  p.initial_size = 0;
  CHECK(throws_naming(p, "s0"));
  p = ok;
  p.max_resample = 0;
  CHECK(throws_naming(p, "max_resample"));
  CHECK_THROWS_AS(run(p, {}, 1), DomainError);
}

TEST_CASE("affinity proposal names") {
  CHECK(std::string(to_string(AffinityProposal::Uniform)) == "uniform");
  CHECK(affinity_proposal_from_string("gaussian") == AffinityProposal::GaussianAroundMember);
  CHECK_THROWS_AS(affinity_proposal_from_string("normal"), DomainError);
  CHECK(std::string(to_string(EventKind::RejectedAffinity)) == "rejected_affinity");
}

TEST_CASE("local affinity is a closed-ball indicator") {
  SimParams p;
  p.affinity_radius = 0.125;
  p.max_affinity_rate = 2.0;
  const Point x{0.25, 0.5};
  CHECK(local_affinity(x, x, p) == 2.0);
  CHECK(local_affinity(x, {0.375, 0.5}, p) == 2.0);
  CHECK(local_affinity(x, {0.375 + 1e-12, 0.5}, p) == 0.0);
  // Torus wraps around the edge.
  p.metric = Metric::Torus;
  CHECK(local_affinity({0.02, 0.5}, {0.98, 0.5}, p) == 2.0);
  p.metric = Metric::BoundedSquare;
  CHECK(local_affinity({0.02, 0.5}, {0.98, 0.5}, p) == 0.0);
}

TEST_CASE("affinity field") {
  SimParams p;
  CHECK(affinity_field({0.5, 0.5}, NetworkState{}, p) == 0.0);
  CHECK(affinity_field({0.5, 0.5}, state_of({{0.55, 0.5}}), p) == p.max_affinity_rate);

  Rng rng(11);
  std::vector<Point> pts(1000);
  for (auto& q : pts) q = {rng.uniform(), rng.uniform()};
  const auto st = state_of(pts);
  for (int k = 0; k < 50; ++k) {
    const Point y{rng.uniform(), rng.uniform()};
    double brute = 0.0;
    for (const auto& q : pts) {
      if (std::hypot(q.x - y.x, q.y - y.y) <= p.affinity_radius) brute += p.max_affinity_rate;
    }
    const double f = affinity_field(y, st, p);
    CHECK(f == brute);
    CHECK(f <= p.max_affinity_rate * 1000);
  }
}

TEST_CASE("total clock rate") {
  SimParams p;
  NetworkState st;
  st.points.assign(100, {0.5, 0.5});
  CHECK(total_rate(st, p) == doctest::Approx(660.0).epsilon(1e-15));
  SimParams fig2;
  fig2.invitation_rate = 4;
  fig2.departure_rate = 2;
  fig2.max_affinity_rate = 2;
  st.points.assign(50, {0.5, 0.5});
  CHECK(total_rate(st, fig2) == 400.0);

  SimParams still = pure_death(1);
  still.departure_rate = 0.0;
  st.points.assign(1, {0.5, 0.5});
  CHECK(total_rate(st, still) == 0.0);
  Rng rng(1);
  CHECK_THROWS_AS(step(st, still, rng), ContractViolation);
  CHECK_THROWS_AS(total_rate(NetworkState{}, p), ExtinctError);
  NetworkState empty;
  CHECK_THROWS_AS(step(empty, p, rng), ExtinctError);
}

TEST_CASE("pure death steps remove one member each") {
  const auto p = pure_death(5);
  Rng rng(3);
  auto st = initial_state(p, rng);
  CHECK(st.size() == 5);
  double t = 0.0;
  for (std::size_t k = 5; k > 0; --k) {
    const auto ev = step(st, p, rng);
    CHECK(ev.kind == EventKind::Departure);
    CHECK(ev.member_index.has_value());
    CHECK(*ev.member_index < k);
    CHECK_FALSE(ev.position.has_value());
    CHECK(st.size() == k - 1);
    CHECK(st.time > t);
    t = st.time;
  }
  CHECK_THROWS_AS(step(st, p, rng), ExtinctError);
}

TEST_CASE("departure removes exactly the drawn member") {
  auto p = pure_death(1);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 7; ++i) pts.push_back({0.1 * i + 0.05, 0.5});
    auto st = state_of(pts);
    const auto ev = step(st, p, rng);
    auto expected = pts;
    expected.erase(expected.begin() + static_cast<long>(*ev.member_index));
    auto got = st.points;
    std::sort(got.begin(), got.end(), [](auto a, auto b) { return a.x < b.x; });
    CHECK(got == expected);
  }
}

TEST_CASE("rejected affinity leaves the configuration untouched") {
  SimParams p;
  p.invitation_rate = 0.0;
  p.departure_rate = 0.0;
  p.max_affinity_rate = 1.0;
  p.affinity_radius = 0.05;
  Rng rng(17);
  int rejected = 0;
  int accepted = 0;
  for (int k = 0; k < 2000; ++k) {
    auto st = state_of({{0.1, 0.1}});
    const auto before = st.points;
    const auto ev = step(st, p, rng);
    REQUIRE(ev.position.has_value());
    CHECK(st.event_count == 1);
    if (ev.kind == EventKind::RejectedAffinity) {
      ++rejected;
      CHECK(std::hypot(ev.position->x - 0.1, ev.position->y - 0.1) > 0.05);
      CHECK(st.points == before);
    } else {
      ++accepted;
      CHECK(ev.kind == EventKind::AffinityRecruit);
      CHECK(std::hypot(ev.position->x - 0.1, ev.position->y - 0.1) <= 0.05);
      CHECK(st.size() == 2);
      CHECK(st.points.back() == *ev.position);
    }
  }
  // Acceptance probability is the disk area pi 0.05^2 (disk inside the square).
  const double q = accepted / 2000.0;
  CHECK(std::fabs(q - 0.0078539816) < 4 * stats::binomial_se(0.0078539816, 2000));
  CHECK(rejected + accepted == 2000);
}

TEST_CASE("invitation resampling exhausts to a rejected invitation") {
  SimParams p;
  p.invitation_rate = 1.0;
  p.departure_rate = 0.0;
  p.max_affinity_rate = 0.0;
  p.sigma = 1e3;
  p.max_resample = 1;
  Rng rng(2);
  int rejected = 0;
  for (int k = 0; k < 200; ++k) {
    auto st = state_of({{0.5, 0.5}});
    const auto ev = step(st, p, rng);
    if (ev.kind == EventKind::RejectedInvitation) {
      ++rejected;
      CHECK_FALSE(ev.position.has_value());
      CHECK(st.size() == 1);
    }
  }
  CHECK(rejected >= 195);

  // A narrow kernel always lands inside, even at a corner.
  p.sigma = 0.01;
  p.max_resample = 1000;
  for (int k = 0; k < 200; ++k) {
    auto st = state_of({{0.0, 1.0}});
    const auto ev = step(st, p, rng);
    CHECK(ev.kind == EventKind::Invitation);
    CHECK(in_unit_square(*ev.position));
  }
}

TEST_CASE("invitation offsets are Gaussian around the drawn member") {
  SimParams p;
  p.invitation_rate = 1.0;
  p.departure_rate = 0.0;
  p.max_affinity_rate = 0.0;
  p.sigma = 0.02;
  Rng rng(23);
  std::vector<double> dx;
  std::vector<double> dy;
  for (int k = 0; k < 20000; ++k) {
    auto st = state_of({{0.5, 0.5}});
    const auto ev = step(st, p, rng);
    dx.push_back(ev.position->x - 0.5);
    dy.push_back(ev.position->y - 0.5);
  }
  const auto mx = stats::moments(dx);
  const auto my = stats::moments(dy);
  CHECK(std::fabs(mx.mean) < 4 * 0.02 / std::sqrt(20000.0));
  CHECK(std::fabs(my.mean) < 4 * 0.02 / std::sqrt(20000.0));
  CHECK(std::sqrt(mx.variance) == doctest::Approx(0.02).epsilon(0.03));
  CHECK(std::sqrt(my.variance) == doctest::Approx(0.02).epsilon(0.03));
}

TEST_CASE("gaussian affinity proposal centers on a member") {
  SimParams p;
  p.invitation_rate = 0.0;
  p.departure_rate = 0.0;
  p.affinity_proposal = AffinityProposal::GaussianAroundMember;
  p.sigma = 0.01;
  Rng rng(9);
  int accepted = 0;
  for (int k = 0; k < 1000; ++k) {
    auto st = state_of({{0.3, 0.3}});
    const auto ev = step(st, p, rng);
    REQUIRE(ev.position.has_value());
    CHECK(std::hypot(ev.position->x - 0.3, ev.position->y - 0.3) < 0.1);
    if (ev.kind == EventKind::AffinityRecruit) ++accepted;
  }
  // sigma = a_f / 10: essentially every proposal is accepted.
  CHECK(accepted == 1000);
}

TEST_CASE("event-type frequencies match the clock shares at frozen size") {
  SimParams p;
  Rng init(1);
  auto st = initial_state(p, init);
  const auto frozen = st.points;
  Rng rng = Rng::derive(99, 0, StreamTag::Simulation);
  std::array<std::uint64_t, 3> counts{};
  std::vector<double> gaps;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double before = st.time;
    const auto ev = step(st, p, rng, StepMode::ProposeOnly);
    if (k < 10000) gaps.push_back(st.time - before);
    switch (ev.kind) {
      case EventKind::Invitation:
      case EventKind::RejectedInvitation:
        ++counts[0];
        break;
      case EventKind::AffinityRecruit:
      case EventKind::RejectedAffinity:
        ++counts[1];
        break;
      case EventKind::Departure:
        ++counts[2];
        break;
    }
  }
  CHECK(st.points == frozen);
  CHECK(st.event_count == static_cast<std::uint64_t>(n));
  const std::array<double, 3> probs{3.0 / 6.6, 2.0 / 6.6, 1.6 / 6.6};
  const double chi = stats::chi_square_statistic(counts, probs);
  CHECK(stats::chi_square_sf(chi, 2) > 1e-3);
  const auto ks = stats::ks_exponential(gaps, 660.0);
  CHECK(ks.p_value > 1e-3);
  // A wrong rate is rejected decisively.
  CHECK(stats::ks_exponential(gaps, 600.0).p_value < 1e-3);
}

TEST_CASE("trajectory invariants over a recorded run") {
  SimParams p;
  RunOptions o;
  o.max_events = 20000;
  o.snapshot_every = 1000;
  o.record_events = true;
  const auto traj = run(p, o, 5);
  REQUIRE(traj.events.size() == 20000);
  CHECK(traj.seed == 5);
  CHECK(traj.snapshots.front().event_count == 0);
  CHECK(traj.snapshots.front().state.size() == 100);
  CHECK(traj.snapshots.back().event_count == 20000);
  CHECK(traj.snapshots.size() == 21);

  // Replay sizes from the log: +1, -1 or 0 per event, never negative.
  long s = 100;
  double t = 0.0;
  int bad = 0;
  std::size_t snap = 1;
  for (std::size_t k = 0; k < traj.events.size(); ++k) {
    const auto& ev = traj.events[k];
    if (ev.time < t) ++bad;
    t = ev.time;
    if (ev.member_index && *ev.member_index >= static_cast<std::size_t>(s)) ++bad;
    switch (ev.kind) {
      case EventKind::Invitation:
      case EventKind::AffinityRecruit:
        ++s;
        if (!ev.position || !in_unit_square(*ev.position)) ++bad;
        break;
      case EventKind::Departure:
        --s;
        break;
      default:
        break;
    }
    if (s < 0) ++bad;
    if (snap < traj.snapshots.size() && traj.snapshots[snap].event_count == k + 1) {
      if (static_cast<long>(traj.snapshots[snap].state.size()) != s) ++bad;
      for (const auto& q : traj.snapshots[snap].state.points) {
        if (!in_unit_square(q)) ++bad;
      }
      ++snap;
    }
  }
  CHECK(bad == 0);
  CHECK(snap == traj.snapshots.size());
}

TEST_CASE("accepted affinity recruits are near a member at acceptance time") {
  SimParams p;
  p.invitation_rate = 1.0;
  p.departure_rate = 1.0;
  Rng rng(4);
  auto st = initial_state(p, rng);
  int checked = 0;
  int bad = 0;
  for (int k = 0; k < 20000 && !st.points.empty(); ++k) {
    const auto before = st.points;
    const auto ev = step(st, p, rng);
    if (ev.kind == EventKind::AffinityRecruit) {
      ++checked;
      if (affinity_field(*ev.position, state_of(before), p) <= 0.0) ++bad;
      if (distance(before[*ev.member_index], *ev.position, p.metric) > p.affinity_radius) ++bad;
    }
  }
  CHECK(checked > 50);
  CHECK(bad == 0);
}

TEST_CASE("pure death run goes extinct after exactly s0 events") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto traj = run(pure_death(5), {}, seed);
    const auto ext = extinction_time(traj);
    REQUIRE(ext.has_value());
    CHECK(ext->event_count == 5);
    CHECK(ext->time == traj.snapshots.back().state.time);
  }
  CHECK_FALSE(extinction_time(Trajectory{}).has_value());
}

TEST_CASE("rates all zero stop the run without progress") {
  auto p = pure_death(3);
  p.departure_rate = 0.0;
  const auto traj = run(p, {}, 1);
  CHECK(traj.snapshots.size() == 1);
  CHECK(traj.snapshots.back().state.size() == 3);
}

TEST_CASE("supercritical regime grows") {
  SimParams p;
  RunOptions o;
  o.max_events = 100000;
  o.snapshot_every = 25000;
  const auto traj = run(p, o, 42);
  const auto final_size = traj.snapshots.back().state.size();
  CHECK(final_size >= 1000);
  CHECK(final_size <= 1000000);
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
    CHECK(traj.snapshots[i].state.size() > traj.snapshots[i - 1].state.size());
  }
}

TEST_CASE("supercritical runs rarely die within 1e4 events") {
  RunOptions o;
  o.max_events = 10000;
  int survived = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (!extinction_time(run(SimParams{}, o, seed))) ++survived;
  }
  CHECK(survived >= 99);
}

TEST_CASE("runs are deterministic in the seed") {
  SimParams p;
  p.affinity_proposal = AffinityProposal::GaussianAroundMember;
  RunOptions o;
  o.max_events = 5000;
  o.snapshot_every = 500;
  o.record_events = true;
  const auto a = run(p, o, 77);
  const auto b = run(p, o, 77);
  const auto c = run(p, o, 78);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("drift estimate") {
  SUBCASE("pure death") {
    const auto d = drift_estimate(pure_death(50), 0.5, 200, 1);
    CHECK(d.predicted == -1.0);
    CHECK(std::fabs(d.measured - d.predicted) <= 3 * d.measured_se);
    CHECK(d.reps == 200);
  }
  SUBCASE("critical balance") {
    SimParams p;
    p.invitation_rate = 1.0;
    p.departure_rate = 1.0;
    p.max_affinity_rate = 0.0;
    p.sigma = 1e-3;
    p.initial_size = 50;
    const auto d = drift_estimate(p, 1.0, 200, 2);
    CHECK(std::fabs(d.predicted) < 0.01);
    CHECK(std::fabs(d.measured - d.predicted) <= 3 * d.measured_se);
  }
  SUBCASE("supercritical self-consistency") {
    const auto d = drift_estimate(SimParams{}, 0.5, 200, 3);
    CHECK(d.q_affinity > 0.0);
    CHECK(d.q_affinity < 0.2);
    CHECK(d.q_invitation > 0.99);
    CHECK(std::fabs(d.measured - d.predicted) <= 0.1 * std::fabs(d.predicted));
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(drift_estimate(SimParams{}, 0.0, 10, 1), DomainError);
    CHECK_THROWS_AS(drift_estimate(SimParams{}, 1.0, 1, 1), DomainError);
  }
  SUBCASE("thread count does not change the estimate") {
    const auto a = drift_estimate(SimParams{}, 0.2, 16, 4, 1);
    const auto b = drift_estimate(SimParams{}, 0.2, 16, 4, 3);
    CHECK(a.measured == b.measured);
    CHECK(a.predicted == b.predicted);
  }
}
