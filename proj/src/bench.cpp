#include "obsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "obsim/adaptive.hpp"
#include "obsim/io.hpp"

namespace obsim {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - lo;
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

// Exactness priority for calibration-map tie-breaking.
int method_priority(Method m) {
  switch (m) {
    case Method::BruteForce: return 0;
    case Method::Indirect: return 1;
    case Method::SelfObservation: return 2;
    case Method::Survey: return 3;
    case Method::Adaptive: return 4;
  }
  return 5;
}

// One full observed simulation run; returns the final observed value so the
// observation cannot be optimized away.
double run_once(const Scenario& sc, std::uint64_t sim_seed,
                std::uint64_t obs_seed) {
  SimConfig cfg;
  cfg.grid = GridSpec{};
  cfg.zone = Zone::with_coverage(cfg.grid, sc.rate);
  cfg.agents = sc.agents;
  cfg.steps = sc.steps;
  cfg.seed = sim_seed;
  cfg.track_occupancy = false;
  // With a fixed rate the adaptive delegate is constant over the run, so
  // group maintenance is needed only when that delegate is self-observation.
  cfg.track_group =
      sc.method == Method::SelfObservation ||
      (sc.method == Method::Adaptive &&
       select_method(*sc.calibration, sc.agents, sc.rate) ==
           Method::SelfObservation);

  SimState state(cfg);
  std::mt19937_64 obs_rng(obs_seed);

  SurveyPlan plan;
  if (sc.method == Method::Survey)
    plan = SurveyPlan::make(sc.agents, sc.rate, *sc.survey_d);

  std::optional<AdaptiveObserver> adaptive;
  if (sc.method == Method::Adaptive) {
    AdaptivePolicy policy{*sc.calibration, sc.rate, 0, *sc.survey_d};
    adaptive.emplace(std::move(policy), obs_seed);
  }

  double last = 0.0;
  for (int s = 0; s < sc.steps; ++s) {
    state.step();
    if (!sc.method) continue;
    switch (*sc.method) {
      case Method::BruteForce:
        last = observe_brute_force(state, cfg.zone).value;
        break;
      case Method::Indirect:
        last = observe_indirect(state, state.config().zone).value;
        break;
      case Method::SelfObservation:
        last = observe_self(state).value;
        break;
      case Method::Survey:
        last = observe_survey(state, plan, obs_rng).value;
        break;
      case Method::Adaptive:
        last = adaptive->observe(state).value;
        break;
    }
  }
  return last;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void Scenario::validate() const {
  if (agents < 1) throw std::invalid_argument("scenario: agents must be >= 1");
  if (steps < 1) throw std::invalid_argument("scenario: steps must be >= 1");
  if (rate < 0.0 || rate > 1.0)
    throw std::invalid_argument("scenario: rate must be in [0, 1]");
  if (replicates < 1)
    throw std::invalid_argument("scenario: replicates must be >= 1");
  const bool needs_d = method == Method::Survey || method == Method::Adaptive;
  if (needs_d && !survey_d)
    throw std::invalid_argument("scenario: survey_d required for this method");
  if (!needs_d && survey_d)
    throw std::invalid_argument("scenario: survey_d only valid for survey/adaptive");
  if (method == Method::Adaptive && !calibration)
    throw std::invalid_argument("scenario: adaptive method needs a calibration map");
}

double TimingRecord::median() const { return quantile(elapsed, 0.5); }

double TimingRecord::iqr() const {
  return quantile(elapsed, 0.75) - quantile(elapsed, 0.25);
}

TimingRecord time_run(const Scenario& scenario) {
  scenario.validate();
  TimingRecord record{scenario, {}};
  record.elapsed.reserve(scenario.replicates);
  // replicate 0 is an untimed warm-up
  for (int r = 0; r <= scenario.replicates; ++r) {
    const std::uint64_t sim_seed = derive_seed(scenario.base_seed, r);
    const std::uint64_t obs_seed = derive_seed(~scenario.base_seed, r);
    const auto t0 = std::chrono::steady_clock::now();
    volatile double sink = run_once(scenario, sim_seed, obs_seed);
    const auto t1 = std::chrono::steady_clock::now();
    (void)sink;
    if (r > 0)
      record.elapsed.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return record;
}

void SurfaceData::validate() const {
  if (n_axis.empty() || p_axis.empty())
    throw std::invalid_argument("surface: empty axes");
  for (size_t i = 1; i < n_axis.size(); ++i)
    if (n_axis[i] <= n_axis[i - 1])
      throw std::invalid_argument("surface: n axis not strictly increasing");
  for (size_t i = 1; i < p_axis.size(); ++i)
    if (p_axis[i] <= p_axis[i - 1])
      throw std::invalid_argument("surface: p axis not strictly increasing");
  if (cells.size() != p_axis.size())
    throw std::invalid_argument("surface: row count does not match p axis");
  for (const auto& row : cells)
    if (row.size() != n_axis.size())
      throw std::invalid_argument("surface: column count does not match n axis");
}

double SurfaceData::interpolate(double n, double p) const {
  auto bracket = [](const std::vector<double>& axis, double q) {
    size_t hi = std::lower_bound(axis.begin(), axis.end(), q) - axis.begin();
    if (hi == 0) hi = 1;
    if (hi >= axis.size()) hi = axis.size() - 1;
    const size_t lo = hi - 1;
    double t = (q - axis[lo]) / (axis[hi] - axis[lo]);
    t = std::clamp(t, 0.0, 1.0);
    return std::pair<size_t, double>(lo, t);
  };
  if (n_axis.size() == 1 && p_axis.size() == 1) return cells[0][0];
  if (n_axis.size() == 1) {
    const auto [pj, tp] = bracket(p_axis, p);
    return cells[pj][0] * (1 - tp) + cells[pj + 1][0] * tp;
  }
  if (p_axis.size() == 1) {
    const auto [ni, tn] = bracket(n_axis, n);
    return cells[0][ni] * (1 - tn) + cells[0][ni + 1] * tn;
  }
  const auto [ni, tn] = bracket(n_axis, n);
  const auto [pj, tp] = bracket(p_axis, p);
  const double v00 = cells[pj][ni], v10 = cells[pj][ni + 1];
  const double v01 = cells[pj + 1][ni], v11 = cells[pj + 1][ni + 1];
  return v00 * (1 - tn) * (1 - tp) + v10 * tn * (1 - tp) +
         v01 * (1 - tn) * tp + v11 * tn * tp;
}

void CalibrationMap::validate() const {
  if (n_axis.empty() || p_axis.empty() || labels.empty())
    throw std::invalid_argument("calibration map: empty");
  if (labels.size() != p_axis.size())
    throw std::invalid_argument("calibration map: row count mismatch");
  for (const auto& row : labels)
    if (row.size() != n_axis.size())
      throw std::invalid_argument("calibration map: column count mismatch");
}

SurfaceData diff_surface(const SurfaceData& a, const SurfaceData& b) {
  a.validate();
  b.validate();
  if (a.n_axis != b.n_axis || a.p_axis != b.p_axis)
    throw std::invalid_argument("diff_surface: axis mismatch");
  SurfaceData out{a.n_axis, a.p_axis, a.cells};
  for (size_t j = 0; j < out.cells.size(); ++j)
    for (size_t i = 0; i < out.cells[j].size(); ++i)
      out.cells[j][i] = a.cells[j][i] - b.cells[j][i];
  return out;
}

namespace {

struct Segment {
  std::array<double, 2> a, b;
};

// Crossing on the edge between lattice values va (at ca) and vb (at cb).
// The negative side is "inside"; a corner exactly at 0 counts as outside.
bool edge_crossing(double va, double vb, const std::array<double, 2>& ca,
                   const std::array<double, 2>& cb, std::array<double, 2>& out) {
  const bool ia = va < 0.0, ib = vb < 0.0;
  if (ia == ib) return false;
  const double t = va / (va - vb);
  out = {ca[0] + t * (cb[0] - ca[0]), ca[1] + t * (cb[1] - ca[1])};
  return true;
}

std::vector<Polyline> stitch(std::vector<Segment> segments) {
  // Endpoints of shared quad edges are computed from identical inputs, so
  // exact coordinate matching is safe here.
  using Point = std::pair<double, double>;
  std::multimap<Point, size_t> by_endpoint;
  for (size_t i = 0; i < segments.size(); ++i) {
    by_endpoint.emplace(Point{segments[i].a[0], segments[i].a[1]}, i);
    by_endpoint.emplace(Point{segments[i].b[0], segments[i].b[1]}, i);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;
  auto take_neighbor = [&](const std::array<double, 2>& pt) -> long {
    auto [lo, hi] = by_endpoint.equal_range(Point{pt[0], pt[1]});
    for (auto it = lo; it != hi; ++it)
      if (!used[it->second]) return static_cast<long>(it->second);
    return -1;
  };
  for (size_t i = 0; i < segments.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    Polyline line;
    line.points.push_back(segments[i].a);
    line.points.push_back(segments[i].b);
    // extend forward, then backward
    for (int dir = 0; dir < 2; ++dir) {
      while (true) {
        const auto& tip = dir == 0 ? line.points.back() : line.points.front();
        const long j = take_neighbor(tip);
        if (j < 0) break;
        used[j] = true;
        const auto& s = segments[j];
        const bool from_a = s.a == tip;
        const auto& next = from_a ? s.b : s.a;
        if (dir == 0)
          line.points.push_back(next);
        else
          line.points.insert(line.points.begin(), next);
      }
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

std::vector<Polyline> zero_isoline(const SurfaceData& surface) {
  surface.validate();
  const auto& nx = surface.n_axis;
  const auto& px = surface.p_axis;

  // Degenerate 1-D surfaces: report crossing points along the single axis.
  if (nx.size() == 1 && px.size() == 1) return {};
  if (px.size() == 1 || nx.size() == 1) {
    const bool along_n = px.size() == 1;
    const auto& axis = along_n ? nx : px;
    const double fixed = along_n ? px[0] : nx[0];
    std::vector<Polyline> lines;
    for (size_t i = 0; i + 1 < axis.size(); ++i) {
      const double va = along_n ? surface.cells[0][i] : surface.cells[i][0];
      const double vb =
          along_n ? surface.cells[0][i + 1] : surface.cells[i + 1][0];
      std::array<double, 2> pt;
      const std::array<double, 2> ca =
          along_n ? std::array<double, 2>{axis[i], fixed}
                  : std::array<double, 2>{fixed, axis[i]};
      const std::array<double, 2> cb =
          along_n ? std::array<double, 2>{axis[i + 1], fixed}
                  : std::array<double, 2>{fixed, axis[i + 1]};
      if (edge_crossing(va, vb, ca, cb, pt)) lines.push_back({{pt}});
    }
    return lines;
  }

  std::vector<Segment> segments;
  for (size_t j = 0; j + 1 < px.size(); ++j) {
    for (size_t i = 0; i + 1 < nx.size(); ++i) {
      const double v00 = surface.cells[j][i], v10 = surface.cells[j][i + 1];
      const double v01 = surface.cells[j + 1][i], v11 = surface.cells[j + 1][i + 1];
      const std::array<double, 2> c00{nx[i], px[j]}, c10{nx[i + 1], px[j]};
      const std::array<double, 2> c01{nx[i], px[j + 1]}, c11{nx[i + 1], px[j + 1]};

      std::array<double, 2> bottom, top, left, right;
      const bool has_bottom = edge_crossing(v00, v10, c00, c10, bottom);
      const bool has_top = edge_crossing(v01, v11, c01, c11, top);
      const bool has_left = edge_crossing(v00, v01, c00, c01, left);
      const bool has_right = edge_crossing(v10, v11, c10, c11, right);

      std::vector<std::array<double, 2>> pts;
      if (has_bottom) pts.push_back(bottom);
      if (has_right) pts.push_back(right);
      if (has_top) pts.push_back(top);
      if (has_left) pts.push_back(left);

      if (pts.size() == 2) {
        segments.push_back({pts[0], pts[1]});
      } else if (pts.size() == 4) {
        // Saddle: pair the crossings using the cell-center sign.
        const double center = (v00 + v10 + v01 + v11) / 4.0;
        const bool inside00 = v00 < 0.0;
        if ((center < 0.0) == inside00) {
          segments.push_back({bottom, right});
          segments.push_back({top, left});
        } else {
          segments.push_back({bottom, left});
          segments.push_back({top, right});
        }
      }
    }
  }
  return stitch(std::move(segments));
}

SurfaceData method_surface(const std::vector<TimingRecord>& records,
                           Method method) {
  std::vector<SurfaceSample> samples;
  for (const auto& rec : records)
    if (rec.scenario.method == method)
      samples.push_back({static_cast<double>(rec.scenario.agents),
                         rec.scenario.rate, rec.median()});
  return response_surface(samples);
}

CalibrationMap fastest_method_map(const std::vector<TimingRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("fastest_method_map: no records");

  std::set<double> n_set, p_set;
  std::set<Method> methods;
  for (const auto& rec : records) {
    if (!rec.scenario.method)
      throw std::invalid_argument(
          "fastest_method_map: unobserved baseline records are not labelable");
    n_set.insert(static_cast<double>(rec.scenario.agents));
    p_set.insert(rec.scenario.rate);
    methods.insert(*rec.scenario.method);
  }

  CalibrationMap map;
  map.n_axis.assign(n_set.begin(), n_set.end());
  map.p_axis.assign(p_set.begin(), p_set.end());

  std::map<std::tuple<double, double, Method>, double> medians;
  for (const auto& rec : records)
    medians[{static_cast<double>(rec.scenario.agents), rec.scenario.rate,
             *rec.scenario.method}] = rec.median();

  map.labels.resize(map.p_axis.size());
  for (size_t j = 0; j < map.p_axis.size(); ++j) {
    map.labels[j].resize(map.n_axis.size());
    for (size_t i = 0; i < map.n_axis.size(); ++i) {
      bool have_best = false;
      Method best = Method::BruteForce;
      double best_median = 0.0;
      for (Method m : methods) {
        auto it = medians.find({map.n_axis[i], map.p_axis[j], m});
        if (it == medians.end()) {
          std::ostringstream msg;
          msg << "fastest_method_map: missing timing for method "
              << to_string(m) << " at N=" << map.n_axis[i]
              << ", p=" << map.p_axis[j];
          throw std::invalid_argument(msg.str());
        }
        const double med = it->second;
        if (!have_best || med < best_median ||
            (med == best_median &&
             method_priority(m) < method_priority(best))) {
          have_best = true;
          best = m;
          best_median = med;
        }
      }
      map.labels[j][i] = best;
    }
  }

  map.timestamp = utc_timestamp();
  map.host = host_descriptor();
  map.seed = records.front().scenario.base_seed;
  map.steps = records.front().scenario.steps;
  map.replicates = records.front().scenario.replicates;
  map.validate();
  return map;
}

SurfaceData response_surface(const std::vector<SurfaceSample>& samples,
                             const std::vector<double>& n_axis,
                             const std::vector<double>& p_axis) {
  if (samples.size() < 4)
    throw std::invalid_argument("response_surface: needs at least 4 samples");

  std::set<double> n_set, p_set;
  for (const auto& s : samples) {
    n_set.insert(s.n);
    p_set.insert(s.p);
  }
  SurfaceData lattice;
  lattice.n_axis.assign(n_set.begin(), n_set.end());
  lattice.p_axis.assign(p_set.begin(), p_set.end());

  std::map<std::pair<double, double>, double> values;
  for (const auto& s : samples) values[{s.n, s.p}] = s.value;

  lattice.cells.resize(lattice.p_axis.size());
  for (size_t j = 0; j < lattice.p_axis.size(); ++j) {
    lattice.cells[j].resize(lattice.n_axis.size());
    for (size_t i = 0; i < lattice.n_axis.size(); ++i) {
      auto it = values.find({lattice.n_axis[i], lattice.p_axis[j]});
      if (it == values.end())
        throw std::invalid_argument("response_surface: sample lattice incomplete");
      lattice.cells[j][i] = it->second;
    }
  }
  lattice.validate();

  if (n_axis == lattice.n_axis && p_axis == lattice.p_axis) return lattice;

  SurfaceData out;
  out.n_axis = n_axis;
  out.p_axis = p_axis;
  out.cells.resize(p_axis.size());
  for (size_t j = 0; j < p_axis.size(); ++j) {
    out.cells[j].resize(n_axis.size());
    for (size_t i = 0; i < n_axis.size(); ++i)
      out.cells[j][i] = lattice.interpolate(n_axis[i], p_axis[j]);
  }
  out.validate();
  return out;
}

SurfaceData response_surface(const std::vector<SurfaceSample>& samples) {
  if (samples.size() < 4)
    throw std::invalid_argument("response_surface: needs at least 4 samples");
  std::set<double> n_set, p_set;
  for (const auto& s : samples) {
    n_set.insert(s.n);
    p_set.insert(s.p);
  }
  const std::vector<double> n_axis(n_set.begin(), n_set.end());
  const std::vector<double> p_axis(p_set.begin(), p_set.end());
  return response_surface(samples, n_axis, p_axis);
}

}  // namespace obsim
