#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obsim/observers.hpp"

namespace obsim {

struct CalibrationMap;

// One timed configuration: a full observed (or unobserved) simulation run.
struct Scenario {
  int agents = 1000;
  double rate = 0.2;  // zone coverage, equals E(Z)/N at stationarity
  int steps = 1000;
  std::optional<Method> method;     // nullopt = unobserved baseline
  std::optional<double> survey_d;   // required for Survey and Adaptive
  std::shared_ptr<const CalibrationMap> calibration;  // required for Adaptive
  int replicates = 5;
  std::uint64_t base_seed = 1;

  void validate() const;
};

struct TimingRecord {
  Scenario scenario;
  std::vector<double> elapsed;  // seconds, one per replicate

  double median() const;
  double iqr() const;
};

// Values over a regular (N, p) lattice; one row per p, one column per N.
struct SurfaceData {
  std::vector<double> n_axis;  // strictly increasing
  std::vector<double> p_axis;  // strictly increasing
  std::vector<std::vector<double>> cells;

  double at(size_t pi, size_t ni) const { return cells[pi][ni]; }
  // Bilinear interpolation; queries outside the lattice are clamped to it.
  double interpolate(double n, double p) const;
  void validate() const;
};

// Fastest-method labels over the lattice, with measurement provenance.
struct CalibrationMap {
  std::vector<double> n_axis;
  std::vector<double> p_axis;
  std::vector<std::vector<Method>> labels;  // row per p

  std::string timestamp;
  std::string host;
  std::uint64_t seed = 0;
  int steps = 0;
  int replicates = 0;

  Method label_at(size_t pi, size_t ni) const { return labels[pi][ni]; }
  void validate() const;
};

struct SurfaceSample {
  double n = 0;
  double p = 0;
  double value = 0;
};

struct Polyline {
  std::vector<std::array<double, 2>> points;  // (N, p)
};

// Runs `replicates` full simulations (plus one untimed warm-up), each with a
// fresh derived seed, timed end-to-end with a monotonic clock. Strictly
// sequential.
TimingRecord time_run(const Scenario& scenario);

// Cellwise a - b; axes must match exactly.
SurfaceData diff_surface(const SurfaceData& a, const SurfaceData& b);

// Zero-level set by marching squares with linear interpolation along cell
// edges. Degenerate single-row/column surfaces yield single-point polylines
// at sign changes. No sign change (including an all-zero surface) -> empty.
std::vector<Polyline> zero_isoline(const SurfaceData& surface);

// Labels each lattice cell with the method of minimal median time. Ties go
// to the more exact method (brute-force > indirect > self > survey).
// Throws if any (N, p, method) combination present in the records' method
// set is missing at some cell.
CalibrationMap fastest_method_map(const std::vector<TimingRecord>& records);

// Median-per-cell surface for one method, extracted from timing records.
SurfaceData method_surface(const std::vector<TimingRecord>& records, Method method);

// Fits samples taken on a (possibly sparse in axes, but complete) lattice
// onto the target grid by bilinear interpolation. Needs >= 4 samples.
SurfaceData response_surface(const std::vector<SurfaceSample>& samples,
                             const std::vector<double>& n_axis,
                             const std::vector<double>& p_axis);
// Same, with the sample lattice itself as the target grid (identity fit).
SurfaceData response_surface(const std::vector<SurfaceSample>& samples);

// splitmix64; used to derive per-replicate and observer seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace obsim
