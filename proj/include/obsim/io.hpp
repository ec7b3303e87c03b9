#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "obsim/adaptive.hpp"
#include "obsim/bench.hpp"

namespace obsim {

// Observation stream sink: header + one row per observation
// (step,method,value,exact,elapsed_ns). elapsed_ns is left blank when the
// observation carries no cost hint, which keeps exact-method outputs
// byte-reproducible for a fixed seed.
class ObservationCsvWriter {
 public:
  explicit ObservationCsvWriter(std::ostream& out);
  void write(const Observation& obs);

 private:
  std::ostream& out_;
};

// Raw timings, one row per replicate, scenario fields flattened.
void write_timings_csv_header(std::ostream& out);
void write_timings_csv_rows(std::ostream& out, const TimingRecord& record);

// Surface matrix as CSV: header "p\N,<n...>", then one row per p.
void write_surface_csv(std::ostream& out, const SurfaceData& surface);
SurfaceData read_surface_csv(std::istream& in);

// Gnuplot-ready dumps: "N p value" triples in p-blocks; isolines as vertex
// lists separated by blank lines.
void write_surface_gnuplot(std::ostream& out, const SurfaceData& surface);
void write_isolines_gnuplot(std::ostream& out, const std::vector<Polyline>& lines);

// JSON schema: axes arrays + row-major matrix + provenance block.
std::string surface_to_json(const SurfaceData& surface, std::uint64_t seed);
std::string calibration_map_to_json(const CalibrationMap& map);
CalibrationMap calibration_map_from_json(const std::string& text);

CalibrationMap load_calibration_map(const std::string& path);
void save_calibration_map(const CalibrationMap& map, const std::string& path);

// Current host descriptor and UTC timestamp for provenance blocks.
std::string host_descriptor();
std::string utc_timestamp();

}  // namespace obsim
