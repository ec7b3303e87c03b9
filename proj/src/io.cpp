#include "obsim/io.hpp"

#include <unistd.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "obsim/errors.hpp"

namespace obsim {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

json provenance_block(std::uint64_t seed) {
  return json{{"timestamp", utc_timestamp()},
              {"host", host_descriptor()},
              {"seed", seed}};
}

}  // namespace

ObservationCsvWriter::ObservationCsvWriter(std::ostream& out) : out_(out) {
  out_ << "step,method,value,exact,elapsed_ns\n";
}

void ObservationCsvWriter::write(const Observation& obs) {
  out_ << obs.step << ',' << to_string(obs.method) << ','
       << std::setprecision(17) << obs.value << ',' << (obs.exact ? 1 : 0)
       << ',';
  if (obs.elapsed_ns) out_ << *obs.elapsed_ns;
  out_ << '\n';
}

void write_timings_csv_header(std::ostream& out) {
  out << "method,agents,rate,steps,replicate,seed,elapsed_s\n";
}

void write_timings_csv_rows(std::ostream& out, const TimingRecord& record) {
  const auto& sc = record.scenario;
  for (size_t r = 0; r < record.elapsed.size(); ++r) {
    out << (sc.method ? to_string(*sc.method) : "none") << ',' << sc.agents
        << ',' << sc.rate << ',' << sc.steps << ',' << r << ',' << sc.base_seed
        << ',' << std::setprecision(17) << record.elapsed[r] << '\n';
  }
  out.flush();  // partial results survive interruption
}

void write_surface_csv(std::ostream& out, const SurfaceData& surface) {
  surface.validate();
  out << std::setprecision(17);
  out << "p\\N";
  for (double n : surface.n_axis) out << ',' << n;
  out << '\n';
  for (size_t j = 0; j < surface.p_axis.size(); ++j) {
    out << surface.p_axis[j];
    for (double v : surface.cells[j]) out << ',' << v;
    out << '\n';
  }
}

SurfaceData read_surface_csv(std::istream& in) {
  SurfaceData surface;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("surface CSV: empty file");
  auto header = split_csv_line(line);
  if (header.size() < 2) throw ConfigError("surface CSV: malformed header");
  for (size_t i = 1; i < header.size(); ++i)
    surface.n_axis.push_back(std::stod(header[i]));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ConfigError("surface CSV: ragged row");
    surface.p_axis.push_back(std::stod(fields[0]));
    std::vector<double> row;
    for (size_t i = 1; i < fields.size(); ++i) row.push_back(std::stod(fields[i]));
    surface.cells.push_back(std::move(row));
  }
  try {
    surface.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("surface CSV: ") + e.what());
  }
  return surface;
}

void write_surface_gnuplot(std::ostream& out, const SurfaceData& surface) {
  surface.validate();
  out << std::setprecision(17);
  out << "# N p value\n";
  for (size_t j = 0; j < surface.p_axis.size(); ++j) {
    for (size_t i = 0; i < surface.n_axis.size(); ++i)
      out << surface.n_axis[i] << ' ' << surface.p_axis[j] << ' '
          << surface.cells[j][i] << '\n';
    out << '\n';
  }
}

void write_isolines_gnuplot(std::ostream& out,
                            const std::vector<Polyline>& lines) {
  out << std::setprecision(17);
  out << "# N p\n";
  for (const auto& line : lines) {
    for (const auto& pt : line.points) out << pt[0] << ' ' << pt[1] << '\n';
    out << '\n';
  }
}

std::string surface_to_json(const SurfaceData& surface, std::uint64_t seed) {
  surface.validate();
  std::vector<double> row_major;
  for (const auto& row : surface.cells)
    row_major.insert(row_major.end(), row.begin(), row.end());
  json doc{{"n_axis", surface.n_axis},
           {"p_axis", surface.p_axis},
           {"values", row_major},
           {"provenance", provenance_block(seed)}};
  return doc.dump(2);
}

std::string calibration_map_to_json(const CalibrationMap& map) {
  map.validate();
  std::vector<std::string> row_major;
  for (const auto& row : map.labels)
    for (Method m : row) row_major.emplace_back(to_string(m));
  json doc{{"n_axis", map.n_axis},
           {"p_axis", map.p_axis},
           {"labels", row_major},
           {"provenance",
            {{"timestamp", map.timestamp},
             {"host", map.host},
             {"seed", map.seed},
             {"steps", map.steps},
             {"replicates", map.replicates}}}};
  return doc.dump(2);
}

CalibrationMap calibration_map_from_json(const std::string& text) {
  CalibrationMap map;
  try {
    const json doc = json::parse(text);
    map.n_axis = doc.at("n_axis").get<std::vector<double>>();
    map.p_axis = doc.at("p_axis").get<std::vector<double>>();
    const auto labels = doc.at("labels").get<std::vector<std::string>>();
    if (labels.size() != map.n_axis.size() * map.p_axis.size())
      throw ConfigError("calibration map: label matrix size mismatch");
    map.labels.resize(map.p_axis.size());
    for (size_t j = 0; j < map.p_axis.size(); ++j) {
      map.labels[j].resize(map.n_axis.size());
      for (size_t i = 0; i < map.n_axis.size(); ++i) {
        const auto& name = labels[j * map.n_axis.size() + i];
        const auto m = parse_method(name);
        if (!m) throw ConfigError("calibration map: unknown method " + name);
        map.labels[j][i] = *m;
      }
    }
    const auto& prov = doc.at("provenance");
    map.timestamp = prov.at("timestamp").get<std::string>();
    map.host = prov.at("host").get<std::string>();
    map.seed = prov.at("seed").get<std::uint64_t>();
    map.steps = prov.at("steps").get<int>();
    map.replicates = prov.at("replicates").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("calibration map JSON: ") + e.what());
  }
  try {
    map.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return map;
}

CalibrationMap load_calibration_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open calibration map: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return calibration_map_from_json(buf.str());
}

void save_calibration_map(const CalibrationMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write calibration map: " + path);
  out << calibration_map_to_json(map) << '\n';
}

std::string host_descriptor() {
  char name[256] = {};
  if (gethostname(name, sizeof(name) - 1) != 0) return "unknown-host";
  return name;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace obsim
