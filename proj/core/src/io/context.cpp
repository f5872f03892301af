#include "polyscat/io/context.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "polyscat/errors.hpp"

namespace polyscat::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& where,
                       const std::string& what) {
  std::ostringstream msg;
  msg << path << ": " << where << ": " << what;
  throw parse_error(msg.str());
}

// bind a gain spec (number | per-direction array | per-direction-per-harmonic
// nested array) to the grid frequencies
std::function<double(int, double)> bind_gain(const json& spec, const FrequencyGrid& grid,
                                             int num_directions, const std::string& path,
                                             const std::string& where) {
  const auto check_positive = [&](double g) {
    if (!(g > 0.0)) fail(path, where, "gains must be positive");
    return g;
  };

  if (spec.is_number()) {
    const double g = check_positive(spec.get<double>());
    return [g](int, double) { return g; };
  }

  if (!spec.is_array() || spec.size() != static_cast<size_t>(num_directions))
    fail(path, where,
         "expected a number or an array with one entry per direction (" +
             std::to_string(num_directions) + ")");

  const double f1 = grid.f_in_hz + (1.0 - grid.center_index) * grid.f_m_hz;
  const double f_m = grid.f_m_hz;
  const int h_count = grid.num_harmonics;
  const std::string origin = path + ": " + where;

  if (spec[0].is_number()) {
    std::vector<double> per_dir;
    for (const json& v : spec) {
      if (!v.is_number()) fail(path, where, "mixed entry types in gain array");
      per_dir.push_back(check_positive(v.get<double>()));
    }
    return [per_dir, origin](int direction, double) {
      if (direction < 1 || direction > static_cast<int>(per_dir.size()))
        throw index_error(origin + ": direction index " + std::to_string(direction) +
                          " out of range");
      return per_dir[static_cast<size_t>(direction - 1)];
    };
  }

  std::vector<std::vector<double>> per_dir_h;
  for (const json& row : spec) {
    if (!row.is_array() || row.size() != static_cast<size_t>(h_count))
      fail(path, where,
           "expected one gain per harmonic (" + std::to_string(h_count) + ") per direction");
    std::vector<double> vals;
    for (const json& v : row) {
      if (!v.is_number()) fail(path, where, "gain entries must be numbers");
      vals.push_back(check_positive(v.get<double>()));
    }
    per_dir_h.push_back(std::move(vals));
  }
  return [per_dir_h, origin, f1, f_m, h_count](int direction, double f_hz) {
    if (direction < 1 || direction > static_cast<int>(per_dir_h.size()))
      throw index_error(origin + ": direction index " + std::to_string(direction) +
                        " out of range");
    // tabulated gains exist only at grid frequencies
    const double slot = (f_hz - f1) / f_m;
    const long h0 = std::lround(slot);
    if (h0 < 0 || h0 >= h_count || std::abs(slot - static_cast<double>(h0)) > 1e-6)
      throw domain_error(origin + ": no tabulated gain at " + std::to_string(f_hz) + " Hz");
    return per_dir_h[static_cast<size_t>(direction - 1)][static_cast<size_t>(h0)];
  };
}

}  // namespace

BcsContext load_bcs_context(const std::string& path, const FrequencyGrid& grid,
                            int num_directions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
  if (!j.is_object()) fail(path, "top level", "expected an object");
  if (!j.contains("format_version") || !j.at("format_version").is_number_integer() ||
      j.at("format_version").get<int>() != 1)
    fail(path, "format_version", "unsupported version (expected 1)");

  BcsContext ctx;
  for (const char* key : {"s_t_m", "s_r_m"}) {
    if (!j.contains(key) || !j.at(key).is_number())
      fail(path, "top level", std::string("missing numeric '") + key + "'");
  }
  ctx.s_t_m = j.at("s_t_m").get<double>();
  ctx.s_r_m = j.at("s_r_m").get<double>();
  if (!j.contains("gain_tx")) fail(path, "top level", "missing 'gain_tx'");
  if (!j.contains("gain_rx")) fail(path, "top level", "missing 'gain_rx'");
  ctx.gain_tx = bind_gain(j.at("gain_tx"), grid, num_directions, path, "gain_tx");
  ctx.gain_rx = bind_gain(j.at("gain_rx"), grid, num_directions, path, "gain_rx");

  try {
    ctx.validate();
  } catch (const error& e) {
    throw validation_error(path + ": " + e.what());
  }
  return ctx;
}

}  // namespace polyscat::io
