#include "polyscat/io/plan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyscat/errors.hpp"
#include "polyscat/io/toml_lite.hpp"

namespace polyscat::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& where,
                       const std::string& what) {
  std::ostringstream msg;
  msg << path << ": " << where << ": " << what;
  throw parse_error(msg.str());
}

const toml::Value& member(const toml::Table& table, const std::string& key,
                          const std::string& path, const std::string& where) {
  const auto it = table.find(key);
  if (it == table.end()) fail(path, where, "missing '" + key + "'");
  return it->second;
}

double number_at(const toml::Table& table, const std::string& key, const std::string& path,
                 const std::string& where) {
  const toml::Value& v = member(table, key, path, where);
  if (!v.is_integer() && !v.is_float()) fail(path, where + "." + key, "expected a number");
  return v.as_number();
}

cplx complex_at(const toml::Table& table, const std::string& key, const std::string& path,
                const std::string& where) {
  const toml::Value& v = member(table, key, path, where);
  if (!v.is_array() || v.as_array().size() != 2)
    fail(path, where + "." + key, "expected a [re, im] pair");
  const toml::Array& arr = v.as_array();
  if ((!arr[0].is_integer() && !arr[0].is_float()) || (!arr[1].is_integer() && !arr[1].is_float()))
    fail(path, where + "." + key, "expected a [re, im] pair");
  return {arr[0].as_number(), arr[1].as_number()};
}

bool has(const toml::Table& table, const std::string& key) {
  return table.find(key) != table.end();
}

// a segment state is given as gamma = [re, im], z_ohms = [re, im], or
// z_ohms = [[re, im], ...] with one pair per harmonic
SegmentState state_of(const toml::Table& seg, const std::string& path, const std::string& where) {
  const bool has_gamma = has(seg, "gamma");
  const bool has_z = has(seg, "z_ohms");
  if (has_gamma == has_z)
    fail(path, where, "exactly one of 'gamma' or 'z_ohms' must be given");
  if (has_gamma) return DirectReflection{complex_at(seg, "gamma", path, where)};

  const toml::Value& z = member(seg, "z_ohms", path, where);
  if (!z.is_array() || z.as_array().empty())
    fail(path, where + ".z_ohms", "expected a [re, im] pair or a list of pairs");
  const toml::Array& arr = z.as_array();
  if (arr[0].is_array()) {
    DispersiveImpedanceTable table;
    for (size_t i = 0; i < arr.size(); ++i) {
      const toml::Array& pair = arr[i].as_array();
      if (pair.size() != 2) fail(path, where + ".z_ohms", "expected [re, im] pairs");
      table.z_ohms_per_harmonic.push_back({pair[0].as_number(), pair[1].as_number()});
    }
    return table;
  }
  return StaticImpedance{complex_at(seg, "z_ohms", path, where)};
}

}  // namespace

ModulationPlan load_plan(const std::string& path) {
  const toml::Table root = toml::parse_file(path);

  const toml::Value& ver = member(root, "format_version", path, "top level");
  if (!ver.is_integer() || ver.as_integer() != 1)
    fail(path, "format_version", "unsupported version (expected 1)");

  ModulationPlan plan;
  plan.f_m_hz = number_at(root, "f_m_hz", path, "top level");
  if (has(root, "regime")) plan.regime_id = member(root, "regime", path, "top level").as_string();

  const toml::Value& ports = member(root, "port", path, "top level");
  if (!ports.is_array() || ports.as_array().empty())
    fail(path, "top level", "expected at least one [[port]] table");

  std::vector<std::pair<int, PortSchedule>> indexed;
  for (size_t p = 0; p < ports.as_array().size(); ++p) {
    const std::string where = "port[" + std::to_string(p + 1) + "]";
    if (!ports.as_array()[p].is_table()) fail(path, where, "expected a table");
    const toml::Table& port = ports.as_array()[p].as_table();
    const toml::Value& index_v = member(port, "index", path, where);
    if (!index_v.is_integer() || index_v.as_integer() < 1)
      fail(path, where + ".index", "expected a positive integer");
    const int index = static_cast<int>(index_v.as_integer());

    PortSchedule schedule;
    const bool two_state = has(port, "r_on") || has(port, "duty_on");
    if (two_state && has(port, "segment"))
      fail(path, where, "give either two-state keys or [[port.segment]] tables, not both");

    if (two_state) {
      // two-state shorthand: the on-window [r_on, r_on + duty_on) taken modulo one period
      const double r_on = number_at(port, "r_on", path, where);
      const double duty_on = number_at(port, "duty_on", path, where);
      if (!(r_on >= 0.0) || !(r_on <= 1.0))
        fail(path, where + ".r_on", "expected a fraction in [0, 1]");
      if (!(duty_on >= 0.0) || !(duty_on <= 1.0))
        fail(path, where + ".duty_on", "expected a fraction in [0, 1]");

      SegmentState on_state, off_state;
      const bool gamma_form = has(port, "gamma_on") || has(port, "gamma_off");
      const bool z_form = has(port, "z_on") || has(port, "z_off");
      if (gamma_form == z_form)
        fail(path, where, "give exactly one of gamma_on/gamma_off or z_on/z_off");
      if (gamma_form) {
        on_state = DirectReflection{complex_at(port, "gamma_on", path, where)};
        off_state = DirectReflection{complex_at(port, "gamma_off", path, where)};
      } else {
        on_state = StaticImpedance{complex_at(port, "z_on", path, where)};
        off_state = StaticImpedance{complex_at(port, "z_off", path, where)};
      }
      const double wrap = r_on + duty_on - 1.0;
      if (wrap > 0.0) {
        // on-window spills past the period end and re-enters at zero
        schedule.segments.push_back({on_state, wrap});
        schedule.segments.push_back({off_state, 1.0 - duty_on});
        schedule.segments.push_back({on_state, 1.0 - r_on});
      } else {
        schedule.segments.push_back({off_state, r_on});
        schedule.segments.push_back({on_state, duty_on});
        schedule.segments.push_back({off_state, -wrap});
      }
    } else {
      const toml::Value& segs = member(port, "segment", path, where);
      if (!segs.is_array() || segs.as_array().empty())
        fail(path, where, "expected [[port.segment]] tables");
      for (size_t s = 0; s < segs.as_array().size(); ++s) {
        const std::string seg_where = where + ".segment[" + std::to_string(s + 1) + "]";
        const toml::Table& seg = segs.as_array()[s].as_table();
        LoadSegment out;
        out.duty = number_at(seg, "duty", path, seg_where);
        out.state = state_of(seg, path, seg_where);
        schedule.segments.push_back(std::move(out));
      }
    }
    indexed.emplace_back(index, std::move(schedule));
  }

  std::sort(indexed.begin(), indexed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t p = 0; p < indexed.size(); ++p) {
    const int expected = static_cast<int>(p) + 1;
    if (indexed[p].first != expected) {
      std::ostringstream what;
      if (p > 0 && indexed[p].first == indexed[p - 1].first)
        what << "port index " << indexed[p].first << " appears twice";
      else
        what << "port indices must cover 1.." << indexed.size() << " exactly; missing "
             << expected;
      fail(path, "top level", what.str());
    }
    plan.schedules.push_back(std::move(indexed[p].second));
  }

  try {
    plan.validate();
  } catch (const error& e) {
    throw validation_error(path + ": " + e.what());
  }
  return plan;
}

}  // namespace polyscat::io
