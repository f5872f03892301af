#include "polyscat/io/bundle.hpp"

#include <fstream>
#include <sstream>

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

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
  return j;
}

const json& member(const json& obj, const char* key, const std::string& path,
                   const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(path, where, std::string("missing '") + key + "'");
  return obj.at(key);
}

double number_at(const json& obj, const char* key, const std::string& path,
                 const std::string& where) {
  const json& v = member(obj, key, path, where);
  if (!v.is_number()) fail(path, where + "." + key, "expected a number");
  return v.get<double>();
}

int int_at(const json& obj, const char* key, const std::string& path, const std::string& where) {
  const json& v = member(obj, key, path, where);
  if (!v.is_number_integer()) fail(path, where + "." + key, "expected an integer");
  return v.get<int>();
}

cplx complex_pair(const json& v, const std::string& path, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(path, where, "expected a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

MatrixXcd matrix_at(const json& obj, const std::string& dotted_key, const std::string& path,
                    const std::string& where) {
  // dotted_key addresses e.g. "s_ff.pp" inside one harmonics entry
  const json* v = &obj;
  std::string rest = dotted_key;
  while (!rest.empty()) {
    const size_t dot = rest.find('.');
    const std::string head = rest.substr(0, dot);
    if (!v->is_object() || !v->contains(head))
      fail(path, where, "missing '" + dotted_key + "'");
    v = &v->at(head);
    rest = (dot == std::string::npos) ? std::string() : rest.substr(dot + 1);
  }
  const std::string full = where + "." + dotted_key;
  if (!v->is_array() || v->empty()) fail(path, full, "expected a nonempty row-major matrix");
  const size_t rows = v->size();
  const size_t cols = (*v)[0].is_array() ? (*v)[0].size() : 0;
  if (cols == 0) fail(path, full, "expected a nonempty row-major matrix");
  MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    const json& row = (*v)[r];
    if (!row.is_array() || row.size() != cols)
      fail(path, full, "row " + std::to_string(r + 1) + " has inconsistent length");
    for (size_t cix = 0; cix < cols; ++cix)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cix)) =
          complex_pair(row[cix], path, full + "[" + std::to_string(r + 1) + "][" +
                                           std::to_string(cix + 1) + "]");
  }
  return m;
}

}  // namespace

Bundle load_bundle(const std::string& path) {
  const json j = load_json(path);
  if (!j.is_object()) fail(path, "top level", "expected an object");

  const json& ver = member(j, "format_version", path, "top level");
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    fail(path, "format_version", "unsupported version (expected 1)");

  Bundle bundle;
  const json& layout = member(j, "layout", path, "top level");
  bundle.layout.num_directions = int_at(layout, "M", path, "layout");
  bundle.layout.num_loads = int_at(layout, "N", path, "layout");
  bundle.layout.num_harmonics = int_at(layout, "H", path, "layout");
  const int h_c = int_at(layout, "h_c", path, "layout");

  const json& grid = member(j, "grid", path, "top level");
  bundle.grid.f_in_hz = number_at(grid, "f_in_hz", path, "grid");
  bundle.grid.f_m_hz = number_at(grid, "f_m_hz", path, "grid");
  bundle.grid.num_harmonics = bundle.layout.num_harmonics;
  bundle.grid.center_index = h_c;

  const json& z = member(j, "z_ref", path, "top level");
  bundle.blocks.z_ref = {number_at(z, "re", path, "z_ref"), number_at(z, "im", path, "z_ref")};

  const json& flat = member(j, "flat", path, "top level");
  if (!flat.is_boolean()) fail(path, "flat", "expected a boolean");
  bundle.blocks.flat = flat.get<bool>();

  const json& harmonics = member(j, "harmonics", path, "top level");
  if (!harmonics.is_array() || harmonics.empty())
    fail(path, "harmonics", "expected a nonempty array");
  if (bundle.blocks.flat && harmonics.size() != 1)
    fail(path, "harmonics", "flat bundle must carry exactly one entry");

  for (size_t i = 0; i < harmonics.size(); ++i) {
    const json& entry = harmonics[i];
    const std::string where = "harmonics[" + std::to_string(i + 1) + "]";
    const int h = int_at(entry, "h", path, where);
    const int expected_h = static_cast<int>(i) + 1;
    if (h != expected_h)
      fail(path, where, "entry carries h = " + std::to_string(h) + ", expected " +
                            std::to_string(expected_h) + " (entries in harmonic order)");
    HarmonicBlocks hb;
    hb.ff_pp = matrix_at(entry, "s_ff.pp", path, where);
    hb.ff_tp = matrix_at(entry, "s_ff.tp", path, where);
    hb.ff_pt = matrix_at(entry, "s_ff.pt", path, where);
    hb.ff_tt = matrix_at(entry, "s_ff.tt", path, where);
    hb.fd_p = matrix_at(entry, "s_fd.p", path, where);
    hb.fd_t = matrix_at(entry, "s_fd.t", path, where);
    hb.df_p = matrix_at(entry, "s_df.p", path, where);
    hb.df_t = matrix_at(entry, "s_df.t", path, where);
    hb.dd = matrix_at(entry, "s_dd", path, where);
    bundle.blocks.per_harmonic.push_back(std::move(hb));
  }

  try {
    bundle.grid.validate();
    bundle.blocks.validate(bundle.layout);
  } catch (const error& e) {
    throw validation_error(path + ": " + e.what());
  }
  return bundle;
}

}  // namespace polyscat::io
