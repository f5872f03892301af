#include "polyscat/io/results.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyscat/errors.hpp"

namespace polyscat::io {

namespace {

const char* const columns[] = {"regime_id", "tau",      "rho",       "h",
                               "k_offset",  "f_hz",     "re_b_phi",  "im_b_phi",
                               "re_b_theta", "im_b_theta", "power_w", "bcs_m2",
                               "bcs_dbm2"};

// locale-independent, 17 significant digits: enough to round-trip any double
std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string render_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  for (size_t i = 0; i < std::size(columns); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const ResultRecord& r : records) {
    out << csv_escape(r.regime_id) << ',' << r.tau << ',' << r.rho << ',' << r.h << ','
        << r.k_offset << ',' << format_double(r.f_hz) << ',' << format_double(r.b_phi.real())
        << ',' << format_double(r.b_phi.imag()) << ',' << format_double(r.b_theta.real()) << ','
        << format_double(r.b_theta.imag()) << ',' << format_double(r.power_w) << ',';
    if (r.bcs_m2) out << format_double(*r.bcs_m2);
    out << ',';
    if (r.bcs_dbm2) out << format_double(*r.bcs_dbm2);
    out << '\n';
  }
  return out.str();
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

// hand-rendered so numbers keep the same 17-digit form as the CSV writer and
// the byte stream is fully deterministic
std::string render_json(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << "{\n  \"format_version\": 1,\n  \"records\": [";
  for (size_t i = 0; i < records.size(); ++i) {
    const ResultRecord& r = records[i];
    out << (i ? ",\n    " : "\n    ");
    out << "{\"regime_id\": \"" << json_escape(r.regime_id) << "\", \"tau\": " << r.tau
        << ", \"rho\": " << r.rho << ", \"h\": " << r.h << ", \"k_offset\": " << r.k_offset
        << ", \"f_hz\": " << format_double(r.f_hz) << ", \"re_b_phi\": "
        << format_double(r.b_phi.real()) << ", \"im_b_phi\": " << format_double(r.b_phi.imag())
        << ", \"re_b_theta\": " << format_double(r.b_theta.real()) << ", \"im_b_theta\": "
        << format_double(r.b_theta.imag()) << ", \"power_w\": " << format_double(r.power_w)
        << ", \"bcs_m2\": " << (r.bcs_m2 ? format_double(*r.bcs_m2) : "null")
        << ", \"bcs_dbm2\": " << (r.bcs_dbm2 ? format_double(*r.bcs_dbm2) : "null") << "}";
  }
  out << (records.empty() ? "]" : "\n  ]") << "\n}\n";
  return out.str();
}

double parse_double_field(const std::string& s, const std::string& path) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw parse_error(path + ": malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line, const std::string& path) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw parse_error(path + ": unterminated quote");
  fields.push_back(cur);
  return fields;
}

std::vector<ResultRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw parse_error(path + ": empty file");
  std::vector<ResultRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line, path);
    if (f.size() != std::size(columns))
      throw parse_error(path + ": row has " + std::to_string(f.size()) + " fields, expected " +
                        std::to_string(std::size(columns)));
    ResultRecord r;
    r.regime_id = f[0];
    r.tau = static_cast<int>(parse_double_field(f[1], path));
    r.rho = static_cast<int>(parse_double_field(f[2], path));
    r.h = static_cast<int>(parse_double_field(f[3], path));
    r.k_offset = static_cast<int>(parse_double_field(f[4], path));
    r.f_hz = parse_double_field(f[5], path);
    r.b_phi = {parse_double_field(f[6], path), parse_double_field(f[7], path)};
    r.b_theta = {parse_double_field(f[8], path), parse_double_field(f[9], path)};
    r.power_w = parse_double_field(f[10], path);
    if (!f[11].empty()) r.bcs_m2 = parse_double_field(f[11], path);
    if (!f[12].empty()) r.bcs_dbm2 = parse_double_field(f[12], path);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ResultRecord> read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("records") || !j.at("records").is_array())
    throw parse_error(path + ": expected an object with a 'records' array");
  std::vector<ResultRecord> records;
  for (const nlohmann::json& e : j.at("records")) {
    ResultRecord r;
    r.regime_id = e.at("regime_id").get<std::string>();
    r.tau = e.at("tau").get<int>();
    r.rho = e.at("rho").get<int>();
    r.h = e.at("h").get<int>();
    r.k_offset = e.at("k_offset").get<int>();
    r.f_hz = e.at("f_hz").get<double>();
    r.b_phi = {e.at("re_b_phi").get<double>(), e.at("im_b_phi").get<double>()};
    r.b_theta = {e.at("re_b_theta").get<double>(), e.at("im_b_theta").get<double>()};
    r.power_w = e.at("power_w").get<double>();
    if (!e.at("bcs_m2").is_null()) r.bcs_m2 = e.at("bcs_m2").get<double>();
    if (!e.at("bcs_dbm2").is_null()) r.bcs_dbm2 = e.at("bcs_dbm2").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error(path + ": cannot open file for writing");
  out << text;
  if (!out) throw parse_error(path + ": write failed");
}

}  // namespace

std::string render_records(const std::vector<ResultRecord>& records, ResultFormat format) {
  return format == ResultFormat::csv ? render_csv(records) : render_json(records);
}

void write_spectrum(const std::vector<ResultRecord>& records, const std::string& path,
                    ResultFormat format) {
  write_text(path, render_records(records, format));
}

void write_bcs_sweep(const std::vector<ResultRecord>& records, const std::string& path,
                     ResultFormat format) {
  write_text(path, render_records(records, format));
}

std::vector<ResultRecord> read_records(const std::string& path, ResultFormat format) {
  return format == ResultFormat::csv ? read_csv(path) : read_json(path);
}

}  // namespace polyscat::io
