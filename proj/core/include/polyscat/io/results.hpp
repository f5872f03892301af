#pragma once

// deterministic CSV / JSON result tables: fixed column order, 17 significant
// digits, byte-identical output for identical inputs

#include <optional>
#include <string>
#include <vector>

#include "polyscat/model.hpp"

namespace polyscat::io {

struct ResultRecord {
  std::string regime_id;
  int tau = 0;
  int rho = 0;
  int h = 0;
  int k_offset = 0;
  double f_hz = 0.0;
  cplx b_phi{0.0, 0.0};
  cplx b_theta{0.0, 0.0};
  double power_w = 0.0;
  std::optional<double> bcs_m2;    // empty when no cross-section was computed
  std::optional<double> bcs_dbm2;
};

enum class ResultFormat { csv, json };

void write_spectrum(const std::vector<ResultRecord>& records, const std::string& path,
                    ResultFormat format);
void write_bcs_sweep(const std::vector<ResultRecord>& records, const std::string& path,
                     ResultFormat format);

// render to a string (what the writers put on disk); exposed for tests and
// for streaming to stdout
std::string render_records(const std::vector<ResultRecord>& records, ResultFormat format);

// read back either format; values round-trip bit-exactly
std::vector<ResultRecord> read_records(const std::string& path, ResultFormat format);

}  // namespace polyscat::io
