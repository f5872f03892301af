#pragma once

// closing the load loop around the stacked system, scattering excitations,
// per-harmonic spectra, the conversion cross-section and harmonic-count
// convergence scans.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "polyscat/load.hpp"
#include "polyscat/model.hpp"

namespace polyscat {

// reciprocal-condition threshold below which the interaction solve is rejected
inline constexpr double rcond_threshold = 1e-12;

// c_ff + c_fd c_l (I - c_dd c_l)^{-1} c_df via a pivoted LU solve; throws
// singular_error (with the estimate) when rcond(I - c_dd c_l) < threshold
MatrixXcd system_matrix(const MatrixXcd& c_ff, const MatrixXcd& c_fd, const MatrixXcd& c_df,
                        const MatrixXcd& c_dd, const MatrixXcd& c_l);

ScatterResult scatter(const MatrixXcd& c_sys, const Excitation& excitation,
                      const PortLayout& layout, const FrequencyGrid& grid);

struct SpectrumRow {
  int h = 0;
  int k_offset = 0;  // h - h_c
  double f_hz = 0.0;
  cplx b_phi, b_theta;
  double power_w = 0.0;  // |b_phi|^2 + |b_theta|^2
};

// outgoing spectrum toward direction rho, one row per harmonic
std::vector<SpectrumRow> harmonic_spectrum(const ScatterResult& result, int rho);

// outgoing amplitudes regrouped by harmonic offset: k -> stacked 2M vector
// (phi then theta), for |k| <= max_offset around the excitation harmonic
std::map<int, VectorXcd> spectrum_by_offset(const ScatterResult& result, int max_offset);

struct BcsValue {
  double sigma_m2 = 0.0;
  double sigma_dbm2 = 0.0;
};

double to_dbm2(double sigma_m2);  // 10 log10(sigma / 1 m^2), floored at -300

// conversion cross-section of the path (tau, h_c) -> (rho, h)
BcsValue bcs(const ScatterResult& result, const Excitation& excitation, const BcsContext& ctx,
             int h, int rho, int tau, int h_c);

struct ConvergenceProbe {
  int rho = 1;
  std::vector<int> offsets;  // harmonic offsets k to track
};

struct ConvergenceRow {
  int num_harmonics = 0;
  // probe magnitude sqrt(|b_phi|^2 + |b_theta|^2) per offset; empty when the
  // offset is not representable at this harmonic count
  std::vector<std::optional<double>> magnitudes;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<int> offsets;
  double tolerance = 0.0;
  // smallest H at which every probe offset exists and all subsequent changes
  // stay within tolerance; empty when the scan never settles
  std::optional<int> settled_h;
};

ConvergenceReport convergence_check(const std::function<ScatterResult(int)>& solve_at,
                                    const std::vector<int>& h_counts,
                                    const ConvergenceProbe& probe, double tolerance);

}  // namespace polyscat
