#pragma once

// assembly of the stacked block matrices of the full harmonic system from
// per-harmonic scattering blocks; harmonic coupling enters only through the
// polyharmonic load matrix, so every off-harmonic block here is exactly zero.

#include "polyscat/model.hpp"

namespace polyscat {

// 2HM x 2HM radiation-to-radiation matrix: per-harmonic blocks
// [[ff_pp, ff_tp], [ff_pt, ff_tt]] on the diagonal
MatrixXcd assemble_structural(const ScattererBlocks& blocks, const PortLayout& layout);

// 2HM x HN load-to-radiation matrix: per-harmonic blocks [fd_p; fd_t]
MatrixXcd assemble_fd(const ScattererBlocks& blocks, const PortLayout& layout);

// HN x 2HM radiation-to-load matrix: per-harmonic blocks [df_p, df_t]
MatrixXcd assemble_df(const ScattererBlocks& blocks, const PortLayout& layout);

// HN x HN load-to-load matrix: per-harmonic dd blocks on the diagonal
MatrixXcd assemble_dd(const ScattererBlocks& blocks, const PortLayout& layout);

}  // namespace polyscat
