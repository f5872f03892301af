#include "polyscat/assembly.hpp"

namespace polyscat {

MatrixXcd assemble_structural(const ScattererBlocks& blocks, const PortLayout& layout) {
  blocks.validate(layout);
  const int m = layout.num_directions;
  MatrixXcd out = MatrixXcd::Zero(layout.radiation_size(), layout.radiation_size());
  for (int h = 1; h <= layout.num_harmonics; ++h) {
    const HarmonicBlocks& hb = blocks.at(h, layout);
    const int base = (h - 1) * 2 * m;
    out.block(base, base, m, m) = hb.ff_pp;          // phi <- phi
    out.block(base, base + m, m, m) = hb.ff_tp;      // phi <- theta
    out.block(base + m, base, m, m) = hb.ff_pt;      // theta <- phi
    out.block(base + m, base + m, m, m) = hb.ff_tt;  // theta <- theta
  }
  return out;
}

MatrixXcd assemble_fd(const ScattererBlocks& blocks, const PortLayout& layout) {
  blocks.validate(layout);
  const int m = layout.num_directions;
  const int n = layout.num_loads;
  MatrixXcd out = MatrixXcd::Zero(layout.radiation_size(), layout.load_size());
  for (int h = 1; h <= layout.num_harmonics; ++h) {
    const HarmonicBlocks& hb = blocks.at(h, layout);
    out.block((h - 1) * 2 * m, (h - 1) * n, m, n) = hb.fd_p;
    out.block((h - 1) * 2 * m + m, (h - 1) * n, m, n) = hb.fd_t;
  }
  return out;
}

MatrixXcd assemble_df(const ScattererBlocks& blocks, const PortLayout& layout) {
  blocks.validate(layout);
  const int m = layout.num_directions;
  const int n = layout.num_loads;
  MatrixXcd out = MatrixXcd::Zero(layout.load_size(), layout.radiation_size());
  for (int h = 1; h <= layout.num_harmonics; ++h) {
    const HarmonicBlocks& hb = blocks.at(h, layout);
    out.block((h - 1) * n, (h - 1) * 2 * m, n, m) = hb.df_p;
    out.block((h - 1) * n, (h - 1) * 2 * m + m, n, m) = hb.df_t;
  }
  return out;
}

MatrixXcd assemble_dd(const ScattererBlocks& blocks, const PortLayout& layout) {
  blocks.validate(layout);
  const int n = layout.num_loads;
  MatrixXcd out = MatrixXcd::Zero(layout.load_size(), layout.load_size());
  for (int h = 1; h <= layout.num_harmonics; ++h)
    out.block((h - 1) * n, (h - 1) * n, n, n) = blocks.at(h, layout).dd;
  return out;
}

}  // namespace polyscat
