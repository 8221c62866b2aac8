#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "graphon/core.hpp"
#include "graphon/solver.hpp"

namespace graphon {

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;

  // Parses "LO:HI". Throws DomainError on malformed input.
  static AxisRange parse(std::string_view text);
  double at(int index, int steps) const;
};

// Who gains more edges under representation-preserving link prediction.
enum class DensifyLabel {
  SparserFavored,
  SmallerDenserFavored,
  Balanced,
  // The favored community is at least as dense and not smaller. Neither
  // the size effect nor the sparsity effect explains such a cell.
  DenserFavored,
};

std::string_view to_string(DensifyLabel label);

// Partials of eta with respect to (p, q, r, a).
using EtaPartials = std::array<double, 4>;

struct SweepCell {
  double p = 0.0;
  double r = 0.0;
  RegionTag region = RegionTag::Middle;
  std::optional<double> eta;
  std::optional<EtaPartials> partials;
  std::optional<DensifyLabel> label;
  // Why eta or the partials are missing for a middle cell.
  std::string error;
};

struct SweepOptions {
  bool partials = false;
  double h = 1e-4;
  int jobs = 1;
  SolverOptions solver;
};

// Cells are stored p-major: index = i * steps + j for p index i, r index j.
struct SweepGrid {
  double a = 0.5;
  double q = 0.5;
  AxisRange p_range;
  AxisRange r_range;
  int steps = 2;
  std::vector<SweepCell> cells;

  const SweepCell& cell(int i, int j) const { return cells[i * steps + j]; }
};

// eta of a graphon: solve the gram, then (1-a)/a sqrt(k3/k1), falling back to
// the forced-error form when k1 or k3 is tiny. Throws BoundaryError unless the
// graphon is in the middle regime.
double eta_at(const SbmGraphon& g, const SolverOptions& opts = {});

// Central differences of eta in p, q, r and a, re-solving at each of the
// eight perturbed graphons. Throws BoundaryError if g or any perturbed
// graphon leaves the middle regime.
EtaPartials eta_partials(const SbmGraphon& g, double h = 1e-4,
                         const SolverOptions& opts = {});

DensifyLabel densify_label(double a, double p, double r, double eta,
                           double tol = 1e-8);

SweepGrid eta_surface(double a, double q, AxisRange p_range, AxisRange r_range,
                      int steps, const SweepOptions& opts = {});

// eta_surface plus a densification label on every middle cell with eta.
SweepGrid densification_map(double a, double q, AxisRange p_range,
                            AxisRange r_range, int steps,
                            const SweepOptions& opts = {});

// Columns: p, r, region, eta, deta_dp, deta_dq, deta_dr, deta_da.
void write_sweep_csv(const SweepGrid& grid, std::ostream& out);

}  // namespace graphon
