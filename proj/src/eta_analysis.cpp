#include "graphon/eta_analysis.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "graphon/family.hpp"

namespace graphon {

namespace {

constexpr double kTinyDiagonal = 1e-8;

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw DomainError("cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

// Runs fn(index) for index in [0, count) on up to `jobs` threads. Each index
// writes only its own slot, so the merge order is the index order.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

std::string optional_field(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace

AxisRange AxisRange::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("range must look like LO:HI, got '" + std::string(text) +
                      "'");
  }
  AxisRange out{parse_double(text.substr(0, colon)),
                parse_double(text.substr(colon + 1))};
  if (!(out.lo > 0.0 && out.hi < 1.0 && out.lo <= out.hi)) {
    throw DomainError("range must satisfy 0 < LO <= HI < 1");
  }
  return out;
}

double AxisRange::at(int index, int steps) const {
  if (steps <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(index) / (steps - 1);
}

std::string_view to_string(DensifyLabel label) {
  switch (label) {
    case DensifyLabel::SparserFavored:
      return "sparser-favored";
    case DensifyLabel::SmallerDenserFavored:
      return "smaller-denser-favored";
    case DensifyLabel::Balanced:
      return "balanced";
    case DensifyLabel::DenserFavored:
      return "denser-favored";
  }
  return "unknown";
}

double eta_at(const SbmGraphon& g, const SolverOptions& opts) {
  const Region region = classify(g);
  if (region.tag != RegionTag::Middle) {
    throw BoundaryError("eta is defined only in the middle regime; graphon is " +
                        std::string(to_string(region.tag)));
  }
  const GramSolution sol = solve_gram(g, opts);
  if (sol.gram.k1 > kTinyDiagonal && sol.gram.k3 > kTinyDiagonal) {
    return eta_of(sol.gram, g.a);
  }
  return eta_alt(sol.gram, g);
}

EtaPartials eta_partials(const SbmGraphon& g, double h,
                         const SolverOptions& opts) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  auto shifted = [&](int axis, double step) {
    SbmGraphon s = g;
    double* field[] = {&s.p, &s.q, &s.r, &s.a};
    *field[axis] += step;
    return s;
  };
  auto check = [](const SbmGraphon& s) {
    const bool open = s.a > 0.0 && s.a < 1.0 && s.p > 0.0 && s.p < 1.0 &&
                      s.q > 0.0 && s.q < 1.0 && s.r > 0.0 && s.r < 1.0;
    if (!open || classify(s).tag != RegionTag::Middle) {
      throw BoundaryError(fmt::format(
          "perturbation leaves the middle regime at (a={}, p={}, q={}, r={})",
          s.a, s.p, s.q, s.r));
    }
  };
  check(g);
  for (int axis = 0; axis < 4; ++axis) {
    check(shifted(axis, h));
    check(shifted(axis, -h));
  }
  EtaPartials out{};
  for (int axis = 0; axis < 4; ++axis) {
    const double up = eta_at(shifted(axis, h), opts);
    const double down = eta_at(shifted(axis, -h), opts);
    out[axis] = (up - down) / (2.0 * h);
  }
  return out;
}

DensifyLabel densify_label(double a, double p, double r, double eta,
                           double tol) {
  if (std::abs(eta - 1.0) <= tol) return DensifyLabel::Balanced;
  const bool first = eta > 1.0;
  const double favored_density = first ? p : r;
  const double other_density = first ? r : p;
  if (favored_density < other_density) return DensifyLabel::SparserFavored;
  const double favored_size = first ? a : 1.0 - a;
  if (favored_size < 1.0 - favored_size) {
    return DensifyLabel::SmallerDenserFavored;
  }
  return DensifyLabel::DenserFavored;
}

SweepGrid eta_surface(double a, double q, AxisRange p_range, AxisRange r_range,
                      int steps, const SweepOptions& opts) {
  if (steps < 2) throw DomainError("sweep needs at least 2 steps per axis");
  if (!(a > 0.0 && a < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw DomainError("sweep needs a and q strictly inside (0, 1)");
  }
  SweepGrid grid;
  grid.a = a;
  grid.q = q;
  grid.p_range = p_range;
  grid.r_range = r_range;
  grid.steps = steps;
  grid.cells.resize(static_cast<std::size_t>(steps) * steps);

  parallel_for(steps * steps, opts.jobs, [&](int index) {
    SweepCell& cell = grid.cells[index];
    cell.p = p_range.at(index / steps, steps);
    cell.r = r_range.at(index % steps, steps);
    const SbmGraphon g{a, cell.p, q, cell.r};
    cell.region = classify(g).tag;
    if (cell.region != RegionTag::Middle) return;
    try {
      cell.eta = eta_at(g, opts.solver);
      if (opts.partials) cell.partials = eta_partials(g, opts.h, opts.solver);
    } catch (const Error& e) {
      cell.error = e.what();
    }
  });
  return grid;
}

SweepGrid densification_map(double a, double q, AxisRange p_range,
                            AxisRange r_range, int steps,
                            const SweepOptions& opts) {
  SweepGrid grid = eta_surface(a, q, p_range, r_range, steps, opts);
  for (auto& cell : grid.cells) {
    if (cell.eta) cell.label = densify_label(a, cell.p, cell.r, *cell.eta);
  }
  return grid;
}

void write_sweep_csv(const SweepGrid& grid, std::ostream& out) {
  out << "p,r,region,eta,deta_dp,deta_dq,deta_dr,deta_da\n";
  for (const auto& cell : grid.cells) {
    out << fmt::format("{},{},{},{}", cell.p, cell.r, to_string(cell.region),
                       optional_field(cell.eta));
    for (int k = 0; k < 4; ++k) {
      out << ',';
      if (cell.partials) out << fmt::format("{}", (*cell.partials)[k]);
    }
    out << '\n';
  }
}

}  // namespace graphon
