#include "graphon/cli.hpp"

#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphon/core.hpp"
#include "graphon/empirical.hpp"
#include "graphon/eta_analysis.hpp"
#include "graphon/family.hpp"
#include "graphon/linkpred.hpp"
#include "graphon/solver.hpp"

namespace graphon::cli {

namespace {

using nlohmann::json;

// Bad flag combinations that CLI11 cannot express; reported as usage errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json triple(double x, double y, double z) { return json::array({x, y, z}); }
json triple(const EmbeddingGram& k) { return triple(k.k1, k.k2, k.k3); }
json triple(const BlockProbabilities& b) { return triple(b.p, b.q, b.r); }
json triple(const SbmGraphon& g) { return triple(g.p, g.q, g.r); }

struct GraphonArgs {
  double a = 0.5, p = 0.5, q = 0.5, r = 0.5;

  void add_to(CLI::App* cmd, bool with_a = true) {
    if (with_a) cmd->add_option("--a", a, "community-1 fraction")->required();
    cmd->add_option("--p", p, "within-community-1 probability")->required();
    cmd->add_option("--q", q, "cross-community probability")->required();
    cmd->add_option("--r", r, "within-community-2 probability")->required();
  }
  SbmGraphon graphon() const { return {a, p, q, r}; }
};

// Where family-style commands take their gram from: a graphon to solve,
// explicit entries, or an `embed` JSON document.
struct GramSource {
  std::optional<double> p, q, r, k1, k2, k3;
  std::string in_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--p", p);
    cmd->add_option("--q", q);
    cmd->add_option("--r", r);
    cmd->add_option("--k1", k1);
    cmd->add_option("--k2", k2);
    cmd->add_option("--k3", k3);
    cmd->add_option("--in", in_path, "embed JSON to read K from ('-' = stdin)");
  }

  EmbeddingGram resolve(double a, std::istream& in) const {
    const bool by_graphon = p || q || r;
    const bool by_gram = k1 || k2 || k3;
    const bool by_file = !in_path.empty();
    if (by_graphon + by_gram + by_file != 1) {
      throw UsageError(
          "give exactly one of --p/--q/--r, --k1/--k2/--k3 or --in");
    }
    if (by_graphon) {
      if (!(p && q && r)) throw UsageError("--p, --q and --r go together");
      const SbmGraphon g{a, *p, *q, *r};
      if (classify(g).tag != RegionTag::Middle) {
        throw DomainError("graphon is in the " +
                          std::string(to_string(classify(g).tag)) +
                          " regime; families exist only in the middle regime");
      }
      return solve_gram(g).gram;
    }
    if (by_gram) {
      if (!(k1 && k2 && k3)) throw UsageError("--k1, --k2 and --k3 go together");
      return {*k1, *k2, *k3, a};
    }
    json doc;
    try {
      if (in_path == "-") {
        doc = json::parse(in);
      } else {
        std::ifstream file(in_path);
        if (!file) throw DomainError("cannot open " + in_path);
        doc = json::parse(file);
      }
      const auto& kk = doc.at("K");
      return {kk.at(0).get<double>(), kk.at(1).get<double>(),
              kk.at(2).get<double>(), a};
    } catch (const json::exception& e) {
      throw DomainError(std::string("cannot read K from JSON: ") + e.what());
    }
  }
};

json family_json(const EquivalenceFamily& f, int samples) {
  json members = json::array();
  for (int k = 0; k < samples; ++k) {
    const double delta =
        samples > 1 ? f.delta_min * static_cast<double>(k) / (samples - 1) : 0.0;
    const SbmGraphon m = member_at(f, delta);
    members.push_back({{"delta", delta}, {"p", m.p}, {"q", m.q}, {"r", m.r}});
  }
  return {{"a", f.a},
          {"K", triple(f.gram)},
          {"eta", f.eta},
          {"s_fam", f.s_fam},
          {"anchor", triple(f.anchor)},
          {"delta_min", f.delta_min},
          {"binding_constraint", std::string(to_string(f.binding))},
          {"members", members}};
}

json rates_json(const EquivalenceFamily& f) {
  const DensifyRates rates = densify_rates(f);
  return {{"community1", rates.community1},
          {"community2", rates.community2},
          {"cross", rates.cross},
          {"balance", std::string(to_string(rates.balance))},
          {"larger_community", rates.larger_community}};
}

std::optional<double> eta_or_null(const EmbeddingGram& k, const SbmGraphon& g) {
  try {
    if (k.k1 > 1e-8 && k.k3 > 1e-8) return eta_of(k, g.a);
    return eta_alt(k, g);
  } catch (const Error&) {
    return std::nullopt;
  }
}

json nullable(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw DomainError("cannot open " + path + " for writing");
  return file;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Limiting node-embedding grams of two-block SBM graphons"};
  app.require_subcommand(1);
  std::function<void()> action;

  // classify
  double classify_tol = kClassifyTol;
  GraphonArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "regime of (p, q, r)");
  classify_args.add_to(classify_cmd, false);
  classify_cmd->add_option("--tol", classify_tol, "boundary tolerance");
  classify_cmd->callback([&] {
    action = [&] {
      const Region region = classify(classify_args.p, classify_args.q,
                                     classify_args.r, classify_tol);
      out << json{{"region", std::string(to_string(region.tag))},
                  {"boundary_dense", region.boundary_dense},
                  {"boundary_sparse", region.boundary_sparse}}
                 .dump(2)
          << '\n';
    };
  });

  // embed
  GraphonArgs embed_args;
  double embed_tol = 1e-6;
  bool major_first = false;
  auto* embed_cmd = app.add_subcommand("embed", "solve the limiting gram");
  embed_args.add_to(embed_cmd);
  embed_cmd->add_option("--tol", embed_tol, "KKT certificate tolerance");
  embed_cmd->add_flag("--major-first", major_first,
                      "relabel communities so that a >= 1/2 in the report");
  embed_cmd->callback([&] {
    action = [&] {
      SbmGraphon g = embed_args.graphon();
      const bool swap = major_first && g.a < 0.5;
      if (swap) g = g.swapped();
      SolverOptions opts;
      opts.certificate_tolerance = embed_tol;
      const GramSolution sol = solve_gram(g, opts);
      const Region region = classify(g);
      const bool middle = region.tag == RegionTag::Middle;
      const auto& c = sol.certificate;
      out << json{{"a", g.a},
                  {"swapped", swap},
                  {"region", std::string(to_string(region.tag))},
                  {"K", triple(sol.gram)},
                  {"mu", triple(c.mu1, c.mu2, c.mu3)},
                  {"kkt_residual_max", c.max_residual()},
                  {"eta", middle ? nullable(eta_or_null(sol.gram, g))
                                 : json(nullptr)},
                  {"densest", middle ? triple(predict_baseline(sol.gram))
                                     : json(nullptr)}}
                 .dump(2)
          << '\n';
    };
  });

  // family
  double family_a = 0.5;
  int samples = 11;
  GramSource family_src;
  bool family_major_first = false;
  auto* family_cmd =
      app.add_subcommand("family", "equivalence class of an embedding");
  family_cmd->add_option("--a", family_a, "community-1 fraction")->required();
  family_src.add_to(family_cmd);
  family_cmd->add_option("--samples", samples, "members listed")
      ->check(CLI::PositiveNumber);
  family_cmd->add_flag("--major-first", family_major_first,
                       "relabel communities so that a >= 1/2 in the report");
  family_cmd->callback([&] {
    action = [&] {
      EmbeddingGram k = family_src.resolve(family_a, in);
      double a = family_a;
      if (family_major_first && a < 0.5) {
        k = k.swapped();
        a = 1.0 - a;
      }
      out << family_json(family_of(k, a), samples).dump(2) << '\n';
    };
  });

  // member-at
  double member_a = 0.5;
  double member_delta = 0.0;
  GramSource member_src;
  auto* member_cmd =
      app.add_subcommand("member-at", "family member at a given delta");
  member_cmd->add_option("--a", member_a, "community-1 fraction")->required();
  member_src.add_to(member_cmd);
  member_cmd->add_option("--delta", member_delta, "position, <= 0")->required();
  member_cmd->callback([&] {
    action = [&] {
      const EquivalenceFamily f =
          family_of(member_src.resolve(member_a, in), member_a);
      const SbmGraphon m = member_at(f, member_delta);
      out << json{{"a", m.a},
                  {"delta", member_delta},
                  {"p", m.p},
                  {"q", m.q},
                  {"r", m.r}}
                 .dump(2)
          << '\n';
    };
  });

  // verify
  GraphonArgs verify_args;
  int verify_n = 0, verify_d = 3;
  std::uint64_t verify_seed = 0;
  FitOptions fit_opts;
  std::string graph_out, graph_in;
  auto* verify_cmd = app.add_subcommand(
      "verify", "sample a graph, fit embeddings, compare with the limit");
  verify_args.add_to(verify_cmd);
  verify_cmd->add_option("--n", verify_n, "node count")
      ->required()
      ->check(CLI::Range(2, 1 << 20));
  verify_cmd->add_option("--d", verify_d, "embedding dimension")
      ->required()
      ->check(CLI::Range(2, 1 << 10));
  verify_cmd->add_option("--seed", verify_seed, "RNG seed")->required();
  verify_cmd->add_option("--epochs", fit_opts.epochs, "epoch limit")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--lr", fit_opts.learning_rate,
                         "initial learning rate (default 0.5/n)");
  verify_cmd->add_option("--graph-out", graph_out, "write the edge list");
  verify_cmd->add_option("--graph-in", graph_in,
                         "fit this edge list instead of sampling");
  verify_cmd->callback([&] {
    action = [&] {
      const SbmGraphon g = verify_args.graphon();
      g.validate();
      const GramSolution sol = solve_gram(g);
      SampledGraph graph;
      if (!graph_in.empty()) {
        std::ifstream file(graph_in);
        if (!file) throw DomainError("cannot open " + graph_in);
        graph = read_edge_list(file, sample_labels(g.a, verify_n, verify_seed),
                               verify_seed);
      } else {
        graph = sample_graph(g, verify_n, verify_seed);
      }
      if (!graph_out.empty()) {
        auto file = open_out(graph_out);
        write_edge_list(graph, file);
      }
      fit_opts.seed = verify_seed;
      const EmbeddingFit fit = fit_embeddings(graph, verify_d, fit_opts);
      const GapReport report = gap_report(fit, graph, sol.gram);
      out << json{{"analytic_K", triple(sol.gram)},
                  {"empirical_block_gram", triple(report.block_gram)},
                  {"gap", report.gap},
                  {"epochs_run", fit.epochs_run},
                  {"final_loss", fit.final_loss()}}
                 .dump(2)
          << '\n';
    };
  });

  // linkpred
  GraphonArgs link_args;
  bool baseline = false;
  std::optional<double> interp, density, avg_degree;
  std::optional<long long> link_n;
  auto* link_cmd =
      app.add_subcommand("linkpred", "link prediction and graphon recovery");
  link_args.add_to(link_cmd);
  link_cmd->add_flag("--baseline", baseline, "sigmoid of inner products");
  link_cmd->add_option("--interp", interp, "interpolate toward the densest member");
  link_cmd->add_option("--density", density, "recover from edge density");
  link_cmd->add_option("--avg-degree", avg_degree, "recover from average degree");
  link_cmd->add_option("--n", link_n, "node count for --avg-degree");
  link_cmd->callback([&] {
    action = [&] {
      const int modes = baseline + interp.has_value() + density.has_value() +
                        avg_degree.has_value();
      if (modes != 1) {
        throw UsageError(
            "give exactly one of --baseline, --interp, --density, --avg-degree");
      }
      if (avg_degree && !link_n) throw UsageError("--avg-degree requires --n");
      if (link_n && !avg_degree) throw UsageError("--n only applies to --avg-degree");

      const SbmGraphon g = link_args.graphon();
      const GramSolution sol = solve_gram(g);
      const bool middle = classify(g).tag == RegionTag::Middle;
      std::optional<EquivalenceFamily> fam;
      if (middle && sol.gram.k1 > 0.0 && sol.gram.k3 > 0.0) {
        fam = family_of(sol.gram, g.a);
      }

      json predicted;
      json delta = nullptr;
      if (baseline) {
        predicted = triple(predict_baseline(sol.gram));
        if (fam) delta = 0.0;
      } else {
        if (!fam) {
          throw DomainError(
              "graphon has no equivalence family (region " +
              std::string(to_string(classify(g).tag)) +
              "); interpolation and recovery need the middle regime");
        }
        if (interp) {
          predicted = triple(predict_interpolated(sol.gram, g.a, g, *interp));
          delta = (1.0 - *interp) * delta_of(*fam, g);
        } else {
          const double rho =
              density ? *density
                      : density_from_average_degree(*avg_degree, *link_n);
          const double d = delta_from_density(*fam, rho);
          predicted = triple(member_at(*fam, d));
          delta = d;
        }
      }
      out << json{{"predicted", predicted},
                  {"delta", delta},
                  {"rates", fam ? rates_json(*fam) : json(nullptr)}}
                 .dump(2)
          << '\n';
    };
  });

  // eta-sweep and densify-map share their grid flags.
  struct SweepArgs {
    double a = 0.5, q = 0.15;
    std::string p_range, r_range, out_path;
    int steps = 2;
    SweepOptions opts;
  };
  SweepArgs sweep, dmap;
  auto add_sweep = [](CLI::App* cmd, SweepArgs& s) {
    cmd->add_option("--a", s.a, "community-1 fraction")->required();
    cmd->add_option("--q", s.q, "cross-community probability")->required();
    cmd->add_option("--p-range", s.p_range, "LO:HI")->required();
    cmd->add_option("--r-range", s.r_range, "LO:HI")->required();
    cmd->add_option("--steps", s.steps, "points per axis")
        ->required()
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--jobs", s.opts.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", s.out_path, "CSV output path")->required();
  };

  auto* sweep_cmd = app.add_subcommand("eta-sweep", "eta over a (p, r) grid");
  sweep_cmd->set_help_flag("--help", "Print this help message and exit");
  add_sweep(sweep_cmd, sweep);
  sweep_cmd->add_flag("--partials", sweep.opts.partials,
                      "finite-difference partials of eta");
  sweep_cmd->add_option("--h", sweep.opts.h, "finite-difference step")
      ->check(CLI::PositiveNumber);
  sweep_cmd->callback([&] {
    action = [&] {
      const SweepGrid grid =
          eta_surface(sweep.a, sweep.q, AxisRange::parse(sweep.p_range),
                      AxisRange::parse(sweep.r_range), sweep.steps, sweep.opts);
      auto file = open_out(sweep.out_path);
      write_sweep_csv(grid, file);
      int with_eta = 0;
      for (const auto& c : grid.cells) with_eta += c.eta.has_value();
      out << json{{"out", sweep.out_path},
                  {"cells", grid.cells.size()},
                  {"cells_with_eta", with_eta}}
                 .dump(2)
          << '\n';
    };
  });

  auto* dmap_cmd = app.add_subcommand(
      "densify-map", "which community link prediction favors, per cell");
  add_sweep(dmap_cmd, dmap);
  dmap_cmd->callback([&] {
    action = [&] {
      const SweepGrid grid = densification_map(
          dmap.a, dmap.q, AxisRange::parse(dmap.p_range),
          AxisRange::parse(dmap.r_range), dmap.steps, dmap.opts);
      auto file = open_out(dmap.out_path);
      file << "p,r,region,eta,label\n";
      json counts = json::object();
      for (const auto& c : grid.cells) {
        const std::string label =
            c.label ? std::string(to_string(*c.label)) : std::string();
        file << c.p << ',' << c.r << ',' << to_string(c.region) << ','
             << (c.eta ? std::to_string(*c.eta) : std::string()) << ','
             << label << '\n';
        if (!label.empty()) counts[label] = counts.value(label, 0) + 1;
      }
      out << json{{"out", dmap.out_path}, {"labels", counts}}.dump(2) << '\n';
    };
  });

  std::vector<std::string> argv_storage{"graphon-embed"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kOk;
}

}  // namespace graphon::cli
