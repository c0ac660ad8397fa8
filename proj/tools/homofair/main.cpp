#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <homofair/cascade.hpp>
#include <homofair/graph.hpp>
#include <homofair/inequality.hpp>
#include <homofair/kernel.hpp>
#include <homofair/ranking.hpp>
#include <homofair/relabel.hpp>
#include <homofair/spectral.hpp>

#include "run.hpp"
#include "version.hpp"

namespace fs = std::filesystem;
using namespace homofair;
using namespace homofair::cli;

namespace {

struct GraphInput {
  std::string graph;
  std::string labels;
  bool directed = false;
  int min_degree = 0;
  int min_group_size = 0;
  bool all_components = false;
  bool single_pass = false;
};

void add_graph_options(CLI::App* cmd, GraphInput& in, bool labels_required) {
  cmd->add_option("--graph", in.graph, "Edge list: u v [weight] per line")->required();
  auto* labels = cmd->add_option("--labels", in.labels, "CSV node_id,label");
  if (labels_required) labels->required();
  cmd->add_flag("--directed", in.directed, "Input lists arcs; reciprocal pairs become one edge");
  cmd->add_option("--min-degree", in.min_degree, "Drop nodes below this degree")->check(CLI::NonNegativeNumber);
  cmd->add_option("--min-group-size", in.min_group_size, "Drop groups smaller than this")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--all-components", in.all_components, "Keep every connected component");
  cmd->add_flag("--single-pass", in.single_pass, "Apply the filters once instead of to a fixed point");
}

PreprocessConfig preprocess_config(const GraphInput& in) {
  PreprocessConfig cfg;
  cfg.min_degree = in.min_degree;
  cfg.min_group_size = in.min_group_size;
  cfg.take_largest_cc = !in.all_components;
  cfg.until_stable = !in.single_pass;
  return cfg;
}

void record_graph_params(Run& run, const GraphInput& in) {
  run.param("graph", in.graph);
  run.param("labels", in.labels);
  run.param("directed", in.directed);
  run.param("min_degree", in.min_degree);
  run.param("min_group_size", in.min_group_size);
  run.param("all_components", in.all_components);
  run.param("single_pass", in.single_pass);
}

Graph load_raw(const GraphInput& in, Run& run) {
  run.input(in.graph);
  Graph g = load_edge_list(in.graph, EdgeListOptions{in.directed});
  if (!in.labels.empty()) {
    run.input(in.labels);
    g = load_labels(in.labels, g);
  }
  return g;
}

Graph load_graph(const GraphInput& in, Run& run) {
  record_graph_params(run, in);
  return preprocess(load_raw(in, run), preprocess_config(in));
}

void require_full_labels(const Graph& g) {
  if (!g.fully_labeled()) throw DomainError("every node needs a label after preprocessing");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) { return flag ? *flag : default_seed(); }

// ---------------------------------------------------------------------------

struct KernelArgs {
  GraphInput in;
  std::vector<int> sbm_sizes;
  double p_in = 0.1;
  double p_out = 0.01;
  std::string kind = "laplacian";
  int dim = 2;
  double resolution = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string embedding;
};

void run_kernel(const KernelArgs& a) {
  Run run("kernel", a.out);
  const std::uint64_t seed = resolve_seed(a.seed);
  run.seed("seed", seed);
  Graph g;
  if (!a.sbm_sizes.empty()) {
    if (!a.in.graph.empty()) throw UsageError("--graph and --sbm-sizes are exclusive");
    run.param("sbm_sizes", a.sbm_sizes);
    run.param("p_in", a.p_in);
    run.param("p_out", a.p_out);
    g = sbm_sample(SBMParams::homophilous(a.sbm_sizes, a.p_in, a.p_out, derive_seed(seed, 1)));
  } else {
    if (a.in.graph.empty()) throw UsageError("one of --graph or --sbm-sizes is required");
    g = load_graph(a.in, run);
  }
  const KernelRecipe recipe{parse_kernel_kind(a.kind), a.dim, a.resolution, derive_seed(seed, 2)};
  run.param("kind", to_string(recipe.kind));
  run.param("dim", a.dim);
  run.param("resolution", a.resolution);

  std::optional<Embedding> emb;
  if (!a.embedding.empty()) {
    if (recipe.kind != KernelKind::laplacian) throw UsageError("--embedding needs --kind laplacian");
    emb = laplacian_eigenmaps(g, {a.dim});
  }
  const Kernel k = build_kernel(g, recipe);
  const bool binary = fs::path(a.out).extension() == ".bin";
  run.commit([&](std::ostream& os) { binary ? write_kernel_binary(k, os) : write_kernel_csv(k, os); }, binary);
  if (emb) {
    Run erun("kernel", a.embedding);
    erun.param("dim", a.dim);
    erun.param("eigenvalues", std::vector<double>(emb->eigenvalues.begin(), emb->eigenvalues.end()));
    erun.commit([&](std::ostream& os) { write_embedding_csv(*emb, os); });
  }
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::vector<double> p{1.0, 1.0, 0.25};
  std::vector<double> q{0.25, 1.0, 1.0};
  double eps_max = 0.5;
  int steps = 51;
  std::string out;
};

void run_bounds(const BoundsArgs& a) {
  if (a.p.size() != a.q.size()) throw UsageError("--p and --q need the same number of values");
  Run run("bounds", a.out);
  run.param("p", a.p);
  run.param("q", a.q);
  run.param("eps_max", a.eps_max);
  run.param("steps", a.steps);
  std::vector<std::array<double, 6>> rows;
  for (std::size_t c = 0; c < a.p.size(); ++c)
    for (int s = 0; s < a.steps; ++s) {
      const double eps = a.steps == 1 ? 0.0 : a.eps_max * s / (a.steps - 1);
      const InequalityBounds b = confounder_bounds({a.p[c], a.q[c], eps});
      rows.push_back({a.p[c], a.q[c], eps, b.delta0, b.lower, b.upper});
    }
  run.commit([&](std::ostream& os) {
    CsvWriter csv(os, {"p", "q", "epsilon", "delta0", "lower", "upper"});
    for (const auto& r : rows) {
      for (double v : r) csv << v;
      csv.end_row();
    }
  });
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  GraphInput in;
  std::string yhat;
  std::vector<std::string> seed_groups;
  std::string kernel = "laplacian";
  int dim = 2;
  double resolution = 1.0;
  std::optional<double> theta_max;
  int steps = 20;
  std::optional<std::uint64_t> seed;
  std::string out;
};

// Y-hat from a node_id,0/1 file read against the unfiltered graph, mapped
// onto the preprocessed nodes by name.
Labeling read_yhat(const fs::path& path, const Graph& raw, const Graph& g) {
  const Graph tagged = load_labels(path, raw);
  std::vector<std::uint8_t> value_of(tagged.label_names().size());
  for (std::size_t c = 0; c < value_of.size(); ++c) {
    const std::string& name = tagged.label_names()[c];
    if (name != "0" && name != "1") throw DomainError("--yhat values must be 0 or 1, got '" + name + "'");
    value_of[c] = name == "1";
  }
  Labeling y(static_cast<std::size_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto raw_id = raw.find_node(g.node_names()[static_cast<std::size_t>(v)]);
    const int c = tagged.labels()[static_cast<std::size_t>(*raw_id)];
    if (c == kUnlabeled) throw DomainError("--yhat has no value for node " + g.node_names()[static_cast<std::size_t>(v)]);
    y[static_cast<std::size_t>(v)] = value_of[static_cast<std::size_t>(c)];
  }
  return y;
}

Labeling positives_in_groups(const Graph& g, const std::vector<std::string>& names) {
  Labeling y(static_cast<std::size_t>(g.node_count()), 0);
  for (const std::string& name : names) {
    const auto& all = g.label_names();
    const auto it = std::find(all.begin(), all.end(), name);
    if (it == all.end()) throw DomainError("no group named '" + name + "' after preprocessing");
    const int id = static_cast<int>(it - all.begin());
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (g.labels()[static_cast<std::size_t>(v)] == id) y[static_cast<std::size_t>(v)] = 1;
  }
  return y;
}

void run_classify(const ClassifyArgs& a) {
  if (a.yhat.empty() == a.seed_groups.empty()) throw UsageError("give exactly one of --yhat or --seed-groups");
  Run run("classify", a.out);
  const std::uint64_t seed = resolve_seed(a.seed);
  run.seed("seed", seed);
  record_graph_params(run, a.in);
  const Graph raw = load_raw(a.in, run);
  const Graph g = preprocess(raw, preprocess_config(a.in));
  require_full_labels(g);

  Labeling y;
  if (!a.yhat.empty()) {
    run.input(a.yhat);
    run.param("yhat", a.yhat);
    y = read_yhat(a.yhat, raw, g);
  } else {
    run.param("seed_groups", a.seed_groups);
    y = positives_in_groups(g, a.seed_groups);
  }
  const int positives = static_cast<int>(std::count(y.begin(), y.end(), 1));
  if (positives == 0) throw DomainError("Y-hat has no positive labels");

  const KernelRecipe recipe{parse_kernel_kind(a.kernel), a.dim, a.resolution, derive_seed(seed, 2)};
  const double theta_max = a.theta_max.value_or(static_cast<double>(positives) / g.node_count());
  run.param("kernel", to_string(recipe.kind));
  run.param("dim", a.dim);
  run.param("resolution", a.resolution);
  run.param("theta_max", theta_max);
  run.param("steps", a.steps);

  const Kernel k = build_kernel(g, recipe);
  const auto rows = relabel_sweep(y, k, g.labels(), theta_max, a.steps);
  run.commit([&](std::ostream& os) {
    CsvWriter csv(os, {"theta", "flips", "flip_fraction", "delta0", "min_exposure"});
    for (const auto& r : rows) {
      csv << r.theta << r.flips << r.flip_fraction << r.delta0 << r.min_exposure;
      csv.end_row();
    }
  });
}

// ---------------------------------------------------------------------------

struct InfluenceArgs {
  GraphInput in;
  std::string objective = "group_free";
  int kernel_dim = 2;
  double resolution = 1.0;
  double p = 0.1;
  int samples = 1000;
  std::optional<int> eval_samples;
  int budget = 10;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void run_influence(const InfluenceArgs& a) {
  Run run("influence", a.out);
  const std::uint64_t seed = resolve_seed(a.seed);
  run.seed("seed", seed);
  const Graph g = load_graph(a.in, run);
  require_full_labels(g);
  if (a.budget > g.node_count()) throw DomainError("--budget exceeds the number of nodes");

  Objective objective{parse_objective_kind(a.objective), std::nullopt};
  if (objective.kind == ObjectiveKind::group_free) {
    objective.kernel = cosine_kernel(laplacian_eigenmaps(g, {a.kernel_dim}));
  } else if (needs_kernel(objective.kind)) {
    objective.kernel = community_kernel(louvain(g, {a.resolution, derive_seed(seed, 2)}));
  }
  const int eval = a.eval_samples.value_or(a.samples);
  run.param("objective", to_string(objective.kind));
  run.param("kernel_dim", a.kernel_dim);
  run.param("resolution", a.resolution);
  run.param("transmission_p", a.p);
  run.param("samples", a.samples);
  run.param("eval_samples", eval);
  run.param("budget", a.budget);

  const GreedyResult greedy = greedy_select(g, a.budget, objective, {a.p, a.samples, derive_seed(seed, 3)});
  const auto report = evaluate_seeds(g, greedy.seeds, g.labels(), {a.p, eval, derive_seed(seed, 4)});
  run.commit([&](std::ostream& os) {
    CsvWriter csv(os, {"budget", "seed_node", "delta0", "reach", "objective_value"});
    for (std::size_t i = 0; i < report.size(); ++i) {
      csv << report[i].budget << g.node_names()[static_cast<std::size_t>(report[i].seed)] << report[i].delta0
          << report[i].reach << greedy.values[i];
      csv.end_row();
    }
  });
}

// ---------------------------------------------------------------------------

struct RankArgs {
  GraphInput in;
  std::string ratings;
  std::vector<std::string> kernels{"laplacian", "ground-truth", "identity"};
  int dim = 2;
  double resolution = 1.0;
  std::vector<double> betas{0.0, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
  double eta = 0.1;
  int kbar = 10;
  int iters = 200;
  int min_ratings = 1;
  int als_rank = 32;
  double als_reg = 0.1;
  int als_iters = 15;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void run_rank(const RankArgs& a) {
  Run run("rank", a.out);
  const std::uint64_t seed = resolve_seed(a.seed);
  run.seed("seed", seed);
  record_graph_params(run, a.in);
  const Graph raw = load_raw(a.in, run);
  run.input(a.ratings);
  run.param("ratings", a.ratings);
  const RatingTable raw_ratings = load_ratings(a.ratings, raw);
  const std::vector<double> counts = raw_ratings.per_user_counts(raw.node_count());

  PreprocessConfig pcfg = preprocess_config(a.in);
  pcfg.min_ratings = a.min_ratings;
  const Graph g = preprocess(raw, pcfg, std::span<const double>(counts));
  require_full_labels(g);
  const RatingTable ratings = raw_ratings.remap_users(raw, g);
  const int m = static_cast<int>(ratings.item_names.size());
  if (a.kbar > m) throw DomainError("--kbar exceeds the number of items");

  const AlsConfig als{a.als_rank, a.als_reg, a.als_iters, derive_seed(seed, 5)};
  run.param("min_ratings", a.min_ratings);
  run.param("als_rank", a.als_rank);
  run.param("als_reg", a.als_reg);
  run.param("als_iters", a.als_iters);
  const PreferenceMatrix rho = als_complete(ratings, g.node_count(), als);

  std::vector<NamedKernel> kernels;
  std::vector<std::string> kinds;
  for (const std::string& name : a.kernels) {
    const KernelKind kind = parse_kernel_kind(name);
    kinds.push_back(to_string(kind));
    kernels.push_back({to_string(kind), build_kernel(g, {kind, a.dim, a.resolution, derive_seed(seed, 2)})});
  }
  run.param("kernels", kinds);
  run.param("dim", a.dim);
  run.param("resolution", a.resolution);
  run.param("betas", a.betas);
  run.param("eta", a.eta);
  run.param("kbar", a.kbar);
  run.param("iters", a.iters);

  const auto rows =
      tradeoff_sweep(rho, kernels, g.labels(), a.betas, PositionWeights::dcg(m, a.kbar), a.eta, {a.iters});
  run.commit([&](std::ostream& os) {
    CsvWriter csv(os, {"beta", "kernel", "avg_utility", "gt_unfairness", "iterations"});
    for (const auto& r : rows) {
      csv << r.beta << r.kernel << r.avg_utility << r.gt_unfairness << r.iterations;
      csv.end_row();
    }
  });
}

// ---------------------------------------------------------------------------

struct AssortArgs {
  GraphInput in;
  int shuffles = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string export_prefix;
};

void run_assort(const AssortArgs& a) {
  Run run("assort", a.out);
  const std::uint64_t seed = resolve_seed(a.seed);
  run.seed("seed", seed);
  const Graph g = load_graph(a.in, run);
  require_full_labels(g);
  run.param("shuffles", a.shuffles);

  const double r = assortativity(g);
  double mean = 0.0, sd = 0.0;
  if (a.shuffles > 0) {
    std::mt19937_64 rng(derive_seed(seed, 6));
    std::vector<double> null(static_cast<std::size_t>(a.shuffles));
    Partition labels = g.labels();
    for (double& v : null) {
      std::shuffle(labels.begin(), labels.end(), rng);
      v = assortativity(g.with_labels(labels, g.label_names()));
    }
    for (double v : null) mean += v / a.shuffles;
    for (double v : null) sd += (v - mean) * (v - mean) / a.shuffles;
    sd = std::sqrt(sd);
  }
  if (!a.export_prefix.empty()) export_graph(g, a.export_prefix);
  run.commit([&](std::ostream& os) {
    CsvWriter csv(os, {"nodes", "edges", "groups", "assortativity", "null_mean", "null_std"});
    csv << g.node_count() << static_cast<long long>(g.edge_count()) << group_count(g.labels()) << r << mean << sd;
    csv.end_row();
  });
}

// ---------------------------------------------------------------------------

struct SbmArgs {
  std::vector<int> sizes;
  double p_in = 0.1;
  double p_out = 0.01;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string labels_out;
};

void run_sbm(const SbmArgs& a) {
  Run run("sbm", a.out);
  const std::uint64_t seed = resolve_seed(a.seed);
  run.seed("seed", seed);
  run.param("sizes", a.sizes);
  run.param("p_in", a.p_in);
  run.param("p_out", a.p_out);
  const Graph g = sbm_sample(SBMParams::homophilous(a.sizes, a.p_in, a.p_out, derive_seed(seed, 1)));
  run.commit([&](std::ostream& os) { write_edge_list(g, os); });
  if (!a.labels_out.empty()) {
    Run lrun("sbm", a.labels_out);
    lrun.seed("seed", seed);
    lrun.param("sizes", a.sizes);
    lrun.param("p_in", a.p_in);
    lrun.param("p_out", a.p_out);
    lrun.commit([&](std::ostream& os) {
      CsvWriter csv(os, {"node_id", "label"});
      for (NodeId v = 0; v < g.node_count(); ++v) {
        csv << g.node_names()[static_cast<std::size_t>(v)]
            << g.label_names()[static_cast<std::size_t>(g.labels()[static_cast<std::size_t>(v)])];
        csv.end_row();
      }
    });
  }
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return ok;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return failed;
  } catch (const SolveError& e) {
    std::cerr << "optimization failed: " << e.what() << '\n';
    return failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-free inequality measurement and interventions on graphs", "homofair"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::function<void()> action;

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Infer a similarity kernel from a graph or an SBM sample");
  kernel->add_option("--graph", ka.in.graph, "Edge list");
  kernel->add_option("--labels", ka.in.labels, "CSV node_id,label");
  kernel->add_flag("--directed", ka.in.directed, "Input lists arcs");
  kernel->add_option("--min-degree", ka.in.min_degree)->check(CLI::NonNegativeNumber);
  kernel->add_option("--min-group-size", ka.in.min_group_size)->check(CLI::NonNegativeNumber);
  kernel->add_flag("--all-components", ka.in.all_components);
  kernel->add_flag("--single-pass", ka.in.single_pass);
  kernel->add_option("--sbm-sizes", ka.sbm_sizes, "Sample an SBM with these block sizes instead")->delimiter(',');
  kernel->add_option("--p-in", ka.p_in)->check(CLI::Range(0.0, 1.0));
  kernel->add_option("--p-out", ka.p_out)->check(CLI::Range(0.0, 1.0));
  kernel->add_option("--kind", ka.kind, "laplacian | ground-truth | identity | louvain");
  kernel->add_option("--dim", ka.dim, "Embedding dimension")->check(CLI::PositiveNumber);
  kernel->add_option("--resolution", ka.resolution, "Louvain resolution")->check(CLI::PositiveNumber);
  kernel->add_option("--seed", ka.seed);
  kernel->add_option("--out", ka.out, "Kernel file (.csv or .bin)")->required();
  kernel->add_option("--embedding", ka.embedding, "Also write the embedding CSV here");
  kernel->callback([&] { action = [&] { run_kernel(ka); }; });

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Inequality band under confounding similarities");
  bounds->add_option("--p", ba.p, "Sensitive similarity per panel")->delimiter(',')->check(CLI::PositiveNumber);
  bounds->add_option("--q", ba.q, "Confounding similarity per panel")->delimiter(',')->check(CLI::NonNegativeNumber);
  bounds->add_option("--eps-max", ba.eps_max, "Largest imbalance")->check(CLI::Range(0.0, 0.5));
  bounds->add_option("--steps", ba.steps, "Points per panel")->check(CLI::PositiveNumber);
  bounds->add_option("--out", ba.out, "CSV output")->required();
  bounds->callback([&] { action = [&] { run_bounds(ba); }; });

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Post-process binary labels to a minimum smoothed exposure");
  add_graph_options(classify, ca.in, true);
  classify->add_option("--yhat", ca.yhat, "CSV node_id,0/1 of predicted labels");
  classify->add_option("--seed-groups", ca.seed_groups, "Start with every member of these groups positive")
      ->delimiter(',');
  classify->add_option("--kernel", ca.kernel, "laplacian | ground-truth | louvain | identity");
  classify->add_option("--dim", ca.dim)->check(CLI::PositiveNumber);
  classify->add_option("--resolution", ca.resolution)->check(CLI::PositiveNumber);
  classify->add_option("--theta-max", ca.theta_max, "Largest threshold (default: positive share)")
      ->check(CLI::Range(0.0, 1.0));
  classify->add_option("--steps", ca.steps, "Thresholds in the sweep")->check(CLI::Range(2, 100000));
  classify->add_option("--seed", ca.seed);
  classify->add_option("--out", ca.out, "CSV output")->required();
  classify->callback([&] { action = [&] { run_classify(ca); }; });

  InfluenceArgs ia;
  auto* influence = app.add_subcommand("influence", "Greedy seed selection under the independent cascade");
  add_graph_options(influence, ia.in, true);
  influence->add_option("--objective", ia.objective,
                        "group_free | individual | community_maximin | community_welfare | reach");
  influence->add_option("--kernel-dim", ia.kernel_dim)->check(CLI::PositiveNumber);
  influence->add_option("--resolution", ia.resolution, "Louvain resolution for community objectives")
      ->check(CLI::PositiveNumber);
  influence->add_option("--p", ia.p, "Transmission probability")->check(CLI::Range(0.0, 1.0));
  influence->add_option("--samples", ia.samples, "Live-edge samples per greedy step")->check(CLI::PositiveNumber);
  influence->add_option("--eval-samples", ia.eval_samples, "Samples when scoring seed prefixes")
      ->check(CLI::PositiveNumber);
  influence->add_option("--budget", ia.budget, "Number of seeds")->check(CLI::PositiveNumber);
  influence->add_option("--seed", ia.seed);
  influence->add_option("--out", ia.out, "CSV output")->required();
  influence->callback([&] { action = [&] { run_influence(ia); }; });

  RankArgs ra;
  auto* rank = app.add_subcommand("rank", "Fair-exposure ranking trade-off sweep");
  add_graph_options(rank, ra.in, true);
  rank->add_option("--ratings", ra.ratings, "CSV user_id,item_id,count")->required();
  rank->add_option("--kernel", ra.kernels, "Kernel kinds to compare")->delimiter(',');
  rank->add_option("--dim", ra.dim)->check(CLI::PositiveNumber);
  rank->add_option("--resolution", ra.resolution)->check(CLI::PositiveNumber);
  rank->add_option("--beta-grid", ra.betas, "Comma-separated beta values")->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  rank->add_option("--eta", ra.eta, "Smoothing inside the square root")->check(CLI::PositiveNumber);
  rank->add_option("--kbar", ra.kbar, "Ranking length")->check(CLI::PositiveNumber);
  rank->add_option("--iters", ra.iters, "Frank-Wolfe iterations")->check(CLI::NonNegativeNumber);
  rank->add_option("--min-ratings", ra.min_ratings, "Drop users with fewer rated items")
      ->check(CLI::NonNegativeNumber);
  rank->add_option("--als-rank", ra.als_rank)->check(CLI::PositiveNumber);
  rank->add_option("--als-reg", ra.als_reg)->check(CLI::PositiveNumber);
  rank->add_option("--als-iters", ra.als_iters)->check(CLI::PositiveNumber);
  rank->add_option("--seed", ra.seed);
  rank->add_option("--out", ra.out, "CSV output")->required();
  rank->callback([&] { action = [&] { run_rank(ra); }; });

  AssortArgs aa;
  auto* assort = app.add_subcommand("assort", "Preprocess a labeled graph and report assortativity");
  add_graph_options(assort, aa.in, true);
  assort->add_option("--shuffles", aa.shuffles, "Label-shuffle null samples")->check(CLI::NonNegativeNumber);
  assort->add_option("--seed", aa.seed);
  assort->add_option("--export", aa.export_prefix, "Write the preprocessed graph under this prefix");
  assort->add_option("--out", aa.out, "CSV output")->required();
  assort->callback([&] { action = [&] { run_assort(aa); }; });

  SbmArgs sa;
  auto* sbm = app.add_subcommand("sbm", "Sample a stochastic block model");
  sbm->add_option("--sizes", sa.sizes, "Block sizes")->delimiter(',')->required()->check(CLI::PositiveNumber);
  sbm->add_option("--p-in", sa.p_in)->check(CLI::Range(0.0, 1.0));
  sbm->add_option("--p-out", sa.p_out)->check(CLI::Range(0.0, 1.0));
  sbm->add_option("--seed", sa.seed);
  sbm->add_option("--out", sa.out, "Edge list output")->required();
  sbm->add_option("--labels-out", sa.labels_out, "Block labels CSV output");
  sbm->callback([&] { action = [&] { run_sbm(sa); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }
  return run_guarded(action);
}
