// Command-line front end: parses a problem document (JSON), runs one of the
// library analyses, and emits a human or machine report.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "recomb/chain.hpp"
#include "recomb/mc.hpp"
#include "recomb/measure.hpp"
#include "recomb/qsd.hpp"
#include "recomb/tree.hpp"

using json = nlohmann::ordered_json;
using namespace recomb;

namespace {

constexpr const char* kVersion = "0.1.0";

// FNV-1a over the raw input bytes; reports embed it so a result can always be
// traced back to the exact document that produced it.
std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

struct ProblemDoc {
  SiteSet sites;
  RecombDistribution rho;
  std::optional<AlphabetSpec> alphabets;
  std::optional<DenseMeasure> mu;
  std::string digest;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Rat rational_field(const json& j, const std::string& where) {
  if (!j.is_string())
    throw validation_error(where + ": rationals are strings like \"1/2\"");
  return parse_rational(j.get<std::string>());
}

ProblemDoc load_problem(const std::string& path, bool enumeration_mode,
                        std::size_t max_dense) {
  const std::string bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("input is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw validation_error("input must be a JSON object");

  ProblemDoc out;
  out.digest = fnv1a_digest(bytes);
  if (!doc.contains("sites") || !doc["sites"].is_number_integer())
    throw validation_error("field \"sites\" (integer) is required");
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    for (const auto& l : doc["labels"]) labels.push_back(l.get<std::string>());
  }
  out.sites = make_site_set(doc["sites"].get<int>(), labels, enumeration_mode);

  if (!doc.contains("rho") || !doc["rho"].is_object())
    throw validation_error(
        "field \"rho\" (object of subset -> rational) is required");
  std::map<Mask, Rat, SubsetLess> raw;
  for (const auto& [key, value] : doc["rho"].items()) {
    Mask j = parse_subset(key, out.sites.n_sites);
    if (raw.count(j))
      throw validation_error("rho lists " + format_subset(j) + " twice");
    raw[j] = rational_field(value, "rho[" + key + "]");
  }
  out.rho = make_distribution(out.sites, raw);

  if (doc.contains("alphabets")) {
    std::vector<int> sizes;
    for (const auto& s : doc["alphabets"]) sizes.push_back(s.get<int>());
    out.alphabets = make_alphabets(out.sites, sizes, max_dense);
  }
  if (doc.contains("mu")) {
    if (!out.alphabets) out.alphabets = binary_alphabets(out.sites);
    const json& mu = doc["mu"];
    if (!mu.is_object() || (mu.contains("dense") == mu.contains("product")))
      throw validation_error(
          "field \"mu\" must hold exactly one of \"dense\" or \"product\"");
    if (mu.contains("dense")) {
      std::vector<Rat> table;
      for (const auto& cell : mu["dense"])
        table.push_back(rational_field(cell, "mu.dense"));
      out.mu = make_measure(*out.alphabets, out.sites.full(), std::move(table));
    } else {
      std::vector<std::vector<Rat>> per_site;
      for (const auto& row : mu["product"]) {
        std::vector<Rat> v;
        for (const auto& cell : row)
          v.push_back(rational_field(cell, "mu.product"));
        per_site.push_back(std::move(v));
      }
      out.mu = measure_from_marginals(*out.alphabets, per_site);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// report plumbing

json report_shell(const ProblemDoc& doc, const std::string& command) {
  json r;
  r["tool"] = "recomb";
  r["version"] = kVersion;
  r["input_digest"] = doc.digest;
  r["command"] = command;
  return r;
}

json rat_list(const std::vector<Rat>& v) {
  json a = json::array();
  for (const Rat& r : v) a.push_back(format_fraction(r));
  return a;
}

json subset_list(const std::vector<Mask>& v) {
  json a = json::array();
  for (Mask m : v) a.push_back(format_subset(m));
  return a;
}

json row_entries(const std::vector<std::pair<int, Rat>>& row) {
  json a = json::array();
  for (const auto& [col, w] : row)
    a.push_back(json::array({col, format_fraction(w)}));
  return a;
}

void emit(const json& report, const std::string& out_path, bool human,
          const std::string& human_text) {
  std::string text = human ? human_text : report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw validation_error("cannot write output file: " + out_path);
    out << text;
  }
}

std::string human_header(const ProblemDoc& doc, const std::string& command) {
  std::ostringstream s;
  s << "recomb " << command << " report  (version " << kVersion << ", input "
    << doc.digest << ")\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// subcommands

struct CommonOpts {
  std::string input;
  std::string format = "human";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("input", opts.input, "problem document (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", opts.format, "human | machine")
      ->check(CLI::IsMember({"human", "machine"}));
  cmd->add_option("--out", opts.out_path, "write the report here, not stdout");
}

int cmd_atoms(const CommonOpts& opts) {
  ProblemDoc doc = load_problem(opts.input, true, kDefaultDenseCap);
  CoefficientTable table = coefficient_table(doc.rho);

  json r = report_shell(doc, "atoms");
  std::vector<Mask> support;
  for (const auto& [j, w] : doc.rho.weights) support.push_back(j);
  r["support"] = subset_list(support);
  std::vector<Mask> closure_sets(table.closure_sets.begin(),
                                 table.closure_sets.end());
  std::sort(closure_sets.begin(), closure_sets.end(), SubsetLess{});
  r["closure"] = subset_list(closure_sets);
  r["atoms"] = subset_list(table.atom_partition.blocks);
  r["n_closure"] = closure_sets.size();
  r["n_atoms"] = table.atom_partition.blocks.size();

  std::ostringstream h;
  h << human_header(doc, "atoms");
  h << "support (" << support.size() << "): ";
  for (Mask m : support) h << format_subset(m) << " ";
  h << "\nclosure (" << closure_sets.size() << "): ";
  for (Mask m : closure_sets) h << format_subset(m) << " ";
  h << "\natoms   (" << table.atom_partition.blocks.size() << "): ";
  for (Mask m : table.atom_partition.blocks) h << format_subset(m) << " ";
  h << "\n";
  emit(r, opts.out_path, opts.format == "human", h.str());
  return 0;
}

int cmd_coeffs(const CommonOpts& opts) {
  ProblemDoc doc = load_problem(opts.input, true, kDefaultDenseCap);
  CoefficientTable table = coefficient_table(doc.rho);

  json r = report_shell(doc, "coeffs");
  json rows = json::object();
  json kernels = json::object();
  for (const auto& [k, row] : table.entries) {
    json jr = json::object();
    for (const auto& [m, w] : row) jr[format_subset(m)] = format_fraction(w);
    rows[format_subset(k)] = jr;

    json jk = json::object();
    for (const auto& [m, w] : dyadic_kernel(table, k)) {
      if (m == k)
        jk["keep"] = format_fraction(w);
      else
        jk["split " + format_subset(m) + " | " + format_subset(k & ~m)] =
            format_fraction(w);
    }
    kernels[format_subset(k)] = jk;
  }
  r["rows"] = rows;
  r["kernels"] = kernels;

  std::ostringstream h;
  h << human_header(doc, "coeffs");
  for (const auto& [k, row] : table.entries) {
    h << format_subset(k) << (table.is_atom(k) ? "  (atom)" : "") << "\n";
    for (const auto& [m, w] : row)
      h << "  trace " << format_subset(m) << "  " << format_fraction(w) << "\n";
    for (const auto& [m, w] : dyadic_kernel(table, k)) {
      if (m == k)
        h << "  keep           " << format_fraction(w) << "\n";
      else
        h << "  split " << format_subset(m) << "|" << format_subset(k & ~m)
          << "  " << format_fraction(w) << "\n";
    }
  }
  emit(r, opts.out_path, opts.format == "human", h.str());
  return 0;
}

int cmd_evolve(const CommonOpts& opts, int steps, std::size_t max_dense) {
  ProblemDoc doc = load_problem(opts.input, true, max_dense);
  if (!doc.mu)
    throw validation_error("evolve needs a \"mu\" field in the input document");
  CoefficientTable table = coefficient_table(doc.rho);
  DecompositionReport rep = check_decomposition(table, *doc.mu, steps);
  if (!rep.ok)
    throw invariant_violation(
        "splitting-history decomposition disagrees with direct iteration");

  json r = report_shell(doc, "evolve");
  r["steps"] = steps;
  json weights = json::object();
  for (const auto& [p, w] : rep.weights)
    weights[format_partition(p)] = format_fraction(w);
  r["weights"] = weights;
  r["total_weight"] = format_fraction(rep.total_weight);
  r["iterated"] = {{"support", format_subset(rep.iterated.support)},
                   {"dims", rep.iterated.dims},
                   {"table", rat_list(rep.iterated.table)}};
  r["decomposition_matches"] = rep.ok;

  std::ostringstream h;
  h << human_header(doc, "evolve");
  h << "steps: " << steps << "\nhistory weights:\n";
  for (const auto& [p, w] : rep.weights)
    h << "  " << format_partition(p) << "  " << format_fraction(w) << "\n";
  h << "total weight: " << format_fraction(rep.total_weight) << "\n";
  if (rep.iterated.size() <= 64) {
    h << "iterated law (" << rep.iterated.size() << " cells):\n";
    for (std::size_t i = 0; i < rep.iterated.size(); ++i)
      h << "  " << i << ": " << format_fraction(rep.iterated.table[i]) << "\n";
  } else {
    h << "iterated law: " << rep.iterated.size()
      << " cells (use --format machine for the full table)\n";
  }
  h << "decomposition matches direct iteration: yes\n";
  emit(r, opts.out_path, opts.format == "human", h.str());
  return 0;
}

int cmd_chain(const CommonOpts& opts, int horizon, long max_states) {
  ProblemDoc doc = load_problem(opts.input, true, kDefaultDenseCap);
  ChainModel model = build_chain(coefficient_table(doc.rho), max_states);
  AbsorptionProfile profile = survival_profile(model, horizon);

  json r = report_shell(doc, "chain");
  r["n_states"] = model.states.size();
  json states = json::array();
  for (const auto& p : model.states) states.push_back(format_partition(p));
  r["states"] = states;
  r["initial"] = model.initial;
  r["absorbing"] = model.absorbing;
  json rows = json::array();
  for (const auto& row : model.rows) rows.push_back(row_entries(row));
  r["rows"] = rows;
  r["survival"] = rat_list(profile.survival);
  r["dag_depth"] = dag_depth(model);

  std::ostringstream h;
  h << human_header(doc, "chain");
  h << model.states.size() << " states, absorbing = " << model.absorbing
    << ", longest refinement path = " << dag_depth(model) << "\n";
  for (std::size_t i = 0; i < model.states.size(); ++i) {
    h << "  " << i << "  " << format_partition(model.states[i]) << "  ->  ";
    for (const auto& [col, w] : model.rows[i])
      h << col << ":" << format_fraction(w) << "  ";
    h << "\n";
  }
  h << "survival:";
  for (const Rat& s : profile.survival) h << "  " << format_fraction(s);
  h << "\n";
  emit(r, opts.out_path, opts.format == "human", h.str());
  return 0;
}

int cmd_qsd(const CommonOpts& opts, int horizon, long max_states) {
  ProblemDoc doc = load_problem(opts.input, true, kDefaultDenseCap);
  ChainModel model = build_chain(coefficient_table(doc.rho), max_states);
  DecayAnalysis a = analyze_decay(model);
  std::vector<Rat> ratios = ratio_limits(model, a);
  CheckReport harmonic = check_harmonic_scaling(model, a);
  GeometricLimitReport geo = geometric_limit_check(model, a, horizon);
  QProcess qp = q_process(model, a);
  auto levels = admissible_levels(model);
  if (!harmonic.ok || !geo.ok) {
    std::string msg = "decay analysis failed its own identities:";
    for (const auto& f : harmonic.failures) msg += "\n  " + f;
    for (const auto& f : geo.failures) msg += "\n  " + f;
    throw invariant_violation(msg);
  }

  json r = report_shell(doc, "qsd");
  r["eta"] = format_fraction(a.eta);
  r["eta_decimal"] = format_decimal(a.eta);
  r["e_sets"] = subset_list(a.e_sets);
  json estates = json::array();
  for (std::size_t i = 0; i < a.e_states.size(); ++i)
    estates.push_back({{"state", a.e_states[i]},
                       {"partition", format_partition(
                                         model.states[a.e_states[i]])},
                       {"quasi_limit",
                        format_fraction(a.quasi_limit.at(a.e_states[i]))}});
  r["e_states"] = estates;
  r["beta0"] = format_fraction(a.beta0);
  r["beta_shortcut"] = format_fraction(a.beta_shortcut);
  r["phi"] = rat_list(a.phi);
  r["p_hit_e"] = format_fraction(a.p_hit_e);
  r["limit_constant"] = format_fraction(a.limit_constant);
  r["limit_constant_decimal"] = format_decimal(a.limit_constant);
  r["ratio_limits"] = rat_list(ratios);
  r["dag_depth"] = a.depth;
  json qrows = json::array();
  for (std::size_t i = 0; i < qp.rows.size(); ++i)
    qrows.push_back(
        {{"from", qp.domain[i]}, {"entries", row_entries(qp.rows[i])}});
  r["q_process"] = {{"domain", qp.domain}, {"rows", qrows}};
  json jlevels = json::object();
  for (const auto& [level, sets] : levels)
    jlevels[format_fraction(level)] = subset_list(sets);
  r["admissible_levels"] = jlevels;
  r["geometric"] = {{"scaled", rat_list(geo.scaled)},
                    {"deviation", rat_list(geo.deviation)},
                    {"e_share", rat_list(geo.e_share)}};
  r["checks"] = {{"harmonic_scaling", harmonic.ok},
                 {"geometric_limit", geo.ok}};

  std::ostringstream h;
  h << human_header(doc, "qsd");
  h << "decay rate eta        " << format_fraction(a.eta) << "  ("
    << format_decimal(a.eta) << ")\n";
  h << "secondary rate beta0  " << format_fraction(a.beta0) << "\n";
  h << "limit constant        " << format_fraction(a.limit_constant) << "  ("
    << format_decimal(a.limit_constant) << ")\n";
  h << "P(ever in an eta-state)  " << format_fraction(a.p_hit_e) << "\n";
  h << "longest refinement path  " << a.depth << "\n";
  h << "eta-states and quasi-limiting law:\n";
  for (std::size_t i = 0; i < a.e_states.size(); ++i)
    h << "  " << a.e_states[i] << "  "
      << format_partition(model.states[a.e_states[i]]) << "  carries "
      << format_fraction(a.quasi_limit.at(a.e_states[i])) << "\n";
  h << "harmonic scaling phi:";
  for (const Rat& p : a.phi) h << "  " << format_fraction(p);
  h << "\nratio limits:";
  for (const Rat& p : ratios) h << "  " << format_fraction(p);
  h << "\nconditioned chain (surviving forever):\n";
  for (std::size_t i = 0; i < qp.rows.size(); ++i) {
    h << "  " << qp.domain[i] << "  ->  ";
    for (const auto& [col, w] : qp.rows[i])
      h << col << ":" << format_fraction(w) << "  ";
    h << "\n";
  }
  h << "quasi-stationary levels:\n";
  for (const auto& [level, sets] : levels) {
    h << "  " << format_fraction(level) << "  on";
    for (Mask m : sets) h << " " << format_subset(m);
    h << "\n";
  }
  h << "scaled survival eta^-n P(zeta > n):";
  for (const Rat& s : geo.scaled) h << "  " << format_fraction(s);
  h << "\nall identities verified exactly\n";
  emit(r, opts.out_path, opts.format == "human", h.str());
  return 0;
}

int cmd_simulate(const CommonOpts& opts, const SimConfig& cfg,
                 const std::string& mode_name) {
  ProblemDoc doc = load_problem(opts.input, false, kDefaultDenseCap);
  SimReport rep = simulate(doc.rho, cfg);

  json r = report_shell(doc, "simulate");
  r["seed"] = cfg.seed;
  r["trajectories"] = cfg.trajectories;
  r["horizon"] = cfg.horizon;
  r["mode"] = mode_name;
  r["threads"] = cfg.threads;
  r["survival_counts"] = rep.survival;
  json occ = json::array();
  for (const auto& row : rep.occupancy) {
    json jrow = json::object();
    for (const auto& [p, c] : row) jrow[format_partition(p)] = c;
    occ.push_back(jrow);
  }
  r["occupancy_counts"] = occ;
  json times = json::object();
  for (const auto& [t, c] : rep.absorption_times)
    times[std::to_string(t)] = c;
  r["absorption_times"] = times;
  r["beyond_horizon"] = rep.beyond_horizon;

  std::ostringstream h;
  h << human_header(doc, "simulate");
  h << cfg.trajectories << " trajectories, seed " << cfg.seed << ", mode "
    << mode_name << ", horizon " << cfg.horizon << "\n";
  h << "n  survivors  occupancy\n";
  for (int n = 0; n <= cfg.horizon; ++n) {
    h << n << "  " << rep.survival[n] << "  ";
    for (const auto& [p, c] : rep.occupancy[n])
      h << format_partition(p) << ":" << c << "  ";
    h << "\n";
  }
  h << "absorbed beyond horizon: " << rep.beyond_horizon << "\n";
  emit(r, opts.out_path, opts.format == "human", h.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact recombination dynamics: decomposition, absorption, "
               "quasi-stationary analysis"};
  app.require_subcommand(1);

  CommonOpts atoms_opts, coeffs_opts, evolve_opts, chain_opts, qsd_opts,
      sim_opts;
  int evolve_steps = 1;
  std::size_t max_dense = kDefaultDenseCap;
  int chain_horizon = 12, qsd_horizon = 12;
  long chain_max_states = kDefaultStateCap, qsd_max_states = kDefaultStateCap;
  SimConfig sim_cfg;
  std::string sim_mode = "exact";

  auto* atoms = app.add_subcommand(
      "atoms", "closure of the support and the blocks never cut");
  add_common(atoms, atoms_opts);

  auto* coeffs = app.add_subcommand(
      "coeffs", "per-block trace coefficients and one-step kernels");
  add_common(coeffs, coeffs_opts);

  auto* evolve = app.add_subcommand(
      "evolve", "iterate the recombination map and cross-check the "
                "splitting-history decomposition");
  add_common(evolve, evolve_opts);
  evolve->add_option("-n,--steps", evolve_steps, "iteration count")
      ->check(CLI::NonNegativeNumber);
  evolve->add_option("--max-dense", max_dense,
                     "largest dense table size allowed");

  auto* chain = app.add_subcommand(
      "chain", "the partition chain: states, transitions, survival");
  add_common(chain, chain_opts);
  chain->add_option("--horizon", chain_horizon, "survival profile length")
      ->check(CLI::NonNegativeNumber);
  chain->add_option("--max-states", chain_max_states,
                    "largest state count allowed");

  auto* qsd = app.add_subcommand(
      "qsd", "decay rate, quasi-limiting law, conditioned chain, "
             "quasi-stationary levels");
  add_common(qsd, qsd_opts);
  qsd->add_option("--horizon", qsd_horizon, "scaled survival tracking length")
      ->check(CLI::NonNegativeNumber);
  qsd->add_option("--max-states", qsd_max_states,
                  "largest state count allowed");

  auto* sim = app.add_subcommand("simulate",
                                 "Monte Carlo trajectories of the block chain");
  add_common(sim, sim_opts);
  sim->add_option("--seed", sim_cfg.seed, "base seed for the keyed draws");
  sim->add_option("--trajectories", sim_cfg.trajectories, "trajectory count");
  sim->add_option("--horizon", sim_cfg.horizon, "steps per trajectory")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--threads", sim_cfg.threads, "worker threads");
  sim->add_option("--mode", sim_mode,
                  "exact (table-driven) | kernel (recomputed from support)")
      ->check(CLI::IsMember({"exact", "kernel"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (atoms->parsed()) return cmd_atoms(atoms_opts);
    if (coeffs->parsed()) return cmd_coeffs(coeffs_opts);
    if (evolve->parsed())
      return cmd_evolve(evolve_opts, evolve_steps, max_dense);
    if (chain->parsed())
      return cmd_chain(chain_opts, chain_horizon, chain_max_states);
    if (qsd->parsed()) return cmd_qsd(qsd_opts, qsd_horizon, qsd_max_states);
    if (sim->parsed()) {
      sim_cfg.mode = sim_mode == "exact" ? SimConfig::Mode::exact_chain
                                         : SimConfig::Mode::kernel_draws;
      return cmd_simulate(sim_opts, sim_cfg, sim_mode);
    }
  } catch (const not_applicable_error& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const resource_limit_error& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const invariant_violation& e) {
    std::cerr << "internal invariant failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
