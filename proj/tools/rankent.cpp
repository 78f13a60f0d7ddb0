#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankent/decomposition.hpp"
#include "rankent/entropy.hpp"
#include "rankent/harness.hpp"
#include "rankent/maxent.hpp"
#include "rankent/report_io.hpp"
#include "rankent/tournament.hpp"

namespace {

using namespace rankent;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct TournamentSource {
  std::string file;
  std::string kind;
  int n = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tournament", file, "tournament text file");
    cmd->add_option("--kind", kind, "generator kind when no file is given")
        ->check(CLI::IsMember({"transitive", "random", "cyclic"}));
    cmd->add_option("--n", n, "vertex count for the generator");
  }

  Tournament load(std::uint64_t seed, std::string* label) const {
    if (!file.empty()) {
      if (!kind.empty()) throw CLI::ValidationError("--tournament and --kind are exclusive");
      std::ifstream in(file);
      if (!in) throw CLI::ValidationError("cannot open tournament file: " + file);
      *label = file;
      return Tournament::read_text(in);
    }
    if (kind.empty()) throw CLI::ValidationError("need --tournament or --kind");
    if (n <= 0) throw CLI::ValidationError("--kind needs --n");
    *label = kind;
    if (kind == "transitive") return Tournament::transitive(n);
    if (kind == "cyclic") return Tournament::cyclic(n);
    *label = kind + ":" + std::to_string(seed);
    return Tournament::random(n, seed);
  }
};

void write_text_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw CLI::ValidationError("cannot open output file: " + out_path);
  out << text;
}

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat key=value config support. CLI11 only reads config files attached to
// the root app, so instead the file is expanded into synthetic flags before
// parsing: keys the active subcommand does not know are ignored, and keys
// already present on the command line are skipped, so explicit flags win.
std::vector<std::string> expand_config(const std::map<std::string, CLI::App*>& subs,
                                       std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  const CLI::App* cmd = nullptr;
  for (const std::string& a : args) {
    if (a.empty() || a[0] == '-') continue;
    const auto it = subs.find(a);
    if (it != subs.end()) {
      cmd = it->second;
      break;
    }
  }
  if (cmd == nullptr) return args;

  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    line = trimmed(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("config file: expected key=value, got: " + line);
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty()) throw CLI::ValidationError("config file: empty key in: " + line);
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (cmd->get_option_no_throw(flag) == nullptr) continue;
    bool given = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    if (value.empty()) args.push_back(flag);
    else args.push_back(flag + "=" + value);
  }
  return args;
}

PermDistribution load_dist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open distribution file: " + path);
  return PermDistribution::read_text(in);
}

// Solve for the arc-constrained maximum entropy distribution or exit.
PermDistribution default_dist(const Tournament& t, double epsilon, double margin,
                              const MaxentOptions& opts, int* exit_code) {
  const MaxentSolution sol = solve_maxent(ArcConstraintSystem{t, epsilon, margin}, opts);
  if (!sol.feasible) {
    std::cerr << "maxent: no feasible distribution";
    if (sol.certificate) std::cerr << " (" << sol.certificate->detail << ")";
    std::cerr << "\n";
    *exit_code = kExitInfeasible;
    return PermDistribution::uniform(t.size());
  }
  *exit_code = kExitOk;
  return sol.distribution;
}

int emit_report(const RunReport& rep, const std::string& out_path, const std::string& format) {
  std::ostringstream body;
  if (format == "csv") write_report_csv(rep, body);
  else write_report_jsonl(rep, body);
  write_text_output(body.str(), out_path);

  std::ostream& log = out_path.empty() ? std::cerr : std::cout;
  log << "mode=" << rep.mode << " n=" << rep.n << " hypothesis_ok=" << rep.hypothesis_ok
      << " entropy_bits=" << rep.entropy_bits << " log2_factorial=" << rep.log2_factorial
      << " violations=" << rep.violations.size() << "\n";
  for (const std::string& v : rep.violations) log << "violation: " << v << "\n";
  return rep.any_violation ? kExitViolation : kExitOk;
}

int run_gen(const TournamentSource& src, std::uint64_t seed, const std::string& out_path) {
  std::string label;
  const Tournament t = src.load(seed, &label);
  std::ostringstream body;
  t.write_text(body);
  write_text_output(body.str(), out_path);
  return kExitOk;
}

int run_decompose(const TournamentSource& src, const HarnessConfig& cfg,
                  const std::string& out_path) {
  std::string label;
  const Tournament t = src.load(cfg.seed, &label);
  TreeBuildOptions opts;
  opts.delta = cfg.delta;
  opts.leaf_threshold = cfg.leaf_threshold;
  opts.floor_fraction = cfg.floor_fraction;
  opts.seed = cfg.seed;
  const DecompositionTree tree = build_tree(t, opts);
  const TreeStats stats = tree_stats(tree);

  std::ostringstream body;
  write_tree(body, tree);
  write_text_output(body.str(), out_path);

  std::ostream& log = out_path.empty() ? std::cerr : std::cout;
  log << "n=" << t.size() << " leaf_threshold=" << tree.leaf_threshold
      << " internal=" << stats.internal_count << " leaves=" << stats.leaf_count
      << " lambda=" << stats.internal_size_sum << " max_depth=" << stats.max_depth
      << " min_side_fraction=" << stats.min_side_fraction << "\n";
  const bool ok = check_nesting(tree) && check_arc_disjoint(tree) &&
                  stats.internal_size_sum == stats.leaf_depth_sum;
  if (!ok) log << "violation: tree structure checks failed\n";
  return ok ? kExitOk : kExitViolation;
}

int run_mpc(const std::string& dist_path, double epsilon, double tolerance) {
  std::ifstream in(dist_path);
  if (!in) throw CLI::ValidationError("cannot open distribution file: " + dist_path);
  const SubsetDistribution y = SubsetDistribution::read_text(in);
  const MpcReport rep = mpc_check(y, epsilon, tolerance);
  std::cout << "m=" << rep.m << " expected_crossings=" << rep.expected_crossings
            << " threshold=" << rep.hypothesis_threshold
            << " hypothesis=" << (rep.hypothesis_holds ? "holds" : "fails") << "\n"
            << "positive_delta_sum=" << rep.positive_delta_sum
            << " floor=" << rep.positive_delta_floor << "\n"
            << "delta_sq_sum=" << rep.delta_sq_sum << " floor=" << rep.delta_sq_floor << "\n"
            << "entropy=" << rep.entropy << " marginal_sum=" << rep.marginal_entropy_sum
            << " marginal_cap=" << rep.marginal_entropy_cap << " cap=" << rep.entropy_cap
            << "\n";
  for (const std::string& f : rep.failures) std::cout << "violation: " << f << "\n";
  return rep.chain_holds ? kExitOk : kExitViolation;
}

std::uint64_t upper_mask(const Tournament& t, const std::vector<int>& relabel) {
  const int n = t.size();
  std::uint64_t mask = 0;
  int bit = 0;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v, ++bit)
      if (t.arc(relabel[static_cast<std::size_t>(u - 1)],
                relabel[static_cast<std::size_t>(v - 1)]))
        mask |= 1ULL << bit;
  return mask;
}

// Every tournament on [n] up to relabeling, solved once per class and
// grouped by the entropy the solver reaches. Purely observational.
int run_iso_survey(int n, double epsilon, double margin, const MaxentOptions& opts) {
  if (n < 2 || n > 6) throw CLI::ValidationError("--iso-survey needs 2 <= n <= 6");
  const int pairs = n * (n - 1) / 2;
  std::vector<int> ident(static_cast<std::size_t>(n));
  std::iota(ident.begin(), ident.end(), 1);

  std::map<std::uint64_t, long long> classes;  // canonical mask -> labelings
  for (std::uint64_t mask = 0; mask < (1ULL << pairs); ++mask) {
    Tournament t = Tournament::transitive(n);
    int bit = 0;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v, ++bit)
        if ((mask >> bit) & 1) t.orient(u, v);
        else t.orient(v, u);
    std::uint64_t canon = ~0ULL;
    std::vector<int> relabel = ident;
    do canon = std::min(canon, upper_mask(t, relabel));
    while (std::next_permutation(relabel.begin(), relabel.end()));
    ++classes[canon];
  }

  std::cout << "n=" << n << " classes=" << classes.size() << " epsilon=" << epsilon << "\n";
  std::map<std::string, int> by_status;
  for (const auto& [canon, labelings] : classes) {
    Tournament t = Tournament::transitive(n);
    int bit = 0;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v, ++bit)
        if ((canon >> bit) & 1) t.orient(u, v);
        else t.orient(v, u);
    const MaxentSolution sol = solve_maxent(ArcConstraintSystem{t, epsilon, margin}, opts);
    std::cout << "class=" << canon << " labelings=" << labelings << " ";
    if (sol.feasible) {
      std::cout << "feasible entropy_bits=" << sol.entropy_bits << "\n";
      ++by_status["feasible"];
    } else {
      std::cout << "infeasible";
      if (sol.certificate)
        std::cout << " certificate="
                  << (sol.certificate->kind == InfeasibilityCertificate::Kind::cycle
                          ? "cycle"
                          : "counting");
      std::cout << "\n";
      ++by_status["infeasible"];
    }
  }
  for (const auto& [status, count] : by_status)
    std::cout << status << "_classes=" << count << "\n";
  return kExitOk;
}

int run_maxent(const TournamentSource& src, std::uint64_t seed, double epsilon, double margin,
               double tolerance, const std::string& out_path) {
  std::string label;
  const Tournament t = src.load(seed, &label);
  MaxentOptions opts;
  opts.tolerance = tolerance;
  const MaxentSolution sol = solve_maxent(ArcConstraintSystem{t, epsilon, margin}, opts);

  std::ostream& log = out_path.empty() ? std::cerr : std::cout;
  const char* status = sol.status == SolveStatus::feasible ? "feasible"
                       : sol.status == SolveStatus::infeasible ? "infeasible"
                       : sol.status == SolveStatus::presumed_infeasible ? "presumed_infeasible"
                                                                        : "iteration_limit";
  log << "tournament=" << label << " status=" << status
      << " entropy_bits=" << sol.entropy_bits << " dual_bits=" << sol.dual_bits
      << " max_violation=" << sol.max_violation << " sweeps=" << sol.sweeps << "\n";
  if (sol.certificate) log << "certificate: " << sol.certificate->detail << "\n";

  if (!sol.feasible) return kExitInfeasible;
  if (!out_path.empty()) {
    std::ostringstream body;
    sol.distribution.write_text(body);
    write_text_output(body.str(), out_path);
  }
  return kExitOk;
}

int run_replay_cmd(const TournamentSource& src, const std::string& dist_path,
                   HarnessConfig cfg, const std::string& out_path, const std::string& format) {
  std::string label;
  const Tournament t = src.load(cfg.seed, &label);
  if (t.size() > 8)
    throw CLI::ValidationError("replay enumerates all rankings; n must be at most 8");
  std::string dist_label = dist_path.empty() ? "maxent" : dist_path;
  int solve_code = kExitOk;
  const PermDistribution dist =
      dist_path.empty() ? default_dist(t, cfg.epsilon, cfg.margin, cfg.maxent, &solve_code)
                        : load_dist(dist_path);
  if (solve_code != kExitOk) return solve_code;
  return emit_report(run_replay(t, dist, cfg, label, dist_label), out_path, format);
}

int run_transitive_cmd(int n, const std::string& dist_path, HarnessConfig cfg,
                       const std::string& out_path, const std::string& format) {
  std::string dist_label = dist_path.empty() ? "maxent" : dist_path;
  int solve_code = kExitOk;
  PermDistribution dist =
      dist_path.empty()
          ? default_dist(Tournament::transitive(n), cfg.epsilon, cfg.margin, cfg.maxent,
                         &solve_code)
          : load_dist(dist_path);
  if (solve_code != kExitOk) return solve_code;
  if (dist.n() != n) throw CLI::ValidationError("--dist size does not match --n");
  return emit_report(run_transitive(dist, cfg, dist_label), out_path, format);
}

int run_report(const std::string& in_path, const std::string& out_path,
               const std::string& format) {
  std::ifstream in(in_path);
  if (!in) throw CLI::ValidationError("cannot open report file: " + in_path);
  const RunReport rep = read_report_jsonl(in);
  if (!out_path.empty() || format == "csv") {
    std::ostringstream body;
    if (format == "csv") write_report_csv(rep, body);
    else write_report_jsonl(rep, body);
    write_text_output(body.str(), out_path);
  }
  std::ostream& log = out_path.empty() && format != "csv" ? std::cout : std::cout;
  log << "mode=" << rep.mode << " n=" << rep.n << " seed=" << rep.seed
      << " hypothesis_ok=" << rep.hypothesis_ok << " entropy_bits=" << rep.entropy_bits
      << " bounds=" << rep.bounds.size() << " violations=" << rep.violations.size() << "\n";
  return rep.any_violation ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for ranking entropy under arc-margin hypotheses"};
  app.require_subcommand(1);
  std::string config_path;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a tournament file");
  TournamentSource gen_src;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_src.attach(gen);
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (stdout when absent)");
  gen->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  // decompose
  auto* dec = app.add_subcommand("decompose", "build the regular decomposition tree");
  TournamentSource dec_src;
  HarnessConfig dec_cfg;
  std::string dec_out;
  dec_src.attach(dec);
  dec->add_option("--seed", dec_cfg.seed, "tree build seed");
  dec->add_option("--delta", dec_cfg.delta, "regularity parameter");
  dec->add_option("--leaf-threshold", dec_cfg.leaf_threshold, "leaf size threshold, 0 = auto");
  dec->add_option("--floor-fraction", dec_cfg.floor_fraction, "minimum split side fraction");
  dec->add_option("--out", dec_out, "tree output file (stdout when absent)");
  dec->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  // mpc
  auto* mpc = app.add_subcommand("mpc", "crossing-biased subset entropy checks");
  std::string mpc_dist;
  double mpc_eps = 0.2, mpc_tol = 1e-9;
  mpc->add_option("--dist", mpc_dist, "subset distribution file")->required();
  mpc->add_option("--epsilon", mpc_eps, "crossing margin");
  mpc->add_option("--tolerance", mpc_tol, "inequality slack");
  mpc->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  // maxent
  auto* mx = app.add_subcommand("maxent", "arc-constrained maximum entropy solver");
  TournamentSource mx_src;
  std::uint64_t mx_seed = 0;
  double mx_eps = 0.2, mx_margin = 0, mx_tol = 1e-8;
  std::string mx_out;
  bool mx_survey = false;
  int mx_survey_n = 0;
  mx_src.attach(mx);
  mx->add_option("--seed", mx_seed, "generator seed");
  mx->add_option("--epsilon", mx_eps, "arc probability margin");
  mx->add_option("--margin", mx_margin, "extra slack added to every constraint");
  mx->add_option("--tolerance", mx_tol, "residual tolerance");
  mx->add_option("--out", mx_out, "distribution output file");
  mx->add_flag("--iso-survey", mx_survey,
               "solve one representative per isomorphism class (uses --n, 2..6)");
  mx->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  // replay
  auto* rp = app.add_subcommand("replay", "exact event replay on a decomposition tree");
  TournamentSource rp_src;
  HarnessConfig rp_cfg;
  std::string rp_dist, rp_out, rp_format = "jsonl";
  std::uint64_t rp_samples = 0;
  rp_src.attach(rp);
  rp->add_option("--dist", rp_dist, "ranking distribution file (default: maxent solution)");
  rp->add_option("--seed", rp_cfg.seed, "tree build seed");
  rp->add_option("--epsilon", rp_cfg.epsilon, "arc probability margin");
  rp->add_option("--delta", rp_cfg.delta, "regularity parameter");
  rp->add_option("--leaf-threshold", rp_cfg.leaf_threshold, "leaf size threshold, 0 = auto");
  rp->add_option("--floor-fraction", rp_cfg.floor_fraction, "minimum split side fraction");
  rp->add_option("--margin", rp_cfg.margin, "solver slack for the default distribution");
  rp->add_option("--tolerance", rp_cfg.tolerance, "inequality slack");
  rp->add_option("--samples", rp_samples,
                 "reserved for estimated runs; the exhaustive engine ignores it");
  rp->add_option("--out", rp_out, "report output file (stdout when absent)");
  rp->add_option("--format", rp_format, "report format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  rp->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  // transitive
  auto* tv = app.add_subcommand("transitive", "dyadic block pipeline on the total order");
  int tv_n = 0;
  HarnessConfig tv_cfg;
  std::string tv_dist, tv_out, tv_format = "jsonl";
  std::uint64_t tv_samples = 0;
  tv->add_option("--n", tv_n, "vertex count (a power of two)")->required();
  tv->add_option("--dist", tv_dist, "ranking distribution file (default: maxent solution)");
  tv->add_option("--epsilon", tv_cfg.epsilon, "arc probability margin");
  tv->add_option("--margin", tv_cfg.margin, "solver slack for the default distribution");
  tv->add_option("--tolerance", tv_cfg.tolerance, "inequality slack");
  tv->add_option("--samples", tv_samples,
                 "reserved for estimated runs; the exhaustive engine ignores it");
  tv->add_option("--out", tv_out, "report output file (stdout when absent)");
  tv->add_option("--format", tv_format, "report format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  tv->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  // report
  auto* rep = app.add_subcommand("report", "inspect or re-export a report file");
  std::string rep_in, rep_out, rep_format = "jsonl";
  rep->add_option("--in", rep_in, "report jsonl file")->required();
  rep->add_option("--out", rep_out, "re-export target (stdout when absent)");
  rep->add_option("--format", rep_format, "export format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  rep->add_option("--config", config_path, "flat key=value file mirroring the flags; explicit flags win");

  const std::map<std::string, CLI::App*> subs = {
      {"gen", gen},     {"decompose", dec},  {"mpc", mpc},    {"maxent", mx},
      {"replay", rp},   {"transitive", tv},  {"report", rep}};

  try {
    std::vector<std::string> args =
        expand_config(subs, std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(gen_src, gen_seed, gen_out);
    if (dec->parsed()) return run_decompose(dec_src, dec_cfg, dec_out);
    if (mpc->parsed()) return run_mpc(mpc_dist, mpc_eps, mpc_tol);
    if (mx->parsed()) {
      if (mx_survey) {
        mx_survey_n = mx_src.n;
        MaxentOptions opts;
        opts.tolerance = mx_tol;
        return run_iso_survey(mx_survey_n, mx_eps, mx_margin, opts);
      }
      return run_maxent(mx_src, mx_seed, mx_eps, mx_margin, mx_tol, mx_out);
    }
    if (rp->parsed()) return run_replay_cmd(rp_src, rp_dist, rp_cfg, rp_out, rp_format);
    if (tv->parsed()) return run_transitive_cmd(tv_n, tv_dist, tv_cfg, tv_out, tv_format);
    if (rep->parsed()) return run_report(rep_in, rep_out, rep_format);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitUsage;
}
