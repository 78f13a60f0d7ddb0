#include "rankent/report_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rankent {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json header_json(const RunReport& r) {
  ordered_json j;
  j["record"] = "header";
  j["schema"] = r.schema;
  j["mode"] = r.mode;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  j["floor_fraction"] = r.floor_fraction;
  j["leaf_threshold"] = r.leaf_threshold;
  j["seed"] = r.seed;
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["tournament"] = r.tournament_label;
  j["dist"] = r.dist_label;
  j["hypothesis_ok"] = r.hypothesis_ok;
  j["min_arc_margin"] = r.min_arc_margin;
  j["hypothesis_violations"] = r.hypothesis_violations;
  return j;
}

ordered_json node_json(const NodeRecord& n) {
  ordered_json j;
  j["record"] = "node";
  j["id"] = n.id;
  j["vertices"] = n.vertices;
  j["left_size"] = n.left_size;
  j["right_size"] = n.right_size;
  j["cross_arcs"] = n.cross_arcs;
  j["density"] = n.density;
  j["verdict_mode"] = n.verdict_mode;
  j["max_deviation"] = n.max_deviation;
  j["expected_fit"] = n.expected_fit;
  j["expected_fit_floor"] = n.expected_fit_floor;
  j["expected_fit_ok"] = n.expected_fit_ok;
  j["pr_high_fit"] = n.pr_high_fit;
  j["pr_high_fit_floor"] = n.pr_high_fit_floor;
  j["pr_high_fit_ok"] = n.pr_high_fit_ok;
  j["mu_high_fit"] = n.mu_high_fit;
  j["mu_unsafe"] = n.mu_unsafe;
  j["unsafe_bound_formula"] = n.unsafe_bound_formula;
  j["unsafe_bound_vacuous"] = n.unsafe_bound_vacuous;
  j["unsafe_decay_cap"] = n.unsafe_decay_cap;
  j["unsafe_decay_ok"] = n.unsafe_decay_ok;
  j["containment_ok"] = n.containment_ok;
  j["samples"] = n.samples;
  j["std_error"] = n.std_error;
  return j;
}

ordered_json independence_json(const IndependenceRecord& r) {
  ordered_json j;
  j["record"] = "independence";
  j["id_a"] = r.id_a;
  j["id_b"] = r.id_b;
  j["exact_product"] = r.exact_product;
  return j;
}

ordered_json block_json(const BlockRecord& b) {
  ordered_json j;
  j["record"] = "block";
  j["index"] = b.index;
  j["m"] = b.m;
  j["expected_crossings"] = b.expected_crossings;
  j["hypothesis_threshold"] = b.hypothesis_threshold;
  j["hypothesis_holds"] = b.hypothesis_holds;
  j["entropy"] = b.entropy;
  j["entropy_cap"] = b.entropy_cap;
  j["chain_holds"] = b.chain_holds;
  return j;
}

ordered_json bound_json(const BoundRecord& b) {
  ordered_json j;
  j["record"] = "bound";
  j["name"] = b.name;
  j["lhs"] = b.lhs;
  j["rhs"] = b.rhs;
  j["holds"] = b.holds;
  j["vacuous"] = b.vacuous;
  j["informational"] = b.informational;
  j["note"] = b.note;
  return j;
}

ordered_json summary_json(const RunReport& r) {
  ordered_json j;
  j["record"] = "summary";
  j["entropy_bits"] = r.entropy_bits;
  j["log2_factorial"] = r.log2_factorial;
  j["lambda"] = r.lambda;
  j["internal_count"] = r.internal_count;
  j["realized_beta"] = r.realized_beta;
  j["expected_hit_mass"] = r.expected_hit_mass;
  j["hit_mass_floor"] = r.hit_mass_floor;
  j["pr_bulk"] = r.pr_bulk;
  j["pr_bulk_floor"] = r.pr_bulk_floor;
  j["bulk_count"] = r.bulk_count;
  j["hsigma_cap"] = r.hsigma_cap;
  j["any_violation"] = r.any_violation;
  j["violations"] = r.violations;
  return j;
}

// A parsed record must carry exactly the template's keys: unknown keys are
// as much an error as missing ones.
void require_keys(const ordered_json& got, const ordered_json& tmpl, const std::string& what) {
  for (const auto& item : got.items())
    if (!tmpl.contains(item.key()))
      throw std::runtime_error("report: unknown key '" + item.key() + "' in " + what + " record");
  for (const auto& item : tmpl.items())
    if (!got.contains(item.key()))
      throw std::runtime_error("report: missing key '" + item.key() + "' in " + what + " record");
}

}  // namespace

void write_report_jsonl(const RunReport& rep, std::ostream& out) {
  out << header_json(rep).dump() << '\n';
  for (const auto& n : rep.nodes) out << node_json(n).dump() << '\n';
  for (const auto& r : rep.independence) out << independence_json(r).dump() << '\n';
  for (const auto& b : rep.blocks) out << block_json(b).dump() << '\n';
  for (const auto& b : rep.bounds) out << bound_json(b).dump() << '\n';
  out << summary_json(rep).dump() << '\n';
}

RunReport read_report_jsonl(std::istream& in) {
  RunReport rep;
  std::string line;
  bool seen_header = false, seen_summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (seen_summary) throw std::runtime_error("report: records after the summary line");
    ordered_json j = ordered_json::parse(line);  // throws on malformed input
    if (!j.is_object() || !j.contains("record") || !j["record"].is_string())
      throw std::runtime_error("report: line without a record tag");
    const std::string kind = j["record"].get<std::string>();

    if (kind == "header") {
      if (seen_header) throw std::runtime_error("report: duplicate header record");
      require_keys(j, header_json(RunReport{}), "header");
      rep.schema = j["schema"].get<std::string>();
      if (rep.schema != "rankent/report/v1")
        throw std::runtime_error("report: unsupported schema '" + rep.schema + "'");
      rep.mode = j["mode"].get<std::string>();
      if (rep.mode != "replay" && rep.mode != "transitive")
        throw std::runtime_error("report: unknown mode '" + rep.mode + "'");
      rep.n = j["n"].get<int>();
      rep.epsilon = j["epsilon"].get<double>();
      rep.delta = j["delta"].get<double>();
      rep.floor_fraction = j["floor_fraction"].get<double>();
      rep.leaf_threshold = j["leaf_threshold"].get<int>();
      rep.seed = j["seed"].get<std::uint64_t>();
      rep.margin = j["margin"].get<double>();
      rep.tolerance = j["tolerance"].get<double>();
      rep.tournament_label = j["tournament"].get<std::string>();
      rep.dist_label = j["dist"].get<std::string>();
      rep.hypothesis_ok = j["hypothesis_ok"].get<bool>();
      rep.min_arc_margin = j["min_arc_margin"].get<double>();
      rep.hypothesis_violations = j["hypothesis_violations"].get<long long>();
      seen_header = true;
      continue;
    }
    if (!seen_header) throw std::runtime_error("report: first record must be the header");

    if (kind == "node") {
      require_keys(j, node_json(NodeRecord{}), "node");
      NodeRecord n;
      n.id = j["id"].get<int>();
      n.vertices = j["vertices"].get<std::vector<int>>();
      n.left_size = j["left_size"].get<int>();
      n.right_size = j["right_size"].get<int>();
      n.cross_arcs = j["cross_arcs"].get<long long>();
      n.density = j["density"].get<double>();
      n.verdict_mode = j["verdict_mode"].get<std::string>();
      n.max_deviation = j["max_deviation"].get<double>();
      n.expected_fit = j["expected_fit"].get<double>();
      n.expected_fit_floor = j["expected_fit_floor"].get<double>();
      n.expected_fit_ok = j["expected_fit_ok"].get<bool>();
      n.pr_high_fit = j["pr_high_fit"].get<double>();
      n.pr_high_fit_floor = j["pr_high_fit_floor"].get<double>();
      n.pr_high_fit_ok = j["pr_high_fit_ok"].get<bool>();
      n.mu_high_fit = j["mu_high_fit"].get<double>();
      n.mu_unsafe = j["mu_unsafe"].get<double>();
      n.unsafe_bound_formula = j["unsafe_bound_formula"].get<double>();
      n.unsafe_bound_vacuous = j["unsafe_bound_vacuous"].get<bool>();
      n.unsafe_decay_cap = j["unsafe_decay_cap"].get<double>();
      n.unsafe_decay_ok = j["unsafe_decay_ok"].get<bool>();
      n.containment_ok = j["containment_ok"].get<bool>();
      n.samples = j["samples"].get<std::uint64_t>();
      n.std_error = j["std_error"].get<double>();
      rep.nodes.push_back(std::move(n));
    } else if (kind == "independence") {
      require_keys(j, independence_json(IndependenceRecord{}), "independence");
      IndependenceRecord r;
      r.id_a = j["id_a"].get<int>();
      r.id_b = j["id_b"].get<int>();
      r.exact_product = j["exact_product"].get<bool>();
      rep.independence.push_back(r);
    } else if (kind == "block") {
      require_keys(j, block_json(BlockRecord{}), "block");
      BlockRecord b;
      b.index = j["index"].get<int>();
      b.m = j["m"].get<int>();
      b.expected_crossings = j["expected_crossings"].get<double>();
      b.hypothesis_threshold = j["hypothesis_threshold"].get<double>();
      b.hypothesis_holds = j["hypothesis_holds"].get<bool>();
      b.entropy = j["entropy"].get<double>();
      b.entropy_cap = j["entropy_cap"].get<double>();
      b.chain_holds = j["chain_holds"].get<bool>();
      rep.blocks.push_back(b);
    } else if (kind == "bound") {
      require_keys(j, bound_json(BoundRecord{}), "bound");
      BoundRecord b;
      b.name = j["name"].get<std::string>();
      b.lhs = j["lhs"].get<double>();
      b.rhs = j["rhs"].get<double>();
      b.holds = j["holds"].get<bool>();
      b.vacuous = j["vacuous"].get<bool>();
      b.informational = j["informational"].get<bool>();
      b.note = j["note"].get<std::string>();
      rep.bounds.push_back(std::move(b));
    } else if (kind == "summary") {
      require_keys(j, summary_json(RunReport{}), "summary");
      rep.entropy_bits = j["entropy_bits"].get<double>();
      rep.log2_factorial = j["log2_factorial"].get<double>();
      rep.lambda = j["lambda"].get<long long>();
      rep.internal_count = j["internal_count"].get<int>();
      rep.realized_beta = j["realized_beta"].get<double>();
      rep.expected_hit_mass = j["expected_hit_mass"].get<double>();
      rep.hit_mass_floor = j["hit_mass_floor"].get<double>();
      rep.pr_bulk = j["pr_bulk"].get<double>();
      rep.pr_bulk_floor = j["pr_bulk_floor"].get<double>();
      rep.bulk_count = j["bulk_count"].get<std::uint64_t>();
      rep.hsigma_cap = j["hsigma_cap"].get<double>();
      rep.any_violation = j["any_violation"].get<bool>();
      rep.violations = j["violations"].get<std::vector<std::string>>();
      seen_summary = true;
    } else {
      throw std::runtime_error("report: unknown record kind '" + kind + "'");
    }
  }
  if (!seen_header) throw std::runtime_error("report: missing header record");
  if (!seen_summary) throw std::runtime_error("report: missing summary record");
  return rep;
}

namespace {

// Shortest round-trip formatting, shared with the json export.
std::string num(double x) { return ordered_json(x).dump(); }

}  // namespace

void write_report_csv(const RunReport& rep, std::ostream& out) {
  if (rep.mode == "transitive") {
    out << "index,m,expected_crossings,hypothesis_threshold,hypothesis_holds,"
           "entropy,entropy_cap,chain_holds\n";
    for (const auto& b : rep.blocks)
      out << b.index << ',' << b.m << ',' << num(b.expected_crossings) << ','
          << num(b.hypothesis_threshold) << ',' << (b.hypothesis_holds ? 1 : 0) << ','
          << num(b.entropy) << ',' << num(b.entropy_cap) << ',' << (b.chain_holds ? 1 : 0)
          << '\n';
    return;
  }
  out << "id,left_size,right_size,cross_arcs,density,max_deviation,"
         "expected_fit,expected_fit_floor,expected_fit_ok,"
         "pr_high_fit,pr_high_fit_floor,pr_high_fit_ok,"
         "mu_high_fit,mu_unsafe,unsafe_bound_formula,unsafe_bound_vacuous,"
         "unsafe_decay_cap,unsafe_decay_ok,containment_ok,samples,std_error\n";
  for (const auto& n : rep.nodes)
    out << n.id << ',' << n.left_size << ',' << n.right_size << ',' << n.cross_arcs << ','
        << num(n.density) << ',' << num(n.max_deviation) << ',' << num(n.expected_fit) << ','
        << num(n.expected_fit_floor) << ',' << (n.expected_fit_ok ? 1 : 0) << ','
        << num(n.pr_high_fit) << ',' << num(n.pr_high_fit_floor) << ','
        << (n.pr_high_fit_ok ? 1 : 0) << ',' << num(n.mu_high_fit) << ',' << num(n.mu_unsafe)
        << ',' << num(n.unsafe_bound_formula) << ',' << (n.unsafe_bound_vacuous ? 1 : 0) << ','
        << num(n.unsafe_decay_cap) << ',' << (n.unsafe_decay_ok ? 1 : 0) << ','
        << (n.containment_ok ? 1 : 0) << ',' << n.samples << ',' << num(n.std_error) << '\n';
}

}  // namespace rankent
