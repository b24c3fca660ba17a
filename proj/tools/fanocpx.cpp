#include "fanocpx/classify.hpp"
#include "fanocpx/contract.hpp"
#include "fanocpx/report.hpp"
#include "fanocpx/table.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace fanocpx;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kInvalid = 3, kPrecondition = 4 };

json counters_json(const SearchCounters& c) {
  return {{"exponent_tuples", c.exponent_tuples},
          {"degree_matrices", c.degree_matrices},
          {"pairs", c.pairs},
          {"survivors", c.survivors}};
}

json step_json(const ContractionStep& st) {
  json j = {{"deleted", st.deleted},
            {"toric", st.toric},
            {"output", pair_to_json(st.output)},
            {"canonical", pair_to_json(canonical_form(st.output))},
            {"pi", to_json(st.pi)}};
  j["eliminated_block"] = st.eliminated_block ? json(*st.eliminated_block) : json(nullptr);
  return j;
}

std::string step_text(const ContractionStep& st) {
  std::ostringstream os;
  os << "delete column " << st.deleted;
  if (st.eliminated_block) os << ", eliminate redundant block " << *st.eliminated_block;
  if (st.toric) os << ", toric";
  os << "\n" << render_P(st.output);
  return os.str();
}

int run_analyze(const std::string& path, const std::string& format) {
  DefiningPair dp = read_pair(path);
  const Table table = Table::load_default();
  const VarietyReport rep = analyze(dp, &table);
  if (format == "json") std::cout << report_to_json(rep).dump(2) << "\n";
  else std::cout << render_text(rep);
  if (!rep.valid) {
    for (const auto& e : rep.errors) std::cerr << "invalid pair: " << e << "\n";
    return kInvalid;
  }
  return kOk;
}

struct ClassifyOptions {
  std::vector<std::string> names;
  bool all = false;
  int budget = 0;
  bool budget_set = false;
  int jobs = 1;
  int weight_cap = 0, exponent_cap = 0;
  long long max_degree_matrices = 0;
  std::string out, audit = "fanocpx_audit.jsonl";
  int disposition = 0;
  std::string configuration;
};

int run_classify(const ClassifyOptions& o) {
  SearchBudget b = SearchBudget::from_env();
  if (o.budget_set) b.d_cap = o.budget;
  if (o.weight_cap) b.weight_cap = b.weight_cap_rank3 = o.weight_cap;
  if (o.exponent_cap) b.exponent_cap = o.exponent_cap;
  b.max_degree_matrices = o.max_degree_matrices;
  if (!b.valid()) {
    std::cerr << "budget must be positive\n";
    return kUsage;
  }
  std::vector<std::string> names = o.names;
  if (o.all) {
    names.clear();
    for (const auto& c : constellations()) names.push_back(c.name);
  }
  if (names.empty()) {
    std::cerr << "give --constellation NAME or --all\n";
    return kUsage;
  }
  for (const auto& n : names) {
    try {
      constellation(n);
    } catch (const std::invalid_argument& e) {
      std::cerr << e.what() << "\n";
      return kUsage;
    }
  }
  EnumerationFilter filter;
  if (o.disposition) filter.disposition = o.disposition;
  if (!o.configuration.empty()) filter.configuration = o.configuration[0];

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      std::cerr << "cannot write " << o.out << "\n";
      return kUsage;
    }
  }
  std::ostream& out = o.out.empty() ? std::cout : file;
  const Table table = Table::load_default();
  std::vector<EnumerationResult> runs;
  for (const auto& n : names) {
    EnumerationResult res = enumerate_constellation(constellation(n), b, filter, o.jobs);
    for (const auto& dp : res.classes) {
      auto id = table.match(dp);
      out << json{{"type", "class"},
                  {"constellation", n},
                  {"table_row", id ? json(*id) : json(nullptr)},
                  {"signature", class_signature(dp)},
                  {"pair", pair_to_json(dp)}}
                 .dump()
          << "\n";
    }
    out << json{{"type", "run"},
                {"constellation", n},
                {"classes", res.classes.size()},
                {"exhausted", res.exhausted},
                {"frontier", res.frontier},
                {"counters", counters_json(res.counters)}}
               .dump()
        << "\n";
    out.flush();
    runs.push_back(std::move(res));
  }
  const TableComparison cmp = compare_with_table(runs, table);
  json extra = json::array();
  for (const auto& dp : cmp.extra) extra.push_back(pair_to_json(dp));
  out << json{{"type", "comparison"},
              {"matched", cmp.matched},
              {"missing", cmp.missing},
              {"extra", extra},
              {"exhausted", cmp.exhausted}}
             .dump()
      << "\n";
  if (!cmp.extra.empty()) {
    std::ofstream audit(o.audit);
    for (const auto& dp : cmp.extra) {
      const VarietyReport rep = analyze(dp);
      audit << json{{"pair", pair_to_json(dp)}, {"signature", class_signature(dp)}, {"report", report_to_json(rep)}}.dump()
            << "\n";
    }
    std::cerr << cmp.extra.size() << " class(es) outside the table written to " << o.audit << "\n";
  }
  return kOk;
}

int run_contract(const std::string& path, int index, bool to_minimal, const std::string& format) {
  const DefiningPair dp = read_pair(path);
  require_valid(dp);
  std::vector<ContractionStep> steps;
  if (to_minimal) {
    steps = contract_to_minimal(dp);
    if (steps.empty()) {
      if (format == "json") std::cout << json{{"steps", json::array()}, {"minimal", true}}.dump(2) << "\n";
      else std::cout << "already combinatorially minimal\n";
      return kOk;
    }
  } else {
    steps.push_back(contract(dp, index));
  }
  if (format == "json") {
    json j = {{"steps", json::array()}};
    for (const auto& st : steps) j["steps"].push_back(step_json(st));
    j["minimal"] = is_combinatorially_minimal(steps.back().output);
    j["table_row"] = nullptr;
    if (auto id = Table::load_default().match(steps.back().output)) j["table_row"] = *id;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& st : steps) std::cout << step_text(st) << "\n";
    std::cout << "canonical form\n" << render_P(canonical_form(steps.back().output));
    if (auto id = Table::load_default().match(steps.back().output)) std::cout << "table row " << *id << "\n";
  }
  return kOk;
}

int run_table(const std::string& format) {
  const Table t = Table::load_default();
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : t.rows())
      rows.push_back({{"id", row.id},
                      {"ring", row.ring},
                      {"torsion", [&] {
                         json a = json::array();
                         for (const auto& x : row.torsion) a.push_back(to_json(x));
                         return a;
                       }()},
                      {"degree", to_json(row.degree_free)},
                      {"smooth", row.smooth},
                      {"pair", pair_to_json(t.pair(row.id))}});
    std::cout << rows.dump(2) << "\n";
    return kOk;
  }
  for (const auto& row : t.rows()) {
    std::cout << row.id << "  Cl = Z^2";
    for (const auto& x : row.torsion) std::cout << " + Z/" << x;
    std::cout << (row.smooth ? "  smooth" : "") << "\n  " << row.ring << "\n" << render_P(t.pair(row.id)) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational Fano threefolds of complexity one given by defining pairs (A,P)"};
  app.require_subcommand(1);

  std::string format = "text", path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the full pipeline on a pair file");
  analyze_cmd->add_option("file", path, "pair JSON")->required();
  analyze_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  ClassifyOptions co;
  co.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* classify_cmd = app.add_subcommand("classify", "Search constellations and compare with the table");
  classify_cmd->add_option("--constellation", co.names, "constellation name, e.g. 2a");
  classify_cmd->add_flag("--all", co.all, "all fifteen constellations");
  auto* budget_opt = classify_cmd->add_option("--budget", co.budget, "cap on the torsion order of Cl");
  classify_cmd->add_option("--jobs", co.jobs)->check(CLI::PositiveNumber);
  classify_cmd->add_option("--weight-cap", co.weight_cap);
  classify_cmd->add_option("--exponent-cap", co.exponent_cap);
  classify_cmd->add_option("--max-degree-matrices", co.max_degree_matrices, "per exponent assignment");
  classify_cmd->add_option("--disposition", co.disposition)->check(CLI::Range(1, 5));
  classify_cmd->add_option("--configuration", co.configuration)->check(CLI::IsMember({"A"}));
  classify_cmd->add_option("--out", co.out, "JSON-lines output (default stdout)");
  classify_cmd->add_option("--audit", co.audit, "where classes outside the table are written");

  int index = -1;
  bool to_minimal = false;
  auto* contract_cmd = app.add_subcommand("contract", "Contract exceptional weights");
  contract_cmd->add_option("file", path, "pair JSON")->required();
  auto* index_opt = contract_cmd->add_option("--index", index, "column of P to delete");
  auto* min_opt = contract_cmd->add_flag("--to-minimal", to_minimal);
  index_opt->excludes(min_opt);
  contract_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* table_cmd = app.add_subcommand("table", "Print the target table");
  table_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (analyze_cmd->parsed()) return run_analyze(path, format);
    if (classify_cmd->parsed()) {
      co.budget_set = budget_opt->count() > 0;
      return run_classify(co);
    }
    if (contract_cmd->parsed()) {
      if (!to_minimal && index < 0) {
        std::cerr << "give --index COLUMN or --to-minimal\n";
        return kUsage;
      }
      return run_contract(path, index, to_minimal, format);
    }
    if (table_cmd->parsed()) return run_table(format);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InvalidPair& e) {
    std::cerr << "invalid pair: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << e.what() << "\n";
    return kPrecondition;
  } catch (const std::out_of_range& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
