#include "fanocpx/report.hpp"

#include "fanocpx/table.hpp"

#include <algorithm>
#include <sstream>

namespace fanocpx {

namespace {

json mask_json(FaceMask f) { return json(mask_columns(f)); }

json kelement_json(const KElement& k) {
  json t = json::array();
  for (const auto& x : k.torsion) t.push_back(to_json(x));
  return {{"free", to_json(k.free)}, {"torsion", t}};
}

KElement kelement_from(const json& j) {
  KElement k;
  k.free = int_vector_from_json(j.at("free"));
  for (const auto& x : j.at("torsion")) k.torsion.push_back(integer_from_json(x));
  return k;
}

json integers_json(const std::vector<Integer>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

std::vector<Integer> integers_from(const json& j) {
  std::vector<Integer> out;
  for (const auto& x : j) out.push_back(integer_from_json(x));
  return out;
}

RatVector rat_vector_from(const json& j) {
  RatVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = rational_from_json(j[i]);
  return v;
}

json opt_json(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

std::optional<bool> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<bool>();
}

BoundStatus status_from(const std::string& s) {
  for (auto st : {BoundStatus::holds, BoundStatus::violated, BoundStatus::hypotheses_not_satisfied})
    if (to_string(st) == s) return st;
  throw ParseError("unknown bound status " + s);
}

json reason(const std::string& why) { return {{"reason", why}}; }

// Offending lattice points, lineality points first, then by size with positive entries first.
std::vector<IntVector> offending_points(const DefiningPair& dp, const LeafComplex& lc) {
  const IntMatrix P = dp.P();
  std::vector<IntVector> out;
  for (const auto& p : leaf_complex_lattice_points(dp, lc)) {
    if (p.isZero()) continue;
    bool column = false;
    for (Eigen::Index c = 0; c < P.cols() && !column; ++c) column = IntVector(P.col(c)) == p;
    if (!column) out.push_back(p);
  }
  auto key = [&](const IntVector& p) {
    Integer size = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) size += abs(p(i));
    return std::make_pair(tropical_position(dp.r, p.cast<Rational>()) != -1, size);
  };
  std::stable_sort(out.begin(), out.end(), [&](const IntVector& a, const IntVector& b) {
    auto ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) != b(i)) return a(i) > b(i);
    return false;
  });
  return out;
}

}  // namespace

bool VarietyReport::operator==(const VarietyReport& o) const { return report_to_json(*this) == report_to_json(o); }

VarietyReport analyze(const DefiningPair& dp, const Table* table) {
  VarietyReport rep;
  rep.input = dp;
  ValidationReport vr = validate(dp);
  rep.errors = vr.errors;
  rep.warnings = vr.warnings;
  rep.redundant_blocks = vr.redundant_blocks;
  rep.valid = vr.valid();
  if (!rep.valid) return rep;

  const GradingData g = grading_of(dp);
  rep.free_rank = g.delta();
  rep.torsion = g.K.torsion;
  rep.degree_free = g.Q;
  for (const auto& w : g.weights) rep.degree_torsion.push_back(w.torsion);
  rep.mu = g.mu;
  rep.kappa = g.kappa;
  rep.eff_rays = g.eff.generators();
  rep.mov_rays = g.mov.generators();
  rep.stats = classification_stats(dp, g);
  rep.dim = dp.dim();
  rep.exceptional = exceptional_weights(dp);
  rep.combinatorially_minimal = rep.exceptional.empty();
  if (!rep.combinatorially_minimal) rep.witnesses["combinatorially_minimal"] = {{"exceptional_columns", rep.exceptional}};
  rep.mu_in_eff_interior = mu_in_eff_interior(dp, g);
  if (!rep.mu_in_eff_interior) {
    for (const auto& a : g.eff.facets())
      if (dot(a, g.mu.free) == 0) {
        rep.witnesses["mu_in_eff_interior"] = {{"mu", to_json(g.mu.free)}, {"eff_facet", to_json(a)}};
        break;
      }
    if (!rep.witnesses.contains("mu_in_eff_interior"))
      rep.witnesses["mu_in_eff_interior"] = {{"mu", to_json(g.mu.free)}, {"eff_dimension", g.eff.dimension()}};
  }
  rep.fano = is_fano(g);
  if (!rep.fano) {
    json w = {{"kappa", to_json(g.kappa.free)}};
    for (const auto& a : g.mov.facets())
      if (dot(a, g.kappa.free) <= 0) {
        w["mov_facet"] = to_json(a);
        break;
      }
    if (!w.contains("mov_facet")) w["mov_dimension"] = g.mov.dimension();
    rep.witnesses["fano"] = w;
  }

  BoundInputs in;
  in.combinatorially_minimal = rep.combinatorially_minimal;
  in.fano = rep.fano;
  in.mu_in_eff_interior = rep.mu_in_eff_interior;
  in.irredundant = vr.irredundant();

  const char* geometric[] = {"q_factorial", "positive_strata_factorial", "smooth", "log_terminal", "terminal", "big_cone"};
  auto undecided = [&](const std::string& why) {
    for (const char* k : geometric)
      if (!rep.witnesses.contains(k)) rep.witnesses[k] = reason(why);
  };

  if (!rep.fano) {
    undecided("not Fano");
  } else if (dp.columns() > 20) {
    undecided("too many columns");
  } else {
    const RelevantData rd = relevant_and_covering(dp, g);
    auto nq = non_Q_factorial_witness(rd, g);
    rep.q_factorial = !nq;
    if (nq) rep.witnesses["q_factorial"] = {{"face", mask_json(*nq)}, {"weight_cone_dimension", weight_cone(g, *nq).dimension()}};
    auto ps = positive_strata_witness(rd, g);
    rep.positive_strata_factorial = !ps;
    if (ps) rep.witnesses["positive_strata_factorial"] = {{"face", mask_json(*ps)}, {"stratum_dimension", stratum_dimension(rd, *ps)}};
    auto sm = smoothness_witness(dp, rd, g);
    rep.smooth = !sm;
    if (sm)
      rep.witnesses["smooth"] = {{"face", mask_json(sm->face)}, {"factorial", sm->factorial}, {"critical_blocks", sm->critical}};
    rep.big_cone = has_big_cone(dp, rd);
    if (!*rep.big_cone) rep.witnesses["big_cone"] = reason("no cone of Sigma meets the relative interior of every leaf");

    auto lt = log_terminal_witness(dp, rd);
    rep.log_terminal = !lt;
    if (lt) {
      rep.witnesses["log_terminal"] = {{"columns", lt->columns}, {"exponents", integers_json(lt->exponents)},
                                       {"ell", to_json(lt->ell)}};
      rep.witnesses["terminal"] = reason("not log terminal");
    } else {
      const LeafComplex lc = build_leaf_complex(dp, rd);
      rep.lineality_vertices = lc.lineality.vertices();
      for (const auto& leaf : lc.leaves) rep.leaf_vertices.push_back(leaf.vertices());
      auto bad = offending_points(dp, lc);
      rep.terminal = bad.empty();
      if (!bad.empty()) {
        const IntVector& p = bad.front();
        const int pos = tropical_position(dp.r, p.cast<Rational>());
        json w = {{"point", to_json(p)}, {"in_lineality", pos == -1}};
        if (pos == -1) w["lineality_point"] = to_json(IntVector(p.tail(dp.s)));
        else w["leaf"] = pos;
        json all = json::array();
        for (const auto& q : bad) all.push_back(to_json(q));
        w["all_points"] = all;
        rep.witnesses["terminal"] = w;
      }
    }
    in.q_factorial = *rep.q_factorial;
    in.log_terminal = *rep.log_terminal;
    in.terminal = rep.terminal.value_or(false);
    in.big_cone_exists = *rep.big_cone;
  }
  rep.bounds = bound_predicates(dp, g, in).checks;
  if (table) rep.table_row = table->match(dp);
  return rep;
}

json report_to_json(const VarietyReport& rep) {
  json j;
  j["input"] = pair_to_json(rep.input);
  j["valid"] = rep.valid;
  j["errors"] = rep.errors;
  j["warnings"] = rep.warnings;
  j["redundant_blocks"] = rep.redundant_blocks;
  j["class_group"] = {{"free_rank", rep.free_rank}, {"torsion", integers_json(rep.torsion)}};
  json dt = json::array();
  for (const auto& t : rep.degree_torsion) dt.push_back(integers_json(t));
  j["degree_matrix"] = {{"free", rep.degree_free.size() ? to_json(rep.degree_free) : json::array()}, {"torsion", dt}};
  j["mu"] = rep.valid ? kelement_json(rep.mu) : json(nullptr);
  j["kappa"] = rep.valid ? kelement_json(rep.kappa) : json(nullptr);
  json er = json::array(), mr = json::array();
  for (const auto& v : rep.eff_rays) er.push_back(to_json(v));
  for (const auto& v : rep.mov_rays) mr.push_back(to_json(v));
  j["eff_generators"] = er;
  j["mov_generators"] = mr;
  j["stats"] = {{"delta", rep.stats.delta}, {"alpha", rep.stats.alpha}, {"eta", rep.stats.eta}, {"zeta", rep.stats.zeta}};
  j["dim"] = rep.dim;
  j["exceptional_columns"] = rep.exceptional;
  j["fano"] = rep.fano;
  j["combinatorially_minimal"] = rep.combinatorially_minimal;
  j["mu_in_eff_interior"] = rep.mu_in_eff_interior;
  j["q_factorial"] = opt_json(rep.q_factorial);
  j["positive_strata_factorial"] = opt_json(rep.positive_strata_factorial);
  j["smooth"] = opt_json(rep.smooth);
  j["log_terminal"] = opt_json(rep.log_terminal);
  j["terminal"] = opt_json(rep.terminal);
  j["big_cone"] = opt_json(rep.big_cone);
  json lv = json::array();
  for (const auto& v : rep.lineality_vertices) lv.push_back(to_json(v));
  j["lineality_vertices"] = lv;
  json leaves = json::array();
  for (const auto& leaf : rep.leaf_vertices) {
    json l = json::array();
    for (const auto& v : leaf) l.push_back(to_json(v));
    leaves.push_back(l);
  }
  j["leaf_vertices"] = leaves;
  j["witnesses"] = rep.witnesses;
  json b = json::array();
  for (const auto& c : rep.bounds) b.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"statement", c.statement}});
  j["bounds"] = b;
  j["table_row"] = rep.table_row ? json(*rep.table_row) : json(nullptr);
  return j;
}

VarietyReport report_from_json(const json& j) {
  VarietyReport rep;
  try {
    rep.input = pair_from_json(j.at("input"));
    rep.valid = j.at("valid").get<bool>();
    rep.errors = j.at("errors").get<std::vector<std::string>>();
    rep.warnings = j.at("warnings").get<std::vector<std::string>>();
    rep.redundant_blocks = j.at("redundant_blocks").get<std::vector<int>>();
    rep.free_rank = j.at("class_group").at("free_rank").get<int>();
    rep.torsion = integers_from(j.at("class_group").at("torsion"));
    const json& dm = j.at("degree_matrix");
    if (!dm.at("free").empty()) rep.degree_free = int_matrix_from_json(dm.at("free"));
    for (const auto& t : dm.at("torsion")) rep.degree_torsion.push_back(integers_from(t));
    if (!j.at("mu").is_null()) rep.mu = kelement_from(j.at("mu"));
    if (!j.at("kappa").is_null()) rep.kappa = kelement_from(j.at("kappa"));
    for (const auto& v : j.at("eff_generators")) rep.eff_rays.push_back(int_vector_from_json(v));
    for (const auto& v : j.at("mov_generators")) rep.mov_rays.push_back(int_vector_from_json(v));
    const json& st = j.at("stats");
    rep.stats = {st.at("delta").get<int>(), st.at("alpha").get<int>(), st.at("eta").get<int>(), st.at("zeta").get<int>()};
    rep.dim = j.at("dim").get<int>();
    rep.exceptional = j.at("exceptional_columns").get<std::vector<int>>();
    rep.fano = j.at("fano").get<bool>();
    rep.combinatorially_minimal = j.at("combinatorially_minimal").get<bool>();
    rep.mu_in_eff_interior = j.at("mu_in_eff_interior").get<bool>();
    rep.q_factorial = opt_from(j.at("q_factorial"));
    rep.positive_strata_factorial = opt_from(j.at("positive_strata_factorial"));
    rep.smooth = opt_from(j.at("smooth"));
    rep.log_terminal = opt_from(j.at("log_terminal"));
    rep.terminal = opt_from(j.at("terminal"));
    rep.big_cone = opt_from(j.at("big_cone"));
    for (const auto& v : j.at("lineality_vertices")) rep.lineality_vertices.push_back(rat_vector_from(v));
    for (const auto& leaf : j.at("leaf_vertices")) {
      rep.leaf_vertices.emplace_back();
      for (const auto& v : leaf) rep.leaf_vertices.back().push_back(rat_vector_from(v));
    }
    rep.witnesses = j.at("witnesses");
    for (const auto& c : j.at("bounds"))
      rep.bounds.push_back({c.at("name").get<std::string>(), status_from(c.at("status").get<std::string>()),
                            c.at("statement").get<std::string>()});
    if (!j.at("table_row").is_null()) rep.table_row = j.at("table_row").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return rep;
}

std::string render_P(const DefiningPair& dp) {
  const IntMatrix P = dp.P();
  std::vector<std::string> cells(static_cast<std::size_t>(P.size()));
  std::size_t width = 1;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index c = 0; c < P.cols(); ++c) {
      auto& s = cells[static_cast<std::size_t>(i * P.cols() + c)];
      s = P(i, c).str();
      width = std::max(width, s.size());
    }
  std::ostringstream os;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if (i == dp.r) {
      os << "  " << std::string((width + 1) * P.cols() + 2 * (dp.r + (dp.m > 0 ? 1 : 0)), '-') << "\n";
    }
    os << "  ";
    for (Eigen::Index c = 0; c < P.cols(); ++c) {
      if (c > 0 && (dp.index_in_block(static_cast<int>(c)) == 0 || c == dp.n())) os << " |";
      const auto& s = cells[static_cast<std::size_t>(i * P.cols() + c)];
      os << std::string(width + 1 - s.size(), ' ') << s;
    }
    os << "\n";
  }
  return os.str();
}

std::string render_text(const VarietyReport& rep) {
  std::ostringstream os;
  auto vec = [](const IntVector& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + v(i).str();
    return s + ")";
  };
  auto kel = [&](const KElement& k) {
    std::string s = vec(k.free);
    for (const auto& t : k.torsion) s += " +" + t.str();
    return s;
  };
  auto flag = [](const std::optional<bool>& b) { return b ? (*b ? "yes" : "no") : "undetermined"; };

  os << "P =\n" << render_P(rep.input);
  for (const auto& e : rep.errors) os << "error: " << e << "\n";
  for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
  if (!rep.valid) return os.str();

  os << "Cl = Z^" << rep.free_rank;
  for (const auto& t : rep.torsion) os << " + Z/" << t;
  os << "\nweights:";
  for (Eigen::Index c = 0; c < rep.degree_free.cols(); ++c) {
    os << " " << vec(rep.degree_free.col(c));
    for (const auto& t : rep.degree_torsion[static_cast<std::size_t>(c)]) os << "+" << t;
  }
  os << "\nmu = " << kel(rep.mu) << "\nkappa = " << kel(rep.kappa) << "\nEff:";
  for (const auto& v : rep.eff_rays) os << " " << vec(v);
  os << "\nMov:";
  for (const auto& v : rep.mov_rays) os << " " << vec(v);
  os << "\ndelta " << rep.stats.delta << ", alpha " << rep.stats.alpha << ", eta " << rep.stats.eta << ", zeta "
     << rep.stats.zeta << ", dim " << rep.dim << "\n";
  os << "fano: " << (rep.fano ? "yes" : "no") << "\n";
  os << "combinatorially minimal: " << (rep.combinatorially_minimal ? "yes" : "no") << "\n";
  os << "mu in interior of Eff: " << (rep.mu_in_eff_interior ? "yes" : "no") << "\n";
  os << "Q-factorial: " << flag(rep.q_factorial) << "\n";
  os << "positive strata factorial: " << flag(rep.positive_strata_factorial) << "\n";
  os << "smooth: " << flag(rep.smooth) << "\n";
  os << "log terminal: " << flag(rep.log_terminal) << "\n";
  os << "terminal: " << flag(rep.terminal) << "\n";
  os << "big cone: " << flag(rep.big_cone) << "\n";
  if (rep.table_row) os << "table row: " << *rep.table_row << "\n";
  for (auto it = rep.witnesses.begin(); it != rep.witnesses.end(); ++it)
    os << "witness " << it.key() << ": " << it.value().dump() << "\n";
  for (const auto& b : rep.bounds) os << "bound " << b.name << ": " << to_string(b.status) << "\n";
  return os.str();
}

}  // namespace fanocpx
