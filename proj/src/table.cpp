#include "fanocpx/table.hpp"

#include <cstdlib>
#include <fstream>

#ifndef FANOCPX_DATA_DIR
#define FANOCPX_DATA_DIR "data"
#endif

namespace fanocpx {

DefiningPair pair_of_row(const TableRow& row) {
  const Eigen::Index N = row.degree_free.cols();
  IntMatrix tors(static_cast<Eigen::Index>(row.degree_torsion.size()), N);
  for (Eigen::Index k = 0; k < tors.rows(); ++k)
    for (Eigen::Index c = 0; c < N; ++c) tors(k, c) = row.degree_torsion[k][c];
  ClassGroup K = group_from_rows(row.degree_free, tors, row.torsion);
  return pair_from_lattice(row.r, row.ns, row.m, row.l, K.kernel_lattice());
}

Table Table::from_json(const json& j) {
  Table t;
  try {
    for (const auto& jr : j.at("rows")) {
      TableRow row;
      row.id = jr.at("id").get<std::string>();
      row.ring = jr.at("ring").get<std::string>();
      row.r = jr.at("r").get<int>();
      row.ns = jr.at("ns").get<std::vector<int>>();
      row.m = jr.at("m").get<int>();
      for (const auto& li : jr.at("l")) {
        row.l.emplace_back();
        for (const auto& e : li) row.l.back().push_back(integer_from_json(e));
      }
      for (const auto& e : jr.at("torsion")) row.torsion.push_back(integer_from_json(e));
      row.degree_free = int_matrix_from_json(jr.at("degree"));
      for (const auto& tr : jr.at("degree_torsion")) {
        row.degree_torsion.emplace_back();
        for (const auto& e : tr) row.degree_torsion.back().push_back(integer_from_json(e));
      }
      row.smooth = jr.value("smooth", false);
      t.rows_.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("table: ") + e.what());
  }
  for (const auto& row : t.rows_) t.canonical_.push_back(canonical_form(pair_of_row(row)));
  return t;
}

Table Table::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return from_json(j);
}

Table Table::load_default() {
  const char* env = std::getenv("FANOCPX_DATA_DIR");
  std::string dir = env && *env ? env : FANOCPX_DATA_DIR;
  return load(dir + "/table.json");
}

const TableRow& Table::row(const std::string& id) const {
  for (const auto& r : rows_)
    if (r.id == id) return r;
  throw std::out_of_range("no table row " + id);
}

DefiningPair Table::pair(const std::string& id) const {
  for (std::size_t k = 0; k < rows_.size(); ++k)
    if (rows_[k].id == id) return canonical_[k];
  throw std::out_of_range("no table row " + id);
}

std::optional<std::string> Table::match(const DefiningPair& dp) const {
  const DefiningPair c = canonical_form(dp);
  for (std::size_t k = 0; k < rows_.size(); ++k)
    if (canonical_[k] == c) return rows_[k].id;
  return std::nullopt;
}

}  // namespace fanocpx
