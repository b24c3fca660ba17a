#pragma once

#include "fanocpx/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fanocpx {

struct TableRow {
  std::string id;  // "2.01" .. "2.12"
  std::string ring;
  int r = 2;
  std::vector<int> ns;
  int m = 0;
  std::vector<std::vector<Integer>> l;
  std::vector<Integer> torsion;             // Cl = Z^2 + sum Z/t
  IntMatrix degree_free;                    // 2 x (n+m), block column order
  std::vector<std::vector<Integer>> degree_torsion;  // one row per torsion factor
  bool smooth = false;
};

class Table {
 public:
  static Table from_json(const json& j);
  static Table load(const std::string& path);
  // data/table.json under FANOCPX_DATA_DIR (environment first, then the build-time default).
  static Table load_default();

  const std::vector<TableRow>& rows() const { return rows_; }
  const TableRow& row(const std::string& id) const;
  // The canonical pair of a row and the row id of a pair, up to admissible operations.
  DefiningPair pair(const std::string& id) const;
  std::optional<std::string> match(const DefiningPair& dp) const;

 private:
  std::vector<TableRow> rows_;
  std::vector<DefiningPair> canonical_;
};

DefiningPair pair_of_row(const TableRow& row);

}  // namespace fanocpx
