#include "fanocpx/json_io.hpp"

#include <fstream>
#include <sstream>

namespace fanocpx {

namespace {
const Integer kExactLimit = Integer(1) << 53;
}

json to_json(const Integer& a) {
  if (abs(a) <= kExactLimit) return json(to_i64(a));
  return json(a.str());
}

json to_json(const Rational& q) { return json::array({to_json(numer(q)), to_json(denom(q))}); }

json to_json(const IntVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const RatVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const IntMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(IntVector(m.row(i).transpose())));
  return out;
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw ParseError("not an integer: \"" + s + "\"");
    return Integer(s);
  }
  throw ParseError("expected an integer, got " + j.dump());
}

Rational rational_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) {
    Integer den = integer_from_json(j[1]);
    if (den == 0) throw ParseError("zero denominator");
    return Rational(integer_from_json(j[0])) / Rational(den);
  }
  return Rational(integer_from_json(j));
}

IntVector int_vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array, got " + j.dump());
  IntVector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = integer_from_json(j[i]);
  return v;
}

IntMatrix int_matrix_from_json(const json& j, Eigen::Index cols_if_empty) {
  if (!j.is_array()) throw ParseError("expected a list of rows");
  if (j.empty()) return IntMatrix(0, cols_if_empty);
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  IntMatrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("ragged matrix");
    for (size_t k = 0; k < cols; ++k) M(i, k) = integer_from_json(j[i][k]);
  }
  return M;
}

DefiningPair pair_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("top level must be an object");
  for (const char* key : {"r", "ns", "m", "l", "d"})
    if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  DefiningPair dp;
  if (!j["r"].is_number_integer() || !j["m"].is_number_integer()) throw ParseError("r and m must be integers");
  dp.r = j["r"].get<int>();
  dp.m = j["m"].get<int>();
  if (dp.r < 0 || dp.m < 0) throw ParseError("r and m must be nonnegative");
  if (!j["ns"].is_array()) throw ParseError("ns must be a list");
  for (auto& x : j["ns"]) {
    if (!x.is_number_integer()) throw ParseError("ns entries must be integers");
    dp.ns.push_back(x.get<int>());
  }
  if (static_cast<int>(dp.ns.size()) != dp.r + 1) throw ParseError("ns must have r+1 entries");
  for (int x : dp.ns)
    if (x < 0) throw ParseError("ns entries must be nonnegative");
  if (!j["l"].is_array() || j["l"].size() != dp.ns.size()) throw ParseError("l must have r+1 tuples");
  for (size_t i = 0; i < j["l"].size(); ++i) {
    IntVector t = int_vector_from_json(j["l"][i]);
    if (t.size() != dp.ns[i]) throw ParseError("l tuple " + std::to_string(i) + " does not match ns");
    dp.l.emplace_back(t.data(), t.data() + t.size());
  }
  const int nn = dp.n();
  dp.d = int_matrix_from_json(j["d"], nn);
  dp.s = static_cast<int>(dp.d.rows());
  if (dp.d.cols() != nn) throw ParseError("d must have n columns");
  if (j.contains("dprime")) {
    const json& dj = j["dprime"];
    if (dp.m == 0 && dj.is_array() && (dj.empty() || std::all_of(dj.begin(), dj.end(), [](const json& row) {
                                         return row.is_array() && row.empty();
                                       })))
      dp.dprime = IntMatrix(dp.s, 0);
    else
      dp.dprime = int_matrix_from_json(dj, dp.m);
  } else if (dp.m == 0) {
    dp.dprime = IntMatrix(dp.s, 0);
  } else {
    throw ParseError("missing field \"dprime\"");
  }
  if (dp.dprime.rows() != dp.s || dp.dprime.cols() != dp.m) throw ParseError("dprime must be s x m");
  if (j.contains("A") && !j["A"].is_null()) {
    const json& aj = j["A"];
    if (!aj.is_array() || aj.size() != 2) throw ParseError("A must have 2 rows");
    dp.A = RatMatrix(2, dp.r + 1);
    for (int i = 0; i < 2; ++i) {
      if (!aj[i].is_array() || static_cast<int>(aj[i].size()) != dp.r + 1) throw ParseError("A must be 2 x (r+1)");
      for (int k = 0; k <= dp.r; ++k) dp.A(i, k) = rational_from_json(aj[i][k]);
    }
  } else {
    dp.A = default_A(dp.r);
  }
  return dp;
}

json pair_to_json(const DefiningPair& dp) {
  json j;
  j["r"] = dp.r;
  j["ns"] = dp.ns;
  j["m"] = dp.m;
  json l = json::array();
  for (auto& t : dp.l) {
    json row = json::array();
    for (auto& x : t) row.push_back(to_json(x));
    l.push_back(row);
  }
  j["l"] = l;
  j["d"] = to_json(dp.d);
  json dpr = json::array();
  for (int t = 0; t < dp.s; ++t) {
    json row = json::array();
    for (int k = 0; k < dp.m; ++k) row.push_back(to_json(dp.dprime(t, k)));
    dpr.push_back(row);
  }
  j["dprime"] = dpr;
  json A = json::array();
  for (int i = 0; i < dp.A.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < dp.A.cols(); ++k) row.push_back(to_json(dp.A(i, k)));
    A.push_back(row);
  }
  j["A"] = A;
  return j;
}

DefiningPair read_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return pair_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

void write_pair(const std::string& path, const DefiningPair& dp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << pair_to_json(dp).dump() << "\n";
}

}  // namespace fanocpx
