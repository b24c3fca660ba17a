#pragma once

#include "fanocpx/apdata.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace fanocpx {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integers are plain JSON numbers up to 2^53 in magnitude and decimal strings beyond.
json to_json(const Integer& a);
json to_json(const Rational& q);  // [num, den]
json to_json(const IntVector& v);
json to_json(const RatVector& v);
json to_json(const IntMatrix& m);  // list of rows
Integer integer_from_json(const json& j);
Rational rational_from_json(const json& j);
IntVector int_vector_from_json(const json& j);
IntMatrix int_matrix_from_json(const json& j, Eigen::Index cols_if_empty = 0);

// Schema {"r", "ns", "m", "l", "d", "dprime", "A"?}. Shape problems raise ParseError;
// semantic validity is left to validate().
DefiningPair pair_from_json(const json& j);
json pair_to_json(const DefiningPair& dp);

DefiningPair read_pair(const std::string& path);
void write_pair(const std::string& path, const DefiningPair& dp);

}  // namespace fanocpx
