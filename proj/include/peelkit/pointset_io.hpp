#pragma once

#include "peelkit/geometry.hpp"
#include "peelkit/partition.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace peelkit {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json point_set_to_json(const PointSet& s) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = s.size();
  auto arr = nlohmann::json::array();
  for (const auto& p : s.points) {
    nlohmann::json pj;
    pj["id"] = p.id;
    pj["x"] = to_fraction_string(p.x);
    pj["y"] = to_fraction_string(p.y);
    pj["path"] = p.path;
    arr.push_back(std::move(pj));
  }
  j["points"] = std::move(arr);
  return j;
}

inline PointSet point_set_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::runtime_error("point set file: not a JSON object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw std::runtime_error("point set file: unsupported schema_version");
  if (!j.contains("points") || !j["points"].is_array())
    throw std::runtime_error("point set file: missing points array");
  PointSet s;
  for (const auto& pj : j["points"]) {
    if (!pj.is_object() || !pj.contains("id") || !pj["id"].is_number_integer() ||
        !pj.contains("x") || !pj.contains("y"))
      throw std::runtime_error("point set file: malformed point entry");
    Point p;
    p.id = pj["id"].get<int>();
    auto coord = [](const nlohmann::json& v) -> Rational {
      if (v.is_string()) return parse_fraction(v.get<std::string>());
      if (v.is_number_integer()) return Rational(v.get<long>());
      throw std::runtime_error("point set file: coordinate must be \"num/den\" or integer");
    };
    p.x = coord(pj["x"]);
    p.y = coord(pj["y"]);
    if (pj.contains("path")) {
      if (!pj["path"].is_array()) throw std::runtime_error("point set file: path must be an array");
      for (const auto& e : pj["path"]) p.path.push_back(e.get<int>());
    }
    s.points.push_back(std::move(p));
  }
  if (j.contains("n") && j["n"].is_number_integer() && j["n"].get<int>() != s.size())
    throw std::runtime_error("point set file: n does not match points");
  if (!s.ids_distinct()) throw std::runtime_error("point set file: duplicate ids");
  return s;
}

inline nlohmann::json partition_to_json(const Partition& p) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& part : p.parts) j.push_back(part);
  return j;
}

inline Partition partition_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::runtime_error("partition file: expected an array of id lists");
  Partition p;
  for (const auto& part : j) {
    if (!part.is_array()) throw std::runtime_error("partition file: each part must be an id list");
    std::vector<int> ids;
    for (const auto& e : part) {
      if (!e.is_number_integer()) throw std::runtime_error("partition file: ids must be integers");
      ids.push_back(e.get<int>());
    }
    p.parts.push_back(std::move(ids));
  }
  return p;
}

inline std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spew_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

inline PointSet read_point_set_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("point set file: " + std::string(e.what()));
  }
  return point_set_from_json(j);
}

inline Partition read_partition_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("partition file: " + std::string(e.what()));
  }
  return partition_from_json(j);
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace peelkit
