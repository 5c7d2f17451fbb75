#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cobotplan/geometry.hpp"
#include "cobotplan/kinematics.hpp"
#include "cobotplan/trajectory.hpp"

namespace cobotplan {

/// Malformed or inconsistent input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline Mat3 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("3x3 matrix must be an array of 3 rows");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != 3) throw InputError("matrix rows must have 3 entries");
    for (int c = 0; c < 3; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

inline json matrix_to_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

inline Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("point must be an array [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace detail

inline Profile parse_profile(const std::string& s) {
  if (s == "uniform") return Profile::Uniform;
  if (s == "quintic") return Profile::Quintic;
  throw InputError("unknown profile '" + s + "' (expected uniform|quintic)");
}

/// Geometry document: {"dh": [{a, alpha, d, delta} x 6], "links": {d1, a2, a3, d4, d5, d6}}.
inline RobotGeometry geometry_from_json(const nlohmann::json& j) {
  try {
    RobotGeometry g;
    const auto& dh = j.at("dh");
    if (!dh.is_array() || dh.size() != 6) throw InputError("geometry 'dh' must list 6 rows");
    for (std::size_t i = 0; i < 6; ++i) {
      g.dh[i] = {dh[i].at("a").get<double>(), dh[i].at("alpha").get<double>(),
                 dh[i].at("d").get<double>(), dh[i].value("delta", 0.0)};
    }
    const auto& k = j.at("links");
    g.links = {k.at("d1").get<double>(), k.at("a2").get<double>(), k.at("a3").get<double>(),
               k.at("d4").get<double>(), k.at("d5").get<double>(), k.at("d6").get<double>()};
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("geometry: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("geometry: ") + e.what());
  }
}

inline nlohmann::json geometry_to_json(const RobotGeometry& g) {
  nlohmann::json dh = nlohmann::json::array();
  for (const auto& r : g.dh) dh.push_back({{"a", r.a}, {"alpha", r.alpha}, {"d", r.d}, {"delta", r.delta}});
  return {{"dh", dh},
          {"links",
           {{"d1", g.links.d1},
            {"a2", g.links.a2},
            {"a3", g.links.a3},
            {"d4", g.links.d4},
            {"d5", g.links.d5},
            {"d6", g.links.d6}}}};
}

inline RobotGeometry load_geometry(const std::filesystem::path& path) {
  return geometry_from_json(detail::read_json_file(path));
}

/// Scenario document:
///   {"name": str, "waypoints": [[x,y,z], ...], "T": int, "profile": "uniform"|"quintic",
///    "orientations": [{"matrix": [[..],[..],[..]]} | {"rpy": [a,b,g], "home": [[..],..]}]}
/// Matrices are row-major; their columns are l, m, n.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    for (const auto& w : j.at("waypoints")) s.waypoints.push_back(detail::vec3_from_json(w));
    for (const auto& o : j.at("orientations")) {
      OrientationSpec spec;
      if (o.contains("matrix")) {
        spec.value = detail::matrix_from_json(o.at("matrix"));
      } else if (o.contains("rpy")) {
        const auto& r = o.at("rpy");
        if (!r.is_array() || r.size() != 3) throw InputError("rpy must be [alpha, beta, gamma]");
        RpyOrientation rpy{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                           Mat3::Identity()};
        if (o.contains("home")) rpy.home = detail::matrix_from_json(o.at("home"));
        spec.value = rpy;
      } else {
        throw InputError("orientation needs 'matrix' or 'rpy'");
      }
      s.orientations.push_back(spec);
    }
    s.subdivisions = j.at("T").get<int>();
    s.profile = parse_profile(j.value("profile", std::string("uniform")));
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json waypoints = nlohmann::json::array();
  for (const auto& w : s.waypoints) waypoints.push_back({w.x(), w.y(), w.z()});
  nlohmann::json orientations = nlohmann::json::array();
  for (const auto& o : s.orientations) {
    if (const auto* m = std::get_if<Mat3>(&o.value)) {
      orientations.push_back({{"matrix", detail::matrix_to_json(*m)}});
    } else {
      const auto& r = std::get<RpyOrientation>(o.value);
      orientations.push_back(
          {{"rpy", {r.alpha, r.beta, r.gamma}}, {"home", detail::matrix_to_json(r.home)}});
    }
  }
  return {{"name", s.name},
          {"waypoints", waypoints},
          {"orientations", orientations},
          {"T", s.subdivisions},
          {"profile", std::string(to_string(s.profile))}};
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(detail::read_json_file(path));
}

}  // namespace cobotplan
