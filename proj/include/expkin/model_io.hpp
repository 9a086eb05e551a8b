#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expkin/model.hpp"

namespace expkin {

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(path + ": unknown key '" + item.key() + "'");
    }
  }
}

inline const json& require_key(const json& obj, const std::string& path,
                               const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(path + ": missing required key '" + key + "'");
  }
  return *it;
}

inline double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw ValidationError(path + ": expected a number");
  }
  return v.get<double>();
}

inline std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) {
    throw ValidationError(path + ": expected a string");
  }
  return v.get<std::string>();
}

inline std::vector<double> numbers_at(const json& v, const std::string& path,
                                      std::initializer_list<std::size_t> lengths) {
  if (!v.is_array()) {
    throw ValidationError(path + ": expected an array");
  }
  bool ok = false;
  for (std::size_t len : lengths) {
    ok = ok || v.size() == len;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << path << ": wrong array length " << v.size() << " (expected";
    for (std::size_t len : lengths) {
      msg << " " << len;
    }
    msg << ")";
    throw ValidationError(msg.str());
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Eigen::Vector3d vec3_at(const json& v, const std::string& path) {
  const std::vector<double> n = numbers_at(v, path, {3});
  return {n[0], n[1], n[2]};
}

inline Eigen::Matrix3d rot9_at(const json& v, const std::string& path) {
  const std::vector<double> n = numbers_at(v, path, {9});
  Eigen::Matrix3d r;
  r << n[0], n[1], n[2], n[3], n[4], n[5], n[6], n[7], n[8];
  return r;
}

/// Inertia as [Ixx,Iyy,Izz,Ixy,Ixz,Iyz] or as 9 row-major entries.
inline Eigen::Matrix3d inertia_at(const json& v, const std::string& path) {
  const std::vector<double> n = numbers_at(v, path, {6, 9});
  Eigen::Matrix3d m;
  if (n.size() == 6) {
    m << n[0], n[3], n[4], n[3], n[1], n[5], n[4], n[5], n[2];
  } else {
    m << n[0], n[1], n[2], n[3], n[4], n[5], n[6], n[7], n[8];
  }
  return m;
}

}  // namespace detail

/// Parses and validates a robot description document (JSON, units m/kg).
/// Errors carry the offending field path.
inline RobotModel load_robot(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("description: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("description: top level must be an object");
  }
  detail::reject_unknown_keys(doc, "description",
                              {"name", "gravity", "joints", "bodies", "ee_home"});

  const std::string name = detail::string_at(detail::require_key(doc, "description", "name"), "name");
  const Eigen::Vector3d gravity =
      detail::vec3_at(detail::require_key(doc, "description", "gravity"), "gravity");

  const json& joints_doc = detail::require_key(doc, "description", "joints");
  if (!joints_doc.is_array()) {
    throw ValidationError("joints: expected an array");
  }
  std::vector<JointSpec> joints;
  joints.reserve(joints_doc.size());
  for (std::size_t i = 0; i < joints_doc.size(); ++i) {
    const std::string path = "joints[" + std::to_string(i) + "]";
    const json& j = joints_doc[i];
    if (!j.is_object()) {
      throw ValidationError(path + ": expected an object");
    }
    detail::reject_unknown_keys(j, path, {"type", "axis", "origin"});
    JointSpec spec;
    const std::string type =
        detail::string_at(detail::require_key(j, path, "type"), path + ".type");
    if (type == "revolute") {
      spec.kind = JointKind::Revolute;
    } else if (type == "prismatic") {
      spec.kind = JointKind::Prismatic;
    } else {
      throw ValidationError(path + ".type: expected 'revolute' or 'prismatic', got '" + type + "'");
    }
    spec.axis = detail::vec3_at(detail::require_key(j, path, "axis"), path + ".axis");
    if (j.contains("origin")) {
      spec.origin = detail::vec3_at(j["origin"], path + ".origin");
    }
    joints.push_back(spec);
  }

  const json& bodies_doc = detail::require_key(doc, "description", "bodies");
  if (!bodies_doc.is_array()) {
    throw ValidationError("bodies: expected an array");
  }
  std::vector<BodySpec> bodies;
  bodies.reserve(bodies_doc.size());
  for (std::size_t i = 0; i < bodies_doc.size(); ++i) {
    const std::string path = "bodies[" + std::to_string(i) + "]";
    const json& b = bodies_doc[i];
    if (!b.is_object()) {
      throw ValidationError(path + ": expected an object");
    }
    detail::reject_unknown_keys(b, path, {"mass", "com", "com_rotation", "inertia"});
    BodySpec spec;
    spec.mass = detail::number_at(detail::require_key(b, path, "mass"), path + ".mass");
    if (spec.mass < 0.0) {
      throw ValidationError(path + ".mass: must be >= 0, got " + std::to_string(spec.mass));
    }
    spec.com_home.translation =
        detail::vec3_at(detail::require_key(b, path, "com"), path + ".com");
    if (b.contains("com_rotation")) {
      spec.com_home.rotation = detail::rot9_at(b["com_rotation"], path + ".com_rotation");
    }
    spec.inertia =
        detail::inertia_at(detail::require_key(b, path, "inertia"), path + ".inertia");
    const double asym = (spec.inertia - spec.inertia.transpose()).cwiseAbs().maxCoeff();
    if (asym > kUnitTol) {
      throw ValidationError(path + ".inertia: not symmetric (max |I - I'| = " +
                            std::to_string(asym) + ")");
    }
    bodies.push_back(spec);
  }

  const json& ee_doc = detail::require_key(doc, "description", "ee_home");
  if (!ee_doc.is_object()) {
    throw ValidationError("ee_home: expected an object");
  }
  detail::reject_unknown_keys(ee_doc, "ee_home", {"position", "rotation"});
  Transform ee_home;
  ee_home.translation =
      detail::vec3_at(detail::require_key(ee_doc, "ee_home", "position"), "ee_home.position");
  if (ee_doc.contains("rotation")) {
    ee_home.rotation = detail::rot9_at(ee_doc["rotation"], "ee_home.rotation");
  }

  return RobotModel(name, std::move(joints), std::move(bodies), ee_home, gravity);
}

inline RobotModel load_robot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open robot description file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_robot(text.str());
}

/// Serializes a model back to the description format. load_robot of the
/// result reconstructs an identical model.
inline std::string save_robot(const RobotModel& model) {
  using detail::json;
  json doc;
  doc["name"] = model.name();
  doc["gravity"] = {model.gravity().x(), model.gravity().y(), model.gravity().z()};

  json joints = json::array();
  for (const JointSpec& j : model.joints()) {
    json entry;
    entry["type"] = j.kind == JointKind::Revolute ? "revolute" : "prismatic";
    entry["axis"] = {j.axis.x(), j.axis.y(), j.axis.z()};
    entry["origin"] = {j.origin.x(), j.origin.y(), j.origin.z()};
    joints.push_back(entry);
  }
  doc["joints"] = joints;

  json bodies = json::array();
  for (const BodySpec& b : model.bodies()) {
    json entry;
    entry["mass"] = b.mass;
    entry["com"] = {b.com_home.translation.x(), b.com_home.translation.y(),
                    b.com_home.translation.z()};
    if (!b.com_home.rotation.isIdentity(0.0)) {
      json r = json::array();
      for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
          r.push_back(b.com_home.rotation(row, col));
        }
      }
      entry["com_rotation"] = r;
    }
    const Eigen::Matrix3d& in = b.inertia;
    entry["inertia"] = {in(0, 0), in(1, 1), in(2, 2), in(0, 1), in(0, 2), in(1, 2)};
    bodies.push_back(entry);
  }
  doc["bodies"] = bodies;

  json ee;
  ee["position"] = {model.ee_home().translation.x(), model.ee_home().translation.y(),
                    model.ee_home().translation.z()};
  if (!model.ee_home().rotation.isIdentity(0.0)) {
    json r = json::array();
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        r.push_back(model.ee_home().rotation(row, col));
      }
    }
    ee["rotation"] = r;
  }
  doc["ee_home"] = ee;

  return doc.dump(2) + "\n";
}

}  // namespace expkin
