// Copyright 2026 The gausstail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gausstail/geometry_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gausstail {
namespace {

using nlohmann::json;

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw GeometryError(where + ": missing numeric field \"" + key + "\"");
  return j.at(key).get<double>();
}

template <std::size_t N>
std::array<double, N> point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) throw GeometryError(where + ": expected an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number()) throw GeometryError(where + ": coordinates must be numbers");
    out[i] = j[i].get<double>();
  }
  return out;
}

Vec2 point2(const json& j, const std::string& where) {
  const auto p = point<2>(j, where);
  return {p[0], p[1]};
}

Edge parse_edge(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw GeometryError(where + ": edge needs a \"type\"");
  const std::string type = j["type"];
  if (type == "segment") {
    if (!j.contains("from") || !j.contains("to")) throw GeometryError(where + ": segment needs \"from\" and \"to\"");
    return Edge::segment(point2(j["from"], where), point2(j["to"], where));
  }
  if (type == "arc") {
    if (!j.contains("center")) throw GeometryError(where + ": arc needs \"center\"");
    const bool ccw = j.value("ccw", true);
    return Edge::arc(point2(j["center"], where), number(j, "radius", where), number(j, "from_angle", where),
                     number(j, "to_angle", where), ccw);
  }
  throw GeometryError(where + ": unknown edge type \"" + type + "\"");
}

EdgeChain parse_chain(const json& j, const std::string& where) {
  if (!j.is_array()) throw GeometryError(where + ": expected an array of edges");
  EdgeChain chain;
  for (std::size_t i = 0; i < j.size(); ++i) chain.push_back(parse_edge(j[i], where + " edge " + std::to_string(i)));
  return chain;
}

void parse_planar(const json& doc, GeometryDocument& out) {
  if (!doc.contains("components") || !doc["components"].is_array())
    throw GeometryError("2D geometry needs a \"components\" array");
  const auto& comps = doc["components"];
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const std::string where = "component " + std::to_string(ci);
    const json& c = comps[ci];
    if (!c.is_object()) throw GeometryError(where + ": expected an object");
    ComponentDescription d;
    if (c.contains("outer")) d.outer = parse_chain(c["outer"], where + " outer");
    if (c.contains("curve")) d.curve = parse_chain(c["curve"], where + " curve");
    if (c.contains("point")) d.point = point2(c["point"], where + " point");
    if (c.contains("holes")) {
      if (!c["holes"].is_array()) throw GeometryError(where + ": \"holes\" must be an array");
      for (std::size_t h = 0; h < c["holes"].size(); ++h)
        d.holes.push_back(parse_chain(c["holes"][h], where + " hole " + std::to_string(h)));
    }
    if (c.contains("whiskers")) {
      if (!c["whiskers"].is_array()) throw GeometryError(where + ": \"whiskers\" must be an array");
      for (std::size_t w = 0; w < c["whiskers"].size(); ++w)
        d.whiskers.push_back(parse_chain(c["whiskers"][w], where + " whisker " + std::to_string(w)));
    }
    out.planar.components.push_back(std::move(d));
  }
}

void parse_solid(const json& doc, GeometryDocument& out) {
  if (doc.contains("boxes")) {
    if (!doc["boxes"].is_array()) throw GeometryError("\"boxes\" must be an array");
    for (std::size_t i = 0; i < doc["boxes"].size(); ++i) {
      const std::string where = "box " + std::to_string(i);
      const json& b = doc["boxes"][i];
      if (!b.is_object() || !b.contains("min") || !b.contains("max"))
        throw GeometryError(where + ": needs \"min\" and \"max\"");
      out.boxes.push_back({point<3>(b["min"], where), point<3>(b["max"], where)});
    }
    out.polytope = box_union(out.boxes);
    return;
  }
  out.polytope.volume = number(doc, "volume", "polytope");
  out.polytope.surface_area = number(doc, "surface_area", "polytope");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw GeometryError("polytope needs an \"edges\" array");
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const std::string where = "polytope edge " + std::to_string(i);
    out.polytope.edges.push_back({number(doc["edges"][i], "length", where), number(doc["edges"][i], "dihedral", where)});
  }
}

}  // namespace

GeometryDocument parse_geometry(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeometryError(std::string("geometry is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw GeometryError("geometry document must be a JSON object");
  GeometryDocument out;
  out.dimension = doc.contains("dimension") && doc["dimension"].is_number_integer() ? doc["dimension"].get<int>() : 0;
  try {
    if (out.dimension == 2) {
      parse_planar(doc, out);
    } else if (out.dimension == 3) {
      parse_solid(doc, out);
    } else {
      throw GeometryError("\"dimension\" must be 2 or 3");
    }
  } catch (const json::exception& e) {
    throw GeometryError(std::string("malformed geometry: ") + e.what());
  }
  return out;
}

GeometryDocument load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeometryError("cannot open geometry file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_geometry(ss.str());
}

}  // namespace gausstail
