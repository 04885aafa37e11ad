#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsfh/fob_ops.hpp"

namespace bsfh {

// JSON serialization. Files are versioned by a top-level "schema" key;
// rational numbers are stored as "num/den" strings so round-trips are exact.

using json = nlohmann::json;

inline constexpr const char* kFobSchema = "bsfh-fob-1";
inline constexpr const char* kStabSchema = "bsfh-stab-1";
inline constexpr const char* kMatchSchema = "bsfh-match-1";
inline constexpr const char* kCuttingArcsSchema = "bsfh-cutarcs-1";

// ---- primitives ----

inline json rat_to_json(const Rat& r) { return rat_str(r); }

inline Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (!j.is_string()) throw Error("expected a rational as a \"num/den\" string");
  return parse_rat(j.get<std::string>());
}

inline json pt_to_json(const Pt& p) { return json::array({rat_to_json(p.x), rat_to_json(p.y)}); }

inline Pt pt_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("expected a point as a two-element array");
  return {rat_from_json(j[0]), rat_from_json(j[1])};
}

inline std::string edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Binding: return "binding";
    case EdgeKind::Leaf: return "leaf";
    case EdgeKind::Seam: return "seam";
  }
  throw Error("unknown edge kind");
}

inline EdgeKind edge_kind_from_name(const std::string& s) {
  if (s == "binding") return EdgeKind::Binding;
  if (s == "leaf") return EdgeKind::Leaf;
  if (s == "seam") return EdgeKind::Seam;
  throw Error("unknown edge kind: " + s);
}

// ---- courses and loci ----

inline json course_to_json(const Course& c) {
  json legs = json::array();
  for (const Leg& l : c.legs) {
    json pts = json::array();
    for (const Pt& p : l.pts) pts.push_back(pt_to_json(p));
    legs.push_back({{"chart", l.chart}, {"pts", pts}});
  }
  json out = {{"legs", legs}};
  if (c.closed) out["closed"] = true;
  return out;
}

inline Course course_from_json(const json& j) {
  Course c;
  c.closed = j.value("closed", false);
  for (const json& lj : j.at("legs")) {
    Leg l;
    l.chart = lj.at("chart").get<std::string>();
    for (const json& pj : lj.at("pts")) l.pts.push_back(pt_from_json(pj));
    c.legs.push_back(std::move(l));
  }
  return c;
}

inline json foot_to_json(const FootSpec& f) {
  return {{"chart", f.chart}, {"a", pt_to_json(f.a)}, {"b", pt_to_json(f.b)}};
}

inline FootSpec foot_from_json(const json& j) {
  return {j.at("chart").get<std::string>(), pt_from_json(j.at("a")), pt_from_json(j.at("b"))};
}

inline json surf_pt_to_json(const SurfPt& s) {
  return {{"chart", s.chart}, {"p", pt_to_json(s.p)}};
}

inline SurfPt surf_pt_from_json(const json& j) {
  return {j.at("chart").get<std::string>(), pt_from_json(j.at("p"))};
}

// ---- chart complexes ----

// Edges are addressed as [chart name, edge position] pairs; internal edge ids
// are reassigned on load.
inline json complex_to_json(const ChartComplex& cc) {
  auto edge_addr = [&](int eid) {
    EdgeRef r = cc.edge_ref(eid);
    return json::array({cc.charts[static_cast<size_t>(r.chart)].name, r.pos});
  };
  json charts = json::array();
  for (const Chart& c : cc.charts) {
    json poly = json::array();
    for (const Pt& p : c.poly) poly.push_back(pt_to_json(p));
    json edges = json::array();
    for (const BEdge& e : c.edges) {
      json ej = {{"kind", edge_kind_name(e.kind)}};
      if (!e.label.empty()) ej["label"] = e.label;
      edges.push_back(ej);
    }
    charts.push_back({{"name", c.name}, {"poly", poly}, {"edges", edges}});
  }
  json seams = json::array();
  for (const Seam& s : cc.seams) seams.push_back(json::array({edge_addr(s.a), edge_addr(s.b)}));
  json leaves = json::array();
  for (const Leaf& lf : cc.leaves) {
    json course = json::array();
    for (int e : lf.course) course.push_back(edge_addr(e));
    leaves.push_back({{"name", lf.name}, {"course", course}});
  }
  return {{"charts", charts}, {"seams", seams}, {"leaves", leaves}};
}

inline ChartComplex complex_from_json(const json& j) {
  ChartComplex cc;
  for (const json& cj : j.at("charts")) {
    Polygon poly;
    for (const json& pj : cj.at("poly")) poly.push_back(pt_from_json(pj));
    std::vector<std::pair<EdgeKind, std::string>> specs;
    for (const json& ej : cj.at("edges"))
      specs.push_back(
          {edge_kind_from_name(ej.at("kind").get<std::string>()), ej.value("label", "")});
    cc.add_chart(cj.at("name").get<std::string>(), std::move(poly), std::move(specs));
  }
  auto edge_id = [&](const json& aj) -> int {
    if (!aj.is_array() || aj.size() != 2) throw Error("expected an edge address [chart, pos]");
    const Chart& c = cc.chart(aj[0].get<std::string>());
    int pos = aj[1].get<int>();
    if (pos < 0 || pos >= static_cast<int>(c.edges.size()))
      throw Error("edge position out of range in chart " + c.name);
    return c.edges[static_cast<size_t>(pos)].id;
  };
  for (const json& sj : j.at("seams")) cc.add_seam(edge_id(sj[0]), edge_id(sj[1]));
  for (const json& lj : j.at("leaves")) {
    Leaf lf;
    lf.name = lj.at("name").get<std::string>();
    for (const json& aj : lj.at("course")) lf.course.push_back(edge_id(aj));
    cc.leaves.push_back(std::move(lf));
  }
  cc.validate();
  return cc;
}

// ---- foliated open books ----

inline json move_to_json(const FobMove& m) {
  json out = {{"name", m.name}};
  if (m.type == MoveType::Cut) {
    out["type"] = "cut";
    out["arc"] = course_to_json(m.arc);
  } else {
    out["type"] = "add";
    out["foot1"] = foot_to_json(m.foot1);
    out["foot2"] = foot_to_json(m.foot2);
    out["width"] = rat_to_json(m.width);
    out["band_chart"] = m.band_chart;
  }
  return out;
}

inline FobMove move_from_json(const json& j) {
  FobMove m;
  m.name = j.at("name").get<std::string>();
  std::string t = j.at("type").get<std::string>();
  if (t == "cut") {
    m.type = MoveType::Cut;
    m.arc = course_from_json(j.at("arc"));
  } else if (t == "add") {
    m.type = MoveType::Add;
    m.foot1 = foot_from_json(j.at("foot1"));
    m.foot2 = foot_from_json(j.at("foot2"));
    m.width = rat_from_json(j.at("width"));
    m.band_chart = j.at("band_chart").get<std::string>();
  } else {
    throw Error("unknown move type: " + t);
  }
  return m;
}

inline json fob_to_json(const FoliatedOpenBook& f) {
  json out = {{"schema", kFobSchema},
              {"name", f.name},
              {"base_page", complex_to_json(f.base_page)}};
  json moves = json::array();
  for (const FobMove& m : f.moves) moves.push_back(move_to_json(m));
  out["moves"] = moves;

  json mono = json::object();
  if (!f.monodromy.arc_images.empty()) {
    json m = json::object();
    for (const auto& [k, v] : f.monodromy.arc_images) m[k] = course_to_json(v);
    mono["arc_images"] = m;
  }
  if (!f.monodromy.point_images.empty()) {
    json m = json::object();
    for (const auto& [k, v] : f.monodromy.point_images) {
      json arr = json::array();
      for (const SurfPt& sp : v) arr.push_back(surf_pt_to_json(sp));
      m[k] = arr;
    }
    mono["point_images"] = m;
  }
  if (!f.monodromy.inverse_images.empty()) {
    json m = json::object();
    for (const auto& [k, v] : f.monodromy.inverse_images) m[k] = course_to_json(v);
    mono["inverse_images"] = m;
  }
  if (!f.monodromy.inverse_feet.empty()) {
    json m = json::object();
    for (const auto& [k, v] : f.monodromy.inverse_feet)
      m[k] = {{"foot1", foot_to_json(v.first)}, {"foot2", foot_to_json(v.second)}};
    mono["inverse_feet"] = m;
  }
  if (!f.monodromy.twist_word.empty()) mono["twist_word"] = f.monodromy.twist_word;
  if (!f.monodromy.twist_curves.empty()) {
    json m = json::object();
    for (const auto& [k, v] : f.monodromy.twist_curves) m[k] = course_to_json(v);
    mono["twist_curves"] = m;
  }
  if (!mono.empty()) out["monodromy"] = mono;

  if (!f.sorting_arcs.empty()) {
    json arr = json::array();
    for (const auto& [k, v] : f.sorting_arcs)
      arr.push_back({{"move", k.move},
                     {"positive", k.positive},
                     {"page", k.page},
                     {"course", course_to_json(v)}});
    out["sorting_arcs"] = arr;
  }
  if (!f.pair_names.empty()) out["pair_names"] = f.pair_names;
  if (!f.interval_labels.empty()) {
    json m = json::object();
    for (const auto& [k, v] : f.interval_labels) m[k] = v;
    out["interval_labels"] = m;
  }
  out["slot_depth"] = rat_to_json(f.slot_depth);
  out["corner_margin"] = rat_to_json(f.corner_margin);
  return out;
}

inline FoliatedOpenBook fob_from_json(const json& j) {
  if (j.value("schema", "") != kFobSchema)
    throw Error("unsupported schema: expected " + std::string(kFobSchema));
  FoliatedOpenBook f;
  f.name = j.value("name", "");
  f.base_page = complex_from_json(j.at("base_page"));
  for (const json& mj : j.at("moves")) f.moves.push_back(move_from_json(mj));
  if (j.contains("monodromy")) {
    const json& mono = j["monodromy"];
    if (mono.contains("arc_images"))
      for (auto it = mono["arc_images"].begin(); it != mono["arc_images"].end(); ++it)
        f.monodromy.arc_images[it.key()] = course_from_json(it.value());
    if (mono.contains("point_images"))
      for (auto it = mono["point_images"].begin(); it != mono["point_images"].end(); ++it) {
        std::vector<SurfPt> pts;
        for (const json& pj : it.value()) pts.push_back(surf_pt_from_json(pj));
        f.monodromy.point_images[it.key()] = std::move(pts);
      }
    if (mono.contains("inverse_images"))
      for (auto it = mono["inverse_images"].begin(); it != mono["inverse_images"].end(); ++it)
        f.monodromy.inverse_images[it.key()] = course_from_json(it.value());
    if (mono.contains("inverse_feet"))
      for (auto it = mono["inverse_feet"].begin(); it != mono["inverse_feet"].end(); ++it)
        f.monodromy.inverse_feet[it.key()] = {foot_from_json(it.value().at("foot1")),
                                              foot_from_json(it.value().at("foot2"))};
    if (mono.contains("twist_word"))
      f.monodromy.twist_word = mono["twist_word"].get<std::vector<std::string>>();
    if (mono.contains("twist_curves"))
      for (auto it = mono["twist_curves"].begin(); it != mono["twist_curves"].end(); ++it)
        f.monodromy.twist_curves[it.key()] = course_from_json(it.value());
  }
  if (j.contains("sorting_arcs"))
    for (const json& aj : j["sorting_arcs"])
      f.sorting_arcs[{aj.at("move").get<int>(), aj.at("positive").get<bool>(),
                      aj.at("page").get<int>()}] = course_from_json(aj.at("course"));
  if (j.contains("pair_names")) f.pair_names = j["pair_names"].get<std::vector<std::string>>();
  if (j.contains("interval_labels"))
    for (auto it = j["interval_labels"].begin(); it != j["interval_labels"].end(); ++it)
      f.interval_labels[it.key()] = it.value().get<std::vector<std::string>>();
  if (j.contains("slot_depth")) f.slot_depth = rat_from_json(j["slot_depth"]);
  if (j.contains("corner_margin")) f.corner_margin = rat_from_json(j["corner_margin"]);
  return f;
}

// ---- auxiliary data files ----

inline json stabilization_to_json(const StabilizationData& sd) {
  json out = {{"schema", kStabSchema},
              {"gamma", course_to_json(sd.gamma)},
              {"width", rat_to_json(sd.width)},
              {"band_chart", sd.band_chart},
              {"foot_radius", rat_to_json(sd.foot_radius)},
              {"twist_name", sd.twist_name},
              {"positive_twist", sd.positive_twist},
              {"reroute_eps", rat_to_json(sd.reroute_eps)}};
  if (!sd.move_arcs.empty()) {
    json m = json::object();
    for (const auto& [k, v] : sd.move_arcs) m[k] = course_to_json(v);
    out["move_arcs"] = m;
  }
  if (!sd.move_feet.empty()) {
    json m = json::object();
    for (const auto& [k, v] : sd.move_feet)
      m[k] = {{"foot1", foot_to_json(v.first)}, {"foot2", foot_to_json(v.second)}};
    out["move_feet"] = m;
  }
  if (!sd.sorting_arcs.empty()) {
    json arr = json::array();
    for (const auto& [k, v] : sd.sorting_arcs)
      arr.push_back({{"move", k.move},
                     {"positive", k.positive},
                     {"page", k.page},
                     {"course", course_to_json(v)}});
    out["sorting_arcs"] = arr;
  }
  if (!sd.arc_image_overrides.empty()) {
    json m = json::object();
    for (const auto& [k, v] : sd.arc_image_overrides) m[k] = course_to_json(v);
    out["arc_image_overrides"] = m;
  }
  return out;
}

inline StabilizationData stabilization_from_json(const json& j) {
  if (j.value("schema", "") != kStabSchema)
    throw Error("unsupported schema: expected " + std::string(kStabSchema));
  StabilizationData sd;
  sd.gamma = course_from_json(j.at("gamma"));
  if (j.contains("width")) sd.width = rat_from_json(j["width"]);
  sd.band_chart = j.value("band_chart", sd.band_chart);
  if (j.contains("foot_radius")) sd.foot_radius = rat_from_json(j["foot_radius"]);
  sd.twist_name = j.value("twist_name", sd.twist_name);
  sd.positive_twist = j.value("positive_twist", sd.positive_twist);
  if (j.contains("reroute_eps")) sd.reroute_eps = rat_from_json(j["reroute_eps"]);
  if (j.contains("move_arcs"))
    for (auto it = j["move_arcs"].begin(); it != j["move_arcs"].end(); ++it)
      sd.move_arcs[it.key()] = course_from_json(it.value());
  if (j.contains("move_feet"))
    for (auto it = j["move_feet"].begin(); it != j["move_feet"].end(); ++it)
      sd.move_feet[it.key()] = {foot_from_json(it.value().at("foot1")),
                                foot_from_json(it.value().at("foot2"))};
  if (j.contains("sorting_arcs"))
    for (const json& aj : j["sorting_arcs"])
      sd.sorting_arcs[{aj.at("move").get<int>(), aj.at("positive").get<bool>(),
                       aj.at("page").get<int>()}] = course_from_json(aj.at("course"));
  if (j.contains("arc_image_overrides"))
    for (auto it = j["arc_image_overrides"].begin(); it != j["arc_image_overrides"].end(); ++it)
      sd.arc_image_overrides[it.key()] = course_from_json(it.value());
  return sd;
}

inline json matching_to_json(const FobMatching& m) {
  json pairs = json::array();
  for (const auto& [a, b] : m.leaf_pairs) pairs.push_back(json::array({a, b}));
  return {{"schema", kMatchSchema}, {"leaf_pairs", pairs}};
}

inline FobMatching matching_from_json(const json& j) {
  if (j.value("schema", "") != kMatchSchema)
    throw Error("unsupported schema: expected " + std::string(kMatchSchema));
  FobMatching m;
  for (const json& pj : j.at("leaf_pairs"))
    m.leaf_pairs.push_back({pj[0].get<std::string>(), pj[1].get<std::string>()});
  return m;
}

inline json cutting_arcs_to_json(const std::vector<CuttingArc>& arcs) {
  json arr = json::array();
  for (const CuttingArc& a : arcs) arr.push_back({{"name", a.name}, {"arc", course_to_json(a.arc)}});
  return {{"schema", kCuttingArcsSchema}, {"arcs", arr}};
}

inline std::vector<CuttingArc> cutting_arcs_from_json(const json& j) {
  if (j.value("schema", "") != kCuttingArcsSchema)
    throw Error("unsupported schema: expected " + std::string(kCuttingArcsSchema));
  std::vector<CuttingArc> out;
  for (const json& aj : j.at("arcs"))
    out.push_back({aj.at("name").get<std::string>(), course_from_json(aj.at("arc"))});
  return out;
}

// ---- file helpers ----

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline FoliatedOpenBook load_fob(const std::string& path) {
  return fob_from_json(read_json_file(path));
}

inline void save_fob(const std::string& path, const FoliatedOpenBook& f) {
  write_json_file(path, fob_to_json(f));
}

inline StabilizationData load_stabilization(const std::string& path) {
  return stabilization_from_json(read_json_file(path));
}

inline FobMatching load_matching(const std::string& path) {
  return matching_from_json(read_json_file(path));
}

inline std::vector<CuttingArc> load_cutting_arcs(const std::string& path) {
  return cutting_arcs_from_json(read_json_file(path));
}

}  // namespace bsfh
