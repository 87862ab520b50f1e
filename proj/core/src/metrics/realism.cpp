#include "trajeval/metrics/realism.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/segment.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "trajeval/stats.hpp"

namespace trajeval::metrics {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using BPoint = bg::model::d2::point_xy<double>;
using BBox = bg::model::box<BPoint>;
using BSegment = bg::model::segment<BPoint>;
using BLine = bg::model::linestring<BPoint>;
using BPolygon = bg::model::polygon<BPoint>;

namespace {

BPoint to_bpoint(const Point2& p) { return {p.x, p.y}; }

BPolygon to_bpolygon(const Polygon& poly) {
  BPolygon out;
  for (const auto& p : poly.outer) out.outer().push_back(to_bpoint(p));
  for (const auto& hole : poly.holes) {
    out.inners().emplace_back();
    for (const auto& p : hole) out.inners().back().push_back(to_bpoint(p));
  }
  bg::correct(out);
  return out;
}

BLine to_bline(const Polyline& line) {
  BLine out;
  for (const auto& p : line) out.push_back(to_bpoint(p));
  return out;
}

using SegmentEntry = std::pair<BSegment, std::size_t>;
using BoxEntry = std::pair<BBox, std::size_t>;

void add_segments(const Polyline& line, std::size_t id, std::vector<SegmentEntry>& out) {
  if (line.size() == 1) out.emplace_back(BSegment(to_bpoint(line[0]), to_bpoint(line[0])), id);
  for (std::size_t i = 1; i < line.size(); ++i) {
    out.emplace_back(BSegment(to_bpoint(line[i - 1]), to_bpoint(line[i])), id);
  }
}

}  // namespace

struct ConstraintLayers::Index {
  std::vector<BPolygon> implausible;
  bgi::rtree<BoxEntry, bgi::quadratic<16>> implausible_boxes;
  std::vector<BPolygon> areas;
  bgi::rtree<BoxEntry, bgi::quadratic<16>> area_boxes;
  bgi::rtree<SegmentEntry, bgi::quadratic<16>> line_segments;
  std::vector<RoadEdge> roads;
};

ConstraintLayers::ConstraintLayers() : index_(std::make_shared<Index>()) {}

ConstraintLayers::ConstraintLayers(std::vector<Polygon> implausible, std::vector<Polyline> infrastructure_lines,
                                   std::vector<Polygon> infrastructure_areas, std::vector<RoadEdge> roads) {
  auto index = std::make_shared<Index>();
  std::vector<BoxEntry> boxes;
  for (const auto& p : implausible) {
    index->implausible.push_back(to_bpolygon(p));
    boxes.emplace_back(bg::return_envelope<BBox>(index->implausible.back()), index->implausible.size() - 1);
  }
  index->implausible_boxes = decltype(index->implausible_boxes)(boxes);
  boxes.clear();
  for (const auto& p : infrastructure_areas) {
    index->areas.push_back(to_bpolygon(p));
    boxes.emplace_back(bg::return_envelope<BBox>(index->areas.back()), index->areas.size() - 1);
  }
  index->area_boxes = decltype(index->area_boxes)(boxes);
  std::vector<SegmentEntry> segments;
  std::size_t id = 0;
  for (const auto& line : infrastructure_lines) add_segments(line, id++, segments);
  for (const auto& edge : roads) {
    if (edge.geometry.empty()) throw Error("road edge without geometry");
    add_segments(edge.geometry, id++, segments);
  }
  index->line_segments = decltype(index->line_segments)(segments);
  index->roads = std::move(roads);
  index_ = std::move(index);
}

bool ConstraintLayers::in_implausible_domain(const Point2& p) const {
  const BPoint q = to_bpoint(p);
  for (auto it = index_->implausible_boxes.qbegin(bgi::intersects(q)); it != index_->implausible_boxes.qend(); ++it) {
    if (bg::covered_by(q, index_->implausible[it->second])) return true;
  }
  return false;
}

bool ConstraintLayers::near_infrastructure(const Point2& p, double radius_m) const {
  const BPoint q = to_bpoint(p);
  const BBox probe(BPoint(p.x - radius_m, p.y - radius_m), BPoint(p.x + radius_m, p.y + radius_m));
  for (auto it = index_->line_segments.qbegin(bgi::intersects(probe)); it != index_->line_segments.qend(); ++it) {
    if (bg::distance(q, it->first) <= radius_m) return true;
  }
  for (auto it = index_->area_boxes.qbegin(bgi::intersects(probe)); it != index_->area_boxes.qend(); ++it) {
    if (bg::distance(q, index_->areas[it->second]) <= radius_m) return true;
  }
  return false;
}

const std::vector<RoadEdge>& ConstraintLayers::roads() const { return index_->roads; }

bool ConstraintLayers::empty() const {
  return index_->implausible.empty() && index_->areas.empty() && index_->line_segments.empty();
}

namespace {

using nlohmann::json;

Point2 read_position(const json& coord, const mobility::Crs& crs) {
  if (!coord.is_array() || coord.size() < 2) throw Error("GeoJSON position must be an array of two numbers");
  const double a = coord[0].get<double>();
  const double b = coord[1].get<double>();
  if (crs.kind == mobility::Crs::Kind::Metric) return {a, b};
  return crs.forward({b, a});
}

Polyline read_line(const json& coords, const mobility::Crs& crs) {
  Polyline out;
  for (const auto& c : coords) out.push_back(read_position(c, crs));
  return out;
}

Polygon read_polygon(const json& rings, const mobility::Crs& crs) {
  if (!rings.is_array() || rings.empty()) throw Error("GeoJSON polygon without rings");
  Polygon p;
  p.outer = read_line(rings[0], crs);
  for (std::size_t i = 1; i < rings.size(); ++i) p.holes.push_back(read_line(rings[i], crs));
  return p;
}

json parse_collection(const std::string& text, const char* what) {
  if (text.empty()) return json::object({{"type", "FeatureCollection"}, {"features", json::array()}});
  try {
    auto j = json::parse(text);
    if (j.value("type", "") != "FeatureCollection" || !j.contains("features")) {
      throw Error(std::string(what) + ": expected a GeoJSON FeatureCollection");
    }
    return j;
  } catch (const json::exception& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

struct Shapes {
  std::vector<Polygon> polygons;
  std::vector<Polyline> lines;
};

Shapes read_shapes(const json& collection, const mobility::Crs& crs) {
  Shapes out;
  for (const auto& feature : collection["features"]) {
    const auto& g = feature.at("geometry");
    if (g.is_null()) continue;
    const auto type = g.at("type").get<std::string>();
    const auto& c = g.at("coordinates");
    if (type == "Polygon") {
      out.polygons.push_back(read_polygon(c, crs));
    } else if (type == "MultiPolygon") {
      for (const auto& rings : c) out.polygons.push_back(read_polygon(rings, crs));
    } else if (type == "LineString") {
      out.lines.push_back(read_line(c, crs));
    } else if (type == "MultiLineString") {
      for (const auto& line : c) out.lines.push_back(read_line(line, crs));
    } else if (type == "Point") {
      out.lines.push_back({read_position(c, crs)});
    } else {
      throw Error("unsupported GeoJSON geometry type '" + type + "'");
    }
  }
  return out;
}

std::string node_key(const json& properties, const char* name, const Point2& fallback) {
  if (properties.is_object() && properties.contains(name)) {
    const auto& v = properties[name];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return v.dump();
  }
  return fmt::format("{:.3f},{:.3f}", fallback.x, fallback.y);
}

std::string read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ConstraintLayers parse_constraint_layers(const std::string& implausible_geojson,
                                         const std::string& infrastructure_geojson,
                                         const std::string& roads_geojson, const mobility::Crs& crs) {
  auto implausible = read_shapes(parse_collection(implausible_geojson, "implausible domain"), crs);
  auto infrastructure = read_shapes(parse_collection(infrastructure_geojson, "infrastructure"), crs);
  std::vector<RoadEdge> roads;
  const json road_graph = parse_collection(roads_geojson, "road graph");
  for (const auto& feature : road_graph["features"]) {
    const auto& g = feature.at("geometry");
    if (g.at("type").get<std::string>() != "LineString") throw Error("road graph features must be LineStrings");
    RoadEdge edge;
    edge.geometry = read_line(g.at("coordinates"), crs);
    if (edge.geometry.size() < 2) throw Error("road edge needs at least two positions");
    const json props = feature.value("properties", json::object());
    edge.from = node_key(props, "from", edge.geometry.front());
    edge.to = node_key(props, "to", edge.geometry.back());
    roads.push_back(std::move(edge));
  }
  return ConstraintLayers(std::move(implausible.polygons), std::move(infrastructure.lines),
                          std::move(infrastructure.polygons), std::move(roads));
}

ConstraintLayers load_constraint_layers(const std::filesystem::path& directory, const mobility::Crs& crs) {
  if (!std::filesystem::is_directory(directory)) throw Error("layers directory not found: " + directory.string());
  return parse_constraint_layers(read_file(directory / "implausible.geojson"),
                                 read_file(directory / "infrastructure.geojson"),
                                 read_file(directory / "roads.geojson"), crs);
}

bool point_violation(const Point2& p, const ConstraintLayers& layers, double delta_m) {
  return layers.in_implausible_domain(p) && !layers.near_infrastructure(p, delta_m);
}

MetricValue trajectory_implausibility(const mobility::Dataset& data, const ConstraintLayers& layers,
                                      double delta_m) {
  if (data.empty()) throw Error("implausibility of an empty dataset");
  std::size_t violating = 0;
  for (const auto& t : data.trajectories()) {
    for (const auto& p : t.points) {
      if (point_violation(p.point.position, layers, delta_m)) {
        ++violating;
        break;
      }
    }
  }
  return {static_cast<double>(violating) / static_cast<double>(data.size()), 0, {}};
}

MetricValue location_implausibility(const mobility::Dataset& data, const ConstraintLayers& layers,
                                    double delta_m) {
  std::size_t violating = 0, total = 0;
  for (const auto& t : data.trajectories()) {
    for (const auto& p : t.points) {
      ++total;
      if (point_violation(p.point.position, layers, delta_m)) ++violating;
    }
  }
  if (total == 0) throw Error("implausibility of an empty dataset");
  return {static_cast<double>(violating) / static_cast<double>(total), 0, {}};
}

namespace {

struct CellCategories {
  std::map<std::string, double> counts;
  double total = 0.0;

  // Highest count; ties go to the smallest label (map order).
  std::pair<std::string, double> dominant() const {
    std::pair<std::string, double> best{"", -1.0};
    for (const auto& [label, n] : counts) {
      if (n > best.second) best = {label, n};
    }
    return best;
  }
};

std::map<grid::CellId, CellCategories> categories_by_cell(const grid::DiscretizedDataset& data) {
  std::map<grid::CellId, CellCategories> out;
  for (const auto& t : data.trajectories) {
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      if (!t.categories[i]) continue;
      auto& cell = out[t.cells[i]];
      cell.counts[data.vocabulary.label(*t.categories[i])] += 1.0;
      cell.total += 1.0;
    }
  }
  return out;
}

}  // namespace

MetricValue category_location_match(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn,
                                    const CategoryMatchOptions& options) {
  if (!(real.grid == syn.grid)) throw Error("datasets were discretized on different grids");
  const auto real_cells = categories_by_cell(real);
  if (real_cells.empty()) throw Inapplicable("real dataset carries no categories");
  const auto syn_cells = categories_by_cell(syn);
  std::size_t eligible = 0, matches = 0;
  for (const auto& [cell, cats] : real_cells) {
    if (cats.total < options.k_min) continue;
    const auto [label, n] = cats.dominant();
    if (n / cats.total < options.dominance) continue;
    ++eligible;
    auto it = syn_cells.find(cell);
    if (it != syn_cells.end() && it->second.dominant().first == label) ++matches;
  }
  if (eligible == 0) throw Inapplicable("no eligible cells for category-location match");
  MetricValue out{static_cast<double>(matches) / static_cast<double>(eligible), 0, {}};
  out.note = std::to_string(eligible) + " eligible cells";
  return out;
}

namespace {

class RoadNetwork {
 public:
  explicit RoadNetwork(const std::vector<RoadEdge>& edges) : edges_(edges) {
    std::vector<SegmentEntry> segments;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      add_segments(edges[e].geometry, e, segments);
      const auto a = node(edges[e].from);
      const auto b = node(edges[e].to);
      const double length = bg::length(to_bline(edges[e].geometry));
      adjacency_[a].push_back({b, e, length});
      adjacency_[b].push_back({a, e, length});
    }
    segments_ = decltype(segments_)(segments);
  }

  std::size_t nearest_edge(const Point2& p) const {
    std::vector<SegmentEntry> hit;
    segments_.query(bgi::nearest(to_bpoint(p), 1), std::back_inserter(hit));
    return hit.front().second;
  }

  // Edges of a shortest path between any endpoint of `a` and any endpoint
  // of `b`; empty when they touch or are disconnected.
  std::vector<std::size_t> connect(std::size_t a, std::size_t b) {
    const std::size_t sources[2] = {node_id(edges_[a].from), node_id(edges_[a].to)};
    const std::size_t targets[2] = {node_id(edges_[b].from), node_id(edges_[b].to)};
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_source = 0, best_target = 0;
    for (auto s : sources) {
      const auto& tree = shortest_paths(s);
      for (auto t : targets) {
        if (tree.distance[t] < best) {
          best = tree.distance[t];
          best_source = s;
          best_target = t;
        }
      }
    }
    std::vector<std::size_t> path;
    if (!std::isfinite(best)) return path;
    const auto& tree = shortest_paths(best_source);
    for (auto v = best_target; v != best_source;) {
      const auto e = tree.via_edge[v];
      path.push_back(e);
      v = tree.previous[v];
    }
    return path;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t edge;
    double length;
  };
  struct Tree {
    std::vector<double> distance;
    std::vector<std::size_t> previous;
    std::vector<std::size_t> via_edge;
  };

  std::size_t node(const std::string& key) {
    auto [it, inserted] = nodes_.emplace(key, adjacency_.size());
    if (inserted) adjacency_.emplace_back();
    return it->second;
  }
  std::size_t node_id(const std::string& key) const { return nodes_.at(key); }

  const Tree& shortest_paths(std::size_t source) {
    auto it = cache_.find(source);
    if (it != cache_.end()) return it->second;
    Tree tree;
    const auto n = adjacency_.size();
    tree.distance.assign(n, std::numeric_limits<double>::infinity());
    tree.previous.assign(n, source);
    tree.via_edge.assign(n, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    tree.distance[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (d > tree.distance[v]) continue;
      for (const auto& arc : adjacency_[v]) {
        const double nd = d + arc.length;
        if (nd < tree.distance[arc.to]) {
          tree.distance[arc.to] = nd;
          tree.previous[arc.to] = v;
          tree.via_edge[arc.to] = arc.edge;
          queue.emplace(nd, arc.to);
        }
      }
    }
    return cache_.emplace(source, std::move(tree)).first->second;
  }

  const std::vector<RoadEdge>& edges_;
  std::unordered_map<std::string, std::size_t> nodes_;
  std::vector<std::vector<Arc>> adjacency_;
  bgi::rtree<SegmentEntry, bgi::quadratic<16>> segments_;
  std::unordered_map<std::size_t, Tree> cache_;
};

}  // namespace

std::vector<std::size_t> reconstruct_infrastructure(const mobility::Dataset& real, const ConstraintLayers& layers) {
  if (!layers.has_roads()) throw Error("map reconstruction needs a road graph");
  RoadNetwork network(layers.roads());
  std::set<std::size_t> used;
  for (const auto& t : real.trajectories()) {
    std::vector<std::size_t> observed;
    for (const auto& p : t.points) {
      const auto e = network.nearest_edge(p.point.position);
      if (observed.empty() || observed.back() != e) observed.push_back(e);
    }
    used.insert(observed.begin(), observed.end());
    for (std::size_t i = 1; i < observed.size(); ++i) {
      for (auto e : network.connect(observed[i - 1], observed[i])) used.insert(e);
    }
  }
  return {used.begin(), used.end()};
}

MetricValue map_reconstruction(const mobility::Dataset& real, const mobility::Dataset& syn,
                               const ConstraintLayers& layers) {
  const auto used = reconstruct_infrastructure(real, layers);
  if (used.empty()) throw Error("no infrastructure reconstructed from the real dataset");
  std::vector<SegmentEntry> segments;
  for (auto e : used) add_segments(layers.roads()[e].geometry, e, segments);
  const bgi::rtree<SegmentEntry, bgi::quadratic<16>> infrastructure(segments);
  std::vector<double> per_trajectory;
  for (const auto& t : syn.trajectories()) {
    std::vector<double> d;
    for (const auto& p : t.points) {
      const BPoint q = to_bpoint(p.point.position);
      std::vector<SegmentEntry> hit;
      infrastructure.query(bgi::nearest(q, 1), std::back_inserter(hit));
      d.push_back(bg::distance(q, hit.front().first));
    }
    per_trajectory.push_back(stats::mean(d));
  }
  if (per_trajectory.empty()) throw Error("map reconstruction of an empty synthetic dataset");
  return {stats::mean(per_trajectory) / 1000.0, 0, {}};
}

}  // namespace trajeval::metrics
