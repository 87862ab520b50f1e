#include "trajeval/mobility/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "trajeval/error.hpp"

namespace trajeval::mobility {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (quoted) throw Error(fmt::format("line {}: unterminated quoted field", line_no));
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

int digits(const std::string& s, std::size_t pos, std::size_t count) {
  if (pos + count > s.size()) throw Error("truncated timestamp '" + s + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') throw Error("malformed timestamp '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

double parse_timestamp(const std::string& text) {
  double seconds = 0.0;
  if (parse_number(text, seconds)) return seconds;

  using namespace std::chrono;
  const int y = digits(text, 0, 4);
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw Error("malformed timestamp '" + text + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(digits(text, 5, 2))},
                           day{static_cast<unsigned>(digits(text, 8, 2))}};
  if (!ymd.ok()) throw Error("invalid calendar date in timestamp '" + text + "'");
  double total = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * 86400.0;

  std::size_t pos = 10;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    ++pos;
    const int hh = digits(text, pos, 2);
    if (pos + 2 >= text.size() || text[pos + 2] != ':') throw Error("malformed timestamp '" + text + "'");
    const int mm = digits(text, pos + 3, 2);
    pos += 5;
    double ss = 0.0;
    if (pos < text.size() && text[pos] == ':') {
      ss = digits(text, pos + 1, 2);
      pos += 3;
      if (pos < text.size() && text[pos] == '.') {
        std::size_t end = pos + 1;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        double frac = 0.0;
        parse_number("0" + text.substr(pos, end - pos), frac);
        ss += frac;
        pos = end;
      }
    }
    if (hh > 23 || mm > 59 || ss >= 61.0) throw Error("invalid time of day in '" + text + "'");
    total += hh * 3600.0 + mm * 60.0 + ss;
  }
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
      const int sign = text[pos] == '+' ? 1 : -1;
      const int oh = digits(text, pos + 1, 2);
      pos += 3;
      int om = 0;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (pos < text.size()) {
        om = digits(text, pos, 2);
        pos += 2;
      }
      total -= sign * (oh * 3600.0 + om * 60.0);
    }
  }
  if (pos != text.size()) throw Error("trailing characters in timestamp '" + text + "'");
  return total;
}

Dataset ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error("dataset '" + path.string() + "' is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line, line_no);

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(header[i], i);
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const std::string& name) {
    auto c = find(name);
    if (!c) throw Error("missing column '" + name + "' in '" + path.string() + "'");
    return *c;
  };

  const auto& s = options.schema;
  const std::size_t c_user = require(s.user_id);
  const std::size_t c_traj = require(s.traj_id);
  const std::size_t c_time = require(s.timestamp);
  const auto c_lat = find(s.lat);
  const auto c_lon = find(s.lon);
  const auto c_x = find(s.x);
  const auto c_y = find(s.y);
  const auto c_cat = find(s.category);
  const bool geographic = c_lat && c_lon;
  if (!geographic && !(c_x && c_y)) {
    throw Error("missing column '" + s.lat + "'/'" + s.lon + "' (or '" + s.x + "'/'" + s.y +
                "') in '" + path.string() + "'");
  }
  const std::size_t c_a = geographic ? *c_lat : *c_y;
  const std::size_t c_b = geographic ? *c_lon : *c_x;

  struct Row {
    double a, b, t;
    std::optional<CategoryId> category;
  };
  CategoryVocabulary vocabulary = options.vocabulary.value_or(CategoryVocabulary{});
  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<std::string, std::vector<Row>>> groups;
  double sum_a = 0.0, sum_b = 0.0;
  std::size_t rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line, line_no);
    if (f.size() != header.size()) {
      throw Error(fmt::format("line {}: expected {} fields, found {}", line_no, header.size(), f.size()));
    }
    Row row{};
    if (!parse_number(f[c_a], row.a) || !parse_number(f[c_b], row.b)) {
      throw Error(fmt::format("line {}: unparsable coordinate", line_no));
    }
    try {
      row.t = parse_timestamp(f[c_time]);
    } catch (const Error& e) {
      throw Error(fmt::format("line {}: {}", line_no, e.what()));
    }
    if (c_cat && !f[*c_cat].empty()) {
      const auto& label = f[*c_cat];
      if (auto id = vocabulary.find(label)) {
        row.category = *id;
      } else if (options.strict_vocabulary) {
        throw Error(fmt::format("line {}: unknown category label '{}'", line_no, label));
      } else {
        row.category = vocabulary.intern(label);
      }
    }
    const auto& traj = f[c_traj];
    auto [it, inserted] = groups.try_emplace(traj, f[c_user], std::vector<Row>{});
    if (inserted) order.push_back(traj);
    else if (it->second.first != f[c_user]) {
      throw Error(fmt::format("line {}: trajectory '{}' assigned to two users", line_no, traj));
    }
    it->second.second.push_back(row);
    sum_a += row.a;
    sum_b += row.b;
    ++rows;
  }

  DatasetMetadata meta;
  meta.name = options.name.empty() ? path.stem().string() : options.name;
  if (geographic) {
    meta.crs = options.crs.value_or(
        rows ? Crs::azimuthal_equidistant(sum_a / static_cast<double>(rows), sum_b / static_cast<double>(rows))
             : Crs::azimuthal_equidistant(0.0, 0.0));
    if (meta.crs.kind == Crs::Kind::Metric) throw Error("lat/lon input requires a geographic projection");
  } else {
    meta.crs = Crs::metric();
  }
  meta.vocabulary = std::move(vocabulary);

  std::vector<Trajectory> trajectories;
  trajectories.reserve(order.size());
  for (const auto& id : order) {
    auto& [user, group] = groups[id];
    std::stable_sort(group.begin(), group.end(), [](const Row& l, const Row& r) { return l.t < r.t; });
    if (group.size() < options.min_length) continue;
    Trajectory t{id, user, {}};
    t.points.reserve(group.size());
    for (const auto& r : group) {
      TrajPoint p;
      if (geographic) {
        const LatLon ll{r.a, r.b};
        p.point = {meta.crs.forward(ll), ll};
      } else {
        p.point = {{r.b, r.a}, std::nullopt};
      }
      p.timestamp = r.t;
      p.category = r.category;
      t.points.push_back(p);
    }
    trajectories.push_back(std::move(t));
  }
  return Dataset(std::move(trajectories), std::move(meta));
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return csv_path.string() + ".meta.json";
}

std::string metadata_to_json(const DatasetMetadata& metadata) {
  nlohmann::ordered_json j;
  j["name"] = metadata.name;
  nlohmann::ordered_json crs;
  if (metadata.crs.kind == Crs::Kind::Metric) {
    crs["kind"] = "metric";
  } else {
    crs["kind"] = "aeqd";
    crs["lat0"] = metadata.crs.lat0;
    crs["lon0"] = metadata.crs.lon0;
  }
  j["crs"] = crs;
  j["categories"] = metadata.vocabulary.labels();
  return j.dump(2) + "\n";
}

DatasetMetadata metadata_from_json(const std::string& text) {
  DatasetMetadata meta;
  try {
    const auto j = json::parse(text);
    meta.name = j.value("name", "");
    const auto& crs = j.at("crs");
    const auto kind = crs.at("kind").get<std::string>();
    if (kind == "metric") meta.crs = Crs::metric();
    else if (kind == "aeqd") meta.crs = Crs::azimuthal_equidistant(crs.at("lat0"), crs.at("lon0"));
    else throw Error("unknown crs kind '" + kind + "'");
    meta.vocabulary = CategoryVocabulary(j.value("categories", std::vector<std::string>{}));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed dataset metadata: ") + e.what());
  }
  return meta;
}

Dataset load_dataset(const std::filesystem::path& path, IngestOptions options) {
  const auto sidecar = sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto meta = metadata_from_json(buffer.str());
    if (!options.crs && meta.crs.kind != Crs::Kind::Metric) options.crs = meta.crs;
    if (!options.vocabulary) options.vocabulary = meta.vocabulary;
    if (options.name.empty()) options.name = meta.name;
  }
  return ingest_csv(path, options);
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset '" + path.string() + "'");
  const auto& meta = dataset.metadata();
  const bool geographic = meta.crs.kind != Crs::Kind::Metric;
  const bool categories = !meta.vocabulary.empty();
  out << "user_id,traj_id,timestamp," << (geographic ? "lat,lon" : "x,y")
      << (categories ? ",category" : "") << '\n';
  for (const auto& t : dataset.trajectories()) {
    for (const auto& p : t.points) {
      double a = p.point.position.x;
      double b = p.point.position.y;
      if (geographic) {
        const LatLon ll = p.point.source.value_or(meta.crs.inverse(p.point.position));
        a = ll.lat;
        b = ll.lon;
      }
      out << csv_escape(t.user_id) << ',' << csv_escape(t.traj_id) << ','
          << fmt::format("{},{},{}", p.timestamp, a, b);
      if (categories) out << ',' << (p.category ? csv_escape(meta.vocabulary.label(*p.category)) : "");
      out << '\n';
    }
  }
  std::ofstream side(sidecar_path(path), std::ios::binary);
  if (!side) throw Error("cannot write metadata sidecar for '" + path.string() + "'");
  side << metadata_to_json(meta);
}

}  // namespace trajeval::mobility
