#include "trajeval/framework/report.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <nlohmann/json.hpp>

#include "trajeval/error.hpp"
#include "trajeval/metrics/registry.hpp"

namespace trajeval::framework {

using metrics::Direction;
using metrics::MetricResult;
using metrics::Status;
using nlohmann::ordered_json;

grid::GridSpec derive_grid(const mobility::Dataset& real, const std::optional<grid::GridSpec>& grid) {
  if (grid) {
    grid->validate();
    return *grid;
  }
  return grid::GridSpec{grid::select_cell_size(real).edge_m, 0.0, 0.0};
}

UtilityVector assemble_utility_vector(const mobility::Dataset& real, const mobility::Dataset& syn,
                                      const MetricSelection& selection, const EvaluationEnvironment& env,
                                      const std::string& model) {
  validate_selection(selection);
  env.grid.validate();
  const auto real_grid = grid::discretize(real, env.grid);
  const auto syn_grid = grid::discretize(syn, env.grid);
  const metrics::EvaluationContext context{real, syn, real_grid, syn_grid, env.layers};
  UtilityVector out{model, {}};
  for (const auto& choice : selection.metrics) {
    out.entries.push_back(metrics::evaluate_metric(metrics::find_metric(choice.metric), context, choice.params));
  }
  return out;
}

std::vector<MetricColumn> columns_for(const MetricSelection& selection) {
  std::vector<MetricColumn> out;
  for (const auto& choice : selection.metrics) {
    const auto& info = metrics::find_metric(choice.metric);
    out.push_back({info.id, info.label, info.cell, info.direction, info.unit});
  }
  return out;
}

UtilityReport compare_models(std::vector<MetricColumn> columns, std::vector<UtilityVector> models,
                             std::optional<UtilityVector> original) {
  UtilityReport report;
  report.columns = std::move(columns);
  auto check = [&](const UtilityVector& v) {
    if (v.entries.size() != report.columns.size()) throw Error("utility vector '" + v.model + "' has wrong length");
    for (std::size_t c = 0; c < v.entries.size(); ++c) {
      if (v.entries[c].metric != report.columns[c].id) throw Error("utility vector '" + v.model + "' out of order");
    }
  };
  if (original) check(*original);
  for (auto& v : models) {
    check(v);
    report.models.push_back({std::move(v), std::vector<bool>(report.columns.size(), false), 0});
  }
  report.original = std::move(original);
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    std::optional<double> best;
    for (const auto& row : report.models) {
      const auto& e = row.vector.entries[c];
      if (e.status != Status::Ok || !e.value) continue;
      if (!best || (report.columns[c].direction == Direction::LowerIsBetter ? *e.value < *best : *e.value > *best)) {
        best = *e.value;
      }
    }
    if (!best) continue;
    for (auto& row : report.models) {
      const auto& e = row.vector.entries[c];
      if (e.status == Status::Ok && e.value && *e.value == *best) {
        row.best[c] = true;
        ++row.best_count;
      }
    }
  }
  return report;
}

UtilityReport evaluate_models(const mobility::Dataset& real,
                              const std::vector<std::pair<std::string, mobility::Dataset>>& models,
                              const MetricSelection& selection, const EvaluationEnvironment& env,
                              bool include_original) {
  std::optional<UtilityVector> original;
  if (include_original) original = assemble_utility_vector(real, real, selection, env, "Original");
  std::vector<UtilityVector> vectors;
  for (const auto& [name, syn] : models) vectors.push_back(assemble_utility_vector(real, syn, selection, env, name));
  auto report = compare_models(columns_for(selection), std::move(vectors), std::move(original));
  report.selection = selection.name;
  report.grid = env.grid;
  return report;
}

bool has_failures(const UtilityReport& report) {
  auto bad = [](const UtilityVector& v) {
    for (const auto& e : v.entries) {
      if (e.status != Status::Ok) return true;
    }
    return false;
  };
  if (report.original && bad(*report.original)) return true;
  for (const auto& row : report.models) {
    if (bad(row.vector)) return true;
  }
  return false;
}

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "svg") return ReportFormat::Svg;
  throw Error("unknown report format '" + text + "' (json, csv, svg)");
}

std::string extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return ".json";
    case ReportFormat::Csv: return ".csv";
    case ReportFormat::Svg: return ".svg";
  }
  return "";
}

std::string format_value(const MetricResult& entry) {
  if (entry.status != Status::Ok || !entry.value) return "N/A";
  const double v = *entry.value;
  if (v > 0.0 && v < 0.0005) return "<0.001";
  const auto text = fmt::format("{:.3f}", v);
  return text == "-0.000" ? "0.000" : text;
}

namespace {

ordered_json entry_to_json(const MetricResult& e) {
  ordered_json j;
  j["metric"] = e.metric;
  j["level"] = metrics::to_string(e.cell.level);
  j["notion"] = metrics::to_string(e.cell.notion);
  j["direction"] = metrics::to_string(e.direction);
  j["unit"] = e.unit;
  j["status"] = metrics::to_string(e.status);
  j["value"] = e.value ? ordered_json(*e.value) : ordered_json(nullptr);
  j["excluded"] = e.excluded;
  j["note"] = e.note;
  return j;
}

MetricResult entry_from_json(const ordered_json& j) {
  MetricResult e;
  e.metric = j.at("metric").get<std::string>();
  e.cell = {metrics::level_from_string(j.at("level").get<std::string>()),
            metrics::notion_from_string(j.at("notion").get<std::string>())};
  e.direction = metrics::direction_from_string(j.at("direction").get<std::string>());
  e.unit = j.at("unit").get<std::string>();
  e.status = metrics::status_from_string(j.at("status").get<std::string>());
  if (!j.at("value").is_null()) e.value = j.at("value").get<double>();
  e.excluded = j.at("excluded").get<std::size_t>();
  e.note = j.at("note").get<std::string>();
  return e;
}

ordered_json vector_to_json(const UtilityVector& v) {
  ordered_json j;
  j["model"] = v.model;
  j["entries"] = ordered_json::array();
  for (const auto& e : v.entries) j["entries"].push_back(entry_to_json(e));
  return j;
}

UtilityVector vector_from_json(const ordered_json& j) {
  UtilityVector v;
  v.model = j.at("model").get<std::string>();
  for (const auto& e : j.at("entries")) v.entries.push_back(entry_from_json(e));
  return v;
}

}  // namespace

std::string report_to_json(const UtilityReport& report) {
  ordered_json j;
  j["selection"] = report.selection;
  if (report.grid) {
    j["grid"] = {{"cell_edge_m", report.grid->cell_edge_m},
                 {"offset_x", report.grid->offset_x},
                 {"offset_y", report.grid->offset_y}};
  } else {
    j["grid"] = nullptr;
  }
  j["columns"] = ordered_json::array();
  for (const auto& c : report.columns) {
    j["columns"].push_back({{"id", c.id},
                            {"label", c.label},
                            {"level", metrics::to_string(c.cell.level)},
                            {"notion", metrics::to_string(c.cell.notion)},
                            {"direction", metrics::to_string(c.direction)},
                            {"unit", c.unit}});
  }
  j["original"] = report.original ? vector_to_json(*report.original) : ordered_json(nullptr);
  j["models"] = ordered_json::array();
  for (const auto& row : report.models) {
    auto m = vector_to_json(row.vector);
    m["best"] = row.best;
    m["best_count"] = row.best_count;
    j["models"].push_back(std::move(m));
  }
  return j.dump(2) + "\n";
}

UtilityReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    UtilityReport r;
    r.selection = j.at("selection").get<std::string>();
    if (!j.at("grid").is_null()) {
      const auto& g = j["grid"];
      r.grid = grid::GridSpec{g.at("cell_edge_m").get<double>(), g.at("offset_x").get<double>(),
                              g.at("offset_y").get<double>()};
    }
    for (const auto& c : j.at("columns")) {
      r.columns.push_back({c.at("id").get<std::string>(), c.at("label").get<std::string>(),
                           {metrics::level_from_string(c.at("level").get<std::string>()),
                            metrics::notion_from_string(c.at("notion").get<std::string>())},
                           metrics::direction_from_string(c.at("direction").get<std::string>()),
                           c.at("unit").get<std::string>()});
    }
    if (!j.at("original").is_null()) r.original = vector_from_json(j["original"]);
    for (const auto& m : j.at("models")) {
      r.models.push_back({vector_from_json(m), m.at("best").get<std::vector<bool>>(),
                          m.at("best_count").get<std::size_t>()});
    }
    return r;
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("malformed report JSON: ") + e.what());
  }
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::string& model, const MetricResult& e, bool best) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_field(model), e.metric, metrics::to_string(e.cell.level),
                     metrics::to_string(e.cell.notion), metrics::to_string(e.direction), csv_field(e.unit),
                     e.value ? fmt::format("{}", *e.value) : "", metrics::to_string(e.status), best ? 1 : 0,
                     csv_field(e.note));
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string report_to_csv(const UtilityReport& report) {
  std::string out = "model,metric,level,notion,direction,unit,value,status,best,note\n";
  if (report.original) {
    for (const auto& e : report.original->entries) out += csv_row(report.original->model, e, false);
  }
  for (const auto& row : report.models) {
    for (std::size_t c = 0; c < row.vector.entries.size(); ++c) {
      out += csv_row(row.vector.model, row.vector.entries[c], row.best[c]);
    }
  }
  return out;
}

std::string report_to_svg(const UtilityReport& report) {
  constexpr int name_width = 170, col_width = 190, row_height = 24, pad = 10;
  std::vector<std::vector<std::size_t>> blocks(2);
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    blocks[report.columns[c].cell.level == metrics::Level::Trajectory ? 0 : 1].push_back(c);
  }
  std::size_t max_cols = std::max(blocks[0].size(), blocks[1].size());
  const std::size_t data_rows = report.models.size() + (report.original ? 1 : 0);
  const int width = 2 * pad + name_width + static_cast<int>(max_cols) * col_width;
  int height = 2 * pad + row_height;
  for (const auto& b : blocks) {
    if (!b.empty()) height += static_cast<int>(3 + data_rows) * row_height;
  }
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  int y = pad + row_height - 6;
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-weight=\"bold\">{}</text>\n", pad, y,
                     xml_escape(report.selection.empty() ? "Utility report" : report.selection));
  const char* level_names[2] = {"Trajectory level", "Point level"};
  for (std::size_t b = 0; b < 2; ++b) {
    if (blocks[b].empty()) continue;
    y += row_height;
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-style=\"italic\">{}</text>\n", pad, y, level_names[b]);
    for (std::size_t k = 0; k < blocks[b].size(); ++k) {
      const auto& col = report.columns[blocks[b][k]];
      const int x = pad + name_width + static_cast<int>(k) * col_width + col_width / 2;
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, y, xml_escape(col.label));
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#555\">({})</text>\n", x,
                         y + row_height, xml_escape(col.unit));
    }
    y += row_height;
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", pad, y + 6, width - pad,
                       y + 6);
    auto draw_row = [&](const UtilityVector& v, const std::vector<bool>* best) {
      y += row_height;
      svg += fmt::format("<text x=\"{}\" y=\"{}\" font-weight=\"bold\">{}</text>\n", pad, y, xml_escape(v.model));
      for (std::size_t k = 0; k < blocks[b].size(); ++k) {
        const auto c = blocks[b][k];
        const int x = pad + name_width + static_cast<int>(k) * col_width + col_width / 2;
        const bool bold = best != nullptr && (*best)[c];
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\"{}>{}</text>\n", x, y,
                           bold ? " font-weight=\"bold\"" : "", xml_escape(format_value(v.entries[c])));
      }
    };
    if (report.original) draw_row(*report.original, nullptr);
    for (const auto& row : report.models) draw_row(row.vector, &row.best);
    y += row_height / 2;
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_report(const UtilityReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return report_to_json(report);
    case ReportFormat::Csv: return report_to_csv(report);
    case ReportFormat::Svg: return report_to_svg(report);
  }
  return {};
}

void emit_report(const UtilityReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << render_report(report, format);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace trajeval::framework
