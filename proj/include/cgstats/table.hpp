#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgstats/format.hpp"

namespace cgstats {

enum class TableKind { Rank, Sylow, Moments };
enum class TableFormat { Markdown, Csv, Json };

inline TableFormat parse_table_format(const std::string& s) {
  if (s == "markdown") return TableFormat::Markdown;
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  throw std::invalid_argument("unknown format '" + s + "'");
}

// Row/column table of probabilities, frequencies and their ratios.
// columns[0] names the row-label column; cells of a row line up with
// columns[1..].  A cell may carry any subset of {observed, predicted,
// ratio}; the text renderers display ratio if present, else observed, else
// predicted, which lets one table type mirror both the prediction rows and
// the per-bin rows of the comparison tables.  JSON output keeps every field.
struct DistributionTable {
  struct Cell {
    std::optional<double> observed;
    std::optional<double> predicted;
    std::optional<double> ratio;

    std::optional<double> display() const {
      if (ratio) return ratio;
      if (observed) return observed;
      return predicted;
    }
  };
  struct Row {
    std::string label;
    std::vector<Cell> cells;
  };

  std::string title;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string render_cell(const DistributionTable::Cell& c, bool tight) {
  auto v = c.display();
  if (!v) return "";
  if (c.ratio && !tight) return format_sig(*v, 4);
  // probabilities and frequencies: table style; larger magnitudes: plain
  if (*v != 0.0 && std::fabs(*v) < 1.0) return format_prob(*v, 4);
  return format_sig(*v, 4);
}

}  // namespace detail

inline std::string render(const DistributionTable& t, TableFormat fmt) {
  std::string out;
  switch (fmt) {
    case TableFormat::Markdown: {
      if (!t.title.empty()) out += "### " + t.title + "\n\n";
      out += "|";
      for (const auto& c : t.columns) out += " " + c + " |";
      out += "\n|";
      for (size_t i = 0; i < t.columns.size(); ++i) out += " --- |";
      out += "\n";
      for (const auto& r : t.rows) {
        out += "| " + r.label + " |";
        for (const auto& c : r.cells) out += " " + detail::render_cell(c, false) + " |";
        out += "\n";
      }
      for (const auto& n : t.notes) out += "\n*" + n + "*\n";
      break;
    }
    case TableFormat::Csv: {
      out += t.columns.empty() ? "" : t.columns[0];
      for (size_t i = 1; i < t.columns.size(); ++i) out += "," + t.columns[i];
      out += "\n";
      for (const auto& r : t.rows) {
        out += r.label;
        for (const auto& c : r.cells) {
          auto v = c.display();
          out += ",";
          if (v) out += format_full(*v);
        }
        out += "\n";
      }
      break;
    }
    case TableFormat::Json: {
      nlohmann::json j;
      j["title"] = t.title;
      j["columns"] = t.columns;
      j["rows"] = nlohmann::json::array();
      for (const auto& r : t.rows) {
        nlohmann::json jr;
        jr["label"] = r.label;
        jr["cells"] = nlohmann::json::array();
        for (const auto& c : r.cells) {
          nlohmann::json jc = nlohmann::json::object();
          if (c.observed) jc["observed"] = *c.observed;
          if (c.predicted) jc["predicted"] = *c.predicted;
          if (c.ratio) jc["ratio"] = *c.ratio;
          jr["cells"].push_back(jc);
        }
        j["rows"].push_back(jr);
      }
      if (!t.notes.empty()) j["notes"] = t.notes;
      out = j.dump(2);
      out += "\n";
      break;
    }
  }
  return out;
}

}  // namespace cgstats
