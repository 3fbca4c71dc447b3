#include "lola/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <map>

namespace lola {

namespace {

struct Cell {
  std::string text;
  Span span;
  bool quoted = false;
};

struct Row {
  std::size_t line = 0;
  Span span;
  std::vector<Cell> cells;
};

// Splits RFC 4180 style CSV. Quoted fields may contain separators, doubled
// quotes and line breaks. Blank lines are skipped.
std::vector<Row> split_rows(std::string_view text, std::vector<Diagnostic>& diags) {
  std::vector<Row> rows;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    Row row;
    row.line = line;
    row.span.begin = i;
    bool row_done = false;
    while (!row_done) {
      Cell cell;
      cell.span.begin = i;
      if (i < text.size() && text[i] == '"') {
        cell.quoted = true;
        ++i;
        bool closed = false;
        while (i < text.size()) {
          if (text[i] == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              cell.text += '"';
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (text[i] == '\n') ++line;
          cell.text += text[i++];
        }
        if (!closed) {
          diags.push_back({codes::kBadCell, Severity::Error,
                           "unterminated quoted cell on line " + std::to_string(row.line),
                           {cell.span.begin, text.size()}, {}});
        }
        // Anything between the closing quote and the separator is dropped.
        while (i < text.size() && text[i] != ',' && text[i] != '\n') ++i;
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n') cell.text += text[i++];
        if (!cell.text.empty() && cell.text.back() == '\r') cell.text.pop_back();
      }
      cell.span.end = i;
      row.cells.push_back(std::move(cell));
      if (i < text.size() && text[i] == ',') {
        ++i;
      } else {
        row_done = true;
        if (i < text.size()) {
          ++i;
          ++line;
        }
      }
    }
    row.span.end = i;
    bool blank = row.cells.size() == 1 && !row.cells[0].quoted &&
                 row.cells[0].text.find_first_not_of(" \t\r") == std::string::npos;
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<Value> value_from_plain(const nlohmann::json& j, const ValueType& type) {
  switch (type.kind) {
    case TypeKind::Int64:
      if (j.is_number_integer()) {
        if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
          return std::nullopt;
        return Value::of_int(j.get<std::int64_t>());
      }
      return std::nullopt;
    case TypeKind::UInt64:
      if (j.is_number_unsigned()) return Value::of_uint(j.get<std::uint64_t>());
      return std::nullopt;
    case TypeKind::Float64:
      if (j.is_number()) return Value::of_float(j.get<double>());
      return std::nullopt;
    case TypeKind::Bool:
      if (j.is_boolean()) return Value::of_bool(j.get<bool>());
      return std::nullopt;
    case TypeKind::String:
      if (j.is_string()) return Value::of_string(j.get<std::string>());
      return std::nullopt;
    case TypeKind::Tuple: {
      if (!j.is_array() || j.size() != type.elements.size()) return std::nullopt;
      Value::Tuple elems;
      for (std::size_t k = 0; k < j.size(); ++k) {
        auto e = value_from_plain(j[k], type.elements[k]);
        if (!e) return std::nullopt;
        elems.push_back(std::move(*e));
      }
      return Value::of_tuple(std::move(elems));
    }
  }
  return std::nullopt;
}

std::optional<Value> parse_cell(const Cell& cell, const ValueType& type) {
  if (type.kind == TypeKind::String) return Value::of_string(cell.text);
  std::string_view s = trim(cell.text);
  switch (type.kind) {
    case TypeKind::Int64:
      if (auto v = parse_number<std::int64_t>(s)) return Value::of_int(*v);
      return std::nullopt;
    case TypeKind::UInt64:
      if (!s.empty() && s.front() == '-') return std::nullopt;
      if (auto v = parse_number<std::uint64_t>(s)) return Value::of_uint(*v);
      return std::nullopt;
    case TypeKind::Float64:
      if (auto v = parse_number<double>(s)) return Value::of_float(*v);
      return std::nullopt;
    case TypeKind::Bool:
      if (s == "true") return Value::of_bool(true);
      if (s == "false") return Value::of_bool(false);
      return std::nullopt;
    case TypeKind::Tuple: {
      auto j = nlohmann::json::parse(s, nullptr, false);
      if (j.is_discarded()) return std::nullopt;
      return value_from_plain(j, type);
    }
    case TypeKind::String: break;
  }
  return std::nullopt;
}

bool is_empty_cell(const Cell& cell) {
  return !cell.quoted && trim(cell.text).empty();
}

}  // namespace

Outcome<std::vector<Event>> parse_trace(std::string_view csv, const MirSpec& mir) {
  Outcome<std::vector<Event>> out;
  auto& diags = out.diagnostics;
  std::vector<Row> rows = split_rows(csv, diags);
  if (has_errors(diags)) return out;

  std::size_t inputs = mir.input_count();
  std::vector<std::string> input_names(mir.value_columns.begin(),
                                       mir.value_columns.begin() + static_cast<std::ptrdiff_t>(inputs));
  std::optional<std::size_t> time_col;
  std::vector<std::optional<std::size_t>> column_input;  // by CSV column
  std::vector<std::optional<std::size_t>> input_column(inputs);
  Span header_span{0, 0};

  if (!rows.empty()) {
    const Row& header = rows.front();
    header_span = header.span;
    for (std::size_t c = 0; c < header.cells.size(); ++c) {
      std::string name(trim(header.cells[c].text));
      column_input.emplace_back();
      if (name == "time" && !time_col) {
        time_col = c;
        continue;
      }
      auto it = std::find(input_names.begin(), input_names.end(), name);
      if (it == input_names.end() || input_column[it - input_names.begin()]) {
        diags.push_back({codes::kUnknownColumn, Severity::Error,
                         "column `" + name + "` does not name an input stream",
                         header.cells[c].span, {}});
        continue;
      }
      auto idx = static_cast<std::size_t>(it - input_names.begin());
      input_column[idx] = c;
      column_input.back() = idx;
    }
  }
  if (!time_col)
    diags.push_back({codes::kMissingColumn, Severity::Error, "the trace has no `time` column",
                     header_span, {}});
  for (std::size_t i = 0; i < inputs; ++i) {
    if (!input_column[i])
      diags.push_back({codes::kMissingColumn, Severity::Error,
                       "the trace has no column for input `" + input_names[i] + "`", header_span,
                       {}});
  }
  if (has_errors(diags)) return out;

  std::vector<Event> events;
  std::optional<Rational> last_time;
  std::size_t width = rows.front().cells.size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const Row& row = rows[r];
    std::string where = "line " + std::to_string(row.line);
    if (row.cells.size() != width) {
      diags.push_back({codes::kBadCell, Severity::Error,
                       where + " has " + std::to_string(row.cells.size()) + " cells, expected " +
                           std::to_string(width),
                       row.span, {}});
      continue;
    }
    Event ev;
    ev.inputs.assign(inputs, std::nullopt);
    const Cell& tcell = row.cells[*time_col];
    auto t = Rational::parse_decimal(trim(tcell.text));
    if (!t || t->is_negative()) {
      diags.push_back({codes::kBadCell, Severity::Error,
                       where + ", column `time`: `" + tcell.text +
                           "` is not a non-negative decimal number of seconds",
                       tcell.span, {}});
      continue;
    }
    ev.time = *t;
    bool row_ok = true;
    for (std::size_t c = 0; c < width; ++c) {
      if (!column_input[c]) continue;
      std::size_t idx = *column_input[c];
      const Cell& cell = row.cells[c];
      if (is_empty_cell(cell)) continue;
      const ValueType& type = mir.streams[mir.event_layout[idx]].type;
      auto v = parse_cell(cell, type);
      if (!v) {
        diags.push_back({codes::kBadCell, Severity::Error,
                         where + ", column `" + input_names[idx] + "`: `" + cell.text +
                             "` is not a valid " + type.to_string(),
                         cell.span, {}});
        row_ok = false;
        continue;
      }
      ev.inputs[idx] = std::move(*v);
    }
    if (!row_ok) continue;
    if (std::none_of(ev.inputs.begin(), ev.inputs.end(), [](const auto& v) { return v.has_value(); })) {
      diags.push_back({codes::kEmptyRow, Severity::Error, where + " has no input value", row.span, {}});
      continue;
    }
    if (last_time && ev.time < *last_time) {
      diags.push_back({codes::kTraceNotMonotonic, Severity::Error,
                       where + ": time " + ev.time.to_decimal() + " is earlier than the previous " +
                           last_time->to_decimal(),
                       tcell.span, {}});
      continue;
    }
    last_time = ev.time;
    events.push_back(std::move(ev));
  }
  if (!has_errors(diags)) out.value = std::move(events);
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string cell_text(const Value& v) {
  switch (v.kind()) {
    case TypeKind::String: {
      std::string out = "\"";
      for (char c : v.as_string()) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + "\"";
    }
    case TypeKind::Tuple: return csv_field(value_to_plain_json(v).dump());
    default: return v.to_string();
  }
}

// Times that are not finite decimals are rounded so that the digit count
// stays within what parse_trace can read back.
std::string time_text(const Rational& t) {
  int whole_digits = static_cast<int>(std::to_string(t.floor()).size());
  return t.to_decimal(std::max(1, 18 - whole_digits));
}

}  // namespace

std::string write_trace(const std::vector<Event>& events, const MirSpec& mir) {
  std::string out = "time";
  for (std::size_t i = 0; i < mir.input_count(); ++i) out += "," + csv_field(mir.value_columns[i]);
  out += '\n';
  for (const auto& ev : events) {
    out += time_text(ev.time);
    for (std::size_t i = 0; i < mir.input_count(); ++i) {
      out += ',';
      if (i < ev.inputs.size() && ev.inputs[i]) out += cell_text(*ev.inputs[i]);
    }
    out += '\n';
  }
  return out;
}

std::string write_verdicts(const std::vector<Verdict>& verdicts, const MirSpec& mir,
                           OutputFormat format, VerdictMode mode) {
  std::string out;
  bool with_values = mode != VerdictMode::TriggersOnly;
  if (format == OutputFormat::Csv) {
    out = "time,kind";
    if (with_values)
      for (const auto& c : mir.value_columns) out += "," + csv_field(c);
    for (const auto& t : mir.triggers) out += ",Trigger " + std::to_string(t.index);
    out += '\n';
  }
  for (const auto& raw : verdicts) {
    if (!with_values && raw.triggers.empty()) continue;
    Verdict v = project_verdict(raw, mode);
    if (format == OutputFormat::JsonLines) {
      out += verdict_to_json(v, mir).dump();
      out += '\n';
      continue;
    }
    out += v.time.to_decimal();
    out += ',';
    out += to_string(v.kind);
    if (with_values) {
      for (std::size_t c = 0; c < mir.value_columns.size(); ++c) {
        out += ',';
        if (c < v.values.size() && v.values[c]) {
          const Value& val = *v.values[c];
          out += val.kind() == TypeKind::String ? csv_field(val.as_string()) : cell_text(val);
        }
      }
    }
    for (const auto& t : mir.triggers) {
      out += ',';
      for (const auto& f : v.triggers)
        if (f.index == t.index) out += csv_field(f.message);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json plot_data(const std::vector<Verdict>& verdicts, const MirSpec& mir) {
  using nlohmann::json;
  json series = json::array();
  std::vector<std::size_t> columns;
  std::vector<ValueType> column_types(mir.value_columns.size());
  for (const auto& s : mir.streams)
    if (s.value_slot) column_types[*s.value_slot] = s.type;
  for (std::size_t c = 0; c < mir.value_columns.size(); ++c) {
    const ValueType& t = column_types[c];
    if (t.is_numeric() || t.kind == TypeKind::Bool) columns.push_back(c);
  }
  for (std::size_t c : columns) {
    json points = json::array();
    for (const auto& v : verdicts) {
      if (c >= v.values.size() || !v.fresh[c] || !v.values[c]) continue;
      double y = v.values[c]->to_plot_number();
      if (!std::isfinite(y)) continue;
      points.push_back(json::array({v.time.to_double(), y}));
    }
    series.push_back({{"stream", mir.value_columns[c]}, {"points", std::move(points)}});
  }
  json triggers = json::array();
  for (const auto& t : mir.triggers) {
    json times = json::array();
    for (const auto& v : verdicts)
      for (const auto& f : v.triggers)
        if (f.index == t.index) times.push_back(v.time.to_double());
    triggers.push_back({{"index", t.index}, {"message", t.message}, {"times", std::move(times)}});
  }
  return {{"series", std::move(series)}, {"triggers", std::move(triggers)}};
}

}  // namespace lola
