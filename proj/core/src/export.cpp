#include "lola/export.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lola {

using nlohmann::json;

namespace {

// Spans from well-formed diagnostics always resolve; clamp defensively so a
// bad span never takes down an export.
ResolvedSpan safe_resolve(std::string_view source, Span span) {
  try {
    return resolve_span(source, span);
  } catch (const std::out_of_range&) {
    Span clamped{std::min(span.begin, source.size()), std::min(span.end, source.size())};
    while (clamped.begin > 0 && (static_cast<unsigned char>(source[clamped.begin]) & 0xC0) == 0x80)
      --clamped.begin;
    while (clamped.end < source.size() &&
           (static_cast<unsigned char>(source[clamped.end]) & 0xC0) == 0x80)
      ++clamped.end;
    return resolve_span(source, clamped);
  }
}

const char* kind_name(StreamKind k) {
  switch (k) {
    case StreamKind::Input: return "input";
    case StreamKind::Output: return "output";
    case StreamKind::Trigger: return "trigger";
  }
  return "?";
}

const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Sync: return "sync";
    case EdgeKind::Offset: return "offset";
    case EdgeKind::Hold: return "hold";
    case EdgeKind::Window: return "window";
  }
  return "?";
}

std::uint64_t thickness(const Edge& e) {
  return e.kind == EdgeKind::Sync || e.kind == EdgeKind::Offset ? e.weight + 1 : 1;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Qualitative palette for pacing classes, sequential (light to dark) for
// memory bounds.
constexpr const char* kQualitative[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                        "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
constexpr const char* kSequential[] = {"#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
                                       "#4292c6", "#2171b5", "#08519c", "#08306b"};

std::string memory_color(std::size_t bound) {
  std::size_t n = std::size(kSequential);
  return kSequential[std::min(bound == 0 ? 0 : bound - 1, n - 1)];
}

}  // namespace

json span_to_json(std::string_view source, Span span) {
  ResolvedSpan r = safe_resolve(source, span);
  return {{"begin", span.begin},        {"end", span.end},
          {"startLine", r.start.line},  {"startColumn", r.start.column},
          {"endLine", r.end.line},      {"endColumn", r.end.column}};
}

json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics, std::string_view source) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    json related = json::array();
    for (const auto& r : d.related)
      related.push_back({{"message", r.note}, {"span", span_to_json(source, r.span)}});
    out.push_back({{"code", d.code},
                   {"severity", to_string(d.severity)},
                   {"message", d.message},
                   {"span", span_to_json(source, d.span)},
                   {"related", std::move(related)}});
  }
  return out;
}

json hints_to_json(const std::vector<TypeHint>& hints, std::string_view source) {
  json out = json::array();
  for (const auto& h : hints) {
    out.push_back({{"stream", h.name},
                   {"kind", kind_name(h.stream.kind)},
                   {"index", h.stream.index},
                   {"valueType", h.value_type},
                   {"pacing", h.pacing},
                   {"text", h.text()},
                   {"span", span_to_json(source, h.span)}});
  }
  return out;
}

json analysis_to_json(const AnalysisReport& report) {
  return {{"ok", report.ok()},
          {"diagnostics", diagnostics_to_json(report.diagnostics, report.source_text)},
          {"hints", hints_to_json(report.hints, report.source_text)}};
}

std::string node_id(StreamId id) {
  switch (id.kind) {
    case StreamKind::Input: return "in:" + std::to_string(id.index);
    case StreamKind::Output: return "out:" + std::to_string(id.index);
    case StreamKind::Trigger: return "trig:" + std::to_string(id.index);
  }
  return "?";
}

std::string pacing_class(const TypedSpecification& typed, StreamId id) {
  const PacingType& p = typed.pacing_types.at(id);
  if (p.is_periodic()) return "p:" + to_string(p.frequency());
  if (p.is_event()) {
    const auto& inputs = typed.specification.inputs;
    return "e:" + p.formula().to_string([&](std::size_t i) { return inputs[i].name; });
  }
  return "c";
}

json graph_to_json(const AnalysisReport& report) {
  if (!report.typed || !report.graph || !report.memory)
    throw std::logic_error("graph export requires a complete analysis");
  const TypedSpecification& t = *report.typed;
  const Specification& spec = t.specification;
  json nodes = json::array();
  for (StreamId id : report.graph->vertices) {
    nodes.push_back({{"id", node_id(id)},
                     {"name", spec.stream_name(id)},
                     {"kind", kind_name(id.kind)},
                     {"valueType", t.value_types.at(id).to_string()},
                     {"pacing", t.pacing_string(id)},
                     {"pacingClass", pacing_class(t, id)},
                     {"memoryBound", report.memory->per_stream.at(id)},
                     {"span", span_to_json(report.source_text, spec.stream_span(id))}});
  }
  json edges = json::array();
  for (const Edge& e : report.graph->edges) {
    json occurrences = json::array();
    for (const Span& s : e.occurrences) occurrences.push_back(span_to_json(report.source_text, s));
    json je = {{"from", node_id(e.from)},
               {"to", node_id(e.to)},
               {"fromName", spec.stream_name(e.from)},
               {"toName", spec.stream_name(e.to)},
               {"kind", edge_kind_name(e.kind)},
               {"weight", e.weight},
               {"thickness", thickness(e)},
               {"occurrences", std::move(occurrences)}};
    if (e.duration) je["duration"] = to_string(*e.duration);
    edges.push_back(std::move(je));
  }
  return {{"version", 1}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::string graph_to_dot(const AnalysisReport& report, GraphView view) {
  if (!report.typed || !report.graph || !report.memory)
    throw std::logic_error("graph export requires a complete analysis");
  const TypedSpecification& t = *report.typed;
  const Specification& spec = t.specification;

  std::map<std::string, std::size_t> class_color;
  for (StreamId id : report.graph->vertices) {
    std::string key = pacing_class(t, id);
    if (!class_color.count(key)) {
      std::size_t next = class_color.size();
      class_color[key] = next;
    }
  }

  std::string out = "digraph lola {\n  rankdir=TB;\n  node [style=filled, fontname=\"Helvetica\"];\n";
  for (StreamId id : report.graph->vertices) {
    std::string cls = pacing_class(t, id);
    std::size_t mem = report.memory->per_stream.at(id);
    std::string color = view == GraphView::Pacing
                            ? kQualitative[class_color[cls] % std::size(kQualitative)]
                            : memory_color(mem);
    const char* shape = id.kind == StreamKind::Input ? "box"
                        : id.kind == StreamKind::Trigger ? "octagon"
                                                         : "ellipse";
    std::string label = dot_escape(spec.stream_name(id)) + "\\n" +
                        dot_escape(t.value_types.at(id).to_string() + " " + t.pacing_string(id));
    out += "  \"" + node_id(id) + "\" [label=\"" + label + "\", shape=" + shape +
           ", fillcolor=\"" + color + "\", rtlola_pacing=\"" + dot_escape(cls) +
           "\", rtlola_memory=" + std::to_string(mem) + "];\n";
  }
  for (const Edge& e : report.graph->edges) {
    std::string label;
    switch (e.kind) {
      case EdgeKind::Sync: label = "0"; break;
      case EdgeKind::Offset: label = "-" + std::to_string(e.weight); break;
      case EdgeKind::Hold: label = "hold"; break;
      case EdgeKind::Window: label = e.duration ? to_string(*e.duration) : "window"; break;
    }
    const char* style = e.kind == EdgeKind::Hold || e.kind == EdgeKind::Window ? "dashed" : "solid";
    out += "  \"" + node_id(e.from) + "\" -> \"" + node_id(e.to) + "\" [label=\"" +
           dot_escape(label) + "\", penwidth=" + std::to_string(thickness(e)) + ", style=" + style +
           ", rtlola_kind=\"" + edge_kind_name(e.kind) + "\"];\n";
  }
  out += "}\n";
  return out;
}

namespace {

std::string_view line_text(std::string_view source, std::size_t line) {
  std::size_t start = 0;
  for (std::size_t l = 1; l < line; ++l) {
    std::size_t nl = source.find('\n', start);
    if (nl == std::string_view::npos) return {};
    start = nl + 1;
  }
  std::size_t end = source.find('\n', start);
  std::string_view text = source.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                             : end - start);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  return text;
}

// Display width of code points [from, to) of a line, 1-based, with tabs
// expanded to four columns.
std::size_t display_width(std::string_view line, std::size_t from, std::size_t to) {
  std::size_t width = 0;
  std::size_t column = 1;
  for (char c : line) {
    if ((static_cast<unsigned char>(c) & 0xC0) == 0x80) continue;
    if (column >= from && column < to) width += c == '\t' ? 4 : 1;
    ++column;
  }
  if (to > column) width += std::min(to, column + 1) - std::max(from, column);
  return width;
}

std::string expand_tabs(std::string_view line) {
  std::string out;
  for (char c : line) {
    if (c == '\t') {
      out += "    ";
    } else {
      out += c;
    }
  }
  return out;
}

void render_snippet(std::string& out, std::string_view source, std::string_view file,
                    Span span, const std::string& gutter_pad, const char* arrow, char marker,
                    const std::string& label) {
  ResolvedSpan r = safe_resolve(source, span);
  out += gutter_pad + arrow + std::string(file) + ":" + std::to_string(r.start.line) + ":" +
         std::to_string(r.start.column) + "\n";
  std::string_view text = line_text(source, r.start.line);
  std::string number = std::to_string(r.start.line);
  std::string pad(gutter_pad.size() - number.size(), ' ');
  out += gutter_pad + " |\n";
  out += number + pad + " | " + expand_tabs(text) + "\n";
  std::size_t end_column = r.end.line == r.start.line ? r.end.column : std::string_view::npos;
  std::size_t indent = display_width(text, 1, r.start.column);
  std::size_t width = end_column == std::string_view::npos
                          ? display_width(text, r.start.column, text.size() + 2)
                          : display_width(text, r.start.column, end_column);
  width = std::max<std::size_t>(width, 1);
  out += gutter_pad + " | " + std::string(indent, ' ') + std::string(width, marker);
  if (!label.empty()) out += " " + label;
  out += "\n";
}

}  // namespace

std::string render_diagnostics(const std::vector<Diagnostic>& diagnostics, std::string_view source,
                               std::string_view file_name) {
  std::string out;
  for (const auto& d : diagnostics) {
    std::size_t widest = safe_resolve(source, d.span).start.line;
    for (const auto& r : d.related) widest = std::max(widest, safe_resolve(source, r.span).start.line);
    std::string gutter(std::to_string(widest).size(), ' ');
    out += std::string(to_string(d.severity)) + "[" + d.code + "]: " + d.message + "\n";
    render_snippet(out, source, file_name, d.span, gutter, "--> ", '^', "");
    for (const auto& r : d.related) render_snippet(out, source, file_name, r.span, gutter, "::: ", '-', r.note);
    out += "\n";
  }
  return out;
}

}  // namespace lola
