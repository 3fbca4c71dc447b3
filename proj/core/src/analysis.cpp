#include "lola/analysis.hpp"

#include <algorithm>
#include <functional>

#include "lola/parser.hpp"

namespace lola {

std::string TypedSpecification::pacing_string(StreamId id) const {
  return pacing_types.at(id).to_string(
      [&](std::size_t i) { return specification.inputs[i].name; });
}

Outcome<TypedSpecification> type_analysis(Specification resolved) {
  Outcome<TypedSpecification> out;
  auto values = value_type_analysis(resolved);
  auto pacing = pacing_type_analysis(resolved);
  out.diagnostics = std::move(values.diagnostics);
  out.diagnostics.insert(out.diagnostics.end(), pacing.diagnostics.begin(),
                         pacing.diagnostics.end());
  std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.span.begin < b.span.begin; });
  if (!values.ok() || !pacing.ok()) return out;
  TypedSpecification typed;
  typed.value_types = std::move(values.value->streams);
  typed.expression_types = std::move(values.value->expressions);
  typed.pacing_types = std::move(*pacing.value);
  typed.specification = std::move(resolved);
  out.value = std::move(typed);
  return out;
}

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Sync: return "sync";
    case EdgeKind::Offset: return "offset";
    case EdgeKind::Hold: return "hold";
    case EdgeKind::Window: return "window";
  }
  return "?";
}

namespace {

DependencyGraph build_graph(const Specification& spec) {
  DependencyGraph g;
  g.vertices = spec.all_streams();
  for (StreamId from : g.vertices) {
    const Expr* body = spec.stream_expression(from);
    if (body == nullptr) continue;
    std::vector<Edge> local;
    walk(*body, [&](const Expr& e) {
      if (!e.target) return;
      Edge edge;
      edge.from = from;
      edge.to = *e.target;
      switch (e.kind) {
        case Expr::Kind::StreamRef: edge.kind = EdgeKind::Sync; break;
        case Expr::Kind::Offset:
        case Expr::Kind::Index:
          edge.kind = EdgeKind::Offset;
          edge.weight = static_cast<std::uint64_t>(-e.offset);
          break;
        case Expr::Kind::Hold: edge.kind = EdgeKind::Hold; break;
        case Expr::Kind::Window:
          edge.kind = EdgeKind::Window;
          edge.duration = e.duration;
          edge.window_node = e.node_id;
          break;
        default: return;
      }
      // Window occurrences stay distinct: each one owns its pane buffer.
      auto same = std::find_if(local.begin(), local.end(), [&](const Edge& x) {
        return x.kind != EdgeKind::Window && x.to == edge.to && x.kind == edge.kind &&
               x.weight == edge.weight;
      });
      if (same != local.end()) {
        same->occurrences.push_back(e.span);
      } else {
        edge.occurrences.push_back(e.span);
        local.push_back(std::move(edge));
      }
    });
    g.edges.insert(g.edges.end(), local.begin(), local.end());
  }
  return g;
}

// Tarjan's strongly connected components over the zero-weight (Sync) edges.
std::vector<std::vector<std::size_t>> zero_weight_components(
    std::size_t n, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return out;
}

}  // namespace

Outcome<DependencyGraph> dependency_analysis(const TypedSpecification& typed) {
  const Specification& spec = typed.specification;
  Outcome<DependencyGraph> out;
  DependencyGraph g = build_graph(spec);

  std::map<StreamId, std::size_t> position;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) position[g.vertices[i]] = i;
  std::vector<std::vector<std::size_t>> adj(g.vertices.size());
  std::vector<bool> self_loop(g.vertices.size(), false);
  for (const Edge& e : g.edges) {
    if (e.kind != EdgeKind::Sync) continue;
    std::size_t from = position[e.from];
    std::size_t to = position[e.to];
    adj[from].push_back(to);
    if (from == to) self_loop[from] = true;
  }

  auto components = zero_weight_components(g.vertices.size(), adj);
  std::sort(components.begin(), components.end());
  for (const auto& comp : components) {
    if (comp.size() == 1 && !self_loop[comp[0]]) continue;
    std::string names;
    std::vector<RelatedNote> related;
    for (std::size_t v : comp) {
      StreamId id = g.vertices[v];
      if (!names.empty()) names += ", ";
      names += "`" + spec.stream_name(id) + "`";
      related.push_back({spec.stream_span(id), "`" + spec.stream_name(id) + "` is part of the cycle"});
    }
    std::string message =
        comp.size() == 1
            ? "stream " + names + " accesses itself without an offset"
            : "streams " + names + " depend on each other through a cycle without offsets";
    out.diagnostics.push_back({codes::kZeroWeightCycle, Severity::Error,
                               message + "; the dependency cycle has total weight 0",
                               spec.stream_span(g.vertices[comp[0]]), std::move(related)});
  }
  if (!has_errors(out.diagnostics)) out.value = std::move(g);
  return out;
}

Outcome<MemoryBounds> memory_analysis(const TypedSpecification& typed,
                                      const DependencyGraph& graph) {
  Outcome<MemoryBounds> out;
  MemoryBounds bounds;
  for (StreamId v : graph.vertices) bounds.per_stream[v] = 1;
  for (const Edge& e : graph.edges) {
    if (e.kind == EdgeKind::Sync || e.kind == EdgeKind::Offset) {
      auto& slot = bounds.per_stream[e.to];
      slot = std::max<std::size_t>(slot, 1 + e.weight);
    }
    if (e.kind != EdgeKind::Window) continue;
    const PacingType& pacing = typed.pacing_types.at(e.from);
    if (!pacing.is_periodic()) continue;  // rejected by pacing analysis
    Rational panes = e.duration->seconds / pacing.frequency().period();
    if (!panes.is_integer()) {
      out.diagnostics.push_back(
          {codes::kWindowPanes, Severity::Error,
           "window duration " + to_string(*e.duration) + " is not a multiple of the period " +
               compact_number(pacing.frequency().period()) + "s of `" +
               typed.specification.stream_name(e.from) + "`",
           e.occurrences.front(), {}});
      continue;
    }
    bounds.per_window[e.window_node] = static_cast<std::size_t>(panes.num());
  }
  if (!has_errors(out.diagnostics)) out.value = std::move(bounds);
  return out;
}

namespace {

void append(std::vector<Diagnostic>& into, std::vector<Diagnostic>& from) {
  into.insert(into.end(), std::make_move_iterator(from.begin()),
              std::make_move_iterator(from.end()));
}

}  // namespace

AnalysisReport run_all(std::string_view source) {
  AnalysisReport report;
  report.source_text = std::string(source);

  ParseResult parsed = parse(source);
  append(report.diagnostics, parsed.diagnostics);
  if (!parsed.specification) return report;

  auto named = naming_analysis(std::move(*parsed.specification));
  append(report.diagnostics, named.diagnostics);
  if (!named.ok()) return report;

  auto typed = type_analysis(std::move(*named.value));
  append(report.diagnostics, typed.diagnostics);
  if (!typed.ok()) return report;
  report.typed = std::move(typed.value);

  const TypedSpecification& t = *report.typed;
  for (StreamId id : t.specification.all_streams()) {
    // Triggers are unnamed; their hint is labelled with the keyword.
    std::string label = id.kind == StreamKind::Trigger ? "trigger" : t.specification.stream_name(id);
    report.hints.push_back({id, std::move(label), t.value_types.at(id).to_string(),
                            t.pacing_string(id), t.specification.stream_span(id)});
  }

  auto graph = dependency_analysis(t);
  append(report.diagnostics, graph.diagnostics);
  if (!graph.ok()) return report;
  report.graph = std::move(graph.value);

  auto memory = memory_analysis(t, *report.graph);
  append(report.diagnostics, memory.diagnostics);
  if (!memory.ok()) return report;
  report.memory = std::move(memory.value);
  return report;
}

}  // namespace lola
