#include "lola/mir.hpp"

#include <charconv>
#include <queue>
#include <stdexcept>

namespace lola {

const char* to_string(Builtin fn) {
  switch (fn) {
    case Builtin::Abs: return "abs";
    case Builtin::Sqrt: return "sqrt";
    case Builtin::Min: return "min";
    case Builtin::Max: return "max";
  }
  return "?";
}

namespace {

Builtin builtin_named(const std::string& name) {
  if (name == "abs") return Builtin::Abs;
  if (name == "sqrt") return Builtin::Sqrt;
  if (name == "min") return Builtin::Min;
  if (name == "max") return Builtin::Max;
  throw std::logic_error("unknown builtin " + name);
}

Value literal_value(const Literal& lit, const ValueType& type) {
  switch (lit.kind) {
    case LiteralKind::Bool: return Value::of_bool(lit.boolean);
    case LiteralKind::String: return Value::of_string(lit.text);
    case LiteralKind::Float:
    case LiteralKind::Integer: break;
  }
  const char* first = lit.text.data();
  const char* last = first + lit.text.size();
  switch (type.kind) {
    case TypeKind::Float64: {
      double v = 0;
      std::from_chars(first, last, v);
      return Value::of_float(v);
    }
    case TypeKind::UInt64: {
      std::uint64_t v = 0;
      std::from_chars(first, last, v);
      return Value::of_uint(v);
    }
    default: {
      std::int64_t v = 0;
      std::from_chars(first, last, v);
      return Value::of_int(v);
    }
  }
}

class Lowering {
 public:
  Lowering(const TypedSpecification& typed, const DependencyGraph& graph,
           const MemoryBounds& memory)
      : typed_(typed), spec_(typed.specification), graph_(graph), memory_(memory) {}

  MirSpec run() {
    order_streams();
    for (std::size_t pos = 0; pos < order_.size(); ++pos) position_[order_[pos]] = pos;

    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
      StreamId id = order_[pos];
      MirStream s;
      s.id = id;
      s.name = spec_.stream_name(id);
      s.type = typed_.value_types.at(id);
      s.pacing = typed_.pacing_types.at(id);
      s.buffer_size = memory_.per_stream.at(id);
      if (id.kind == StreamKind::Input) s.value_slot = id.index;
      if (id.kind == StreamKind::Output) s.value_slot = spec_.inputs.size() + id.index;
      mir_.streams.push_back(std::move(s));
    }
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
      if (const Expr* body = spec_.stream_expression(order_[pos]))
        mir_.streams[pos].expression = lower_expr(*body, pos);
    }

    for (std::size_t i = 0; i < spec_.inputs.size(); ++i)
      mir_.event_layout.push_back(position_.at({StreamKind::Input, i}));
    for (const auto& in : spec_.inputs) mir_.value_columns.push_back(in.name);
    for (const auto& out : spec_.outputs) mir_.value_columns.push_back(out.name);
    for (std::size_t i = 0; i < spec_.triggers.size(); ++i)
      mir_.triggers.push_back(
          {position_.at({StreamKind::Trigger, i}), i, spec_.trigger_message(i)});

    group_deadlines();
    return std::move(mir_);
  }

 private:
  // Kahn's algorithm over synchronous edges, always taking the smallest
  // ready vertex so ties follow declaration order.
  void order_streams() {
    const auto& vertices = graph_.vertices;
    std::map<StreamId, std::size_t> pending;
    std::map<StreamId, std::vector<StreamId>> dependents;
    for (StreamId v : vertices) pending[v] = 0;
    for (const Edge& e : graph_.edges) {
      if (e.kind != EdgeKind::Sync) continue;
      ++pending[e.from];
      dependents[e.to].push_back(e.from);
    }
    std::priority_queue<StreamId, std::vector<StreamId>, std::greater<>> ready;
    for (StreamId v : vertices)
      if (pending[v] == 0) ready.push(v);
    while (!ready.empty()) {
      StreamId v = ready.top();
      ready.pop();
      order_.push_back(v);
      for (StreamId d : dependents[v])
        if (--pending[d] == 0) ready.push(d);
    }
    if (order_.size() != vertices.size())
      throw std::logic_error("synchronous dependency cycle reached lowering");
  }

  MirExpr lower_expr(const Expr& e, std::size_t accessor) {
    MirExpr m;
    auto lower_args = [&] {
      for (const auto& a : e.args) m.args.push_back(lower_expr(a, accessor));
    };
    switch (e.kind) {
      case Expr::Kind::Literal:
        m.op = MirExpr::Op::Const;
        m.constant = literal_value(e.literal, typed_.expression_types.at(e.node_id));
        break;
      case Expr::Kind::StreamRef:
        m.op = MirExpr::Op::Sync;
        m.stream = position_.at(*e.target);
        break;
      case Expr::Kind::Offset:
      case Expr::Kind::Index: {
        m.op = MirExpr::Op::Offset;
        m.stream = position_.at(*e.target);
        // The accessed stream is evaluated in every cycle of the accessor. If
        // it comes earlier in evaluation order its current value is already
        // stored in slot 0.
        auto lookback = static_cast<std::size_t>(-e.offset);
        m.slot = m.stream < accessor ? lookback : lookback - 1;
        lower_args();
        break;
      }
      case Expr::Kind::Hold:
        m.op = MirExpr::Op::Hold;
        m.stream = position_.at(*e.target);
        lower_args();
        break;
      case Expr::Kind::Window: {
        m.op = MirExpr::Op::Window;
        m.window = mir_.windows.size();
        MirWindow w;
        w.target = position_.at(*e.target);
        w.accessor = accessor;
        w.duration = e.duration;
        w.aggregation = e.aggregation;
        w.panes = memory_.per_window.at(e.node_id);
        w.target_type = typed_.value_types.at(*e.target);
        w.result_type = typed_.expression_types.at(e.node_id);
        mir_.windows.push_back(std::move(w));
        lower_args();
        break;
      }
      case Expr::Kind::Unary:
        m.op = MirExpr::Op::Unary;
        m.unary = e.unary;
        lower_args();
        break;
      case Expr::Kind::Binary:
        m.op = MirExpr::Op::Binary;
        m.binary = e.binary;
        lower_args();
        break;
      case Expr::Kind::Ite:
        m.op = MirExpr::Op::Ite;
        lower_args();
        break;
      case Expr::Kind::Call:
        m.op = MirExpr::Op::Call;
        m.builtin = builtin_named(e.name);
        lower_args();
        break;
      case Expr::Kind::Tuple:
        m.op = MirExpr::Op::Tuple;
        lower_args();
        break;
      case Expr::Kind::Project:
        m.op = MirExpr::Op::Project;
        m.projection = e.projection;
        lower_args();
        break;
    }
    return m;
  }

  void group_deadlines() {
    for (std::size_t pos = 0; pos < mir_.streams.size(); ++pos) {
      const PacingType& p = mir_.streams[pos].pacing;
      if (!p.is_periodic()) continue;
      auto it = std::find_if(mir_.deadlines.begin(), mir_.deadlines.end(),
                             [&](const MirDeadlineGroup& g) { return g.frequency == p.frequency(); });
      if (it == mir_.deadlines.end()) {
        mir_.deadlines.push_back({p.frequency(), {pos}});
      } else {
        it->members.push_back(pos);
      }
    }
    for (const auto& g : mir_.deadlines) {
      Rational period = g.frequency.period();
      mir_.hyper_period = mir_.hyper_period ? rational_lcm(*mir_.hyper_period, period) : period;
    }
  }

  const TypedSpecification& typed_;
  const Specification& spec_;
  const DependencyGraph& graph_;
  const MemoryBounds& memory_;
  std::vector<StreamId> order_;
  std::map<StreamId, std::size_t> position_;
  MirSpec mir_;
};

// --- JSON ------------------------------------------------------------------

using nlohmann::json;

json rational_json(const Rational& r) { return r.to_fraction(); }

Rational rational_from(const json& j) {
  std::string text = j.get<std::string>();
  auto slash = text.find('/');
  auto parse_int = [](std::string_view s) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw std::invalid_argument("malformed rational");
    return v;
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  return Rational(parse_int(std::string_view(text).substr(0, slash)),
                  parse_int(std::string_view(text).substr(slash + 1)));
}

json type_json(const ValueType& t) {
  if (t.kind != TypeKind::Tuple) return t.to_string();
  json elems = json::array();
  for (const auto& e : t.elements) elems.push_back(type_json(e));
  return elems;
}

ValueType type_from(const json& j) {
  if (j.is_array()) {
    std::vector<ValueType> elems;
    for (const auto& e : j) elems.push_back(type_from(e));
    return ValueType::tuple(std::move(elems));
  }
  std::string name = j.get<std::string>();
  if (name == "Int64") return ValueType::int64();
  if (name == "UInt64") return ValueType::uint64();
  if (name == "Float64") return ValueType::float64();
  if (name == "Bool") return ValueType::boolean();
  if (name == "String") return ValueType::string();
  throw std::invalid_argument("unknown value type " + name);
}

json pacing_json(const PacingType& p) {
  if (p.is_event()) {
    json clauses = json::array();
    for (const auto& c : p.formula().clauses()) clauses.push_back(json(std::vector<std::size_t>(c.begin(), c.end())));
    return {{"kind", "event"}, {"clauses", clauses}};
  }
  if (p.is_periodic()) return {{"kind", "periodic"}, {"hz", rational_json(p.frequency().hertz)}};
  return {{"kind", "constant"}};
}

PacingType pacing_from(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "event") {
    std::set<ActivationFormula::Clause> clauses;
    for (const auto& c : j.at("clauses")) {
      auto v = c.get<std::vector<std::size_t>>();
      clauses.insert(ActivationFormula::Clause(v.begin(), v.end()));
    }
    return PacingType::event(ActivationFormula::from_clauses(std::move(clauses)));
  }
  if (kind == "periodic") return PacingType::periodic(Frequency{rational_from(j.at("hz"))});
  return PacingType::constant();
}

const char* kind_name(StreamKind k) {
  switch (k) {
    case StreamKind::Input: return "input";
    case StreamKind::Output: return "output";
    case StreamKind::Trigger: return "trigger";
  }
  return "?";
}

StreamKind kind_from(const std::string& s) {
  if (s == "input") return StreamKind::Input;
  if (s == "output") return StreamKind::Output;
  if (s == "trigger") return StreamKind::Trigger;
  throw std::invalid_argument("unknown stream kind " + s);
}

const char* op_name(MirExpr::Op op) {
  switch (op) {
    case MirExpr::Op::Const: return "const";
    case MirExpr::Op::Sync: return "sync";
    case MirExpr::Op::Offset: return "offset";
    case MirExpr::Op::Hold: return "hold";
    case MirExpr::Op::Window: return "window";
    case MirExpr::Op::Unary: return "unary";
    case MirExpr::Op::Binary: return "binary";
    case MirExpr::Op::Ite: return "ite";
    case MirExpr::Op::Call: return "call";
    case MirExpr::Op::Tuple: return "tuple";
    case MirExpr::Op::Project: return "project";
  }
  return "?";
}

MirExpr::Op op_from(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(MirExpr::Op::Project); ++i) {
    auto op = static_cast<MirExpr::Op>(i);
    if (s == op_name(op)) return op;
  }
  throw std::invalid_argument("unknown MIR op " + s);
}

template <typename Enum, std::size_t N>
Enum enum_from(const std::string& s, const char* (*name)(Enum)) {
  for (std::size_t i = 0; i < N; ++i) {
    auto e = static_cast<Enum>(i);
    if (s == name(e)) return e;
  }
  throw std::invalid_argument("unknown operator " + s);
}

json expr_json(const MirExpr& e) {
  json j = {{"op", op_name(e.op)}};
  switch (e.op) {
    case MirExpr::Op::Const: j["value"] = value_to_json(e.constant); break;
    case MirExpr::Op::Sync:
    case MirExpr::Op::Hold: j["stream"] = e.stream; break;
    case MirExpr::Op::Offset:
      j["stream"] = e.stream;
      j["slot"] = e.slot;
      break;
    case MirExpr::Op::Window: j["window"] = e.window; break;
    case MirExpr::Op::Unary: j["operator"] = to_string(e.unary); break;
    case MirExpr::Op::Binary: j["operator"] = to_string(e.binary); break;
    case MirExpr::Op::Call: j["function"] = to_string(e.builtin); break;
    case MirExpr::Op::Project: j["index"] = e.projection; break;
    case MirExpr::Op::Ite:
    case MirExpr::Op::Tuple: break;
  }
  if (!e.args.empty()) {
    json args = json::array();
    for (const auto& a : e.args) args.push_back(expr_json(a));
    j["args"] = std::move(args);
  }
  return j;
}

MirExpr expr_from(const json& j) {
  MirExpr e;
  e.op = op_from(j.at("op").get<std::string>());
  switch (e.op) {
    case MirExpr::Op::Const: e.constant = value_from_json(j.at("value")); break;
    case MirExpr::Op::Sync:
    case MirExpr::Op::Hold: e.stream = j.at("stream").get<std::size_t>(); break;
    case MirExpr::Op::Offset:
      e.stream = j.at("stream").get<std::size_t>();
      e.slot = j.at("slot").get<std::size_t>();
      break;
    case MirExpr::Op::Window: e.window = j.at("window").get<std::size_t>(); break;
    case MirExpr::Op::Unary:
      e.unary = enum_from<UnaryOp, 2>(j.at("operator").get<std::string>(), to_string);
      break;
    case MirExpr::Op::Binary:
      e.binary = enum_from<BinaryOp, 13>(j.at("operator").get<std::string>(), to_string);
      break;
    case MirExpr::Op::Call:
      e.builtin = builtin_named(j.at("function").get<std::string>());
      break;
    case MirExpr::Op::Project: e.projection = j.at("index").get<std::size_t>(); break;
    case MirExpr::Op::Ite:
    case MirExpr::Op::Tuple: break;
  }
  if (j.contains("args"))
    for (const auto& a : j.at("args")) e.args.push_back(expr_from(a));
  return e;
}

AggFunc agg_from(const std::string& s) {
  return enum_from<AggFunc, 5>(s, to_string);
}

}  // namespace

MirSpec lower(const AnalysisReport& report) {
  if (!report.ok() || !report.typed || !report.graph || !report.memory)
    throw std::logic_error("lower() requires an error-free analysis report");
  return Lowering(*report.typed, *report.graph, *report.memory).run();
}

json value_to_json(const Value& v) {
  switch (v.kind()) {
    case TypeKind::Int64: return {{"Int64", v.as_int()}};
    case TypeKind::UInt64: return {{"UInt64", v.as_uint()}};
    case TypeKind::Float64: return {{"Float64", v.as_float()}};
    case TypeKind::Bool: return {{"Bool", v.as_bool()}};
    case TypeKind::String: return {{"String", v.as_string()}};
    case TypeKind::Tuple: {
      json elems = json::array();
      for (const auto& e : v.as_tuple()) elems.push_back(value_to_json(e));
      return {{"Tuple", elems}};
    }
  }
  return nullptr;
}

Value value_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw std::invalid_argument("malformed value");
  const auto& [tag, payload] = *j.items().begin();
  if (tag == "Int64") return Value::of_int(payload.get<std::int64_t>());
  if (tag == "UInt64") return Value::of_uint(payload.get<std::uint64_t>());
  if (tag == "Float64") return Value::of_float(payload.get<double>());
  if (tag == "Bool") return Value::of_bool(payload.get<bool>());
  if (tag == "String") return Value::of_string(payload.get<std::string>());
  if (tag == "Tuple") {
    Value::Tuple elems;
    for (const auto& e : payload) elems.push_back(value_from_json(e));
    return Value::of_tuple(std::move(elems));
  }
  throw std::invalid_argument("unknown value tag " + tag);
}

json serialize_mir(const MirSpec& mir) {
  json streams = json::array();
  for (const auto& s : mir.streams) {
    json js = {{"kind", kind_name(s.id.kind)},
               {"index", s.id.index},
               {"name", s.name},
               {"type", type_json(s.type)},
               {"pacing", pacing_json(s.pacing)},
               {"bufferSize", s.buffer_size}};
    if (s.expression) js["expression"] = expr_json(*s.expression);
    if (s.value_slot) js["valueSlot"] = *s.value_slot;
    streams.push_back(std::move(js));
  }
  json deadlines = json::array();
  for (const auto& g : mir.deadlines)
    deadlines.push_back({{"hz", rational_json(g.frequency.hertz)}, {"members", g.members}});
  json windows = json::array();
  for (const auto& w : mir.windows) {
    windows.push_back({{"target", w.target},
                       {"accessor", w.accessor},
                       {"durationSecs", rational_json(w.duration.seconds)},
                       {"aggregation", to_string(w.aggregation)},
                       {"panes", w.panes},
                       {"targetType", type_json(w.target_type)},
                       {"resultType", type_json(w.result_type)}});
  }
  json triggers = json::array();
  for (const auto& t : mir.triggers)
    triggers.push_back({{"stream", t.stream}, {"index", t.index}, {"message", t.message}});

  json doc = {{"version", MirSpec::kVersion},
              {"streams", streams},
              {"eventLayout", mir.event_layout},
              {"deadlines", deadlines},
              {"windows", windows},
              {"triggers", triggers},
              {"valueColumns", mir.value_columns}};
  doc["hyperPeriodSecs"] = mir.hyper_period ? json(rational_json(*mir.hyper_period)) : json(nullptr);
  return doc;
}

MirSpec deserialize_mir(const json& doc) {
  if (doc.at("version").get<int>() != MirSpec::kVersion)
    throw std::invalid_argument("unsupported MIR version");
  MirSpec mir;
  for (const auto& js : doc.at("streams")) {
    MirStream s;
    s.id = {kind_from(js.at("kind").get<std::string>()), js.at("index").get<std::size_t>()};
    s.name = js.at("name").get<std::string>();
    s.type = type_from(js.at("type"));
    s.pacing = pacing_from(js.at("pacing"));
    s.buffer_size = js.at("bufferSize").get<std::size_t>();
    if (js.contains("expression")) s.expression = expr_from(js.at("expression"));
    if (js.contains("valueSlot")) s.value_slot = js.at("valueSlot").get<std::size_t>();
    mir.streams.push_back(std::move(s));
  }
  mir.event_layout = doc.at("eventLayout").get<std::vector<std::size_t>>();
  for (const auto& g : doc.at("deadlines"))
    mir.deadlines.push_back({Frequency{rational_from(g.at("hz"))},
                             g.at("members").get<std::vector<std::size_t>>()});
  for (const auto& jw : doc.at("windows")) {
    MirWindow w;
    w.target = jw.at("target").get<std::size_t>();
    w.accessor = jw.at("accessor").get<std::size_t>();
    w.duration = Duration{rational_from(jw.at("durationSecs"))};
    w.aggregation = agg_from(jw.at("aggregation").get<std::string>());
    w.panes = jw.at("panes").get<std::size_t>();
    w.target_type = type_from(jw.at("targetType"));
    w.result_type = type_from(jw.at("resultType"));
    mir.windows.push_back(std::move(w));
  }
  for (const auto& t : doc.at("triggers"))
    mir.triggers.push_back({t.at("stream").get<std::size_t>(), t.at("index").get<std::size_t>(),
                            t.at("message").get<std::string>()});
  mir.value_columns = doc.at("valueColumns").get<std::vector<std::string>>();
  if (!doc.at("hyperPeriodSecs").is_null())
    mir.hyper_period = rational_from(doc.at("hyperPeriodSecs"));
  return mir;
}

}  // namespace lola
