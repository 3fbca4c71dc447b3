#include "lola/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lola/diagnostic.hpp"

namespace lola {

const char* to_string(VerdictKind kind) {
  return kind == VerdictKind::Periodic ? "periodic" : "event";
}

const char* to_string(VerdictMode mode) {
  switch (mode) {
    case VerdictMode::TriggersOnly: return "triggers";
    case VerdictMode::Changed: return "changed";
    case VerdictMode::FullState: return "full";
  }
  return "?";
}

std::optional<VerdictMode> parse_verdict_mode(const std::string& text) {
  for (auto m : {VerdictMode::TriggersOnly, VerdictMode::Changed, VerdictMode::FullState})
    if (text == to_string(m)) return m;
  return std::nullopt;
}

RuntimeFault::RuntimeFault(RunFault fault)
    : std::runtime_error(fault.code + ": " + fault.message), fault_(std::move(fault)) {}

namespace {

constexpr const char* kNonMonotonic = codes::kTimeNotMonotonic;
constexpr const char* kArithmetic = codes::kArithmeticFault;
constexpr const char* kOverflow = codes::kOverflowFault;

// IEEE comparison for floats, structural for everything else.
bool values_equal(const Value& a, const Value& b) {
  if (a.kind() == TypeKind::Float64) return a.as_float() == b.as_float();
  if (a.kind() == TypeKind::Tuple) {
    const auto& x = a.as_tuple();
    const auto& y = b.as_tuple();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!values_equal(x[i], y[i])) return false;
    return true;
  }
  return a == b;
}

// Numeric ordering; only meaningful when neither operand is NaN.
bool less(const Value& a, const Value& b) {
  switch (a.kind()) {
    case TypeKind::Int64: return a.as_int() < b.as_int();
    case TypeKind::UInt64: return a.as_uint() < b.as_uint();
    case TypeKind::Float64: return a.as_float() < b.as_float();
    default: return a.as_string() < b.as_string();
  }
}

double as_double(const Value& v) {
  switch (v.kind()) {
    case TypeKind::Int64: return static_cast<double>(v.as_int());
    case TypeKind::UInt64: return static_cast<double>(v.as_uint());
    case TypeKind::Float64: return v.as_float();
    default: return 0.0;
  }
}

}  // namespace

// --- RingBuffer -------------------------------------------------------------

void Monitor::RingBuffer::push(Value v) {
  slots_[head_] = Slot{std::move(v), next_seq_++};
  head_ = (head_ + 1) % slots_.size();
  size_ = std::min(size_ + 1, slots_.size());
}

const Value* Monitor::RingBuffer::get(std::size_t k) const {
  if (k >= size_) return nullptr;
  std::size_t idx = (head_ + slots_.size() - 1 - k) % slots_.size();
  return &slots_[idx].value;
}

std::vector<Monitor::Slot> Monitor::RingBuffer::newest_first() const {
  std::vector<Slot> out;
  for (std::size_t k = 0; k < size_; ++k)
    out.push_back(slots_[(head_ + slots_.size() - 1 - k) % slots_.size()]);
  return out;
}

// --- Monitor ----------------------------------------------------------------

Monitor::Monitor(MirSpec mir, VerdictMode mode, Rational start_time)
    : mir_(std::move(mir)), mode_(mode), now_(start_time) {
  for (const auto& s : mir_.streams) buffers_.emplace_back(std::max<std::size_t>(1, s.buffer_size));
  fresh_.assign(mir_.streams.size(), false);
  windows_by_target_.resize(mir_.streams.size());
  for (std::size_t w = 0; w < mir_.windows.size(); ++w) {
    const MirWindow& mw = mir_.windows[w];
    WindowState ws;
    ws.open.begin = start_time;
    ws.open.sum = Value::zero_of(mw.target_type.is_numeric() ? mw.target_type : ValueType::int64());
    windows_.push_back(std::move(ws));
    windows_by_target_[mw.target].push_back(w);
  }
  for (std::size_t g = 0; g < mir_.deadlines.size(); ++g)
    deadlines_.push_back({start_time + mir_.deadlines[g].frequency.period(), g});
}

void Monitor::rethrow_if_faulted() const {
  if (fault_) throw RuntimeFault(*fault_);
}

void Monitor::fail(const std::string& code, const std::string& message) {
  RunFault f;
  f.code = code;
  f.message = message;
  if (evaluating_) f.stream = mir_.streams[*evaluating_].name;
  f.cycle = cycle_;
  f.time = now_;
  fault_ = f;
  throw RuntimeFault(std::move(f));
}

void Monitor::check_time(const Rational& t) {
  if (t < now_) {
    evaluating_.reset();
    fail(kNonMonotonic, "timestamp " + t.to_decimal() + " is earlier than the current time " +
                            now_.to_decimal());
  }
}

std::optional<Rational> Monitor::next_deadline() const {
  std::optional<Rational> best;
  for (const auto& a : deadlines_)
    if (!best || a.due < *best) best = a.due;
  return best;
}

std::vector<Verdict> Monitor::accept_event(const Event& event) {
  rethrow_if_faulted();
  check_time(event.time);
  std::vector<Verdict> out;
  while (auto d = next_deadline()) {
    if (*d > event.time) break;
    out.push_back(run_deadline_cycle());
  }
  out.push_back(run_event_cycle(event));
  return out;
}

std::vector<Verdict> Monitor::finish(std::optional<Rational> end_time) {
  rethrow_if_faulted();
  Rational end = end_time.value_or(now_);
  std::vector<Verdict> out;
  while (auto d = next_deadline()) {
    if (*d > end) break;
    out.push_back(run_deadline_cycle());
  }
  return out;
}

Verdict Monitor::begin_verdict(VerdictKind kind, const Rational& t) const {
  Verdict v;
  v.time = t;
  v.kind = kind;
  v.cycle = cycle_;
  return v;
}

Verdict Monitor::run_deadline_cycle() {
  rethrow_if_faulted();
  Rational d = *next_deadline();
  check_time(d);
  now_ = d;
  std::vector<std::size_t> due_groups;
  for (auto& a : deadlines_) {
    if (a.due != d) continue;
    due_groups.push_back(a.group);
    a.due = a.due + mir_.deadlines[a.group].frequency.period();
  }
  rotate_windows(due_groups, d);

  std::vector<std::size_t> members;
  for (std::size_t g : due_groups)
    members.insert(members.end(), mir_.deadlines[g].members.begin(),
                   mir_.deadlines[g].members.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  Verdict verdict = begin_verdict(VerdictKind::Periodic, d);
  std::fill(fresh_.begin(), fresh_.end(), false);
  for (std::size_t pos : members) evaluate(pos, verdict);
  finish_verdict(verdict);
  ++cycle_;
  return verdict;
}

Verdict Monitor::run_event_cycle(const Event& event) {
  rethrow_if_faulted();
  check_time(event.time);
  now_ = event.time;
  std::vector<bool> present(mir_.input_count(), false);
  for (std::size_t i = 0; i < present.size() && i < event.inputs.size(); ++i)
    present[i] = event.inputs[i].has_value();

  Verdict verdict = begin_verdict(VerdictKind::Event, event.time);
  std::fill(fresh_.begin(), fresh_.end(), false);
  for (std::size_t pos = 0; pos < mir_.streams.size(); ++pos) {
    const MirStream& s = mir_.streams[pos];
    if (s.id.kind == StreamKind::Input) {
      if (present[s.id.index]) store(pos, *event.inputs[s.id.index]);
      continue;
    }
    if (s.pacing.is_event() && s.pacing.formula().satisfied_by(present)) evaluate(pos, verdict);
  }
  finish_verdict(verdict);
  ++cycle_;
  return verdict;
}

void Monitor::evaluate(std::size_t pos, Verdict& verdict) {
  const MirStream& s = mir_.streams[pos];
  evaluating_ = pos;
  Value v = eval(*s.expression, pos);
  evaluating_.reset();
  if (s.id.kind == StreamKind::Trigger && v.as_bool()) {
    for (const auto& t : mir_.triggers)
      if (t.stream == pos) verdict.triggers.push_back({t.index, t.message});
  }
  store(pos, std::move(v));
}

void Monitor::store(std::size_t pos, Value v) {
  for (std::size_t w : windows_by_target_[pos]) add_to_pane(windows_[w].open, mir_.windows[w], v);
  buffers_[pos].push(std::move(v));
  fresh_[pos] = true;
}

void Monitor::finish_verdict(Verdict& verdict) const {
  std::sort(verdict.triggers.begin(), verdict.triggers.end(),
            [](const FiredTrigger& a, const FiredTrigger& b) { return a.index < b.index; });
  if (mode_ == VerdictMode::TriggersOnly) return;
  verdict.values.assign(mir_.value_columns.size(), std::nullopt);
  verdict.fresh.assign(mir_.value_columns.size(), false);
  for (std::size_t pos = 0; pos < mir_.streams.size(); ++pos) {
    const MirStream& s = mir_.streams[pos];
    if (!s.value_slot) continue;
    std::size_t col = *s.value_slot;
    verdict.fresh[col] = fresh_[pos];
    if (fresh_[pos] || mode_ == VerdictMode::FullState) {
      if (const Value* v = buffers_[pos].get(0)) verdict.values[col] = *v;
    }
  }
}

// --- Windows ----------------------------------------------------------------

void Monitor::rotate_windows(const std::vector<std::size_t>& due_groups, const Rational& d) {
  for (std::size_t w = 0; w < mir_.windows.size(); ++w) {
    const MirWindow& mw = mir_.windows[w];
    bool due = std::any_of(due_groups.begin(), due_groups.end(), [&](std::size_t g) {
      const auto& m = mir_.deadlines[g].members;
      return std::find(m.begin(), m.end(), mw.accessor) != m.end();
    });
    if (!due) continue;
    WindowState& ws = windows_[w];
    ws.open.end = d;
    ws.closed.push_back(ws.open);
    if (ws.closed.size() > mw.panes) ws.closed.erase(ws.closed.begin());
    Pane next;
    next.begin = d;
    next.sum = Value::zero_of(ws.open.sum.kind() == TypeKind::Int64 ? ValueType::int64()
                              : ws.open.sum.kind() == TypeKind::UInt64 ? ValueType::uint64()
                                                                       : ValueType::float64());
    ws.open = std::move(next);
  }
}

namespace {

std::optional<Value> checked_add(const Value& a, const Value& b) {
  switch (a.kind()) {
    case TypeKind::Int64: {
      std::int64_t r;
      if (__builtin_add_overflow(a.as_int(), b.as_int(), &r)) return std::nullopt;
      return Value::of_int(r);
    }
    case TypeKind::UInt64: {
      std::uint64_t r;
      if (__builtin_add_overflow(a.as_uint(), b.as_uint(), &r)) return std::nullopt;
      return Value::of_uint(r);
    }
    default: return Value::of_float(a.as_float() + b.as_float());
  }
}

}  // namespace

void Monitor::add_to_pane(Pane& pane, const MirWindow& w, const Value& v) {
  ++pane.count;
  if (w.aggregation == AggFunc::Count) return;
  if (w.aggregation == AggFunc::Sum) {
    auto r = checked_add(pane.sum, v);
    if (!r) fail(kOverflow, "overflow while summing window over `" + mir_.streams[w.target].name + "`");
    pane.sum = std::move(*r);
  }
  pane.float_sum += as_double(v);
  if (!pane.min || less(v, *pane.min)) pane.min = v;
  if (!pane.max || less(*pane.max, v)) pane.max = v;
}

Value Monitor::aggregate(const MirExpr& e, std::size_t accessor) {
  const MirWindow& w = mir_.windows[e.window];
  const WindowState& ws = windows_[e.window];
  std::uint64_t count = 0;
  for (const Pane& p : ws.closed) count += p.count;

  auto fallback = [&]() -> Value {
    if (!e.args.empty()) return eval(e.args[0], accessor);
    return Value::zero_of(w.result_type);
  };

  switch (w.aggregation) {
    case AggFunc::Count: return Value::of_uint(count);
    case AggFunc::Sum: {
      Value total = Value::zero_of(w.result_type);
      for (const Pane& p : ws.closed) {
        auto r = checked_add(total, p.sum);
        if (!r) fail(kOverflow, "overflow while summing window over `" + mir_.streams[w.target].name + "`");
        total = std::move(*r);
      }
      return total;
    }
    case AggFunc::Avg: {
      if (count == 0) return fallback();
      double total = 0.0;
      for (const Pane& p : ws.closed) total += p.float_sum;
      return Value::of_float(total / static_cast<double>(count));
    }
    case AggFunc::Min:
    case AggFunc::Max: {
      std::optional<Value> best;
      bool want_min = w.aggregation == AggFunc::Min;
      for (const Pane& p : ws.closed) {
        const auto& cand = want_min ? p.min : p.max;
        if (!cand) continue;
        if (!best || (want_min ? less(*cand, *best) : less(*best, *cand))) best = cand;
      }
      return best ? *best : fallback();
    }
  }
  return fallback();
}

// --- Expressions ------------------------------------------------------------

Value Monitor::eval(const MirExpr& e, std::size_t accessor) {
  auto name = [&](std::size_t pos) { return mir_.streams[pos].name; };
  switch (e.op) {
    case MirExpr::Op::Const: return e.constant;
    case MirExpr::Op::Sync: {
      const Value* v = buffers_[e.stream].get(0);
      if (!v) throw std::logic_error("synchronous access to `" + name(e.stream) + "` without a value");
      return *v;
    }
    case MirExpr::Op::Offset: {
      if (const Value* v = buffers_[e.stream].get(e.slot)) return *v;
      return eval(e.args[0], accessor);
    }
    case MirExpr::Op::Hold: {
      if (const Value* v = buffers_[e.stream].get(0)) return *v;
      return eval(e.args[0], accessor);
    }
    case MirExpr::Op::Window: return aggregate(e, accessor);
    case MirExpr::Op::Unary: {
      Value x = eval(e.args[0], accessor);
      if (e.unary == UnaryOp::Not) return Value::of_bool(!x.as_bool());
      if (x.kind() == TypeKind::Float64) return Value::of_float(-x.as_float());
      if (x.as_int() == std::numeric_limits<std::int64_t>::min())
        fail(kOverflow, "integer overflow in negation");
      return Value::of_int(-x.as_int());
    }
    case MirExpr::Op::Binary: {
      if (e.binary == BinaryOp::And || e.binary == BinaryOp::Or) {
        bool lhs = eval(e.args[0], accessor).as_bool();
        if (e.binary == BinaryOp::And && !lhs) return Value::of_bool(false);
        if (e.binary == BinaryOp::Or && lhs) return Value::of_bool(true);
        return Value::of_bool(eval(e.args[1], accessor).as_bool());
      }
      Value a = eval(e.args[0], accessor);
      Value b = eval(e.args[1], accessor);
      switch (e.binary) {
        case BinaryOp::Eq: return Value::of_bool(values_equal(a, b));
        case BinaryOp::Ne: return Value::of_bool(!values_equal(a, b));
        case BinaryOp::Lt: return Value::of_bool(less(a, b));
        case BinaryOp::Gt: return Value::of_bool(less(b, a));
        case BinaryOp::Le:
          if (a.kind() == TypeKind::Float64) return Value::of_bool(a.as_float() <= b.as_float());
          return Value::of_bool(!less(b, a));
        case BinaryOp::Ge:
          if (a.kind() == TypeKind::Float64) return Value::of_bool(a.as_float() >= b.as_float());
          return Value::of_bool(!less(a, b));
        default: break;
      }
      if (a.kind() == TypeKind::Float64) {
        double x = a.as_float();
        double y = b.as_float();
        switch (e.binary) {
          case BinaryOp::Add: return Value::of_float(x + y);
          case BinaryOp::Sub: return Value::of_float(x - y);
          case BinaryOp::Mul: return Value::of_float(x * y);
          case BinaryOp::Div: return Value::of_float(x / y);
          case BinaryOp::Mod: return Value::of_float(std::fmod(x, y));
          default: break;
        }
      } else if (a.kind() == TypeKind::Int64) {
        std::int64_t x = a.as_int();
        std::int64_t y = b.as_int();
        std::int64_t r = 0;
        bool overflow = false;
        switch (e.binary) {
          case BinaryOp::Add: overflow = __builtin_add_overflow(x, y, &r); break;
          case BinaryOp::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
          case BinaryOp::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
          case BinaryOp::Div:
          case BinaryOp::Mod:
            if (y == 0) fail(kArithmetic, "integer division by zero");
            if (x == std::numeric_limits<std::int64_t>::min() && y == -1) {
              overflow = true;
              break;
            }
            r = e.binary == BinaryOp::Div ? x / y : x % y;
            break;
          default: break;
        }
        if (overflow) fail(kOverflow, "integer overflow in `" + std::string(to_string(e.binary)) + "`");
        return Value::of_int(r);
      } else {
        std::uint64_t x = a.as_uint();
        std::uint64_t y = b.as_uint();
        std::uint64_t r = 0;
        bool overflow = false;
        switch (e.binary) {
          case BinaryOp::Add: overflow = __builtin_add_overflow(x, y, &r); break;
          case BinaryOp::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
          case BinaryOp::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
          case BinaryOp::Div:
          case BinaryOp::Mod:
            if (y == 0) fail(kArithmetic, "integer division by zero");
            r = e.binary == BinaryOp::Div ? x / y : x % y;
            break;
          default: break;
        }
        if (overflow) fail(kOverflow, "integer overflow in `" + std::string(to_string(e.binary)) + "`");
        return Value::of_uint(r);
      }
      throw std::logic_error("unhandled binary operator");
    }
    case MirExpr::Op::Ite: {
      bool cond = eval(e.args[0], accessor).as_bool();
      return eval(e.args[cond ? 1 : 2], accessor);
    }
    case MirExpr::Op::Call: {
      Value x = eval(e.args[0], accessor);
      switch (e.builtin) {
        case Builtin::Sqrt: return Value::of_float(std::sqrt(x.as_float()));
        case Builtin::Abs:
          if (x.kind() == TypeKind::Float64) return Value::of_float(std::fabs(x.as_float()));
          if (x.kind() == TypeKind::UInt64) return x;
          if (x.as_int() == std::numeric_limits<std::int64_t>::min())
            fail(kOverflow, "integer overflow in `abs`");
          return Value::of_int(x.as_int() < 0 ? -x.as_int() : x.as_int());
        case Builtin::Min:
        case Builtin::Max: {
          Value y = eval(e.args[1], accessor);
          if (e.builtin == Builtin::Min) return less(y, x) ? y : x;
          return less(x, y) ? y : x;
        }
      }
      throw std::logic_error("unhandled builtin");
    }
    case MirExpr::Op::Tuple: {
      Value::Tuple elems;
      for (const auto& a : e.args) elems.push_back(eval(a, accessor));
      return Value::of_tuple(std::move(elems));
    }
    case MirExpr::Op::Project: return eval(e.args[0], accessor).as_tuple().at(e.projection);
  }
  throw std::logic_error("unhandled MIR operation");
}

// --- Snapshots --------------------------------------------------------------

nlohmann::json Monitor::snapshot() const {
  using nlohmann::json;
  json streams = json::array();
  for (std::size_t pos = 0; pos < mir_.streams.size(); ++pos) {
    json buffer = json::array();
    for (const auto& slot : buffers_[pos].newest_first())
      buffer.push_back({{"seq", slot.seq}, {"value", value_to_plain_json(slot.value)}});
    streams.push_back({{"name", mir_.streams[pos].name},
                       {"capacity", std::max<std::size_t>(1, mir_.streams[pos].buffer_size)},
                       {"buffer", std::move(buffer)}});
  }
  std::vector<Armed> armed = deadlines_;
  std::sort(armed.begin(), armed.end(), [](const Armed& a, const Armed& b) {
    return a.due != b.due ? a.due < b.due : a.group < b.group;
  });
  json deadlines = json::array();
  for (const auto& a : armed) {
    json members = json::array();
    for (std::size_t m : mir_.deadlines[a.group].members) members.push_back(mir_.streams[m].name);
    deadlines.push_back({{"due", a.due.to_decimal()},
                         {"frequency", to_string(mir_.deadlines[a.group].frequency)},
                         {"streams", std::move(members)}});
  }
  json windows = json::array();
  for (std::size_t w = 0; w < mir_.windows.size(); ++w) {
    const MirWindow& mw = mir_.windows[w];
    auto pane_json = [&](const Pane& p, bool open) {
      json j = {{"begin", p.begin.to_decimal()}, {"count", p.count}};
      j["end"] = open ? json(nullptr) : json(p.end.to_decimal());
      if (mw.aggregation == AggFunc::Sum) j["sum"] = value_to_plain_json(p.sum);
      if (mw.aggregation == AggFunc::Avg) j["sum"] = p.float_sum;
      if (mw.aggregation == AggFunc::Min) j["min"] = p.min ? value_to_plain_json(*p.min) : json(nullptr);
      if (mw.aggregation == AggFunc::Max) j["max"] = p.max ? value_to_plain_json(*p.max) : json(nullptr);
      return j;
    };
    json panes = json::array();
    for (const Pane& p : windows_[w].closed) panes.push_back(pane_json(p, false));
    windows.push_back({{"accessor", mir_.streams[mw.accessor].name},
                       {"target", mir_.streams[mw.target].name},
                       {"aggregation", to_string(mw.aggregation)},
                       {"duration", to_string(mw.duration)},
                       {"panes", std::move(panes)},
                       {"open", pane_json(windows_[w].open, true)}});
  }
  return {{"time", now_.to_decimal()},
          {"cycle", cycle_},
          {"streams", std::move(streams)},
          {"deadlines", std::move(deadlines)},
          {"windows", std::move(windows)}};
}

nlohmann::json value_to_plain_json(const Value& v) {
  switch (v.kind()) {
    case TypeKind::Int64: return v.as_int();
    case TypeKind::UInt64: return v.as_uint();
    case TypeKind::Float64: {
      double d = v.as_float();
      if (std::isfinite(d)) return d;
      return format_float(d);
    }
    case TypeKind::Bool: return v.as_bool();
    case TypeKind::String: return v.as_string();
    case TypeKind::Tuple: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& e : v.as_tuple()) arr.push_back(value_to_plain_json(e));
      return arr;
    }
  }
  return nullptr;
}

nlohmann::json verdict_to_json(const Verdict& verdict, const MirSpec& mir) {
  using nlohmann::json;
  json triggers = json::array();
  for (const auto& t : verdict.triggers) triggers.push_back({{"index", t.index}, {"message", t.message}});
  json j = {{"time", verdict.time.to_double()},
            {"kind", to_string(verdict.kind)},
            {"cycle", verdict.cycle},
            {"triggers", std::move(triggers)}};
  if (!verdict.values.empty()) {
    json values = json::object();
    json fresh = json::array();
    for (std::size_t c = 0; c < verdict.values.size(); ++c) {
      if (verdict.values[c]) values[mir.value_columns[c]] = value_to_plain_json(*verdict.values[c]);
      if (verdict.fresh[c]) fresh.push_back(mir.value_columns[c]);
    }
    j["values"] = std::move(values);
    j["fresh"] = std::move(fresh);
  }
  return j;
}

nlohmann::json fault_to_json(const RunFault& fault) {
  return {{"code", fault.code},
          {"message", fault.message},
          {"stream", fault.stream},
          {"cycle", fault.cycle},
          {"time", fault.time.to_decimal()}};
}

Verdict project_verdict(Verdict verdict, VerdictMode mode) {
  if (mode == VerdictMode::TriggersOnly) {
    verdict.values.clear();
    verdict.fresh.clear();
  } else if (mode == VerdictMode::Changed) {
    for (std::size_t c = 0; c < verdict.values.size(); ++c)
      if (!verdict.fresh[c]) verdict.values[c].reset();
  }
  return verdict;
}

// --- Batch and sessions -----------------------------------------------------

RunResult run_batch(const MirSpec& mir, const std::vector<Event>& events, VerdictMode mode,
                    std::optional<Rational> start_time, std::optional<Rational> end_time) {
  Rational start = start_time.value_or(events.empty() ? Rational(0) : events.front().time);
  Monitor monitor(mir, mode, start);
  RunResult result;
  // Cycle by cycle rather than through accept_event, so that verdicts of
  // deadlines preceding a faulting event are kept.
  try {
    for (const auto& ev : events) {
      while (auto d = monitor.next_deadline()) {
        if (*d > ev.time) break;
        result.verdicts.push_back(monitor.run_deadline_cycle());
      }
      result.verdicts.push_back(monitor.run_event_cycle(ev));
    }
    auto vs = monitor.finish(end_time);
    result.verdicts.insert(result.verdicts.end(), std::make_move_iterator(vs.begin()),
                           std::make_move_iterator(vs.end()));
  } catch (const RuntimeFault& f) {
    result.fault = f.fault();
  }
  return result;
}

Session::Session(MirSpec mir, std::vector<Event> events, VerdictMode mode,
                 std::optional<Rational> start_time, std::optional<Rational> end_time)
    : mir_(std::move(mir)),
      events_(std::move(events)),
      mode_(mode),
      start_time_(start_time),
      end_time_(end_time),
      monitor_(mir_, mode_, resolved_start()) {}

Rational Session::resolved_start() const {
  return start_time_.value_or(events_.empty() ? Rational(0) : events_.front().time);
}

void Session::reset() {
  monitor_ = Monitor(mir_, mode_, resolved_start());
  next_event_ = 0;
  halted_ = false;
}

std::optional<Session::Pending> Session::peek() const {
  if (halted_) return std::nullopt;
  auto deadline = monitor_.next_deadline();
  if (next_event_ < events_.size()) {
    const Event& ev = events_[next_event_];
    if (deadline && *deadline <= ev.time && ev.time >= monitor_.current_time())
      return Pending{VerdictKind::Periodic, *deadline, std::nullopt};
    return Pending{VerdictKind::Event, ev.time, next_event_};
  }
  Rational end = end_time_.value_or(monitor_.current_time());
  if (deadline && *deadline <= end) return Pending{VerdictKind::Periodic, *deadline, std::nullopt};
  return std::nullopt;
}

Session::StepResult Session::step() {
  StepResult result;
  auto pending = peek();
  if (!pending) {
    result.exhausted = true;
    result.snapshot = monitor_.snapshot();
    return result;
  }
  try {
    if (pending->kind == VerdictKind::Periodic) {
      result.verdict = monitor_.run_deadline_cycle();
    } else {
      result.verdict = monitor_.run_event_cycle(events_[*pending->event_index]);
      ++next_event_;
    }
  } catch (const RuntimeFault& f) {
    result.fault = f.fault();
    halted_ = true;
  }
  result.snapshot = monitor_.snapshot();
  return result;
}

}  // namespace lola
