#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lola/mir.hpp"
#include "lola/rational.hpp"
#include "lola/types.hpp"

namespace lola {

/// Inputs that receive a value at the same instant. `inputs` is indexed by
/// input declaration order; absent inputs are nullopt.
struct Event {
  Rational time;
  std::vector<std::optional<Value>> inputs;

  friend bool operator==(const Event&, const Event&) = default;
};

enum class VerdictKind : std::uint8_t { Periodic, Event };
enum class VerdictMode : std::uint8_t { TriggersOnly, Changed, FullState };

const char* to_string(VerdictKind kind);
const char* to_string(VerdictMode mode);
std::optional<VerdictMode> parse_verdict_mode(const std::string& text);

struct FiredTrigger {
  std::size_t index = 0;
  std::string message;

  friend bool operator==(const FiredTrigger&, const FiredTrigger&) = default;
};

/// Result of one evaluation cycle.
///
/// `values` and `fresh` are indexed by value column (inputs, then outputs; see
/// MirSpec::value_columns). `fresh[i]` is set when column i was evaluated in
/// this cycle. In Changed mode only fresh columns carry a value; in FullState
/// mode every column with a stored value does. TriggersOnly leaves both empty.
struct Verdict {
  Rational time;
  VerdictKind kind = VerdictKind::Event;
  std::uint64_t cycle = 0;
  std::vector<FiredTrigger> triggers;
  std::vector<std::optional<Value>> values;
  std::vector<bool> fresh;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Runtime failure that halts a monitor.
struct RunFault {
  std::string code;     // R001, R002 or R003
  std::string message;
  std::string stream;   // offending stream, empty for R001
  std::uint64_t cycle = 0;
  Rational time;

  friend bool operator==(const RunFault&, const RunFault&) = default;
};

class RuntimeFault : public std::runtime_error {
 public:
  explicit RuntimeFault(RunFault fault);
  const RunFault& fault() const { return fault_; }

 private:
  RunFault fault_;
};

/// Evaluation state of one specification. Deadlines due at the same instant
/// as an event are processed before that event; periodic groups due at the
/// same instant share one cycle.
class Monitor {
 public:
  /// Arms each periodic group at `start_time + period`.
  Monitor(MirSpec mir, VerdictMode mode, Rational start_time);

  /// Processes every deadline up to and including the event's timestamp,
  /// then the event itself. Throws RuntimeFault; a faulted monitor rethrows
  /// the same fault on every later call.
  std::vector<Verdict> accept_event(const Event& event);

  /// Processes the remaining deadlines due at or before `end_time` (default:
  /// the current time).
  std::vector<Verdict> finish(std::optional<Rational> end_time = std::nullopt);

  std::optional<Rational> next_deadline() const;

  /// Runs the earliest pending deadline batch. Requires next_deadline().
  Verdict run_deadline_cycle();
  /// Runs one event cycle without processing earlier deadlines first.
  Verdict run_event_cycle(const Event& event);

  /// Buffers with sequence numbers, armed deadlines and window panes.
  nlohmann::json snapshot() const;

  const MirSpec& mir() const { return mir_; }
  VerdictMode mode() const { return mode_; }
  const Rational& current_time() const { return now_; }
  std::uint64_t cycles() const { return cycle_; }

 private:
  struct Slot {
    Value value;
    std::uint64_t seq = 0;
  };

  class RingBuffer {
   public:
    explicit RingBuffer(std::size_t capacity) : slots_(capacity) {}
    void push(Value v);
    /// k-th newest value, 0 = newest.
    const Value* get(std::size_t k) const;
    std::vector<Slot> newest_first() const;

   private:
    std::vector<Slot> slots_;
    std::size_t head_ = 0;  // next write position
    std::size_t size_ = 0;
    std::uint64_t next_seq_ = 0;
  };

  struct Pane {
    Rational begin;
    Rational end;
    std::uint64_t count = 0;
    Value sum;               // in the target type
    double float_sum = 0.0;  // for avg
    std::optional<Value> min;
    std::optional<Value> max;
  };

  struct WindowState {
    Pane open;
    std::vector<Pane> closed;  // oldest first, at most MirWindow::panes
  };

  struct Armed {
    Rational due;
    std::size_t group;
  };

  void check_time(const Rational& t);
  Verdict begin_verdict(VerdictKind kind, const Rational& t) const;
  void evaluate(std::size_t pos, Verdict& verdict);
  void store(std::size_t pos, Value v);
  void finish_verdict(Verdict& verdict) const;
  void rotate_windows(const std::vector<std::size_t>& due_groups, const Rational& d);
  void add_to_pane(Pane& pane, const MirWindow& w, const Value& v);
  Value aggregate(const MirExpr& e, std::size_t accessor);
  Value eval(const MirExpr& e, std::size_t accessor);
  [[noreturn]] void fail(const std::string& code, const std::string& message);
  void rethrow_if_faulted() const;

  MirSpec mir_;
  VerdictMode mode_;
  Rational now_;
  std::uint64_t cycle_ = 0;
  std::vector<RingBuffer> buffers_;
  std::vector<bool> fresh_;  // by stream position, for the running cycle
  std::vector<WindowState> windows_;
  std::vector<std::vector<std::size_t>> windows_by_target_;
  std::vector<Armed> deadlines_;  // one entry per group
  std::optional<std::size_t> evaluating_;
  std::optional<RunFault> fault_;
};

struct RunResult {
  std::vector<Verdict> verdicts;
  std::optional<RunFault> fault;
};

/// Feeds every event, then finishes at `end_time`. `start_time` defaults to
/// the first event's timestamp (0 for an empty trace).
RunResult run_batch(const MirSpec& mir, const std::vector<Event>& events, VerdictMode mode,
                    std::optional<Rational> start_time = std::nullopt,
                    std::optional<Rational> end_time = std::nullopt);

/// Step-wise execution over a loaded trace. The sequence of verdicts returned
/// by step() equals run_batch's verdict list for the same arguments.
class Session {
 public:
  struct Pending {
    VerdictKind kind = VerdictKind::Event;
    Rational time;
    std::optional<std::size_t> event_index;  // Event only
  };

  struct StepResult {
    std::optional<Verdict> verdict;
    std::optional<RunFault> fault;
    bool exhausted = false;
    nlohmann::json snapshot;
  };

  Session(MirSpec mir, std::vector<Event> events, VerdictMode mode,
          std::optional<Rational> start_time = std::nullopt,
          std::optional<Rational> end_time = std::nullopt);

  /// Advances exactly one cycle. After the trace is consumed, or after a
  /// fault, returns `exhausted` without a verdict.
  StepResult step();
  std::optional<Pending> peek() const;
  nlohmann::json state_snapshot() const { return monitor_.snapshot(); }
  void reset();

  std::size_t events_consumed() const { return next_event_; }
  const Monitor& monitor() const { return monitor_; }

 private:
  Rational resolved_start() const;

  MirSpec mir_;
  std::vector<Event> events_;
  VerdictMode mode_;
  std::optional<Rational> start_time_;
  std::optional<Rational> end_time_;
  Monitor monitor_;
  std::size_t next_event_ = 0;
  bool halted_ = false;
};

/// Restricts a FullState verdict to what `mode` would have reported.
Verdict project_verdict(Verdict verdict, VerdictMode mode);

/// Untagged JSON for a value: numbers, booleans, strings and arrays.
/// Non-finite floats become the strings `inf`, `-inf` and `nan`.
nlohmann::json value_to_plain_json(const Value& v);

nlohmann::json verdict_to_json(const Verdict& verdict, const MirSpec& mir);
nlohmann::json fault_to_json(const RunFault& fault);

}  // namespace lola
