#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lola/rational.hpp"

namespace lola {

enum class TypeKind : std::uint8_t { Int64, UInt64, Float64, Bool, String, Tuple };

/// Value type of a stream or expression. Tuples carry at least two elements.
struct ValueType {
  TypeKind kind = TypeKind::Int64;
  std::vector<ValueType> elements;

  static ValueType int64() { return {TypeKind::Int64, {}}; }
  static ValueType uint64() { return {TypeKind::UInt64, {}}; }
  static ValueType float64() { return {TypeKind::Float64, {}}; }
  static ValueType boolean() { return {TypeKind::Bool, {}}; }
  static ValueType string() { return {TypeKind::String, {}}; }
  static ValueType tuple(std::vector<ValueType> elements);

  bool is_numeric() const {
    return kind == TypeKind::Int64 || kind == TypeKind::UInt64 ||
           kind == TypeKind::Float64;
  }
  bool is_scalar() const { return kind != TypeKind::Tuple; }

  std::string to_string() const;

  friend bool operator==(const ValueType&, const ValueType&) = default;
};

/// Strong type for a span of time in seconds.
struct Duration {
  Rational seconds;
  friend auto operator<=>(const Duration&, const Duration&) = default;
};

/// Strong type for an evaluation frequency in Hertz.
struct Frequency {
  Rational hertz;
  Rational period() const { return hertz.reciprocal(); }
  friend auto operator<=>(const Frequency&, const Frequency&) = default;
};

/// Prints an exact quantity without a trailing `.0` for integers, e.g. `1`,
/// `0.5`, `60`.
std::string compact_number(const Rational& value);

std::string to_string(const Duration& d);   // e.g. "60s"
std::string to_string(const Frequency& f);  // e.g. "1Hz"

enum class AggFunc : std::uint8_t { Count, Sum, Avg, Min, Max };

const char* to_string(AggFunc f);

/// A runtime value. Tuples hold their elements by value.
struct Value {
  using Tuple = std::vector<Value>;
  std::variant<std::int64_t, std::uint64_t, double, bool, std::string, Tuple>
      data;

  Value() = default;
  static Value of_int(std::int64_t v) { return Value{v}; }
  static Value of_uint(std::uint64_t v) { return Value{v}; }
  static Value of_float(double v) { return Value{v}; }
  static Value of_bool(bool v) { return Value{v}; }
  static Value of_string(std::string v) { return Value{std::move(v)}; }
  static Value of_tuple(Tuple v) { return Value{std::move(v)}; }

  /// The additive zero of a type; tuples get element-wise zeros.
  static Value zero_of(const ValueType& type);

  TypeKind kind() const;
  bool as_bool() const { return std::get<bool>(data); }
  double as_float() const { return std::get<double>(data); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  std::uint64_t as_uint() const { return std::get<std::uint64_t>(data); }
  const std::string& as_string() const { return std::get<std::string>(data); }
  const Tuple& as_tuple() const { return std::get<Tuple>(data); }

  /// Numeric value as double; Bool maps to 0/1.
  double to_plot_number() const;

  /// Text used in CSV cells and diagnostics. Floats use the shortest
  /// round-trip representation and always contain a `.`, `e`, `inf` or `nan`.
  std::string to_string() const;

  /// Bitwise equality: NaN == NaN, +0.0 != -0.0. Used for verdict comparison.
  friend bool operator==(const Value& a, const Value& b);

 private:
  template <typename T>
  explicit Value(T v) : data(std::move(v)) {}
};

std::string format_float(double v);

}  // namespace lola
