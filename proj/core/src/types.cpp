#include "lola/types.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace lola {

ValueType ValueType::tuple(std::vector<ValueType> elements) {
  if (elements.size() < 2)
    throw std::invalid_argument("tuple types need at least two elements");
  return {TypeKind::Tuple, std::move(elements)};
}

std::string ValueType::to_string() const {
  switch (kind) {
    case TypeKind::Int64: return "Int64";
    case TypeKind::UInt64: return "UInt64";
    case TypeKind::Float64: return "Float64";
    case TypeKind::Bool: return "Bool";
    case TypeKind::String: return "String";
    case TypeKind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i > 0) out += ", ";
        out += elements[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

std::string compact_number(const Rational& value) {
  if (value.is_integer()) return std::to_string(value.num());
  return value.to_decimal();
}

std::string to_string(const Duration& d) {
  return compact_number(d.seconds) + "s";
}

std::string to_string(const Frequency& f) {
  return compact_number(f.hertz) + "Hz";
}

const char* to_string(AggFunc f) {
  switch (f) {
    case AggFunc::Count: return "count";
    case AggFunc::Sum: return "sum";
    case AggFunc::Avg: return "avg";
    case AggFunc::Min: return "min";
    case AggFunc::Max: return "max";
  }
  return "?";
}

Value Value::zero_of(const ValueType& type) {
  switch (type.kind) {
    case TypeKind::Int64: return of_int(0);
    case TypeKind::UInt64: return of_uint(0);
    case TypeKind::Float64: return of_float(0.0);
    case TypeKind::Bool: return of_bool(false);
    case TypeKind::String: return of_string("");
    case TypeKind::Tuple: {
      Tuple elems;
      for (const auto& e : type.elements) elems.push_back(zero_of(e));
      return of_tuple(std::move(elems));
    }
  }
  return {};
}

TypeKind Value::kind() const {
  switch (data.index()) {
    case 0: return TypeKind::Int64;
    case 1: return TypeKind::UInt64;
    case 2: return TypeKind::Float64;
    case 3: return TypeKind::Bool;
    case 4: return TypeKind::String;
    default: return TypeKind::Tuple;
  }
}

double Value::to_plot_number() const {
  switch (kind()) {
    case TypeKind::Int64: return static_cast<double>(as_int());
    case TypeKind::UInt64: return static_cast<double>(as_uint());
    case TypeKind::Float64: return as_float();
    case TypeKind::Bool: return as_bool() ? 1.0 : 0.0;
    default: throw std::logic_error("value is not plottable");
  }
}

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string out(buf, res.ptr);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string Value::to_string() const {
  switch (kind()) {
    case TypeKind::Int64: return std::to_string(as_int());
    case TypeKind::UInt64: return std::to_string(as_uint());
    case TypeKind::Float64: return format_float(as_float());
    case TypeKind::Bool: return as_bool() ? "true" : "false";
    case TypeKind::String: return as_string();
    case TypeKind::Tuple: {
      std::string out = "(";
      const auto& elems = as_tuple();
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i > 0) out += ", ";
        out += elems[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

bool operator==(const Value& a, const Value& b) {
  if (a.data.index() != b.data.index()) return false;
  if (a.kind() == TypeKind::Float64) {
    double x = a.as_float();
    double y = b.as_float();
    return std::memcmp(&x, &y, sizeof(double)) == 0;
  }
  return a.data == b.data;
}

}  // namespace lola
