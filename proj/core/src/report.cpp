#include "nahm/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nahm {

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::Object;
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::Array;
  return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  if (kind_ != Kind::Object) throw std::logic_error("set() on a non-object");
  fields_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  if (kind_ != Kind::Array) throw std::logic_error("push() on a non-array");
  items_.push_back(std::move(v));
  return *this;
}

namespace {
void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}
}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
  const std::string padend(static_cast<size_t>(indent) * depth, ' ');
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_ ? "true" : "false"; break;
    case Kind::Int: out += std::to_string(int_); break;
    case Kind::Double: out += format_double(double_); break;
    case Kind::String: write_escaped(out, string_); break;
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].write(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      out += padend + "]";
      break;
    }
    case Kind::Object: {
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (size_t i = 0; i < fields_.size(); ++i) {
        out += pad;
        write_escaped(out, fields_[i].first);
        out += ": ";
        fields_[i].second.write(out, indent, depth + 1);
        if (i + 1 < fields_.size()) out += ',';
        out += '\n';
      }
      out += padend + "}";
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    const bool quote = f.find_first_of(",\"\n\r") != std::string::npos;
    if (quote) {
      os_ << '"';
      for (char c : f) {
        if (c == '"') os_ << '"';
        os_ << c;
      }
      os_ << '"';
    } else {
      os_ << f;
    }
    if (i + 1 < fields.size()) os_ << ',';
  }
  os_ << '\n';
}

}  // namespace nahm
