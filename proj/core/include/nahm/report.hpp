#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace nahm {

/// Doubles in reports are printed with 17 significant digits so identical
/// runs produce byte-identical files.
std::string format_double(double v);

/// Minimal ordered JSON value for report files.  Insertion order of object
/// keys is preserved.
class JsonValue {
 public:
  JsonValue() : kind_(Kind::Null) {}
  JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
  JsonValue(int v) : kind_(Kind::Int), int_(v) {}
  JsonValue(std::int64_t v) : kind_(Kind::Int), int_(v) {}
  JsonValue(std::uint64_t v) : kind_(Kind::Int), int_(static_cast<std::int64_t>(v)) {}
  JsonValue(double v) : kind_(Kind::Double), double_(v) {}
  JsonValue(const char* s) : kind_(Kind::String), string_(s) {}
  JsonValue(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

  static JsonValue object();
  static JsonValue array();

  JsonValue& set(const std::string& key, JsonValue v);  // object
  JsonValue& push(JsonValue v);                         // array

  bool is_object() const { return kind_ == Kind::Object; }
  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };
  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> fields_;
};

/// RFC-4180 style quoting: fields containing commas, quotes or newlines are
/// quoted, embedded quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

}  // namespace nahm
