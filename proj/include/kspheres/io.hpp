// Deterministic table and summary emission. All floats print with 17
// significant digits; identical inputs produce identical bytes.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kspheres/common.hpp"

namespace kspheres {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_int(int64_t x) { return std::to_string(x); }

struct CsvWriter {
  std::string buf;

  void header(std::span<const std::string> cols) { row_raw(cols); }
  void row_raw(std::span<const std::string> fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) buf.push_back(',');
      buf += fields[i];
    }
    buf.push_back('\n');
  }
  void row(std::initializer_list<std::string> fields) {
    row_raw(std::span<const std::string>(fields.begin(), fields.size()));
  }
  const std::string& str() const { return buf; }
};

// Minimal ordered JSON writer (nlohmann prints shortest-roundtrip floats;
//-output files pin 17 significant digits instead).
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    open("{");
    return *this;
  }
  JsonWriter& end_object() {
    close("}");
    return *this;
  }
  JsonWriter& begin_array(const std::string& key = "") {
    if (!key.empty()) write_key(key);
    open("[");
    return *this;
  }
  JsonWriter& end_array() {
    close("]");
    return *this;
  }
  JsonWriter& field(const std::string& key, double v) {
    write_key(key);
    append_value(std::isfinite(v) ? fmt17(v) : ("\"" + fmt17(v) + "\""));
    return *this;
  }
  JsonWriter& field(const std::string& key, int64_t v) {
    write_key(key);
    append_value(std::to_string(v));
    return *this;
  }
  JsonWriter& field(const std::string& key, int v) { return field(key, int64_t(v)); }
  JsonWriter& field(const std::string& key, bool v) {
    write_key(key);
    append_value(v ? "true" : "false");
    return *this;
  }
  JsonWriter& field(const std::string& key, const std::string& v) {
    write_key(key);
    append_value("\"" + escape(v) + "\"");
    return *this;
  }
  JsonWriter& element(double v) {
    append_value(std::isfinite(v) ? fmt17(v) : ("\"" + fmt17(v) + "\""));
    return *this;
  }
  JsonWriter& element(int64_t v) {
    append_value(std::to_string(v));
    return *this;
  }
  std::string str() const { return buf_ + "\n"; }

 private:
  std::string buf_;
  bool need_comma_ = false;

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  }
  void open(const char* b) {
    if (need_comma_) buf_ += ",";
    buf_ += b;
    need_comma_ = false;
  }
  void close(const char* b) {
    buf_ += b;
    need_comma_ = true;
  }
  void write_key(const std::string& key) {
    if (need_comma_) buf_ += ",";
    buf_ += "\"" + key + "\":";
    need_comma_ = false;
  }
  void append_value(const std::string& v) {
    if (need_comma_) buf_ += ",";
    buf_ += v;
    need_comma_ = true;
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace kspheres
