#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "pair_matrix.hpp"

namespace psikit {

// Formats a double with 17 significant digits, enough to round-trip and
// stable across runs. Non-finite values become quoted strings because JSON
// has no literal for them.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal streaming JSON writer with deterministic output: keys appear in
// insertion order and numbers use format_number. The caller is responsible
// for balanced begin/end calls. A separator is inserted automatically before
// any token that does not open a container or follow a key.
class JsonWriter {
 public:
  void begin_object() {
    separator();
    out_ += '{';
  }
  void end_object() { out_ += '}'; }
  void begin_array() {
    separator();
    out_ += '[';
  }
  void end_array() { out_ += ']'; }

  void key(const std::string& k) {
    separator();
    append_string(k);
    out_ += ':';
  }

  void value(double v) {
    separator();
    out_ += format_number(v);
  }
  void value(long long v) {
    separator();
    out_ += std::to_string(v);
  }
  void value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
  }
  void value(int v) { value(static_cast<long long>(v)); }
  void value(bool v) {
    separator();
    out_ += v ? "true" : "false";
  }
  void value(const std::string& v) {
    separator();
    append_string(v);
  }
  void value(const char* v) { value(std::string(v)); }

  const std::string& str() const { return out_; }

 private:
  void separator() {
    if (out_.empty()) return;
    const char last = out_.back();
    if (last != '{' && last != '[' && last != ':') out_ += ',';
  }

  void append_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
};

inline void write_matrix(JsonWriter& w, const PairMatrix& m) {
  w.begin_object();
  w.key("n");
  w.value(m.n);
  w.key("scale");
  w.value(m.scale);
  w.key("entries");
  w.begin_array();
  for (int i = 0; i < m.n; ++i) {
    w.begin_array();
    for (int j = 0; j < m.n; ++j) w.value(m.at(i, j));
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

}  // namespace psikit
