#pragma once

// Flat output records, written as JSON lines or CSV rows. Numbers always
// carry 17 significant digits so values round-trip exactly.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace poolctl {

enum class Format { Jsonl, Csv };

class Record {
 public:
  using Value = std::variant<double, long long, bool, std::string>;

  Record& add(std::string key, double v) { return put(std::move(key), v); }
  Record& add(std::string key, int v) { return put(std::move(key), static_cast<long long>(v)); }
  Record& add(std::string key, long long v) { return put(std::move(key), v); }
  Record& add(std::string key, unsigned long long v) {
    return put(std::move(key), static_cast<long long>(v));
  }
  Record& add(std::string key, bool v) { return put(std::move(key), v); }
  Record& add(std::string key, std::string v) { return put(std::move(key), std::move(v)); }
  Record& add(std::string key, const char* v) { return put(std::move(key), std::string(v)); }
  Record& add(std::string key, std::string_view v) { return put(std::move(key), std::string(v)); }

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

 private:
  Record& put(std::string key, Value v) {
    fields_.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  std::vector<std::pair<std::string, Value>> fields_;
};

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Emits records; in CSV mode the first record's keys become the header and
// a new header is printed whenever the key set changes.
class Writer {
 public:
  Writer(Format fmt, std::FILE* out) : fmt_(fmt), out_(out) {}

  void write(const Record& r) {
    if (fmt_ == Format::Jsonl) {
      std::string line = "{";
      bool first = true;
      for (const auto& [k, v] : r.fields()) {
        if (!first) line += ",";
        first = false;
        line += "\"" + json_escape(k) + "\":" + render(v, true);
      }
      line += "}\n";
      std::fputs(line.c_str(), out_);
      return;
    }
    std::vector<std::string> keys;
    for (const auto& f : r.fields()) keys.push_back(f.first);
    if (keys != header_) {
      header_ = keys;
      std::string h;
      for (std::size_t i = 0; i < keys.size(); ++i) h += (i ? "," : "") + csv_cell(keys[i]);
      std::fputs((h + "\n").c_str(), out_);
    }
    std::string row;
    for (std::size_t i = 0; i < r.fields().size(); ++i)
      row += (i ? "," : "") + render(r.fields()[i].second, false);
    std::fputs((row + "\n").c_str(), out_);
  }

 private:
  static std::string render(const Record::Value& v, bool json) {
    if (const double* d = std::get_if<double>(&v)) {
      const std::string s = format_number(*d);
      return (!json && s == "null") ? "" : s;
    }
    if (const long long* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    const std::string& s = std::get<std::string>(v);
    return json ? "\"" + json_escape(s) + "\"" : csv_cell(s);
  }

  Format fmt_;
  std::FILE* out_;
  std::vector<std::string> header_;
};

}  // namespace poolctl
