#pragma once

#include "lvem/core.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lvem::cli {

/// One flat output record.  Numbers are written with 17 significant digits so
/// that every value round-trips exactly; non-finite values become null.
class Record {
public:
  using Value = std::variant<double, long long, bool, std::string, std::vector<double>,
                             std::vector<std::vector<double>>>;

  explicit Record(std::string kind) { add("record", std::move(kind)); }

  Record& add(std::string key, Value v) {
    fields_.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  Record& add(std::string key, double v) { return add(std::move(key), Value(v)); }
  Record& add(std::string key, bool v) { return add(std::move(key), Value(v)); }
  Record& add(std::string key, long long v) { return add(std::move(key), Value(v)); }
  Record& add(std::string key, int v) { return add(std::move(key), Value(static_cast<long long>(v))); }
  Record& add(std::string key, std::size_t v) { return add(std::move(key), Value(static_cast<long long>(v))); }
  Record& add(std::string key, const char* v) { return add(std::move(key), Value(std::string(v))); }
  Record& add(std::string key, const Vec3& v) { return add(std::move(key), Value(std::vector<double>{v[0], v[1], v[2]})); }
  Record& add(std::string key, const Mat3& m) {
    std::vector<std::vector<double>> rows(3, std::vector<double>(3));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rows[r][c] = m(r, c);
    return add(std::move(key), Value(std::move(rows)));
  }

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

  std::string json() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [key, value] : fields_) {
      if (!first) out += ", ";
      first = false;
      out += nlohmann::json(key).dump() + ": " + format(value);
    }
    return out + "}";
  }

  static std::string number(double x) {
    if (!std::isfinite(x)) return "null";
    if (x == 0.0) return "0";  // no signed zeros, so reports compare byte for byte
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

private:
  static std::string format(const Value& v) {
    struct Visitor {
      std::string operator()(double x) const { return number(x); }
      std::string operator()(long long x) const { return std::to_string(x); }
      std::string operator()(bool b) const { return b ? "true" : "false"; }
      std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
      std::string operator()(const std::vector<double>& xs) const {
        std::string out = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + number(xs[i]);
        return out + "]";
      }
      std::string operator()(const std::vector<std::vector<double>>& rows) const {
        std::string out = "[";
        for (std::size_t i = 0; i < rows.size(); ++i) out += (i ? ", " : "") + (*this)(rows[i]);
        return out + "]";
      }
    };
    return std::visit(Visitor{}, v);
  }

  std::vector<std::pair<std::string, Value>> fields_;
};

/// Writes records as JSON lines, or as CSV with a header taken from the first
/// record of each kind.
class Reporter {
public:
  enum class Format { json_lines, csv };

  explicit Reporter(std::ostream& out, Format f = Format::json_lines) : out_(out), format_(f) {}

  void emit(const Record& r) {
    if (format_ == Format::json_lines) {
      out_ << r.json() << '\n';
      return;
    }
    const std::string& kind = std::get<std::string>(r.fields().front().second);
    if (kind != csv_kind_) {
      csv_kind_ = kind;
      std::string header;
      for (const auto& [key, value] : r.fields()) header += (header.empty() ? "" : ",") + key;
      out_ << header << '\n';
    }
    std::string line;
    bool first = true;
    for (const auto& [key, value] : r.fields()) {
      if (!first) line += ',';
      first = false;
      line += csv_cell(value);
    }
    out_ << line << '\n';
  }

private:
  static std::string csv_cell(const Record::Value& v) {
    if (const auto* x = std::get_if<double>(&v)) return std::isfinite(*x) ? Record::number(*x) : "";
    if (const auto* n = std::get_if<long long>(&v)) return std::to_string(*n);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* xs = std::get_if<std::vector<double>>(&v)) {
      std::string out;
      for (std::size_t i = 0; i < xs->size(); ++i) out += (i ? " " : "") + Record::number((*xs)[i]);
      return out;
    }
    return "";
  }

  std::ostream& out_;
  Format format_;
  std::string csv_kind_;
};

}  // namespace lvem::cli
