// Copyright 2026 The qhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "qhist/probability.hpp"

namespace qhist {

/// Shared numeric rendering: 12 significant digits, so the human and
/// machine views of the same quantity are character-identical.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  // "-0" prints from tiny negative rounding noise; normalize it away.
  return std::string(buf) == "-0" ? "0" : buf;
}

/**
 * Minimal JSON document with insertion-ordered object keys. Numbers are
 * frozen to their rendered text at insertion time: emitting a document
 * twice — or quoting one of its numbers in a human-format table — can
 * never disagree byte-for-byte.
 */
class Json {
 public:
  Json() : kind_(Kind::object) {}

  static Json object() { return Json(Kind::object); }
  static Json array() { return Json(Kind::array); }
  static Json text(std::string s) {
    Json j(Kind::text);
    j.str_ = std::move(s);
    return j;
  }
  static Json real(double x) {
    Json j(Kind::number);
    j.str_ = format_real(x);
    return j;
  }
  static Json integer(std::int64_t n) {
    Json j(Kind::number);
    j.str_ = std::to_string(n);
    return j;
  }
  static Json boolean(bool b) {
    Json j(Kind::number);
    j.str_ = b ? "true" : "false";
    return j;
  }

  Json& add(const std::string& key, Json value) {
    for (const auto& kv : members_)
      if (kv.first == key) throw Error("duplicate report key '" + key + "'");
    members_.emplace_back(key, std::move(value));
    return *this;
  }

  Json& push(Json value) {
    items_.push_back(std::move(value));
    return *this;
  }

  /// Rendered text of a number/bool/text leaf (as it will be emitted).
  const std::string& leaf() const { return str_; }

  std::string dump() const {
    std::string out;
    render(out, 0);
    out += "\n";
    return out;
  }

 private:
  enum class Kind { object, array, text, number };

  explicit Json(Kind k) : kind_(k) {}

  static void escape(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
          } else {
            out += static_cast<char>(c);
          }
      }
    }
    out += '"';
  }

  void render(std::string& out, int depth) const {
    const std::string pad(static_cast<size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<size_t>(depth + 1) * 2, ' ');
    switch (kind_) {
      case Kind::text:
        escape(str_, out);
        break;
      case Kind::number:
        out += str_;
        break;
      case Kind::object:
        if (members_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (size_t i = 0; i < members_.size(); ++i) {
          out += inner;
          escape(members_[i].first, out);
          out += ": ";
          members_[i].second.render(out, depth + 1);
          if (i + 1 < members_.size()) out += ",";
          out += "\n";
        }
        out += pad + "}";
        break;
      case Kind::array:
        if (items_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (size_t i = 0; i < items_.size(); ++i) {
          out += inner;
          items_[i].render(out, depth + 1);
          if (i + 1 < items_.size()) out += ",";
          out += "\n";
        }
        out += pad + "]";
        break;
    }
  }

  Kind kind_;
  std::string str_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> items_;
};

/// Joint table as a JSON object: variable declarations plus one entry per
/// cell, keyed "A=+1,B=-1"-style in storage order.
inline Json table_json(const ProbabilityTable& t) {
  Json vars = Json::array();
  for (const Variable& v : t.variables()) {
    Json var = Json::object();
    var.add("time", Json::text(v.time));
    var.add("name", Json::text(v.name));
    Json outs = Json::array();
    for (const std::string& o : v.outcomes) outs.push(Json::text(o));
    var.add("outcomes", std::move(outs));
    vars.push(std::move(var));
  }
  Json cells = Json::object();
  for (size_t f = 0; f < t.size(); ++f) {
    std::string key;
    for (size_t v = 0; v < t.variables().size(); ++v) {
      if (!key.empty()) key += ",";
      key += t.variables()[v].name + "=" +
             t.variables()[v].outcomes[static_cast<size_t>(t.coordinate(f, static_cast<int>(v)))];
    }
    if (key.empty()) key = "()";
    cells.add(key, Json::real(t.entry(f)));
  }
  Json out = Json::object();
  out.add("variables", std::move(vars));
  out.add("entries", std::move(cells));
  return out;
}

}  // namespace qhist
