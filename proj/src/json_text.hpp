#pragma once

// JSON text with every floating-point value written at 17 significant digits.
// nlohmann's own dump() picks the shortest round-trip form instead.

#include <cmath>
#include <string>

#include "ewc/io.hpp"
#include "json.hpp"

namespace ewc::io {

inline void append_json(std::string& out, const nlohmann::json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        append_json(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        newline(depth + 1);
        append_json(out, j[i], indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string to_json_text(const nlohmann::json& j, int indent = 2) {
  std::string out;
  append_json(out, j, indent, 0);
  return out;
}

}  // namespace ewc::io
