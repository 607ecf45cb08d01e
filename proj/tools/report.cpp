#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

namespace qgeom::cli {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (const unsigned char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

void append_double(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string text(buf);
  // Keep a float marker so the value reloads as a double.
  if (text.find_first_of(".eE") == std::string::npos) {
    text += ".0";
  }
  out += text;
}

void write_value(std::string& out, const nlohmann::ordered_json& v,
                 int indent) {
  const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(indent + 1), ' ');
  switch (v.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        append_escaped(out, key);
        out += ": ";
        write_value(out, item, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; nested structures indent.
      bool scalar_only = true;
      for (const auto& item : v) {
        if (item.is_structured()) {
          scalar_only = false;
          break;
        }
      }
      if (scalar_only) {
        out += "[";
        bool first = true;
        for (const auto& item : v) {
          if (!first) out += ", ";
          first = false;
          write_value(out, item, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        write_value(out, item, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::string:
      append_escaped(out, v.get_ref<const std::string&>());
      return;
    case nlohmann::ordered_json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case nlohmann::ordered_json::value_t::number_integer:
      out += std::to_string(v.get<long long>());
      return;
    case nlohmann::ordered_json::value_t::number_unsigned:
      out += std::to_string(v.get<unsigned long long>());
      return;
    case nlohmann::ordered_json::value_t::number_float:
      append_double(out, v.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace

std::string render_json(const nlohmann::ordered_json& doc) {
  std::string out;
  write_value(out, doc, 0);
  return out;
}

void emit_report(const nlohmann::ordered_json& doc) {
  std::cout << render_json(doc) << "\n";
}

}  // namespace qgeom::cli
