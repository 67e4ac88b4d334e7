#include "radcal/canonical_json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "radcal/error.hpp"

namespace radcal {
namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep floats recognisable as floats so a reparse yields the same type.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_line(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += Json(it.key()).dump();
        out += ":";
        dump_line(it.value(), out);
      }
      out += "}";
      return;
    }
    case Json::value_t::array:
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",";
        dump_line(j[i], out);
      }
      out += "]";
      return;
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

void dump(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        dump(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; this keeps RLE and corner lists compact.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_canonical(const Json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

std::string dump_canonical_line(const Json& j) {
  std::string out;
  dump_line(j, out);
  return out;
}

}  // namespace radcal
