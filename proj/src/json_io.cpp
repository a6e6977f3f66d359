#include "gbbm/json_io.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace gbbm::json_io {

namespace {

void write(const nlohmann::json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: already sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        write(it.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      std::string s = fmt::format("{:.17g}", v);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

std::string type_of(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: return "object";
    case nlohmann::json::value_t::array: return "array";
    case nlohmann::json::value_t::string: return "string";
    case nlohmann::json::value_t::boolean: return "boolean";
    case nlohmann::json::value_t::null: return "null";
    case nlohmann::json::value_t::number_float: return "number";
    default: return "integer";
  }
}

bool type_matches(const nlohmann::json& j, const std::string& t) {
  const std::string have = type_of(j);
  if (t == have) return true;
  if (t == "number" && have == "integer") return true;
  if (t == "integer" && have == "number") {
    const double v = j.get<double>();
    return std::isfinite(v) && v == std::floor(v);
  }
  return false;
}

void check(const nlohmann::json& doc, const nlohmann::json& s, const std::string& path,
           std::vector<std::string>& errs) {
  const std::string where = path.empty() ? "/" : path;
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = type_matches(doc, t.get<std::string>());
    else
      for (const auto& x : t) ok = ok || type_matches(doc, x.get<std::string>());
    if (!ok) {
      errs.push_back(fmt::format("{}: expected type {}, found {}", where, t.dump(), type_of(doc)));
      return;
    }
  }
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& x : s["enum"]) ok = ok || x == doc;
    if (!ok) errs.push_back(fmt::format("{}: value {} not in {}", where, doc.dump(), s["enum"].dump()));
  }
  if (s.contains("const") && s["const"] != doc)
    errs.push_back(fmt::format("{}: expected {}", where, s["const"].dump()));
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (s.contains("minimum") && v < s["minimum"].get<double>())
      errs.push_back(fmt::format("{}: {} is below the minimum {}", where, doc.dump(), s["minimum"].dump()));
    if (s.contains("exclusiveMinimum") && v <= s["exclusiveMinimum"].get<double>())
      errs.push_back(fmt::format("{}: {} must exceed {}", where, doc.dump(), s["exclusiveMinimum"].dump()));
    if (s.contains("maximum") && v > s["maximum"].get<double>())
      errs.push_back(fmt::format("{}: {} is above the maximum {}", where, doc.dump(), s["maximum"].dump()));
  }
  if (doc.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!doc.contains(k.get<std::string>()))
          errs.push_back(fmt::format("{}: missing required key '{}'", where, k.get<std::string>()));
    const bool closed = s.contains("additionalProperties") && s["additionalProperties"].is_boolean() &&
                        !s["additionalProperties"].get<bool>();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string sub = path + "/" + it.key();
      if (s.contains("properties") && s["properties"].contains(it.key()))
        check(it.value(), s["properties"][it.key()], sub, errs);
      else if (s.contains("additionalProperties") && s["additionalProperties"].is_object())
        check(it.value(), s["additionalProperties"], sub, errs);
      else if (closed)
        errs.push_back(fmt::format("{}: unexpected key '{}'", where, it.key()));
    }
  }
  if (doc.is_array()) {
    if (s.contains("minItems") && doc.size() < s["minItems"].get<std::size_t>())
      errs.push_back(fmt::format("{}: fewer than {} items", where, s["minItems"].dump()));
    if (s.contains("maxItems") && doc.size() > s["maxItems"].get<std::size_t>())
      errs.push_back(fmt::format("{}: more than {} items", where, s["maxItems"].dump()));
    if (s.contains("items"))
      for (std::size_t i = 0; i < doc.size(); ++i) check(doc[i], s["items"], fmt::format("{}/{}", path, i), errs);
  }
}

}  // namespace

std::string dump(const nlohmann::json& j) {
  std::string out;
  write(j, 0, out);
  out += "\n";
  return out;
}

std::vector<std::string> validate(const nlohmann::json& doc, const nlohmann::json& schema) {
  std::vector<std::string> errs;
  check(doc, schema, "", errs);
  return errs;
}

}  // namespace gbbm::json_io
