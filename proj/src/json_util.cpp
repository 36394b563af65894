#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace devjudge::detail {

namespace {
[[noreturn]] void violation(std::string_view where, std::string_view key, std::string_view what) {
  throw Error(ErrorKind::SchemaViolation, std::string(where) + "." + std::string(key) + ": " + std::string(what));
}
}  // namespace

Json parse_document(std::string_view raw) {
  try {
    return Json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MalformedDocument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_object(const Json& value, std::string_view where) {
  if (!value.is_object()) throw Error(ErrorKind::SchemaViolation, std::string(where) + ": expected an object");
}

const Json& require(const Json& obj, std::string_view key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) violation(where, key, "missing field");
  return *it;
}

std::string require_string(const Json& obj, std::string_view key, std::string_view where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) violation(where, key, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> nullable_string(const Json& obj, std::string_view key, std::string_view where,
                                           bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) violation(where, key, "missing field");
    return std::nullopt;
  }
  if (it->is_null()) return std::nullopt;
  if (!it->is_string()) violation(where, key, "expected a string or null");
  return it->get<std::string>();
}

long long require_integer(const Json& obj, std::string_view key, std::string_view where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) violation(where, key, "expected an integer");
  return v.get<long long>();
}

double require_number(const Json& obj, std::string_view key, std::string_view where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) violation(where, key, "expected a number");
  return v.get<double>();
}

bool require_bool(const Json& obj, std::string_view key, std::string_view where) {
  const auto& v = require(obj, key, where);
  if (!v.is_boolean()) violation(where, key, "expected a boolean");
  return v.get<bool>();
}

std::optional<bool> nullable_bool(const Json& obj, std::string_view key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_boolean()) violation(where, key, "expected a boolean or null");
  return it->get<bool>();
}

Json collect_extra(const Json& obj, std::initializer_list<std::string_view> known) {
  Json extra = Json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool is_known = false;
    for (auto k : known) is_known = is_known || it.key() == k;
    if (!is_known) extra[it.key()] = it.value();
  }
  return extra;
}

void append_extra(Json& obj, const Json& extra) {
  if (!extra.is_object()) return;
  for (auto it = extra.begin(); it != extra.end(); ++it) obj[it.key()] = it.value();
}

}  // namespace devjudge::detail
