#pragma once

// Typed field access for the document parsers; every failure becomes a
// SchemaViolation naming the offending field.

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "devjudge/error.hpp"
#include "json.hpp"

namespace devjudge::detail {

using Json = nlohmann::ordered_json;

Json parse_document(std::string_view raw);
std::string read_file(const std::string& path);

const Json& require(const Json& obj, std::string_view key, std::string_view where);
std::string require_string(const Json& obj, std::string_view key, std::string_view where);
std::optional<std::string> nullable_string(const Json& obj, std::string_view key, std::string_view where,
                                           bool required);
long long require_integer(const Json& obj, std::string_view key, std::string_view where);
double require_number(const Json& obj, std::string_view key, std::string_view where);
bool require_bool(const Json& obj, std::string_view key, std::string_view where);
std::optional<bool> nullable_bool(const Json& obj, std::string_view key, std::string_view where);
void require_object(const Json& value, std::string_view where);

/// Members of obj whose keys are not in `known`.
Json collect_extra(const Json& obj, std::initializer_list<std::string_view> known);
void append_extra(Json& obj, const Json& extra);

}  // namespace devjudge::detail
