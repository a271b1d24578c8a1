#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "perturbdyn/linalg.hpp"
#include "perturbdyn/multiset.hpp"
#include "perturbdyn/perturbation.hpp"
#include "perturbdyn/pertsolver.hpp"
#include "perturbdyn/signal.hpp"

namespace perturbdyn {

using Json = nlohmann::json;

/// Format tag written into cached expansion bundles.
inline constexpr std::string_view kExpansionFormat = "perturbdyn-expansion/1";

std::string library_version();

/// Matrices are nested row arrays of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json complex_to_json(Complex z);
/// Accepts [re, im] or a plain number.
Complex complex_from_json(const Json& j);

Json multiset_to_json(const Multiset& m);
Multiset multiset_from_json(const Json& j);

Json result_to_json(const PerturbationResult& r);
PerturbationResult result_from_json(const Json& j);

Json expansion_to_json(const PrecomputedExpansion& e);
/// Throws ConfigError when the format tag is missing or different.
PrecomputedExpansion expansion_from_json(const Json& j);

/// {dt, t_start, samples: [[re, im], ...]}.
Json envelope_to_json(const PiecewiseConstantEnvelope& env);
PiecewiseConstantEnvelope envelope_from_json(const Json& j);

/// Row-major flattening with one (re, im) column pair per entry.
std::string matrix_to_csv(const Matrix& m);

/// Parses JSON text; syntax errors become ConfigError naming the line and
/// column.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Rejects keys of `obj` outside `allowed`; `where` prefixes the message.
void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where);

[[noreturn]] void throw_config_type_error(const std::string& where, const char* key,
                                          const char* detail);
[[noreturn]] void throw_config_missing(const std::string& where, const char* key);

/// Typed member access with a fallback; wrong types raise ConfigError.
template <class T>
T value_or(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw_config_type_error(where, key, e.what());
  }
}

/// Required typed member.
template <class T>
T required(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw_config_missing(where, key);
  return value_or<T>(obj, key, T{}, where);
}

}  // namespace perturbdyn
