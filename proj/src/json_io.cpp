#include "perturbdyn/json_io.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

std::string library_version() { return PERTURBDYN_VERSION; }

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("expected a number or an [re, im] pair, got " + j.dump());
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix rows must all have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json multiset_to_json(const Multiset& m) { return Json(m.elements()); }

Multiset multiset_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("multiset must be an array of indices, got " + j.dump());
  std::vector<int> e;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError("multiset entries must be integers, got " + j.dump());
    e.push_back(v.get<int>());
  }
  try {
    return Multiset(std::move(e));
  } catch (const Error& err) {
    throw ConfigError(std::string("bad multiset ") + j.dump() + ": " + err.what());
  }
}

namespace {

Json labels_to_json(const std::vector<Multiset>& labels) {
  Json out = Json::array();
  for (const auto& l : labels) out.push_back(multiset_to_json(l));
  return out;
}

std::vector<Multiset> labels_from_json(const Json& j) {
  std::vector<Multiset> out;
  for (const auto& l : j) out.push_back(multiset_from_json(l));
  return out;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

std::vector<Matrix> matrices_from_json(const Json& j) {
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

const char* expansion_name(Expansion e) { return e == Expansion::Magnus ? "magnus" : "dyson"; }

Expansion expansion_from_name(const std::string& s) {
  if (s == "dyson") return Expansion::Dyson;
  if (s == "magnus") return Expansion::Magnus;
  throw ConfigError("expansion must be \"dyson\" or \"magnus\", got \"" + s + "\"");
}

}  // namespace

Json result_to_json(const PerturbationResult& r) {
  return Json{{"expansion", expansion_name(r.expansion)},
              {"frame_removed", r.frame_removed},
              {"frame_solution", matrix_to_json(r.frame_solution)},
              {"labels", labels_to_json(r.labels)},
              {"terms", matrices_to_json(r.terms)},
              {"n_steps", r.n_steps}};
}

PerturbationResult result_from_json(const Json& j) {
  PerturbationResult r;
  r.expansion = expansion_from_name(j.at("expansion").get<std::string>());
  r.frame_removed = j.value("frame_removed", false);
  r.frame_solution = matrix_from_json(j.at("frame_solution"));
  r.labels = labels_from_json(j.at("labels"));
  r.terms = matrices_from_json(j.at("terms"));
  r.n_steps = j.value("n_steps", 0L);
  if (r.labels.size() != r.terms.size()) throw ConfigError("result bundle: label/term count mismatch");
  return r;
}

Json expansion_to_json(const PrecomputedExpansion& e) {
  const auto& c = e.config;
  Json cfg{{"operators", matrices_to_json(c.operators)},
           {"frame_op", matrix_to_json(c.frame_op)},
           {"dt", c.dt},
           {"carrier_freqs", c.carrier_freqs},
           {"chebyshev_orders", c.chebyshev_orders},
           {"expansion_order", c.expansion_order},
           {"extra_labels", labels_to_json(c.extra_labels)},
           {"include_imag", c.include_imag},
           {"rtol", c.integration.rtol},
           {"atol", c.integration.atol}};
  return Json{{"format", kExpansionFormat},
              {"version", library_version()},
              {"mode", expansion_name(e.mode)},
              {"config", std::move(cfg)},
              {"labels", labels_to_json(e.labels)},
              {"terms", matrices_to_json(e.terms)},
              {"constant", matrix_to_json(e.constant)},
              {"frame_step", matrix_to_json(e.frame_step)},
              {"precompute_steps", e.precompute_steps}};
}

PrecomputedExpansion expansion_from_json(const Json& j) {
  if (!j.contains("format") || j.at("format") != kExpansionFormat) {
    throw ConfigError("expansion bundle format is not " + std::string(kExpansionFormat));
  }
  PrecomputedExpansion e;
  const Json& c = j.at("config");
  e.config.operators = matrices_from_json(c.at("operators"));
  e.config.frame_op = matrix_from_json(c.at("frame_op"));
  e.config.dt = c.at("dt").get<double>();
  e.config.carrier_freqs = c.at("carrier_freqs").get<std::vector<double>>();
  e.config.chebyshev_orders = c.at("chebyshev_orders").get<std::vector<int>>();
  e.config.expansion_order = c.at("expansion_order").get<int>();
  e.config.extra_labels = labels_from_json(c.at("extra_labels"));
  e.config.include_imag = c.at("include_imag").get<std::vector<bool>>();
  e.config.integration.rtol = c.at("rtol").get<double>();
  e.config.integration.atol = c.at("atol").get<double>();
  e.config.validate();
  e.mode = expansion_from_name(j.at("mode").get<std::string>());
  e.labels = labels_from_json(j.at("labels"));
  e.terms = matrices_from_json(j.at("terms"));
  e.constant = matrix_from_json(j.at("constant"));
  e.frame_step = matrix_from_json(j.at("frame_step"));
  e.precompute_steps = j.value("precompute_steps", 0L);
  e.variable_map = variable_layout(e.config);
  if (e.labels.size() != e.terms.size()) throw ConfigError("expansion bundle: label/term count mismatch");
  return e;
}

Json envelope_to_json(const PiecewiseConstantEnvelope& env) {
  Json samples = Json::array();
  for (const auto& z : env.samples) samples.push_back(complex_to_json(z));
  return Json{{"dt", env.dt}, {"t_start", env.t_start}, {"samples", std::move(samples)}};
}

PiecewiseConstantEnvelope envelope_from_json(const Json& j) {
  check_keys(j, {"dt", "t_start", "samples"}, "envelope");
  PiecewiseConstantEnvelope env;
  env.dt = required<double>(j, "dt", "envelope");
  env.t_start = value_or<double>(j, "t_start", 0.0, "envelope");
  if (!(env.dt > 0.0)) throw ConfigError("envelope: dt must be positive");
  if (!j.contains("samples") || !j.at("samples").is_array()) {
    throw ConfigError("envelope: samples must be an array of [re, im] pairs");
  }
  for (const auto& z : j.at("samples")) env.samples.push_back(complex_from_json(z));
  return env;
}

std::string matrix_to_csv(const Matrix& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (k) out << ',';
    out << "re_" << k / m.cols() << '_' << k % m.cols() << ",im_" << k / m.cols() << '_'
        << k % m.cols();
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (i || k) out << ',';
      out << m(i, k).real() << ',' << m(i, k).imag();
    }
  }
  out << '\n';
  return out.str();
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Byte offset -> line/column for the message.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": invalid JSON (" + e.what() + ")");
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp);
      throw ConfigError("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object, got " + obj.type_name());
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError(where + ": unknown key \"" + key + "\" (allowed: " + list + ")");
    }
  }
}

void throw_config_type_error(const std::string& where, const char* key, const char* detail) {
  throw ConfigError(where + "." + key + ": wrong type (" + detail + ")");
}

void throw_config_missing(const std::string& where, const char* key) {
  throw ConfigError(where + ": missing required key \"" + key + "\"");
}

}  // namespace perturbdyn
