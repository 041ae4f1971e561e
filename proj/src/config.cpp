#include "dhsic/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "dhsic/csv.hpp"
#include "dhsic/error.hpp"

namespace dhsic {

using nlohmann::json;

KernelSpec parse_kernel_spec(std::string_view text, Quadrature quadrature) {
  if (text == "linear") {
    if (quadrature == Quadrature::Trapezoid) {
      throw ConfigurationError("linear kernel does not support trapezoid quadrature");
    }
    return KernelSpec::linear();
  }
  constexpr std::string_view prefix = "gaussian:";
  if (text.starts_with(prefix)) {
    const auto number = text.substr(prefix.size());
    double eta_sq = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), eta_sq);
    if (!number.empty() && ec == std::errc{} && ptr == number.data() + number.size()) {
      auto spec = KernelSpec::gaussian(eta_sq, quadrature);
      spec.validate();
      return spec;
    }
  }
  throw ConfigurationError("invalid kernel '" + std::string(text) +
                           "' (expected gaussian:<eta_sq> or linear)");
}

std::string format_kernel_spec(const KernelSpec& spec) {
  if (const auto* g = std::get_if<Gaussian>(&spec.kind)) {
    return "gaussian:" + csv::format_double(g->eta_sq);
  }
  return "linear";
}

Quadrature parse_quadrature(std::string_view name) {
  if (name == "trapezoid") return Quadrature::Trapezoid;
  if (name == "none") return Quadrature::None;
  throw ConfigurationError("unknown quadrature '" + std::string(name) +
                           "' (expected trapezoid or none)");
}

std::string_view to_string(Quadrature q) noexcept {
  return q == Quadrature::Trapezoid ? "trapezoid" : "none";
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known, std::string_view where) {
  if (!j.is_object()) throw ConfigurationError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigurationError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<std::string> one_or_many(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& item : v) {
      if (!item.is_string()) throw ConfigurationError(std::string("'") + key + "' entries must be strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }
  throw ConfigurationError(std::string("'") + key + "' must be a string or a list of strings");
}

}  // namespace

sim::StudyConfig study_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"model", "methods", "scheme", "gamma", "kernels", "quadrature", "alpha",
                       "permutations", "replicates", "seed", "threads"},
                      "study config");
  sim::StudyConfig cfg;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    reject_unknown_keys(m, {"f", "lambda", "n", "grid_points", "grid", "num_terms"}, "model");
    if (m.contains("f")) cfg.model.f = sim::parse_dependence(get<std::string>(m, "f"));
    if (m.contains("lambda")) cfg.model.lambda = get<double>(m, "lambda");
    if (m.contains("n")) cfg.model.n = get<std::size_t>(m, "n");
    if (m.contains("num_terms")) cfg.model.num_terms = get<std::size_t>(m, "num_terms");
    if (m.contains("grid_points") && m.contains("grid")) {
      throw ConfigurationError("model: give either grid_points or grid, not both");
    }
    try {
      if (m.contains("grid_points")) {
        cfg.model.grid = FunctionalGrid::uniform(get<std::size_t>(m, "grid_points"));
      }
      if (m.contains("grid")) cfg.model.grid = FunctionalGrid(get<std::vector<double>>(m, "grid"));
    } catch (const InvalidInput& e) {
      throw ConfigurationError(std::string("model grid: ") + e.what());
    }
  }
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : one_or_many(j, "methods")) cfg.methods.push_back(sim::parse_method(name));
  }
  if (j.contains("scheme")) cfg.scheme.kind = parse_weight_kind(get<std::string>(j, "scheme"));
  if (j.contains("gamma")) cfg.scheme.gamma = get<double>(j, "gamma");
  std::vector<std::string> kernels{"gaussian:150"};
  std::vector<std::string> quadratures{"trapezoid"};
  if (j.contains("kernels")) kernels = one_or_many(j, "kernels");
  if (j.contains("quadrature")) quadratures = one_or_many(j, "quadrature");
  const auto d = sim::kModelComponents;
  if ((kernels.size() != 1 && kernels.size() != d) ||
      (quadratures.size() != 1 && quadratures.size() != d)) {
    throw ConfigurationError("'kernels' and 'quadrature' take 1 or " + std::to_string(d) +
                             " entries");
  }
  cfg.kernels.clear();
  for (std::size_t l = 0; l < d; ++l) {
    const auto q = parse_quadrature(quadratures[quadratures.size() == 1 ? 0 : l]);
    cfg.kernels.push_back(parse_kernel_spec(kernels[kernels.size() == 1 ? 0 : l], q));
  }
  if (j.contains("alpha")) cfg.alpha = get<double>(j, "alpha");
  if (j.contains("permutations")) cfg.permutations = get<std::size_t>(j, "permutations");
  if (j.contains("replicates")) {
    const auto r = get<long long>(j, "replicates");
    if (r < 1) throw ConfigurationError("replicates must be >= 1");
    cfg.replicates = static_cast<std::size_t>(r);
  }
  if (j.contains("seed")) cfg.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("threads")) cfg.threads = get<unsigned>(j, "threads");
  return cfg;
}

json to_json(const sim::StudyConfig& cfg) {
  json kernels = json::array();
  json quadrature = json::array();
  for (const auto& k : cfg.kernels) {
    kernels.push_back(format_kernel_spec(k));
    quadrature.push_back(std::string(to_string(k.quadrature)));
  }
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(sim::to_string(m)));
  const auto t = cfg.model.grid.points();
  return json{{"model",
               {{"f", std::string(sim::to_string(cfg.model.f))},
                {"lambda", cfg.model.lambda},
                {"n", cfg.model.n},
                {"grid", std::vector<double>(t.begin(), t.end())},
                {"num_terms", cfg.model.num_terms}}},
              {"methods", methods},
              {"scheme", std::string(to_string(cfg.scheme.kind))},
              {"gamma", cfg.scheme.gamma},
              {"kernels", kernels},
              {"quadrature", quadrature},
              {"alpha", cfg.alpha},
              {"permutations", cfg.permutations},
              {"replicates", cfg.replicates},
              {"seed", cfg.seed}};
}

namespace {

json node_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = node_to_json(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& value : *a) out.push_back(node_to_json(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  throw ConfigurationError("unsupported TOML value (dates and times are not accepted)");
}

}  // namespace

json toml_to_json(std::string_view toml_text, std::string_view source) {
  try {
    return node_to_json(toml::parse(toml_text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": " << e.description() << " at line " << e.source().begin.line;
    throw ConfigurationError(msg.str());
  }
}

sim::StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto text = buffer.str();
  const auto ext = path.extension().string();
  if (ext == ".toml") return study_config_from_json(toml_to_json(text, path.string()));
  try {
    return study_config_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

}  // namespace dhsic
