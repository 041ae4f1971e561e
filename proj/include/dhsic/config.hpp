#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dhsic/kernel.hpp"
#include "dhsic/sim.hpp"

namespace dhsic {

/// "gaussian:<eta_sq>" or "linear".
KernelSpec parse_kernel_spec(std::string_view text, Quadrature quadrature = Quadrature::None);
std::string format_kernel_spec(const KernelSpec& spec);

Quadrature parse_quadrature(std::string_view name);
std::string_view to_string(Quadrature q) noexcept;

/// Study configuration as JSON. Missing keys keep their defaults; unknown
/// keys are rejected.
///
///   { "model": {"f": "square", "lambda": 0, "n": 100, "grid_points": 51,
///               "num_terms": 50},
///     "methods": ["t1", "t2"], "scheme": "alternating", "gamma": 0.32,
///     "kernels": "gaussian:150", "quadrature": "trapezoid",
///     "alpha": 0.05, "permutations": 100, "replicates": 200, "seed": 1,
///     "threads": 1 }
///
/// "kernels" and "quadrature" take one value (broadcast) or one per component;
/// "model.grid" may give explicit abscissae instead of "grid_points".
sim::StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const sim::StudyConfig& cfg);

/// Converts a TOML document with the same layout into its JSON equivalent.
nlohmann::json toml_to_json(std::string_view toml_text, std::string_view source = "<memory>");

/// Loads .json or .toml by extension.
sim::StudyConfig load_study_config(const std::filesystem::path& path);

}  // namespace dhsic
