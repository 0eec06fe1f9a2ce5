#pragma once

#include "lpib/geometry.hpp"

#include <string>

namespace lpib {

// Body-spec files: {"ambient_complex_dim": n, "descriptor": {...}} with
// matrices row-major and complex entries as [re, im] pairs. Descriptors
// round-trip bit exactly (doubles print with shortest round-trip digits).
nlohmann::json star_body_spec(const StarBody& K);
StarBody star_body_from_spec(const nlohmann::json& spec);

StarBody load_star_body(const std::string& path);
void save_star_body(const StarBody& K, const std::string& path);

PlanarConvexBody load_planar_body(const std::string& path_or_inline);

}  // namespace lpib
