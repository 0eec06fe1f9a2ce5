#include "lpib/serialize.hpp"

#include <fstream>
#include <sstream>

namespace lpib {

nlohmann::json star_body_spec(const StarBody& K) {
  return {{"ambient_complex_dim", K.complex_dim()}, {"descriptor", K.to_json()}};
}

StarBody star_body_from_spec(const nlohmann::json& spec) {
  int n = spec.at("ambient_complex_dim");
  return StarBody::from_json_dim(spec.at("descriptor"), n);
}

StarBody load_star_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open body spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed body spec " + path + ": " + e.what());
  }
  return star_body_from_spec(j);
}

void save_star_body(const StarBody& K, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write body spec: " + path);
  out << star_body_spec(K).dump(2) << "\n";
}

PlanarConvexBody load_planar_body(const std::string& path_or_inline) {
  // Accept inline shorthand ("disk", "disk:2", "segment", "square",
  // "triangle") or a JSON file path.
  auto parse_short = [](const std::string& s) -> std::optional<PlanarConvexBody> {
    std::string name = s;
    double param = 1.0;
    if (auto pos = s.find(':'); pos != std::string::npos) {
      name = s.substr(0, pos);
      param = std::stod(s.substr(pos + 1));
    }
    if (name == "disk") return PlanarConvexBody::disk(param);
    if (name == "segment") return PlanarConvexBody::segment(param);
    if (name == "square") return PlanarConvexBody::square(param);
    if (name == "triangle") return PlanarConvexBody::triangle();
    return std::nullopt;
  };
  if (auto b = parse_short(path_or_inline)) return *b;
  std::ifstream in(path_or_inline);
  if (!in) throw std::invalid_argument("unknown planar body: " + path_or_inline);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed planar body spec " + path_or_inline + ": " + e.what());
  }
  return PlanarConvexBody::from_json(j);
}

}  // namespace lpib
