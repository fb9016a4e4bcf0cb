#include "isocap/shape_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "isocap/functionals.hpp"
#include "isocap/shapes.hpp"
#include "isocap/spectral.hpp"

namespace isocap {

StarDomain parse_shape(const std::string& json_text, double p) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("shape file is not valid JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dimension").get<int>();
    const Params params(dim, p);
    const std::string kind = j.at("profile_kind").get<std::string>();
    const int grid_size = j.value("grid_size", 0);

    auto build = [&]() -> StarDomain {
      if (kind == "samples") {
        const auto v = j.at("samples").get<std::vector<double>>();
        const int m = static_cast<int>(v.size());
        return StarDomain(params, AngularGrid::for_dimension(dim, m),
                          Eigen::Map<const Eigen::VectorXd>(v.data(), m));
      }
      if (kind == "constant")
        return StarDomain::ball(params, j.at("radius").get<double>(), grid_size);
      if (kind == "ellipse") {
        const auto ax = j.at("semi_axes").get<std::vector<double>>();
        if (ax.size() != 2) throw std::invalid_argument("semi_axes must have two entries");
        return shapes::ellipsoid(params, ax[0], ax[1], grid_size);
      }
      if (kind == "modes") {
        const AngularGrid grid = AngularGrid::for_dimension(dim, grid_size);
        const auto& modes = j.at("modes");
        for (const auto& m : modes) {
          const int k = m.at("k").get<int>(), i = m.value("i", 0);
          const int max_i = (dim == 2 && k > 0) ? 1 : 0;
          if (k < 0 || i < 0 || i > max_i)
            throw std::invalid_argument("mode index (k, i) out of range");
          (void)m.at("a").get<double>();
        }
        return StarDomain::from_function(params, grid, [&](double x) {
          double r = 1.0;
          for (const auto& m : modes)
            r += m.at("a").get<double>() *
                 basis_function(dim, m.at("k").get<int>(), m.value("i", 0), x);
          return r;
        });
      }
      throw std::invalid_argument("unknown profile_kind '" + kind + "'");
    };
    StarDomain d = build();
    return j.value("normalize_volume", false) ? normalize_volume(d) : d;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed shape file: ") + e.what());
  }
}

StarDomain load_shape(const std::string& path, double p) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open shape file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_shape(ss.str(), p);
}

std::string shape_to_json(const StarDomain& domain) {
  nlohmann::json j;
  j["dimension"] = domain.dim();
  j["profile_kind"] = "samples";
  const auto& r = domain.rho();
  j["samples"] = std::vector<double>(r.data(), r.data() + r.size());
  return j.dump();
}

}  // namespace isocap
