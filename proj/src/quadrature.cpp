#include "chsd/quadrature.hpp"

#include <cmath>
#include <string>

#include "chsd/errors.hpp"

namespace chsd {

namespace {

struct RawPoint {
  double xi, eta, weight;
};

QuadratureRule make_rule(int degree, std::initializer_list<RawPoint> raw) {
  QuadratureRule rule;
  rule.degree = degree;
  for (const auto& p : raw) {
    rule.points.emplace_back(p.xi, p.eta);
    rule.weights.push_back(p.weight);
  }
  return rule;
}

// Orbit parameters solved to 20 digits from the moment equations.
const QuadratureRule kDegree2 = make_rule(2, {
    {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
});

const QuadratureRule kDegree4 = make_rule(4, {
    {0.09157621350977074346, 0.09157621350977074346, 0.054975871827660933819},
    {0.09157621350977074346, 0.81684757298045851308, 0.054975871827660933819},
    {0.81684757298045851308, 0.09157621350977074346, 0.054975871827660933819},
    {0.10810301816807022736, 0.44594849091596488632, 0.11169079483900573285},
    {0.44594849091596488632, 0.10810301816807022736, 0.11169079483900573285},
    {0.44594849091596488632, 0.44594849091596488632, 0.11169079483900573285},
});

const QuadratureRule kDegree6 = make_rule(6, {
    {0.06308901449150222834, 0.06308901449150222834, 0.02542245318510340846},
    {0.06308901449150222834, 0.87382197101699554332, 0.02542245318510340846},
    {0.87382197101699554332, 0.06308901449150222834, 0.02542245318510340846},
    {0.053145049844816947353, 0.31035245103378440542, 0.041425537809186787597},
    {0.053145049844816947353, 0.63650249912139864723, 0.041425537809186787597},
    {0.31035245103378440542, 0.053145049844816947353, 0.041425537809186787597},
    {0.31035245103378440542, 0.63650249912139864723, 0.041425537809186787597},
    {0.63650249912139864723, 0.053145049844816947353, 0.041425537809186787597},
    {0.63650249912139864723, 0.31035245103378440542, 0.041425537809186787597},
    {0.24928674517091042129, 0.24928674517091042129, 0.058393137863189683013},
    {0.24928674517091042129, 0.50142650965817915742, 0.058393137863189683013},
    {0.50142650965817915742, 0.24928674517091042129, 0.058393137863189683013},
});

}  // namespace

const QuadratureRule& quadrature(int degree) {
  switch (degree) {
    case 2:
      return kDegree2;
    case 4:
      return kDegree4;
    case 6:
      return kDegree6;
    default:
      throw UnsupportedDegree("no triangle rule of degree " + std::to_string(degree));
  }
}

const LineRule& gauss_line_rule() {
  static const LineRule rule = [] {
    const double s = 2.0 * std::sqrt(10.0 / 7.0);
    const double r1 = std::sqrt(5.0 - s) / 3.0;
    const double r2 = std::sqrt(5.0 + s) / 3.0;
    const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    LineRule line;
    line.points = {0.5 * (1.0 - r2), 0.5 * (1.0 - r1), 0.5, 0.5 * (1.0 + r1), 0.5 * (1.0 + r2)};
    line.weights = {0.5 * w2, 0.5 * w1, 0.5 * 128.0 / 225.0, 0.5 * w1, 0.5 * w2};
    return line;
  }();
  return rule;
}

}  // namespace chsd
