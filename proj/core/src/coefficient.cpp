#include "gpwtdg/coefficient.hpp"

#include <charconv>
#include <stdexcept>

namespace gpwtdg {

CoefficientField::CoefficientField(std::string name, int smoothness_order, Partials partials)
    : name_(std::move(name)), smoothness_order_(smoothness_order), partials_(std::move(partials)) {
  if (!partials_) throw std::invalid_argument("coefficient field needs a partials callback");
  if (smoothness_order_ < 0) throw std::invalid_argument("negative smoothness order");
}

double CoefficientField::partial(int dx, int dy, double x, double y) const {
  if (dx < 0 || dy < 0) throw std::invalid_argument("negative derivative order");
  if (dx + dy > smoothness_order_)
    throw std::invalid_argument("field '" + name_ + "' supports derivatives up to order " +
                                std::to_string(smoothness_order_));
  return partials_(dx, dy, x, y);
}

CoefficientField make_constant(double c) {
  return CoefficientField("constant:" + std::to_string(c), kSmoothForever,
                          [c](int dx, int dy, double, double) {
                            return (dx == 0 && dy == 0) ? c : 0.0;
                          });
}

CoefficientField make_airy_field() {
  return CoefficientField("airy", kSmoothForever, [](int dx, int dy, double, double y) {
    if (dx == 0 && dy == 0) return -y;
    if (dx == 0 && dy == 1) return -1.0;
    return 0.0;
  });
}

CoefficientField make_weber_field(double a, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("weber field needs kappa > 0");
  const double shift = a / kappa;
  return CoefficientField("weber:" + std::to_string(a), kSmoothForever,
                          [shift](int dx, int dy, double x, double) {
                            if (dy != 0) return 0.0;
                            if (dx == 0) return x * x / 4.0 - shift;
                            if (dx == 1) return x / 2.0;
                            if (dx == 2) return 0.5;
                            return 0.0;
                          });
}

CoefficientField parse_field(std::string_view spec, double kappa) {
  auto number_after = [&](std::string_view prefix) {
    std::string_view tail = spec.substr(prefix.size());
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
    if (ec != std::errc() || ptr != tail.data() + tail.size())
      throw std::invalid_argument("bad coefficient spec: " + std::string(spec));
    return v;
  };
  if (spec == "airy") return make_airy_field();
  if (spec.starts_with("constant:")) return make_constant(number_after("constant:"));
  if (spec.starts_with("weber:")) return make_weber_field(number_after("weber:"), kappa);
  throw std::invalid_argument("unknown coefficient spec: " + std::string(spec));
}

}  // namespace gpwtdg
