#include "geps/test_function.hpp"

#include <stdexcept>

namespace geps {

TestFunction TestFunction::constant(double c) { return {"constant", phi::Constant{c}}; }

TestFunction TestFunction::linear(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("linear test function: axis must be 0, 1 or 2");
  return {"v" + std::to_string(axis + 1), phi::Linear{axis}};
}

TestFunction TestFunction::energy() { return {"energy", phi::Energy{}}; }

TestFunction TestFunction::bump(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump test function: radius must be positive");
  return {"bump", phi::Bump{center, radius}, center.norm() + radius};
}

TestFunction TestFunction::gaussian(const Vec3& center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian test function: width must be positive");
  return {"gaussian", phi::Gaussian{center, width}};
}

TestFunction make_test_function(const std::string& tag, const Vec3& center, double scale) {
  if (tag == "constant") return TestFunction::constant();
  if (tag == "v1") return TestFunction::linear(0);
  if (tag == "v2") return TestFunction::linear(1);
  if (tag == "v3") return TestFunction::linear(2);
  if (tag == "energy") return TestFunction::energy();
  if (tag == "bump") return TestFunction::bump(center, scale);
  if (tag == "gaussian") return TestFunction::gaussian(center, scale);
  throw std::invalid_argument("unknown test function '" + tag + "'");
}

}  // namespace geps
