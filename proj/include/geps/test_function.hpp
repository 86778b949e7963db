#pragma once

#include "geps/types.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace geps {

namespace phi {

struct Constant {
  double c = 1.0;
  double value(const Vec3&) const { return c; }
  Vec3 gradient(const Vec3&) const { return Vec3::Zero(); }
  Mat3 hessian(const Vec3&) const { return Mat3::Zero(); }
};

/// phi(v) = v_axis.
struct Linear {
  int axis = 0;
  double value(const Vec3& v) const { return v[axis]; }
  Vec3 gradient(const Vec3&) const { return Vec3::Unit(axis); }
  Mat3 hessian(const Vec3&) const { return Mat3::Zero(); }
};

/// phi(v) = |v|^2.
struct Energy {
  double value(const Vec3& v) const { return v.squaredNorm(); }
  Vec3 gradient(const Vec3& v) const { return 2.0 * v; }
  Mat3 hessian(const Vec3&) const { return 2.0 * Mat3::Identity(); }
};

/// phi(v) = (1 - |v - c|^2 / r^2)^4 inside the ball of radius r, 0 outside.
struct Bump {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;

  double value(const Vec3& v) const {
    const double s = 1.0 - (v - center).squaredNorm() / (radius * radius);
    if (s <= 0.0) return 0.0;
    const double s2 = s * s;
    return s2 * s2;
  }
  Vec3 gradient(const Vec3& v) const {
    const Vec3 x = v - center;
    const double r2 = radius * radius;
    const double s = 1.0 - x.squaredNorm() / r2;
    if (s <= 0.0) return Vec3::Zero();
    return (-8.0 * s * s * s / r2) * x;
  }
  Mat3 hessian(const Vec3& v) const {
    const Vec3 x = v - center;
    const double r2 = radius * radius;
    const double s = 1.0 - x.squaredNorm() / r2;
    if (s <= 0.0) return Mat3::Zero();
    return (48.0 * s * s / (r2 * r2)) * (x * x.transpose()) - (8.0 * s * s * s / r2) * Mat3::Identity();
  }
};

/// phi(v) = exp(-|v - c|^2 / (2 w^2)).
struct Gaussian {
  Vec3 center = Vec3::Zero();
  double width = 1.0;

  double value(const Vec3& v) const { return std::exp(-(v - center).squaredNorm() / (2.0 * width * width)); }
  Vec3 gradient(const Vec3& v) const { return (-value(v) / (width * width)) * (v - center); }
  Mat3 hessian(const Vec3& v) const {
    const Vec3 x = v - center;
    const double w2 = width * width;
    return value(v) * (x * x.transpose() / (w2 * w2) - Mat3::Identity() / w2);
  }
};

struct Custom {
  std::function<double(const Vec3&)> value_fn;
  std::function<Vec3(const Vec3&)> gradient_fn;
  std::function<Mat3(const Vec3&)> hessian_fn;

  double value(const Vec3& v) const { return value_fn(v); }
  Vec3 gradient(const Vec3& v) const { return gradient_fn(v); }
  Mat3 hessian(const Vec3& v) const { return hessian_fn(v); }
};

}  // namespace phi

/// Test function phi with analytic gradient and hessian, tagged for reports.
class TestFunction {
 public:
  using Family = std::variant<phi::Constant, phi::Linear, phi::Energy, phi::Bump, phi::Gaussian, phi::Custom>;

  TestFunction(std::string id, Family family, std::optional<double> support_radius = std::nullopt)
      : id_(std::move(id)), family_(std::move(family)), support_radius_(support_radius) {}

  static TestFunction constant(double c = 1.0);
  static TestFunction linear(int axis);
  static TestFunction energy();
  static TestFunction bump(const Vec3& center, double radius);
  static TestFunction gaussian(const Vec3& center, double width);

  const std::string& id() const { return id_; }
  std::optional<double> support_radius() const { return support_radius_; }

  double value(const Vec3& v) const {
    return std::visit([&](const auto& f) { return f.value(v); }, family_);
  }
  Vec3 gradient(const Vec3& v) const {
    return std::visit([&](const auto& f) { return f.gradient(v); }, family_);
  }
  Mat3 hessian(const Vec3& v) const {
    return std::visit([&](const auto& f) { return f.hessian(v); }, family_);
  }

  /// Calls `fn` with the concrete family so hot loops can inline evaluation.
  template <typename Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), family_);
  }

 private:
  std::string id_;
  Family family_;
  std::optional<double> support_radius_;
};

/// Parses a test-function tag: constant, v1|v2|v3, energy, bump, gaussian.
/// Bump/gaussian take center and radius/width from the arguments.
TestFunction make_test_function(const std::string& tag, const Vec3& center, double scale);

}  // namespace geps
