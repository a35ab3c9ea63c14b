#pragma once

#include <complex>
#include <map>
#include <set>
#include <string>

namespace orbitfield {

enum class FactorKind { Gaussian, Bandlimited };

// One separable 1-D factor with a closed-form transform, convention
// F(xi) = int f(x) exp(-2 pi i xi x) dx.
//   gaussian(w):     f = exp(-pi (x/w)^2),        F = w exp(-pi (w xi)^2)
//   bandlimited(B):  F = (1 + cos(pi xi / B))/2 on [-B, B], 0 outside
struct Factor {
  FactorKind kind = FactorKind::Gaussian;
  double param = 1.0;

  static Factor gaussian(double w) { return {FactorKind::Gaussian, w}; }
  static Factor bandlimited(double b) { return {FactorKind::Bandlimited, b}; }

  double value(double x) const;
  double ft(double xi) const;
  // |value(x)| <= eps * sup|value| for |x| >= radius(eps); same for ft.
  double radius(double eps = 1e-6) const;
  double ft_radius(double eps = 1e-6) const;
  double sup() const;
  double ft_sup() const;
  double l1_norm() const;
};

// Separable function on frame coordinates. Roles: x<j>, y<j> (j >= 1), t, z,
// adot<i>, addot<i>. Roles never set default to gaussian(1).
class TestFunction {
 public:
  void set(const std::string& role, Factor f);
  const Factor& factor(const std::string& role) const;
  bool has(const std::string& role) const { return factors_.count(role) != 0; }
  const std::map<std::string, Factor>& factors() const { return factors_; }

  static bool valid_role(const std::string& role);

 private:
  std::map<std::string, Factor> factors_;
};

std::string role_x(int j);      // 0-based plane -> "x<j+1>"
std::string role_y(int j);
std::string role_adot(int i);
std::string role_addot(int i);

// Product over the roles in `point`: transform on `axes`, plain value elsewhere.
std::complex<double> partial_ft(const TestFunction& f, const std::set<std::string>& axes,
                                const std::map<std::string, double>& point);

}  // namespace orbitfield
