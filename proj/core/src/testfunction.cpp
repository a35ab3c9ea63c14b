#include "orbitfield/testfunction.hpp"

#include <cmath>
#include <numbers>
#include <regex>

#include "orbitfield/errors.hpp"

namespace orbitfield {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Factor::value(double x) const {
  if (kind == FactorKind::Gaussian) {
    const double u = x / param;
    return std::exp(-kPi * u * u);
  }
  const double b = param;
  const double u = 2.0 * b * x;
  const double au = std::abs(u);
  if (au < 1e-8) return b;
  if (std::abs(au - 1.0) < 1e-8) return 0.5 * b;
  return b * std::sin(kPi * u) / (kPi * u * (1.0 - u * u));
}

double Factor::ft(double xi) const {
  if (kind == FactorKind::Gaussian) {
    const double u = param * xi;
    return param * std::exp(-kPi * u * u);
  }
  if (std::abs(xi) >= param) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * xi / param));
}

double Factor::radius(double eps) const {
  if (kind == FactorKind::Gaussian) return param * std::sqrt(std::log(1.0 / eps) / kPi);
  // |f(x)| / f(0) <= 1 / (pi |u| (u^2 - 1)) ~ 1 / (pi |u|^3), u = 2 B x.
  const double u = std::cbrt(1.0 / (kPi * eps)) + 1.0;
  return u / (2.0 * param);
}

double Factor::ft_radius(double eps) const {
  if (kind == FactorKind::Gaussian) return std::sqrt(std::log(1.0 / eps) / kPi) / param;
  return param;
}

double Factor::sup() const { return kind == FactorKind::Gaussian ? 1.0 : param; }
double Factor::ft_sup() const { return kind == FactorKind::Gaussian ? param : 1.0; }

double Factor::l1_norm() const {
  if (kind == FactorKind::Gaussian) return param;
  const double r = radius(1e-9);
  const int n = 200000;
  const double h = 2.0 * r / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::abs(value(-r + (i + 0.5) * h));
  return acc * h;
}

bool TestFunction::valid_role(const std::string& role) {
  static const std::regex re("^(x[1-9][0-9]*|y[1-9][0-9]*|t|z|adot[1-9][0-9]*|addot[1-9][0-9]*)$");
  return std::regex_match(role, re);
}

void TestFunction::set(const std::string& role, Factor f) {
  if (!valid_role(role)) throw MalformedInput("unknown test-function role '" + role + "'");
  if (!(f.param > 0.0)) throw MalformedInput("factor parameter must be positive for role " + role);
  factors_[role] = f;
}

const Factor& TestFunction::factor(const std::string& role) const {
  static const Factor kDefault = Factor::gaussian(1.0);
  if (!valid_role(role)) throw MalformedInput("unknown test-function role '" + role + "'");
  auto it = factors_.find(role);
  return it == factors_.end() ? kDefault : it->second;
}

std::string role_x(int j) { return "x" + std::to_string(j + 1); }
std::string role_y(int j) { return "y" + std::to_string(j + 1); }
std::string role_adot(int i) { return "adot" + std::to_string(i + 1); }
std::string role_addot(int i) { return "addot" + std::to_string(i + 1); }

std::complex<double> partial_ft(const TestFunction& f, const std::set<std::string>& axes,
                                const std::map<std::string, double>& point) {
  for (const auto& a : axes) {
    if (!point.count(a)) throw MalformedInput("transform axis '" + a + "' has no coordinate");
  }
  double v = 1.0;
  for (const auto& [role, x] : point) {
    const Factor& fac = f.factor(role);
    v *= axes.count(role) ? fac.ft(x) : fac.value(x);
  }
  return {v, 0.0};
}

}  // namespace orbitfield
