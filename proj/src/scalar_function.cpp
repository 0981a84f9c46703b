#include "spectra/scalar_function.hpp"

#include <cmath>
#include <stdexcept>

#include "spectra/mollifier.hpp"

namespace spectra {

double ScalarFunction::derivative(int order, double x) const {
  switch (order) {
    case 0: return f(x);
    case 1: if (d1) return d1(x); break;
    case 2: if (d2) return d2(x); break;
    case 3: if (d3) return d3(x); break;
    default: break;
  }
  throw std::invalid_argument("ScalarFunction '" + name + "': derivative of order " +
                              std::to_string(order) + " unavailable");
}

ScalarFunction exp_function() {
  auto e = [](double x) { return std::exp(x); };
  return ScalarFunction{"exp", e, e, e, e};
}

ScalarFunction gauss_cdf_function() {
  return ScalarFunction{
      "gauss_cdf",
      [](double x) { return norm_cdf(x); },
      [](double x) { return g_derivs(x).d1; },
      [](double x) { return g_derivs(x).d2; },
      [](double x) { return g_derivs(x).d3; },
  };
}

ScalarFunction gauss_kernel_function() {
  auto v = [](double x) { return std::exp(-0.5 * x * x); };
  return ScalarFunction{
      "gauss_kernel",
      v,
      [v](double x) { return -x * v(x); },
      [v](double x) { return (x * x - 1.0) * v(x); },
      [v](double x) { return (3.0 * x - x * x * x) * v(x); },
  };
}

ScalarFunction polynomial_function(std::vector<double> coeffs) {
  auto eval = [](const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  auto deriv = [](const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
    return d;
  };
  const std::vector<double> c1 = deriv(coeffs);
  const std::vector<double> c2 = deriv(c1);
  const std::vector<double> c3 = deriv(c2);
  return ScalarFunction{
      "polynomial",
      [eval, coeffs](double x) { return eval(coeffs, x); },
      [eval, c1](double x) { return eval(c1, x); },
      [eval, c2](double x) { return eval(c2, x); },
      [eval, c3](double x) { return eval(c3, x); },
  };
}

}  // namespace spectra
