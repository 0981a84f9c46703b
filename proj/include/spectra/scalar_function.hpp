// Scalar functions with analytic derivatives up to third order, the inputs
// of divided differences and matrix-function derivatives.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace spectra {

struct ScalarFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> d1;  // may be empty
  std::function<double(double)> d2;
  std::function<double(double)> d3;

  bool has_derivative(int order) const {
    switch (order) {
      case 1: return bool(d1);
      case 2: return bool(d2);
      case 3: return bool(d3);
      default: return order == 0;
    }
  }
  double derivative(int order, double x) const;
};

ScalarFunction exp_function();
ScalarFunction gauss_cdf_function();     // standard normal CDF
ScalarFunction gauss_kernel_function();  // exp(-x^2/2)
ScalarFunction polynomial_function(std::vector<double> coeffs);  // ascending degree

}  // namespace spectra
