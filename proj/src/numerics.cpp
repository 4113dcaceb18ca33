#include "dirac1d/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "dirac1d/errors.hpp"

namespace dirac1d {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("fit_line: x and y differ in length");
  if (x.size() < 2) throw InsufficientDataError("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n, my = sy.value() / n;
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() == 0.0) throw InsufficientDataError("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - (fit.slope * x[i] + fit.intercept)));
  return fit;
}

double trapezoid(std::span<const double> samples, double step) {
  if (samples.size() < 2) return 0.0;
  CompensatedSum s;
  s.add(0.5 * samples.front());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) s.add(samples[i]);
  s.add(0.5 * samples.back());
  return step * s.value();
}

}  // namespace dirac1d
