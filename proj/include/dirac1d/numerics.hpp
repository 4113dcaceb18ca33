#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dirac1d {

using cplx = std::complex<double>;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> samples, double step);

}  // namespace dirac1d
