#pragma once

#include <vector>

namespace shrinkage {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes). Outside the knot range it continues linearly with the end slope.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  struct Local {
    std::size_t k;
    double h;
    double t;
  };
  Local locate(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace shrinkage
