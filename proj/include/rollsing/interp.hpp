#pragma once

#include <vector>

namespace rollsing {

/// Monotone cubic (Fritsch-Carlson) interpolant on a strictly increasing
/// abscissa grid. Shape-preserving: no overshoot between data points, which
/// matters when resampling torque histories near their peaks. Evaluation
/// outside the grid clamps to the end values.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;

  private:
    std::vector<double> xs_, ys_, slopes_;
};

}  // namespace rollsing
