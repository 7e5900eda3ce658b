#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace otsense::detail {

using State3 = std::array<double, 3>;
using Rhs3 = std::function<State3(double t, const State3& y)>;

struct AdaptiveTolerance {
  double rtol = 1e-9;
  double atol = 1e-12;
  long max_steps = 1'000'000;
};

/// Dormand-Prince 5(4) with step-size control, landing exactly on every
/// requested time. times[0] is the initial time. Throws NumericalError on a
/// non-finite state or step-size collapse.
std::vector<State3> integrate_dopri5(const Rhs3& f, State3 y0, std::span<const double> times,
                                     const AdaptiveTolerance& tol = {});

/// Classical RK4 with a fixed step (shortened to hit each output time).
std::vector<State3> integrate_rk4(const Rhs3& f, State3 y0, std::span<const double> times, double step);

}  // namespace otsense::detail
