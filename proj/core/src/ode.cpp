#include "ode.hpp"

#include "otsense/error.hpp"

#include <algorithm>
#include <cmath>

namespace otsense::detail {

namespace {

State3 axpy(const State3& y, double h, std::initializer_list<std::pair<double, const State3*>> terms) {
  State3 out = y;
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (const auto& [c, k] : terms) s += c * (*k)[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] += h * s;
  }
  return out;
}

bool finite(const State3& y) {
  return std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]);
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }
}

}  // namespace

std::vector<State3> integrate_dopri5(const Rhs3& f, State3 y0, std::span<const double> times,
                                     const AdaptiveTolerance& tol) {
  check_times(times);
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                   a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                   b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                   e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  std::vector<State3> out;
  out.reserve(times.size());
  out.push_back(y0);
  double t = times[0];
  State3 y = y0;
  State3 k1 = f(t, y);
  double h = std::min(0.01, times.size() > 1 ? times[1] - times[0] : 0.01);
  long steps = 0;

  for (std::size_t target = 1; target < times.size(); ++target) {
    const double t_end = times[target];
    while (t < t_end) {
      if (++steps > tol.max_steps) throw NumericalError("ODE integration exceeded the step limit");
      bool last = false;
      double hs = h;
      if (t + hs >= t_end) {
        hs = t_end - t;
        last = true;
      }
      const State3 k2 = f(t + hs / 5.0, axpy(y, hs, {{a21, &k1}}));
      const State3 k3 = f(t + 3.0 * hs / 10.0, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
      const State3 k4 = f(t + 4.0 * hs / 5.0, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const State3 k5 =
          f(t + 8.0 * hs / 9.0, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const State3 k6 = f(t + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const State3 y_new = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const State3 k7 = f(t + hs, y_new);

      double err = 0.0;
      bool ok = finite(y_new) && finite(k7);
      if (ok) {
        for (std::size_t i = 0; i < 3; ++i) {
          const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
          const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
          err = std::max(err, std::abs(e) / sc);
        }
        ok = std::isfinite(err);
      }
      if (ok && err <= 1.0) {
        t = last ? t_end : t + hs;
        y = y_new;
        k1 = k7;
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last) h = hs * grow;
        else h = std::max(h, hs * grow);
      } else {
        const double shrink = ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
        h = hs * shrink;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
          throw NumericalError("ODE step size collapsed at t = " + std::to_string(t));
        }
      }
    }
    out.push_back(y);
  }
  return out;
}

std::vector<State3> integrate_rk4(const Rhs3& f, State3 y0, std::span<const double> times, double step) {
  check_times(times);
  if (!(step > 0.0)) throw std::invalid_argument("RK4 step must be > 0");
  std::vector<State3> out;
  out.reserve(times.size());
  out.push_back(y0);
  double t = times[0];
  State3 y = y0;
  for (std::size_t target = 1; target < times.size(); ++target) {
    const double t_end = times[target];
    const auto n = static_cast<long>(std::ceil((t_end - t) / step - 1e-9));
    const double h = (t_end - t) / static_cast<double>(std::max(n, 1L));
    for (long s = 0; s < std::max(n, 1L); ++s) {
      const State3 k1 = f(t, y);
      const State3 k2 = f(t + h / 2.0, axpy(y, h / 2.0, {{1.0, &k1}}));
      const State3 k3 = f(t + h / 2.0, axpy(y, h / 2.0, {{1.0, &k2}}));
      const State3 k4 = f(t + h, axpy(y, h, {{1.0, &k3}}));
      y = axpy(y, h / 6.0, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
      t += h;
      if (!finite(y)) throw NumericalError("non-finite state at t = " + std::to_string(t));
    }
    t = t_end;
    out.push_back(y);
  }
  return out;
}

}  // namespace otsense::detail
