#include "otsense/models.hpp"

#include "ode.hpp"
#include "otsense/error.hpp"
#include "otsense/parallel.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace otsense {

namespace {

void check_n(Index n) {
  if (n < 2) throw std::invalid_argument("model sample size must be >= 2");
}

std::vector<std::string> range_names(const std::vector<UniformRange>& r) {
  std::vector<std::string> names;
  for (const auto& u : r) names.emplace_back(u.name);
  return names;
}

Matrix uniform_inputs(Index n, std::uint64_t seed, const std::vector<UniformRange>& ranges) {
  Matrix x(n, static_cast<Index>(ranges.size()));
  for (Index r = 0; r < n; ++r) {
    auto rng = substream(seed, static_cast<std::uint64_t>(r));
    for (std::size_t j = 0; j < ranges.size(); ++j) {
      std::uniform_real_distribution<double> u(ranges[j].low, ranges[j].high);
      x(r, static_cast<Index>(j)) = u(rng);
    }
  }
  return x;
}

std::string time_label(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

Matrix linear_gaussian_matrix() {
  Matrix a(2, 3);
  a << 4.0, -2.0, 1.0, 2.0, 5.0, -1.0;
  return a;
}

SensitivityDataset gen_linear_gaussian(Index n, std::uint64_t seed) {
  check_n(n);
  Matrix sigma = Matrix::Constant(3, 3, 0.5);
  sigma.diagonal().setOnes();
  const Matrix l = Eigen::LLT<Matrix>(sigma).matrixL();
  Matrix x(n, 3);
  for (Index r = 0; r < n; ++r) {
    auto rng = substream(seed, static_cast<std::uint64_t>(r));
    std::normal_distribution<double> z;
    Vector e(3);
    for (Index j = 0; j < 3; ++j) e(j) = z(rng);
    x.row(r) = (l * e).transpose().array() + 1.0;
  }
  Matrix y = x * linear_gaussian_matrix().transpose();
  return validate_dataset(std::move(x), std::move(y), {"X1", "X2", "X3"}, {"Y1", "Y2"});
}

const std::vector<UniformRange>& budworm_ranges() {
  static const std::vector<UniformRange> r{
      {"r_b", 1.52, 1.6},      {"K", 100.0, 355.0},  {"beta", 20000.0, 43200.0}, {"alpha", 1.0, 2.0},
      {"r_s", 0.095, 0.15},    {"K_s", 24000.0, 25440.0}, {"K_e", 1.0, 1.2},     {"r_e", 0.92, 1.0},
      {"P", 0.0015, 0.00195},  {"T_e", 0.7, 0.9}};
  return r;
}

std::array<double, 3> budworm_rhs(const BudwormParams& p, const std::array<double, 3>& s,
                                  bool product_predation) {
  const double b = s[0], sz = s[1], e = s[2];
  const double te2 = p.T_e * p.T_e;
  const double e2 = e * e;
  const double a = product_predation ? p.alpha * sz : std::pow(p.alpha, sz);
  const double db = p.r_b * b * (1.0 - b / (p.K * sz) * (te2 + e2) / e2) - p.beta * b * b / (a * a + b * b);
  const double ds = p.r_s * sz * (1.0 - (sz * p.K_e) / (e * p.K_s));
  const double de = p.r_e * e * (1.0 - e / p.K_e) - p.P * (b / sz) * e2 / (te2 + e2);
  return {db, ds, de};
}

std::vector<std::array<double, 3>> budworm_trajectory(const BudwormParams& p, const BudwormOptions& opts) {
  std::vector<double> times = opts.times;
  if (times.empty()) {
    for (int t = 0; t <= 150; ++t) times.push_back(t);
  }
  const detail::Rhs3 f = [&](double, const detail::State3& y) {
    return budworm_rhs(p, y, opts.product_predation);
  };
  if (opts.integrator == BudwormIntegrator::rk4) {
    return detail::integrate_rk4(f, opts.initial, times, opts.rk4_step);
  }
  detail::AdaptiveTolerance tol;
  tol.rtol = opts.rtol;
  tol.atol = opts.atol;
  return detail::integrate_dopri5(f, opts.initial, times, tol);
}

BudwormSample gen_budworm(Index n, std::uint64_t seed, const BudwormOptions& opts) {
  check_n(n);
  BudwormOptions o = opts;
  if (o.times.empty()) {
    for (int t = 0; t <= 150; ++t) o.times.push_back(t);
  }
  const auto& ranges = budworm_ranges();
  Matrix x = uniform_inputs(n, seed, ranges);
  const auto nt = static_cast<Index>(o.times.size());
  Matrix b(n, nt), s(n, nt), e(n, nt);
  parallel_for(static_cast<std::size_t>(n), o.threads, [&](std::size_t row) {
    const auto r = static_cast<Index>(row);
    const BudwormParams p{x(r, 0), x(r, 1), x(r, 2), x(r, 3), x(r, 4),
                          x(r, 5), x(r, 6), x(r, 7), x(r, 8), x(r, 9)};
    std::vector<std::array<double, 3>> traj;
    try {
      traj = budworm_trajectory(p, o);
    } catch (const NumericalError& err) {
      throw NumericalError("budworm row " + std::to_string(r + 1) + ": " + err.what());
    }
    for (Index t = 0; t < nt; ++t) {
      const auto& st = traj[static_cast<std::size_t>(t)];
      b(r, t) = st[0];
      s(r, t) = st[1];
      e(r, t) = st[2];
    }
  });
  std::vector<std::string> tnames;
  for (double t : o.times) tnames.push_back(time_label(t));
  return BudwormSample{SampleMatrix::create(std::move(x), range_names(ranges)),
                       SampleMatrix::create(std::move(b), tnames), SampleMatrix::create(std::move(s), tnames),
                       SampleMatrix::create(std::move(e), tnames)};
}

std::vector<double> default_emissions() {
  std::vector<double> e{35.74, 33.22, 35.26, 36.96, 38.28, 39.19, 39.67, 39.7,  39.29,
                        38.43, 37.12, 35.38, 33.22, 30.65, 27.71, 24.4,  20.76, 16.82};
  for (auto& v : e) v /= 3.666;
  return e;
}

const std::vector<UniformRange>& climate_ranges() {
  static const std::vector<UniformRange> r{
      {"phi11", 0.704, 1.056},     {"phi23", 0.0056, 0.0084}, {"c1", 0.0804, 0.1206},
      {"c3", 0.0704, 0.1056},      {"c4", 0.02, 0.03},        {"lambda", 2.94504, 4.41756},
      {"S", 2.48, 3.72},           {"F_EX0", 0.4, 0.6},       {"F_EX1", 0.8, 1.2}};
  return r;
}

std::vector<double> climate_trajectory(const ClimateParams& p, const ClimateOptions& opts) {
  const std::vector<double> emissions = opts.emissions.empty() ? default_emissions() : opts.emissions;
  const double phi12 = 1.0 - p.phi11;
  const double phi21 = phi12 * 588.0 / 360.0;
  const double phi22 = 1.0 - phi21 - p.phi23;
  const double phi32 = p.phi23 * 360.0 / 1720.0;
  const double phi33 = 1.0 - phi32;
  double m_at = opts.initial[0], m_uo = opts.initial[1], m_lo = opts.initial[2];
  double t_at = opts.initial[3], t_oc = opts.initial[4];
  std::vector<double> out(emissions.size());
  if (out.empty()) return out;
  out[0] = t_at;
  for (std::size_t t = 1; t < emissions.size(); ++t) {
    const double e = emissions[t - 1];
    const double m_at_next = p.phi11 * m_at + phi21 * m_uo + 5.0 * e;
    const double m_uo_next = phi12 * m_at + phi22 * m_uo + phi32 * m_lo;
    const double m_lo_next = p.phi23 * m_uo + phi33 * m_lo;
    const double f_ex = p.F_EX0 + (p.F_EX1 - p.F_EX0) * static_cast<double>(t - 1) / 17.0;
    const double f_next = p.lambda * std::log(m_at / 588.0) / std::log(2.0) + f_ex;
    const double t_at_next = t_at + p.c1 * (f_next - p.lambda * t_at / p.S - p.c3 * (t_at - t_oc));
    const double t_oc_next = t_oc + p.c4 * (t_at - t_oc);
    out[t] = t_at_next;
    m_at = m_at_next;
    m_uo = m_uo_next;
    m_lo = m_lo_next;
    t_at = t_at_next;
    t_oc = t_oc_next;
  }
  return out;
}

SensitivityDataset gen_climate(Index n, std::uint64_t seed, const ClimateOptions& opts) {
  check_n(n);
  const auto& ranges = climate_ranges();
  Matrix x = uniform_inputs(n, seed, ranges);
  const std::size_t periods = opts.emissions.empty() ? default_emissions().size() : opts.emissions.size();
  if (periods < 1) throw std::invalid_argument("empty emissions path");
  Matrix y(n, static_cast<Index>(periods));
  parallel_for(static_cast<std::size_t>(n), opts.threads, [&](std::size_t row) {
    const auto r = static_cast<Index>(row);
    const ClimateParams p{x(r, 0), x(r, 1), x(r, 2), x(r, 3), x(r, 4), x(r, 5), x(r, 6), x(r, 7), x(r, 8)};
    const auto traj = climate_trajectory(p, opts);
    for (std::size_t t = 0; t < periods; ++t) y(r, static_cast<Index>(t)) = traj[t];
  });
  std::vector<std::string> ynames;
  for (std::size_t t = 1; t <= periods; ++t) ynames.push_back("T_AT_" + std::to_string(t));
  return validate_dataset(std::move(x), std::move(y), range_names(ranges), std::move(ynames));
}

}  // namespace otsense
