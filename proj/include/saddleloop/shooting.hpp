#pragma once

// Numerical estimation of b*(m) by separatrix shooting.
//
// Everything runs in the MB chart, where the saddle sits at the origin and y' = 2m x + (b+m) y + x^2 + xy
// (2m = M^2 - B^2, b + m = 2B). The unstable separatrix is launched into the third quadrant and integrated
// forward, the stable one into the second quadrant and integrated backward, each to its first crossing
// with the negative x-axis: P_u and P_s. The saddle loop is d = P_u - P_s = 0.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "btmodel.hpp"
#include "separatrix.hpp"

namespace saddleloop {

using State = std::array<double, 2>;
using Field = std::function<State(const State&)>;

struct IntegratorConfig {
  double rtol = 1e-12;
  double atol = 1e-14;
  double max_step = 0;      // 0: unlimited
  double max_time = 2000;
  double delta = 0;         // launch offset; 0: 1e-4 max(1, M)
  double escape_radius = 0;  // |z| beyond this counts as blow-up; 0: 1e8 (1 + |start|)
  int launch_order = 3;

  void validate() const {
    if (!(rtol > 0 && atol > 0)) throw ParameterError("integrator tolerances must be positive");
    if (delta < 0 || max_step < 0 || escape_radius < 0 || !(max_time > 0)) throw ParameterError("launch offset, max step and max time must be positive");
    if (launch_order < 3) throw ParameterError("launch order must be at least 3");
  }
  IntegratorConfig halved() const {
    IntegratorConfig c = *this;
    c.rtol /= 2;
    c.atol /= 2;
    return c;
  }
  double launch_offset(double M) const { return delta > 0 ? delta : 1e-4 * std::max(1.0, M); }
};

enum class ShootStatus { Ok, NoCrossing, BlowUp, TimeOut };

inline const char* to_string(ShootStatus s) {
  switch (s) {
    case ShootStatus::Ok: return "ok";
    case ShootStatus::NoCrossing: return "no-crossing";
    case ShootStatus::BlowUp: return "blow-up";
    case ShootStatus::TimeOut: return "time-out";
  }
  return "?";
}

// Crossing of {y = 0, x < x_max}; a start on the axis does not count.
struct EventSpec {
  double x_max = 0;
};

struct EventPoint {
  double t = 0, x = 0;
  bool polished = false;  // refined by a step in y rather than taken from the interpolant
};

struct IntegrationResult {
  ShootStatus status = ShootStatus::NoCrossing;
  std::optional<EventPoint> event;
  State last{};
  double t_end = 0;
  std::size_t steps = 0, rejected = 0;
};

namespace detail {

// Fehlberg 4(5) tableau
constexpr double kC[6] = {0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1, 1.0 / 2};
constexpr double kA[6][5] = {{0, 0, 0, 0, 0},
                             {1.0 / 4, 0, 0, 0, 0},
                             {3.0 / 32, 9.0 / 32, 0, 0, 0},
                             {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
                             {439.0 / 216, -8, 3680.0 / 513, -845.0 / 4104, 0},
                             {-8.0 / 27, 2, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40}};
constexpr double kB4[6] = {25.0 / 216, 0, 1408.0 / 2565, 2197.0 / 4104, -1.0 / 5, 0};
constexpr double kB5[6] = {16.0 / 135, 0, 6656.0 / 12825, 28561.0 / 56430, -9.0 / 50, 2.0 / 55};

// One embedded step; returns the fifth-order state and the error estimate.
template <std::size_t N, class F>
std::pair<std::array<double, N>, std::array<double, N>> rkf_step(const F& f, const std::array<double, N>& y, double h) {
  std::array<std::array<double, N>, 6> k;
  for (int s = 0; s < 6; ++s) {
    std::array<double, N> ys = y;
    for (int j = 0; j < s; ++j)
      for (std::size_t i = 0; i < N; ++i) ys[i] += h * kA[s][j] * k[static_cast<std::size_t>(j)][i];
    k[static_cast<std::size_t>(s)] = f(ys);
  }
  std::array<double, N> y5 = y, err{};
  for (int s = 0; s < 6; ++s)
    for (std::size_t i = 0; i < N; ++i) {
      y5[i] += h * kB5[s] * k[static_cast<std::size_t>(s)][i];
      err[i] += h * (kB5[s] - kB4[s]) * k[static_cast<std::size_t>(s)][i];
    }
  return {y5, err};
}

struct Sample {
  double t;
  State z;
};

// Lagrange interpolation of component i through the stored samples.
inline double interpolate(const std::deque<Sample>& s, std::size_t i, double t) {
  double acc = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    double w = s[a].z[i];
    for (std::size_t b = 0; b < s.size(); ++b)
      if (b != a) w *= (t - s[b].t) / (s[a].t - s[b].t);
    acc += w;
  }
  return acc;
}

}  // namespace detail

// Adaptive RKF45 (fifth-order propagation) in time direction `direction` (+1 or -1) until the first event.
// The crossing is bracketed by the last step, located on the quartic interpolant through the last five
// accepted states, then polished by one embedded step with y as the independent variable.
inline IntegrationResult integrate(const Field& f, const State& start, const IntegratorConfig& cfg, const EventSpec& ev, int direction = 1) {
  cfg.validate();
  if (direction != 1 && direction != -1) throw ParameterError("direction must be +1 or -1");
  auto g = [&](const State& z) {
    State v = f(z);
    return State{direction * v[0], direction * v[1]};
  };
  IntegrationResult out;
  State z = start;
  double t = 0;
  double h = std::min(1e-3, cfg.max_step > 0 ? cfg.max_step : 1e-3);
  std::deque<detail::Sample> hist{{0, z}};
  // escapes run along the invariant line, where the field is stiff: stop early rather than creep out
  const double blow = cfg.escape_radius > 0 ? cfg.escape_radius : 1e8 * (1 + std::hypot(z[0], z[1]));
  while (true) {
    if (t >= cfg.max_time) {
      out.status = ShootStatus::TimeOut;
      break;
    }
    h = std::min(h, cfg.max_time - t);
    if (cfg.max_step > 0) h = std::min(h, cfg.max_step);
    if (h < 1e-14 * (1 + t)) {
      out.status = ShootStatus::BlowUp;
      break;
    }
    auto [zn, err] = detail::rkf_step<2>(g, z, h);
    double en = 0;
    for (std::size_t i = 0; i < 2; ++i) en = std::max(en, std::abs(err[i]) / (cfg.atol + cfg.rtol * std::max(std::abs(z[i]), std::abs(zn[i]))));
    if (!std::isfinite(en)) {
      h /= 4;
      ++out.rejected;
      continue;
    }
    double fac = en == 0 ? 5 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    if (en > 1) {
      h *= fac;
      ++out.rejected;
      continue;
    }
    State zp = z;
    double tp = t;
    z = zn;
    t += h;
    ++out.steps;
    hist.push_back({t, z});
    if (hist.size() > 5) hist.pop_front();
    h *= fac;
    if (std::hypot(z[0], z[1]) > blow) {
      out.status = ShootStatus::BlowUp;
      break;
    }
    bool crossed = zp[1] != 0 && (z[1] == 0 || (zp[1] < 0) != (z[1] < 0));
    if (!crossed) continue;
    // locate on the interpolant by bisection
    double a = tp, b = t, ya = zp[1];
    for (int it = 0; it < 100 && b - a > 1e-15 * (1 + std::abs(t)); ++it) {
      double c = (a + b) / 2, yc = detail::interpolate(hist, 1, c);
      if ((yc < 0) == (ya < 0) && yc != 0) {
        a = c;
        ya = yc;
      } else {
        b = c;
      }
    }
    double tc = (a + b) / 2;
    EventPoint e{tc, detail::interpolate(hist, 0, tc), false};
    if (!(e.x < ev.x_max)) continue;
    // polish: dx/dy = P/Q, dt/dy = 1/Q from the previous accepted state to y = 0
    State fp = g(zp);
    if (std::abs(fp[1]) > 1e-8 * std::abs(fp[0])) {
      // w = (x, y, t) with y as the independent variable
      auto fy = [&](const std::array<double, 3>& w) {
        State v = g(State{w[0], w[1]});
        return std::array<double, 3>{v[0] / v[1], 1.0, 1.0 / v[1]};
      };
      auto [w, werr] = detail::rkf_step<3>(fy, std::array<double, 3>{zp[0], zp[1], tp}, -zp[1]);
      double tol = 1e3 * (cfg.atol + cfg.rtol * std::abs(e.x));
      if (std::isfinite(w[0]) && std::abs(w[0] - e.x) < std::max(tol, 1e-6 * (1 + std::abs(e.x))) && std::abs(werr[0]) < tol) {
        e.x = w[0];
        e.t = w[2];
        e.polished = true;
      }
    }
    e.t *= direction;
    out.event = e;
    out.status = ShootStatus::Ok;
    break;
  }
  out.last = z;
  out.t_end = direction * t;
  return out;
}

// ---------------------------------------------------------------- separatrix shooting

struct RegimeError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ShootingResult {
  double M = 0, B = 0, m = 0, b = 0;
  double P_s = 0, P_u = 0;  // MB chart
  ShootStatus status = ShootStatus::NoCrossing;
  ShootStatus status_s = ShootStatus::NoCrossing, status_u = ShootStatus::NoCrossing;
  bool ok() const { return status == ShootStatus::Ok; }
  // the MB chart is the original one shifted by x -> x + m
  double P_s_original() const { return P_s + m; }
  double P_u_original() const { return P_u + m; }
};

// y' of the MB form with 2m = M^2 - B^2, b + m = 2B
inline Field mb_field(double two_m, double two_B) {
  return [two_m, two_B](const State& z) {
    return State{z[1], two_m * z[0] + two_B * z[1] + z[0] * z[0] + z[0] * z[1]};
  };
}

namespace detail {

inline State launch_point(double slope, double other, int order, double delta) {
  auto a = separatrix_coefficients<double>(slope, other, order);
  double x = -delta, y = 0, xp = 1;
  for (std::size_t k = 1; k < a.size(); ++k) {
    xp *= x;
    y += a[k] * xp;
  }
  return {x, y};
}

}  // namespace detail

// First crossings for the MB parameters (M, B) with 0 < M and |B| < M.
inline ShootingResult first_crossings_MB(double M, double B, const IntegratorConfig& config) {
  config.validate();
  IntegratorConfig cfg = config;
  if (cfg.escape_radius == 0) cfg.escape_radius = 1e3 * (1 + M * M);
  if (!(M > 0 && std::abs(B) < M)) throw RegimeError("first crossings need M > 0 and |B| < M");
  ShootingResult r;
  r.M = M;
  r.B = B;
  r.m = (M * M - B * B) / 2;
  r.b = 2 * B - r.m;
  if (!(r.b < r.m)) throw RegimeError("first crossings need b < m (below the Hopf line)");
  Field f = mb_field(M * M - B * B, 2 * B);
  double delta = cfg.launch_offset(M);
  EventSpec ev{0};
  IntegrationResult u = integrate(f, detail::launch_point(B + M, B - M, cfg.launch_order, delta), cfg, ev, 1);
  IntegrationResult s = integrate(f, detail::launch_point(B - M, B + M, cfg.launch_order, delta), cfg, ev, -1);
  r.status_u = u.status;
  r.status_s = s.status;
  r.status = u.status != ShootStatus::Ok ? u.status : s.status;
  if (u.event) r.P_u = u.event->x;
  if (s.event) r.P_s = s.event->x;
  return r;
}

inline ShootingResult first_crossings(double m, double b, const IntegratorConfig& cfg) {
  if (!(m > 0)) throw RegimeError("first crossings need m > 0");
  if (!(b < m)) throw RegimeError("first crossings need b < m (below the Hopf line)");
  double B = (b + m) / 2, M = std::sqrt(B * B + 2 * m);
  return first_crossings_MB(M, B, cfg);
}

struct SplitError : std::runtime_error {
  ShootStatus status;
  SplitError(const std::string& what, ShootStatus s) : std::runtime_error(what), status(s) {}
};

inline double split_MB(double M, double B, const IntegratorConfig& cfg) {
  ShootingResult r = first_crossings_MB(M, B, cfg);
  if (!r.ok())
    throw SplitError(std::string("split undefined: ") + "unstable " + to_string(r.status_u) + ", stable " + to_string(r.status_s), r.status);
  return r.P_u - r.P_s;
}

inline double split(double m, double b, const IntegratorConfig& cfg) {
  ShootingResult r = first_crossings(m, b, cfg);
  if (!r.ok())
    throw SplitError(std::string("split undefined: ") + "unstable " + to_string(r.status_u) + ", stable " + to_string(r.status_s), r.status);
  return r.P_u - r.P_s;
}

// ---------------------------------------------------------------- b* by bisection

struct BStarEstimate {
  double m = 0;
  double b_lo = 0, b_hi = 0, bstar = 0;
  int iterations = 0;
  double residual = 0;      // split at the last evaluated point
  double d_lo = 0, d_hi = 0;  // split at the initial bracket
};

struct BracketError : std::runtime_error {
  double d_lo, d_hi;
  BracketError(const std::string& what, double lo, double hi) : std::runtime_error(what), d_lo(lo), d_hi(hi) {}
};

namespace detail {

template <class G>
BStarEstimate bisect_split(double lo, double hi, double tol, const G& d) {
  BStarEstimate e;
  e.d_lo = d(lo);
  e.d_hi = d(hi);
  if ((e.d_lo < 0) == (e.d_hi < 0) || e.d_lo == 0 || e.d_hi == 0)
    throw BracketError("split has the same sign at both bracket ends (" + std::to_string(e.d_lo) + ", " + std::to_string(e.d_hi) + ")", e.d_lo, e.d_hi);
  // orientation from the endpoints
  const bool lo_negative = e.d_lo < 0;
  while (hi - lo > tol) {
    double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    double dm = d(mid);
    e.residual = dm;
    ++e.iterations;
    if (dm == 0) {
      lo = hi = mid;
      break;
    }
    if ((dm < 0) == lo_negative)
      lo = mid;
    else
      hi = mid;
  }
  e.b_lo = lo;
  e.b_hi = hi;
  e.bstar = lo + (hi - lo) / 2;
  return e;
}

}  // namespace detail

// Bisection on sign(d) over [b_l(m) + eta, b_u(m) - eta]; the bracket comes from the proven bounds.
inline BStarEstimate estimate_bstar(double m, double tol, const IntegratorConfig& cfg = {}) {
  if (!(m > 0)) throw ParameterError("m must be positive");
  if (!(tol > 0)) throw ParameterError("tolerance must be positive");
  BigRational mq = from_double(m);
  BoundsPair bp = bounds_pair(mq);
  double bl = to_double(bp.b_lower), bu = to_double(bp.b_upper);
  double eta = 1e-6 * (bu - bl);
  auto d = [&](double b) { return split(m, b, cfg); };
  // for large m, b* - (m-1) decays roughly like exp(-m/2): pull the lower inset toward the bound until the
  // split changes sign (the stable separatrix escapes along the invariant line once it is too close)
  double eta_lo = eta;
  {
    double d_hi = d(bu - eta);
    for (int k = 0; k < 8; ++k) {
      double d_lo;
      try {
        d_lo = d(bl + eta_lo);
      } catch (const SplitError&) {
        break;
      }
      if ((d_lo < 0) != (d_hi < 0) || eta_lo < 1e-13 * (1 + m)) break;
      eta_lo /= 100;
    }
  }
  BStarEstimate e = detail::bisect_split(bl + eta_lo, bu - eta, tol, d);
  e.m = m;
  return e;
}

// Chart cross-check: fixes M and bisects in B; the B-bracket is where the bounds are met on the line M = const
// (b - b_l(m) and b - b_u(m) both increase with B there). Returns the estimate converted to (m, b).
struct BStarEstimateMB {
  double M = 0, B = 0, B_lo = 0, B_hi = 0;
  double m = 0, b = 0;
  int iterations = 0;
};

inline BStarEstimateMB estimate_bstar_MB(double M, double tol, const IntegratorConfig& cfg = {}) {
  if (!(M > 0)) throw ParameterError("M must be positive");
  auto mb = [&](double B) { return std::pair<double, double>{(M * M - B * B) / 2, 2 * B - (M * M - B * B) / 2}; };
  auto root = [&](auto&& h) {
    double a = 0, c = M;
    for (int i = 0; i < 200 && c - a > 1e-15 * M; ++i) {
      double mid = (a + c) / 2;
      (h(mid) < 0 ? a : c) = mid;
    }
    return (a + c) / 2;
  };
  double Blo = root([&](double B) { auto [m, b] = mb(B); return b - lower_bound(m); });
  double Bhi = root([&](double B) { auto [m, b] = mb(B); return b - upper_bound(m); });
  if (!(Blo < Bhi)) std::swap(Blo, Bhi);
  double eta = 1e-6 * (Bhi - Blo);
  BStarEstimate e = detail::bisect_split(Blo + eta, Bhi - eta, tol, [&](double B) { return split_MB(M, B, cfg); });
  BStarEstimateMB r;
  r.M = M;
  r.B = e.bstar;
  r.B_lo = e.b_lo;
  r.B_hi = e.b_hi;
  std::tie(r.m, r.b) = mb(r.B);
  r.iterations = e.iterations;
  return r;
}

// Runs fn(i) for i < n on `jobs` threads (0: hardware concurrency); results in index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, const F& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::optional<R>> out(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, n); ++j)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) out[i].emplace(fn(i));
    });
  for (auto& t : pool) t.join();
  std::vector<R> r;
  for (auto& o : out) r.push_back(std::move(*o));
  return r;
}

// Independent estimates on a worker pool; results in input order. The first failed row rethrows.
inline std::vector<BStarEstimate> estimate_bstar_many(const std::vector<double>& ms, double tol, const IntegratorConfig& cfg, unsigned jobs = 0) {
  auto rows = parallel_map<std::pair<std::optional<BStarEstimate>, std::exception_ptr>>(ms.size(), jobs, [&](std::size_t i) {
    try {
      return std::pair<std::optional<BStarEstimate>, std::exception_ptr>{estimate_bstar(ms[i], tol, cfg), nullptr};
    } catch (...) {
      return std::pair<std::optional<BStarEstimate>, std::exception_ptr>{std::nullopt, std::current_exception()};
    }
  });
  std::vector<BStarEstimate> r;
  for (auto& [e, err] : rows) {
    if (err) std::rethrow_exception(err);
    r.push_back(*e);
  }
  return r;
}

// ---------------------------------------------------------------- crossing ratios for B = M - 1 + a/M^2

struct RatioRow {
  double M = 0, B = 0;
  double ratio_s = 0, ratio_u = 0, ratio_focus = 0;  // -P_s/M, -P_u/M, -(B^2 - M^2)/M
  ShootStatus status = ShootStatus::Ok;
};

inline std::vector<RatioRow> ratio_sweep(double alpha, const std::vector<double>& Ms, const IntegratorConfig& cfg = {}) {
  if (!(alpha > 0)) throw ParameterError("alpha must be positive");
  std::vector<RatioRow> rows;
  for (double M : Ms) {
    if (!(M > std::sqrt(alpha))) throw ParameterError("ratio sweep needs M > sqrt(alpha)");
    RatioRow r;
    r.M = M;
    r.B = M - 1 + alpha / (M * M);
    r.ratio_focus = -(r.B * r.B - M * M) / M;
    try {
      ShootingResult s = first_crossings_MB(M, r.B, cfg);
      r.status = s.status;
      if (s.ok()) {
        r.ratio_s = -s.P_s / M;
        r.ratio_u = -s.P_u / M;
      }
    } catch (const RegimeError&) {
      r.status = ShootStatus::NoCrossing;
    }
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------- limit cycle probe

enum class CycleVerdict { CycleExists, NoCycle, Inconclusive };

inline const char* to_string(CycleVerdict v) {
  switch (v) {
    case CycleVerdict::CycleExists: return "cycle-exists";
    case CycleVerdict::NoCycle: return "no-cycle";
    case CycleVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CycleProbe {
  CycleVerdict verdict = CycleVerdict::Inconclusive;
  std::vector<double> returns;  // x of successive reverse-time crossings of {y = 0, x < focus}
};

// Reverse time from just left of the focus; the unstable cycle becomes attracting. Converging returns mean a
// cycle; leaving past the saddle or escaping means none.
inline CycleProbe limit_cycle_probe(double m, double b, const IntegratorConfig& cfg = {}, int max_returns = 400) {
  if (!(m > 0 && b < m)) throw RegimeError("limit cycle probe needs m > 0 and b < m");
  double B = (b + m) / 2;
  double xf = -2 * m;  // B^2 - M^2
  Field f = mb_field(2 * m, 2 * B);
  IntegratorConfig c = cfg;
  // the cycle stays inside the loop, within a few focus distances of the saddle
  if (c.escape_radius == 0) c.escape_radius = 20 * (1 + std::abs(xf));
  CycleProbe p;
  State z{xf - 1e-3 * std::abs(xf), 0};
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_returns; ++k) {
    IntegrationResult r = integrate(f, z, c, EventSpec{xf}, -1);
    if (r.status != ShootStatus::Ok) {
      p.verdict = (r.last[0] > 0 || r.status == ShootStatus::BlowUp) ? CycleVerdict::NoCycle : CycleVerdict::Inconclusive;
      return p;
    }
    double x = r.event->x;
    p.returns.push_back(x);
    if (p.returns.size() >= 3) {
      double gap = std::abs(x - p.returns[p.returns.size() - 2]);
      if (gap < 1e-7 * std::abs(x) && gap <= prev_gap) {
        p.verdict = CycleVerdict::CycleExists;
        return p;
      }
      prev_gap = gap;
    }
    z = {x, 0};
  }
  return p;
}

}  // namespace saddleloop
