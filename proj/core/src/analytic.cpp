#include "gpwtdg/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace gpwtdg {

namespace {

constexpr double kAi0 = 0.35502805388781723926;    // 3^(-2/3) / Gamma(2/3)
constexpr double kAip0 = -0.25881940379280679840;  // -3^(-1/3) / Gamma(1/3)
constexpr double kAirySeriesLimit = 8.0;
constexpr double kAiryRange = 30.0;

// Ai = Ai(0) f + Ai'(0) g with f, g the Maclaurin solutions of w'' = t w
// (f(0)=1, f'(0)=0 and g(0)=0, g'(0)=1). Coefficients: f_k = f_{k-1} /
// ((3k-1)(3k)), g_k = g_{k-1} / ((3k)(3k+1)). Extended precision absorbs the
// cancellation up to |t| = 8.
AiryValues airy_series(double t) {
  const long double lt = t;
  const long double t2 = lt * lt, t3 = t2 * lt;
  long double f = 1.0L, fp = 0.0L, g = lt, gp = 1.0L;
  long double cf = 1.0L, cg = 1.0L, t3k = 1.0L;
  long double max_term = 1.0L;
  for (int k = 1; k <= 160; ++k) {
    cf /= static_cast<long double>(3 * k - 1) * (3 * k);
    cg /= static_cast<long double>(3 * k) * (3 * k + 1);
    const long double t3k_prev = t3k;
    t3k *= t3;
    const long double tf = cf * t3k;
    const long double tg = cg * lt * t3k;
    f += tf;
    fp += 3.0L * k * cf * t2 * t3k_prev;
    g += tg;
    gp += (3.0L * k + 1.0L) * cg * t3k;
    max_term = std::max({max_term, std::abs(tf), std::abs(tg)});
    if (std::abs(tf) < 1e-40L * max_term && std::abs(tg) < 1e-40L * max_term) break;
  }
  AiryValues v;
  v.ai = static_cast<double>(kAi0 * f + kAip0 * g);
  v.aip = static_cast<double>(kAi0 * fp + kAip0 * gp);
  return v;
}

// u_k coefficients of the Airy asymptotic expansions.
void airy_asymptotic_uv(int kmax, std::vector<double>& u, std::vector<double>& v) {
  u.assign(kmax + 1, 1.0);
  v.assign(kmax + 1, 1.0);
  for (int k = 1; k <= kmax; ++k) {
    u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
           (216.0 * k * (2.0 * k - 1.0));
    v[k] = u[k] * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
  }
}

AiryValues airy_asymptotic_positive(double t) {
  const double zeta = 2.0 / 3.0 * std::pow(t, 1.5);
  std::vector<double> u, v;
  airy_asymptotic_uv(24, u, v);
  double su = 0.0, sv = 0.0, term = 1.0, best = 1e300;
  for (int k = 0; k < static_cast<int>(u.size()); ++k) {
    const double tu = u[k] * term, tv = v[k] * term;
    if (std::abs(tu) > best) break;  // divergent tail reached
    best = std::abs(tu);
    su += (k % 2 == 0 ? tu : -tu);
    sv += (k % 2 == 0 ? tv : -tv);
    term /= zeta;
  }
  const double pre = std::exp(-zeta) / (2.0 * std::sqrt(M_PI) * std::pow(t, 0.25));
  AiryValues r;
  r.ai = pre * su;
  r.aip = -std::pow(t, 0.25) * std::exp(-zeta) / (2.0 * std::sqrt(M_PI)) * sv;
  return r;
}

AiryValues airy_asymptotic_negative(double t) {
  const double s = -t;
  const double zeta = 2.0 / 3.0 * std::pow(s, 1.5);
  std::vector<double> u, v;
  airy_asymptotic_uv(24, u, v);
  // Even/odd splits of the u_k, v_k series with alternating signs.
  double ue = 0.0, uo = 0.0, ve = 0.0, vo = 0.0;
  double z2 = 1.0, best = 1e300;
  for (int k = 0; 2 * k < static_cast<int>(u.size()); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (u[2 * k] * z2 > best) break;  // past the smallest term
    best = u[2 * k] * z2;
    ue += sign * u[2 * k] * z2;
    ve += sign * v[2 * k] * z2;
    if (2 * k + 1 < static_cast<int>(u.size())) {
      uo += sign * u[2 * k + 1] * z2 / zeta;
      vo += sign * v[2 * k + 1] * z2 / zeta;
    }
    z2 /= zeta * zeta;
  }
  const double arg = zeta + M_PI / 4.0;
  const double pre = 1.0 / (std::sqrt(M_PI) * std::pow(s, 0.25));
  AiryValues r;
  r.ai = pre * (std::sin(arg) * ue - std::cos(arg) * uo);
  r.aip = -std::pow(s, 0.25) / std::sqrt(M_PI) * (std::cos(arg) * ve + std::sin(arg) * vo);
  return r;
}

}  // namespace

AiryValues airy_ai(double t) {
  if (!(std::abs(t) <= kAiryRange))
    throw std::domain_error("airy_ai: |t| <= 30 supported, got t = " + std::to_string(t));
  if (std::abs(t) <= kAirySeriesLimit) return airy_series(t);
  return t > 0 ? airy_asymptotic_positive(t) : airy_asymptotic_negative(t);
}

WeberOde::WeberOde(double a, double w0, double wp0, double tol, double smax)
    : a_(a), smax_(smax) {
  if (!(tol > 0.0) || !(smax > 0.0)) throw std::invalid_argument("WeberOde: bad tol or smax");
  integrate(w0, wp0, tol, +1.0);
  integrate(w0, wp0, tol, -1.0);
}

void WeberOde::integrate(double w0, double wp0, double tol, double direction) {
  constexpr int kOrder = 26;
  auto& steps = direction > 0 ? forward_ : backward_;
  steps.clear();

  double s0 = 0.0, w = w0, wp = wp0;
  while (smax_ - std::abs(s0) > 1e-12) {
    // Taylor coefficients at s0: (n+2)(n+1) c_{n+2} = a c_n - (s0^2 c_n
    // + 2 s0 c_{n-1} + c_{n-2}) / 4.
    std::vector<double> c(kOrder + 1, 0.0);
    c[0] = w;
    c[1] = wp;
    for (int n = 0; n + 2 <= kOrder; ++n) {
      double rhs = a_ * c[n] - 0.25 * s0 * s0 * c[n];
      if (n >= 1) rhs -= 0.5 * s0 * c[n - 1];
      if (n >= 2) rhs -= 0.25 * c[n - 2];
      c[n + 2] = rhs / ((n + 2.0) * (n + 1.0));
    }

    const double scale = std::max({std::abs(w), std::abs(wp), 1.0});
    double step = 0.5;
    auto tail = [&](double d) {
      double sum = 0.0, dn = std::pow(d, kOrder - 3);
      for (int n = kOrder - 3; n <= kOrder; ++n, dn *= d) sum += std::abs(c[n]) * dn;
      return sum;
    };
    while (tail(step) > tol * scale && step > 1e-4) step *= 0.7;
    step = std::min(step, smax_ - std::abs(s0));

    Step st;
    st.s0 = s0;
    st.length = direction * step;
    st.coeff = c;
    steps.push_back(std::move(st));

    // advance with Horner at the step end
    const double d = direction * step;
    double val = 0.0, der = 0.0;
    for (int n = kOrder; n >= 0; --n) {
      der = der * d + val;
      val = val * d + c[n];
    }
    w = val;
    wp = der;
    s0 += d;
  }
}

const WeberOde::Step& WeberOde::locate(const std::vector<Step>& steps, double s) {
  int lo = 0, hi = static_cast<int>(steps.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    const double end = steps[mid].s0 + steps[mid].length;
    if (std::abs(s) <= std::abs(end) + 1e-15)
      hi = mid;
    else
      lo = mid + 1;
  }
  return steps[lo];
}

OdeValues WeberOde::eval(double s) const {
  if (!(std::abs(s) <= smax_ + 1e-12))
    throw std::domain_error("WeberOde: |s| <= " + std::to_string(smax_) + " supported");
  const auto& steps = s >= 0.0 ? forward_ : backward_;
  const Step& st = locate(steps, s);
  const double d = s - st.s0;
  double val = 0.0, der = 0.0;
  for (int n = static_cast<int>(st.coeff.size()) - 1; n >= 0; --n) {
    der = der * d + val;
    val = val * d + st.coeff[n];
  }
  return {val, der};
}

OdeValues weber_po(double s, double a) {
  static std::shared_mutex mutex;
  static std::map<double, std::shared_ptr<const WeberOde>> cache;

  std::shared_ptr<const WeberOde> ode;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(a); it != cache.end()) ode = it->second;
  }
  if (!ode) {
    std::unique_lock lock(mutex);
    auto& slot = cache[a];
    if (!slot) slot = std::make_shared<WeberOde>(a, 0.0, 1.0);
    ode = slot;
  }
  return ode->eval(s);
}

ExactSolution make_exact_airy(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("make_exact_airy needs kappa > 0");
  const double k23 = std::pow(kappa, 2.0 / 3.0);
  ExactSolution e{"airy", kappa, make_airy_field(), nullptr, nullptr};
  e.value = [k23](Point p) { return Complex(airy_ai(k23 * p.y).ai, 0.0); };
  e.gradient = [k23](Point p) {
    return std::array<Complex, 2>{Complex(0.0, 0.0), Complex(k23 * airy_ai(k23 * p.y).aip, 0.0)};
  };
  return e;
}

ExactSolution make_exact_weber(double kappa, double a) {
  if (!(kappa > 0.0)) throw std::invalid_argument("make_exact_weber needs kappa > 0");
  const double rk = std::sqrt(kappa);
  ExactSolution e{"weber", kappa, make_weber_field(a, kappa), nullptr, nullptr};
  e.value = [rk, a](Point p) { return Complex(weber_po(rk * p.x, a).w, 0.0); };
  e.gradient = [rk, a](Point p) {
    return std::array<Complex, 2>{Complex(rk * weber_po(rk * p.x, a).wp, 0.0), Complex(0.0, 0.0)};
  };
  return e;
}

ExactSolution make_exact_plane_wave(double kappa, double theta) {
  if (!(kappa > 0.0)) throw std::invalid_argument("make_exact_plane_wave needs kappa > 0");
  const double cx = std::cos(theta), cy = std::sin(theta);
  ExactSolution e{"plane_wave", kappa, make_constant(1.0), nullptr, nullptr};
  e.value = [kappa, cx, cy](Point p) {
    return std::exp(Complex(0.0, kappa * (cx * p.x + cy * p.y)));
  };
  e.gradient = [kappa, cx, cy](Point p) {
    const Complex u = std::exp(Complex(0.0, kappa * (cx * p.x + cy * p.y)));
    return std::array<Complex, 2>{Complex(0.0, kappa * cx) * u, Complex(0.0, kappa * cy) * u};
  };
  return e;
}

Complex impedance_trace(const ExactSolution& exact, Point p, Vec2 outward_normal) {
  const Complex u = exact.value(p);
  const auto g = exact.gradient(p);
  const Complex dn = g[0] * outward_normal[0] + g[1] * outward_normal[1];
  return u + dn / Complex(0.0, exact.kappa);
}

}  // namespace gpwtdg
