#include "s3flow/speeds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace s3flow {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Natural cubic spline with linear extrapolation beyond the knots.
class NaturalSpline {
 public:
  explicit NaturalSpline(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) throw std::invalid_argument("spline needs at least two knots");
    std::sort(table.begin(), table.end());
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (!(table[i].first > table[i - 1].first)) {
        throw std::invalid_argument("spline knots must have distinct H values");
      }
    }
    const std::size_t n = table.size();
    x_.resize(n);
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = table[i].first;
      y_[i] = table[i].second;
    }
    // Second derivatives m_i with m_0 = m_{n-1} = 0 (Thomas algorithm).
    m_.assign(n, 0.0);
    if (n > 2) {
      std::vector<double> c(n, 0.0), d(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
        const double r = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (r - a * d[i - 1]) / denom;
      }
      for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
      }
    }
  }

  // Returns value, first and second derivative.
  void eval(double t, double& f, double& df, double& d2f) const {
    const std::size_t n = x_.size();
    if (t <= x_.front() || t >= x_.back()) {
      const bool left = t <= x_.front();
      const std::size_t i = left ? 0 : n - 2;
      const double h = x_[i + 1] - x_[i];
      const double slope_mid = (y_[i + 1] - y_[i]) / h;
      const double s = left ? slope_mid - h * (2.0 * m_[i] + m_[i + 1]) / 6.0
                            : slope_mid + h * (m_[i] + 2.0 * m_[i + 1]) / 6.0;
      const double x0 = left ? x_.front() : x_.back();
      const double y0 = left ? y_.front() : y_.back();
      f = y0 + s * (t - x0);
      df = s;
      d2f = 0.0;
      return;
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    f = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    df = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
         (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
    d2f = a * m_[i] + b * m_[i + 1];
  }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace

double speed_mcf(double k1, double k2) { return k1 + k2; }

double speed_arctan(double k1, double k2) {
  const double p = k1 * k2;
  if (p <= 1.0) return std::atan(k1) + std::atan(k2);
  const double v = kQuarterPi * (p + 1.0);
  return k1 + k2 > 0.0 ? v : -v;
}

SpeedPartials speed_arctan_partials(double k1, double k2) {
  const double p = k1 * k2;
  if (p <= 1.0) return {1.0 / (1.0 + k1 * k1), 1.0 / (1.0 + k2 * k2)};
  const double s = k1 + k2 > 0.0 ? kQuarterPi : -kQuarterPi;
  return {s * k2, s * k1};
}

ConditionFlags speed_huisken_monitor(double k1, double k2) {
  const double a2 = k1 * k1 + k2 * k2;
  const double h = k1 + k2;
  ConditionFlags flags;
  flags.simons = a2 < 2.0;
  flags.huisken2d = a2 < 0.75 * h * h + 4.0 / 3.0;
  flags.okumura = a2 < h * h + 2.0;
  return flags;
}

SpeedFunction::SpeedFunction(std::string name, Eval eval, Partials partials, Domain domain)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      partials_(std::move(partials)),
      domain_(std::move(domain)) {
  if (!eval_) throw std::invalid_argument("SpeedFunction: eval must be set");
}

SpeedFunction SpeedFunction::mcf() {
  return SpeedFunction("mcf", speed_mcf,
                       [](double, double) { return SpeedPartials{1.0, 1.0}; });
}

SpeedFunction SpeedFunction::arctan() {
  return SpeedFunction("arctan", speed_arctan, speed_arctan_partials,
                       [](double k1, double k2) { return 1.0 + k1 * k2 >= 0.0; });
}

SpeedFunction SpeedFunction::affine_arctan(double c1, double c2) {
  if (!(c2 > 0.0)) throw std::invalid_argument("affine_arctan: C2 must be positive");
  return SpeedFunction(
      "affine_arctan",
      [c1, c2](double k1, double k2) { return c1 + c2 * std::atan(0.5 * (k1 + k2)); },
      [c2](double k1, double k2) {
        const double h = k1 + k2;
        const double d = 2.0 * c2 / (4.0 + h * h);
        return SpeedPartials{d, d};
      });
}

SpeedFunction SpeedFunction::custom_fH(std::vector<std::pair<double, double>> table) {
  auto spline = std::make_shared<const NaturalSpline>(std::move(table));
  return SpeedFunction(
      "custom_fH",
      [spline](double k1, double k2) {
        double f, df, d2f;
        spline->eval(k1 + k2, f, df, d2f);
        return f;
      },
      [spline](double k1, double k2) {
        double f, df, d2f;
        spline->eval(k1 + k2, f, df, d2f);
        return SpeedPartials{df, df};
      });
}

SpeedFunction SpeedFunction::from_name(const std::string& name, std::span<const double> params) {
  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw std::invalid_argument("speed '" + name + "' takes " + std::to_string(n) +
                                  " parameters, got " + std::to_string(params.size()));
    }
  };
  if (name == "mcf") {
    expect(0);
    return mcf();
  }
  if (name == "arctan") {
    expect(0);
    return arctan();
  }
  if (name == "affine_arctan") {
    expect(2);
    return affine_arctan(params[0], params[1]);
  }
  if (name == "custom_fH") {
    if (params.size() < 4 || params.size() % 2 != 0) {
      throw std::invalid_argument("speed 'custom_fH' needs an even list of at least 4 values (H0, f0, H1, f1, ...)");
    }
    std::vector<std::pair<double, double>> table;
    for (std::size_t i = 0; i < params.size(); i += 2) table.emplace_back(params[i], params[i + 1]);
    return custom_fH(std::move(table));
  }
  throw std::invalid_argument("unknown speed '" + name + "' (expected mcf, arctan, affine_arctan, custom_fH)");
}

SpeedEvaluation SpeedFunction::evaluate(double k1, double k2) const {
  return {eval_(k1, k2), in_domain(k1, k2)};
}

SpeedPartials SpeedFunction::partials(double k1, double k2) const {
  return partials_ ? partials_(k1, k2) : finite_difference_partials(k1, k2);
}

SpeedPartials SpeedFunction::finite_difference_partials(double k1, double k2) const {
  const double h1 = 1e-5 * std::max(1.0, std::abs(k1));
  const double h2 = 1e-5 * std::max(1.0, std::abs(k2));
  return {(eval_(k1 + h1, k2) - eval_(k1 - h1, k2)) / (2.0 * h1),
          (eval_(k1, k2 + h2) - eval_(k1, k2 - h2)) / (2.0 * h2)};
}

HProfile HProfile::affine_arctan(double c1, double c2) {
  return {[c1, c2](double h) { return c1 + c2 * std::atan(0.5 * h); },
          [c2](double h) { return 2.0 * c2 / (4.0 + h * h); },
          [c2](double h) {
            const double q = 4.0 + h * h;
            return -4.0 * c2 * h / (q * q);
          }};
}

HProfile HProfile::mean_curvature() {
  return {[](double h) { return h; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

HProfile HProfile::cubic() {
  return {[](double h) { return h * h * h + h; }, [](double h) { return 3.0 * h * h + 1.0; },
          [](double h) { return 6.0 * h; }};
}

HProfile HProfile::exponential() {
  return {[](double h) { return std::exp(h); }, [](double h) { return std::exp(h); },
          [](double h) { return std::exp(h); }};
}

HProfile HProfile::spline(std::vector<std::pair<double, double>> table) {
  auto s = std::make_shared<const NaturalSpline>(std::move(table));
  return {[s](double h) {
            double f, df, d2f;
            s->eval(h, f, df, d2f);
            return f;
          },
          [s](double h) {
            double f, df, d2f;
            s->eval(h, f, df, d2f);
            return df;
          },
          [s](double h) {
            double f, df, d2f;
            s->eval(h, f, df, d2f);
            return d2f;
          }};
}

PhiProfile PhiProfile::pinched() {
  return {[](double h) { return std::sqrt(4.0 + h * h); },
          [](double h) { return h / std::sqrt(4.0 + h * h); },
          [](double h) {
            const double q = 4.0 + h * h;
            return 4.0 / (q * std::sqrt(q));
          }};
}

PhiProfile PhiProfile::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("PhiProfile::constant: c must be positive");
  return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

double g_form(const PhiProfile& phi, double k1, double k2) {
  const double d = k1 - k2;
  const double p = phi.phi(k1 + k2);
  return d * d - p * p;
}

HGSpeed HGSpeed::from_profile(const HProfile& profile) {
  return {[f = profile.f](double h, double) { return f(h); },
          [df = profile.df](double h, double) { return df(h); },
          [](double, double) { return 0.0; }};
}

ZTerm z_term(const HGSpeed& f, const PhiProfile& phi, double k1, double k2) {
  const double h = k1 + k2;
  const double d = k1 - k2;
  const double p = phi.phi(h);
  const double dp = phi.dphi(h);
  const double g = d * d - p * p;

  const double g1 = 2.0 * d - 2.0 * p * dp;
  const double g2 = -2.0 * d - 2.0 * p * dp;
  const double F = f.f(h, g);
  const double fH = f.f_H(h, g);
  const double fG = f.f_G(h, g);
  const double F1 = fH + fG * g1;
  const double F2 = fH + fG * g2;

  ZTerm z;
  z.g = g;
  z.singular = std::abs(d) <= 1e-14 * std::max(1.0, std::abs(h)) && std::abs(dp) <= 1e-14;
  z.form_a = F * (g1 * (1.0 + k1 * k1) + g2 * (1.0 + k2 * k2)) +
             (1.0 + k1 * k2) * (k2 - k1) * (g1 * F2 - F1 * g2);
  z.form_b = g * (F * h + fH * p * p);
  z.form_b_exact = g * (F * h + fH * d * d);
  return z;
}

AdmissibilityBounds admissibility_bounds(const PhiProfile& phi, double H) {
  const double p = phi.phi(H);
  const double dp = phi.dphi(H);
  const double d2p = phi.d2phi(H);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  AdmissibilityBounds b;
  b.lower_degenerate = std::abs(1.0 + dp) <= 1e-14;
  b.upper_degenerate = std::abs(1.0 - dp) <= 1e-14;
  b.lower = b.lower_degenerate ? -kInf : d2p / (1.0 + dp) - (1.0 + dp) / p;
  b.upper = b.upper_degenerate ? kInf : (1.0 - dp) / p - d2p / (1.0 - dp);
  return b;
}

AdmissibilityReport check_admissible(const HProfile& f, const PhiProfile& phi,
                                     std::span<const double> H_samples) {
  constexpr double tol = AdmissibilityReport::kTolerance;
  AdmissibilityReport r;
  r.H.assign(H_samples.begin(), H_samples.end());
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.matches_pinched_ratio = !r.H.empty();
  for (double h : r.H) {
    const AdmissibilityBounds b = admissibility_bounds(phi, h);
    const double d1 = f.df(h);
    if (!(d1 > 0.0)) r.monotone = false;
    const double ratio = f.d2f(h) / d1;
    r.lower.push_back(b.lower);
    r.upper.push_back(b.upper);
    r.ratio.push_back(ratio);
    r.worst_margin = std::min(r.worst_margin, std::min(ratio - b.lower, b.upper - ratio));
    if (!(std::abs(ratio + 2.0 * h / (4.0 + h * h)) <= tol)) r.matches_pinched_ratio = false;
  }
  r.verdict = r.monotone && !r.H.empty() && r.worst_margin >= -tol;
  return r;
}

}  // namespace s3flow
