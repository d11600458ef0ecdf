#include "symred/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symred {

void Trajectory::push(double t, std::vector<double> y, std::vector<double> f) {
  ts_.push_back(t);
  ys_.push_back(std::move(y));
  fs_.push_back(std::move(f));
}

double Trajectory::eval(double t, std::size_t comp) const {
  if (ts_.size() == 1) return ys_[0][comp];
  bool fwd = ts_.back() >= ts_.front();
  // locate the step interval containing t
  std::size_t i = 0;
  if (fwd) {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - ts_.begin())) - 1;
    i = std::min(i, ts_.size() - 2);
  } else {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t, std::greater<double>());
    i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - ts_.begin())) - 1;
    i = std::min(i, ts_.size() - 2);
  }
  double h = ts_[i + 1] - ts_[i];
  double s = (t - ts_[i]) / h;
  double y0 = ys_[i][comp], y1 = ys_[i + 1][comp];
  double m0 = fs_[i][comp] * h, m1 = fs_[i + 1][comp] * h;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * m1;
}

namespace {

// Dormand-Prince 5(4) tableau
const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
const double a21 = 1.0 / 5;
const double a31 = 3.0 / 40, a32 = 9.0 / 40;
const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
             a54 = -212.0 / 729;
const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
             a65 = -5103.0 / 18656;
const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
             b6 = 11.0 / 84;
// b - bhat, for the embedded 4th-order error estimate
const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
             e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, const OdeOptions& opts, double t, std::vector<double> y)
      : rhs_(rhs), opts_(opts), t_(t), y_(std::move(y)) {
    n_ = y_.size();
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_})
      k->assign(n_, 0.0);
    rhs_(t_, y_, k1_);
  }

  double t() const { return t_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& f() const { return k1_; }

  void set_h(double h) { h_ = h; }
  double h() const { return h_; }

  /// One accepted step of size at most |h_|, clamped so that t does not pass
  /// `limit`. Updates t, y, and the FSAL derivative.
  void step(double limit) {
    const double dir = limit >= t_ ? 1.0 : -1.0;
    for (;;) {
      double h = dir * std::min(std::abs(h_), std::abs(limit - t_));
      if (std::abs(h) < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_)))
        throw StepUnderflowError("ODE step size underflow", t_);

      stages(h);
      double err = error_norm(h);
      if (err <= 1.0) {
        t_ = (std::abs(limit - (t_ + h)) < 1e-14 * std::max(1.0, std::abs(limit))) ? limit
                                                                                   : t_ + h;
        y_.swap(ynew_);
        k1_.swap(k7_);  // FSAL
        double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h_ = std::abs(h) * std::clamp(grow, 0.2, 5.0);
        for (double v : y_)
          if (std::abs(v) > opts_.blowup) throw BlowUpError("ODE solution blow-up", t_);
        return;
      }
      double shrink = std::max(0.2, 0.9 * std::pow(err, -0.2));
      h_ = std::abs(h) * shrink;
    }
  }

 private:
  void stages(double h) {
    auto axpy = [&](std::vector<double>& out, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
      for (std::size_t i = 0; i < n_; ++i) {
        double s = y_[i];
        for (const auto& [a, k] : terms) s += h * a * (*k)[i];
        out[i] = s;
      }
    };
    axpy(ytmp_, {{a21, &k1_}});
    rhs_(t_ + c2 * h, ytmp_, k2_);
    axpy(ytmp_, {{a31, &k1_}, {a32, &k2_}});
    rhs_(t_ + c3 * h, ytmp_, k3_);
    axpy(ytmp_, {{a41, &k1_}, {a42, &k2_}, {a43, &k3_}});
    rhs_(t_ + c4 * h, ytmp_, k4_);
    axpy(ytmp_, {{a51, &k1_}, {a52, &k2_}, {a53, &k3_}, {a54, &k4_}});
    rhs_(t_ + c5 * h, ytmp_, k5_);
    axpy(ytmp_, {{a61, &k1_}, {a62, &k2_}, {a63, &k3_}, {a64, &k4_}, {a65, &k5_}});
    rhs_(t_ + h, ytmp_, k6_);
    axpy(ynew_, {{b1, &k1_}, {b3, &k3_}, {b4, &k4_}, {b5, &k5_}, {b6, &k6_}});
    rhs_(t_ + h, ynew_, k7_);
  }

  double error_norm(double h) const {
    double sum = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                      e7 * k7_[i]);
      double sc = opts_.atol + opts_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
      sum += (e / sc) * (e / sc);
    }
    return std::sqrt(sum / static_cast<double>(n_));
  }

  const OdeRhs& rhs_;
  const OdeOptions& opts_;
  double t_;
  double h_ = 0;
  std::size_t n_;
  std::vector<double> y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
};

double initial_step(double span) { return std::max(std::abs(span) * 1e-3, 1e-8); }

}  // namespace

Trajectory solve_ivp(const OdeProblem& p) {
  Trajectory traj;
  Stepper s(p.rhs, p.opts, p.t0, p.y0);
  s.set_h(initial_step(p.t1 - p.t0));
  traj.push(s.t(), s.y(), s.f());
  const double dir = p.t1 >= p.t0 ? 1.0 : -1.0;
  while (dir * (p.t1 - s.t()) > 1e-14 * std::max(1.0, std::abs(p.t1))) {
    s.step(p.t1);
    traj.push(s.t(), s.y(), s.f());
  }
  return traj;
}

void solve_at_times(const OdeProblem& p, std::span<const double> times,
                    const std::function<void(std::size_t, double, std::span<const double>)>& sink) {
  Stepper s(p.rhs, p.opts, p.t0, p.y0);
  s.set_h(times.size() > 1 ? initial_step(times[1] - times[0]) : 1e-4);
  const double dir = (times.size() > 1 && times[1] < times[0]) ? -1.0 : 1.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    while (dir * (times[j] - s.t()) > 1e-14 * std::max(1.0, std::abs(times[j]))) s.step(times[j]);
    sink(j, times[j], s.y());
  }
}

void MonotoneCubic::init_common() {
  std::size_t n = x_.size();
  if (n < 2) throw std::invalid_argument("monotone cubic needs at least two nodes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i + 1] > x_[i])) throw std::invalid_argument("nodes must be strictly increasing");
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  init_common();
  std::size_t n = x_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  // interior slopes: weighted harmonic mean where the data is monotone
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0) {
      d_[i] = 0;
    } else {
      double w1 = 2 * h[i] + h[i - 1];
      double w2 = h[i] + 2 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // one-sided three-point endpoint slopes, clamped (Moler)
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0) return 0.0;
    if (d0 * d1 < 0 && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
    return d;
  };
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
  } else {
    d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  init_common();
  std::size_t n = x_.size();
  if (d_.size() != n) throw std::invalid_argument("one slope per node required");
  // Caller-provided slopes are exact derivative data (flow-map variational
  // output). Enforce sign consistency on locally monotone segments; a
  // magnitude clamp to the Fritsch-Carlson box would degrade smooth extrema,
  // where the secants shrink while the true slopes do not.
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  for (std::size_t i = 0; i < n; ++i) {
    double dl = i > 0 ? delta[i - 1] : delta[0];
    double dr = i + 1 < n ? delta[i] : delta[n - 2];
    if (dl * dr > 0 && d_[i] * dl < 0) d_[i] = 0;
  }
}

double MonotoneCubic::operator()(double x) const {
  std::size_t n = x_.size();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - x_.begin())) - 1;
  i = std::min(i, n - 2);
  double h = x_[i + 1] - x_[i];
  double s = (x - x_[i]) / h;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * d_[i] +
         (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * d_[i + 1];
}

}  // namespace symred
