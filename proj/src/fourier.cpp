#include "squeeze/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "squeeze/parallel.hpp"

namespace squeeze {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FourierSeries::FourierSeries(double a0, std::vector<double> cos_coeffs,
                             std::vector<double> sin_coeffs)
    : a0_(a0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  if (cos_.size() != sin_.size())
    throw std::invalid_argument("FourierSeries: cosine and sine lists must have equal length");
}

FourierSeries FourierSeries::from_interleaved(const std::vector<double>& coeffs) {
  if (coeffs.empty())
    throw std::invalid_argument("FourierSeries: empty coefficient list");
  if (coeffs.size() % 2 == 0)
    throw std::invalid_argument(
        "FourierSeries: interleaved list must have odd length [a0, a1, b1, ...]");
  FourierSeries f;
  f.a0_ = coeffs[0];
  const std::size_t k = coeffs.size() / 2;
  f.cos_.resize(k);
  f.sin_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    f.cos_[i] = coeffs[1 + 2 * i];
    f.sin_[i] = coeffs[2 + 2 * i];
  }
  return f;
}

FourierSeries FourierSeries::fit(const std::function<double(double)>& f, int n_modes,
                                 int n_samples) {
  if (n_modes < 0) throw std::invalid_argument("FourierSeries::fit: n_modes < 0");
  if (n_samples <= 0) n_samples = std::max(4 * n_modes + 4, 256);
  if (n_samples <= 2 * n_modes)
    throw std::invalid_argument("FourierSeries::fit: need more than 2 n_modes samples");
  std::vector<double> s(n_samples);
  for (int i = 0; i < n_samples; ++i) s[i] = f(kTwoPi * i / n_samples);
  FourierSeries out;
  double mean = 0.0;
  for (double v : s) mean += v;
  out.a0_ = mean / n_samples;
  out.cos_.assign(n_modes, 0.0);
  out.sin_.assign(n_modes, 0.0);
  for (int k = 1; k <= n_modes; ++k) {
    double ca = 0.0, sa = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const double t = kTwoPi * k * i / n_samples;
      ca += s[i] * std::cos(t);
      sa += s[i] * std::sin(t);
    }
    out.cos_[k - 1] = 2.0 * ca / n_samples;
    out.sin_[k - 1] = 2.0 * sa / n_samples;
  }
  return out;
}

double FourierSeries::operator()(double theta) const {
  double v = a0_;
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double kt = (k + 1) * theta;
    v += cos_[k] * std::cos(kt) + sin_[k] * std::sin(kt);
  }
  return v;
}

FourierSeries FourierSeries::derivative() const {
  FourierSeries d;
  d.a0_ = 0.0;
  d.cos_.resize(cos_.size());
  d.sin_.resize(sin_.size());
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    d.cos_[k] = kk * sin_[k];
    d.sin_[k] = -kk * cos_[k];
  }
  return d;
}

std::vector<double> FourierSeries::interleaved() const {
  std::vector<double> out;
  out.reserve(1 + 2 * cos_.size());
  out.push_back(a0_);
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    out.push_back(cos_[k]);
    out.push_back(sin_[k]);
  }
  return out;
}

bool FourierSeries::is_constant() const {
  for (std::size_t k = 0; k < cos_.size(); ++k)
    if (cos_[k] != 0.0 || sin_[k] != 0.0) return false;
  return true;
}

namespace {
void pad_to(std::vector<double>& v, std::size_t n) {
  if (v.size() < n) v.resize(n, 0.0);
}
}  // namespace

FourierSeries FourierSeries::operator-(const FourierSeries& other) const {
  FourierSeries out = *this;
  out.a0_ -= other.a0_;
  pad_to(out.cos_, other.cos_.size());
  pad_to(out.sin_, other.sin_.size());
  for (std::size_t k = 0; k < other.cos_.size(); ++k) {
    out.cos_[k] -= other.cos_[k];
    out.sin_[k] -= other.sin_[k];
  }
  return out;
}

FourierSeries FourierSeries::operator+(const FourierSeries& other) const {
  FourierSeries out = *this;
  out.a0_ += other.a0_;
  pad_to(out.cos_, other.cos_.size());
  pad_to(out.sin_, other.sin_.size());
  for (std::size_t k = 0; k < other.cos_.size(); ++k) {
    out.cos_[k] += other.cos_[k];
    out.sin_[k] += other.sin_[k];
  }
  return out;
}

std::vector<double> spectral_derivative(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw std::invalid_argument("spectral_derivative: need at least 2 samples");
  const int kmax = n / 2;
  // Coefficients of the interpolant, a_k and b_k for k = 1 .. kmax.
  std::vector<double> a(kmax + 1, 0.0), b(kmax + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    double ca = 0.0, sa = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = kTwoPi * k * i / n;
      ca += samples[i] * std::cos(t);
      sa += samples[i] * std::sin(t);
    }
    const double scale = (2 * k == n) ? 1.0 : 2.0;
    a[k] = scale * ca / n;
    b[k] = scale * sa / n;
  }
  std::vector<double> d(n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double s = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      if (2 * k == n) continue;  // Nyquist cosine has zero derivative at the nodes
      const double t = kTwoPi * k * static_cast<double>(i) / n;
      s += k * (b[k] * std::cos(t) - a[k] * std::sin(t));
    }
    d[i] = s;
  });
  return d;
}

}  // namespace squeeze
