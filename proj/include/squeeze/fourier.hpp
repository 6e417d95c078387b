#pragma once

#include <functional>
#include <vector>

namespace squeeze {

// Real trigonometric polynomial on the circle,
//   f(theta) = a0 + sum_{k=1}^K (a_k cos(k theta) + b_k sin(k theta)).
// Profiles are stored in this form, so derivatives are exact.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(double constant) : a0_(constant) {}
  FourierSeries(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  // Interleaved coefficient list [a0, a1, b1, a2, b2, ...], the layout used
  // in config files. A list of length 1 is a constant.
  static FourierSeries from_interleaved(const std::vector<double>& coeffs);

  // Projection onto the first n_modes pairs through uniform sampling.
  // Exact for band-limited f, spectrally accurate for smooth periodic f.
  static FourierSeries fit(const std::function<double(double)>& f, int n_modes,
                           int n_samples = 0);

  double operator()(double theta) const;
  FourierSeries derivative() const;

  int modes() const { return static_cast<int>(cos_.size()); }
  double a0() const { return a0_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  std::vector<double> interleaved() const;
  bool is_constant() const;

  FourierSeries operator-(const FourierSeries& other) const;
  FourierSeries operator+(const FourierSeries& other) const;

 private:
  double a0_ = 0.0;
  std::vector<double> cos_, sin_;
};

// Derivative of a periodic grid function sampled at theta_i = 2 pi i / N,
// through its discrete Fourier interpolant. The Nyquist cosine is treated as
// usual (its derivative contribution is dropped). O(N^2), desk scale only.
std::vector<double> spectral_derivative(const std::vector<double>& samples);

}  // namespace squeeze
