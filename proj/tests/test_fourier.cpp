#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "squeeze/fourier.hpp"

using namespace squeeze;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("trig polynomial evaluates exactly") {
  FourierSeries f(1.5, {0.3, 0.0}, {0.0, -0.2});
  for (int i = 0; i < 17; ++i) {
    const double th = 2.0 * kPi * i / 17.0 + 0.123;
    const double expect = 1.5 + 0.3 * std::cos(th) - 0.2 * std::sin(2.0 * th);
    CHECK(f(th) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("derivative of a trig polynomial is exact") {
  FourierSeries f(0.7, {0.3, 0.0, 0.1}, {0.0, -0.2, 0.0});
  const FourierSeries df = f.derivative();
  for (int i = 0; i < 11; ++i) {
    const double th = 2.0 * kPi * i / 11.0;
    const double expect = -0.3 * std::sin(th) - 0.4 * std::cos(2.0 * th) -
                          0.3 * std::sin(3.0 * th);
    CHECK(df(th) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("interleaved coefficient layout round-trips") {
  const std::vector<double> coeffs{0.4, -0.1, 0.2, 0.0, 0.05};
  const FourierSeries f = FourierSeries::from_interleaved(coeffs);
  CHECK(f.a0() == 0.4);
  CHECK(f.modes() == 2);
  const std::vector<double> back = f.interleaved();
  REQUIRE(back.size() == coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) CHECK(back[i] == coeffs[i]);

  const FourierSeries c = FourierSeries::from_interleaved({2.5});
  CHECK(c.is_constant());
  CHECK(c(1.234) == 2.5);
}

TEST_CASE("fit recovers a band-limited function exactly") {
  const auto f = [](double th) {
    return 0.9 - 0.2 * std::cos(th) + 0.15 * std::sin(3.0 * th);
  };
  const FourierSeries s = FourierSeries::fit(f, 4);
  CHECK(s.a0() == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(s.cos_coeffs()[0] == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(s.sin_coeffs()[2] == doctest::Approx(0.15).epsilon(1e-13));
  for (int i = 0; i < 9; ++i) {
    const double th = 2.0 * kPi * i / 9.0 + 0.05;
    CHECK(s(th) == doctest::Approx(f(th)).epsilon(1e-13));
  }
}

TEST_CASE("fit of a smooth periodic function converges spectrally") {
  const auto f = [](double th) { return std::exp(0.05 * std::sin(th)); };
  const FourierSeries s = FourierSeries::fit(f, 16);
  double worst = 0.0;
  for (int i = 0; i < 257; ++i) {
    const double th = 2.0 * kPi * i / 257.0;
    worst = std::max(worst, std::abs(s(th) - f(th)));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("series sum and difference act pointwise") {
  FourierSeries f(0.2, {0.1}, {0.0});
  FourierSeries g(0.5, {0.0, -0.3}, {0.2, 0.0});
  const FourierSeries sum = f + g;
  const FourierSeries diff = g - f;
  for (int i = 0; i < 7; ++i) {
    const double th = 2.0 * kPi * i / 7.0;
    CHECK(sum(th) == doctest::Approx(f(th) + g(th)).epsilon(1e-15));
    CHECK(diff(th) == doctest::Approx(g(th) - f(th)).epsilon(1e-15));
  }
}

TEST_CASE("grid derivative matches the analytic derivative") {
  const int n = 64;
  std::vector<double> u(n), du_exact(n);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    u[i] = std::exp(std::sin(th));
    du_exact[i] = std::cos(th) * std::exp(std::sin(th));
  }
  const std::vector<double> du = spectral_derivative(u);
  for (int i = 0; i < n; ++i)
    CHECK(du[i] == doctest::Approx(du_exact[i]).epsilon(1e-11));
}

TEST_CASE("grid derivative is exact for resolved harmonics") {
  const int n = 32;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = std::sin(3.0 * (2.0 * kPi * i / n));
  const std::vector<double> du = spectral_derivative(u);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    CHECK(du[i] == doctest::Approx(3.0 * std::cos(3.0 * th)).epsilon(1e-12));
  }
}
