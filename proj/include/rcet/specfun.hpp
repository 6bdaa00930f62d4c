// specfun.hpp - exponential integral and complex error functions

#pragma once

#include <complex>

namespace rcet {

using Complex = std::complex<double>;

namespace specfun {

// Below this argument E1 is summed from its power series, above it the
// continued fraction is used.
inline constexpr double kE1SeriesLimit = 1.5;

// Largest |Re z| or |Im z| accepted by the complex error functions.
inline constexpr double kErfcWorkingRange = 1.0e6;

// E1(x) = \int_x^\infty e^{-t}/t dt for x > 0, relative error <= 1e-12.
// Throws std::domain_error for x <= 0 or NaN.
double exp_integral_e1(double x);

// The two E1 branches, exposed so the seam between them can be tested.
double exp_integral_e1_series(double x);
double exp_integral_e1_continued_fraction(double x);

// Faddeeva function w(z) = exp(-z^2) erfc(-iz), valid in the whole plane.
Complex faddeeva_w(Complex z);

// Scaled complementary error function exp(z^2) erfc(z). Never overflows in
// the right half-plane, which is where the rate formulas evaluate it.
Complex erfcx_complex(Complex z);

// erfc(z) with relative error <= 1e-10 inside the working range.
// Throws std::domain_error outside the working range and
// std::overflow_error when the result is not representable.
Complex erfc_complex(Complex z);

}  // namespace specfun
}  // namespace rcet
