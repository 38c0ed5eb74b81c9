#pragma once

// Standard normal utilities with stable deep-tail behaviour. All routines are
// double precision; cdf() is erf-based and accurate to <= 1e-15 absolute.

namespace ruinalloc::normal {

// Density of the standard normal.
double pdf(double z);

// Distribution function Phi(z), absolute error <= 1e-15.
double cdf(double z);

// log Phi(z), finite and accurate far into the left tail (z ~ -1e4) where
// cdf() underflows. Uses the scaled complementary error function.
double log_cdf(double z);

// Scaled complementary error function exp(x^2) erfc(x). Stable for large x
// where erfc underflows and exp overflows.
double erfcx(double x);

// Inverse Mills ratio pdf(z)/cdf(z) without cancellation or underflow.
double hazard(double z);

}  // namespace ruinalloc::normal
