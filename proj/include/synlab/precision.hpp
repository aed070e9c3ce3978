#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace synlab {

// Exact arithmetic for string counting and junk-sector weights.  Counts are
// kept as arbitrary-precision integers so that ratio assertions hold exactly;
// floating point enters only for growth-rate estimation and normalized
// probabilities.
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Variable-precision real (MPFR-backed).  The working precision defaults to
// 256 bits and can be raised via SYNLAB_PRECISION or RunConfig.  All HighFloat
// arithmetic is confined to serial code paths.
using HighFloat = boost::multiprecision::mpfr_float;

/// Sets the global working precision for HighFloat, in bits.
void set_precision_bits(unsigned bits);

/// Currently configured HighFloat precision in bits.
unsigned precision_bits();

/// Applies the default precision (256 bits) or the SYNLAB_PRECISION override.
/// Called lazily by the precision helpers; safe to call repeatedly.
void init_precision_from_env();

} // namespace synlab
