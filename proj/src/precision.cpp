#include "synlab/precision.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace synlab {

namespace {

unsigned g_precision_bits = 0; // 0 = not yet initialized

unsigned bits_to_decimal_digits(unsigned bits) {
    // log10(2) = 0.30103...; two guard digits.
    return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
}

} // namespace

void set_precision_bits(unsigned bits) {
    if (bits < 64) bits = 64;
    g_precision_bits = bits;
    HighFloat::default_precision(bits_to_decimal_digits(bits));
}

unsigned precision_bits() {
    if (g_precision_bits == 0) init_precision_from_env();
    return g_precision_bits;
}

void init_precision_from_env() {
    if (g_precision_bits != 0) return;
    unsigned bits = 256;
    if (const char* env = std::getenv("SYNLAB_PRECISION")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 64 && v <= 1 << 20) bits = static_cast<unsigned>(v);
    }
    set_precision_bits(bits);
}

} // namespace synlab
