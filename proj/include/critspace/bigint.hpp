#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace critspace {

using BigInt = mpz_class;

/// Same zero convention as binom(): 0 when q < 0, p < 0 or q > p.
BigInt binom_big(std::int64_t p, std::int64_t q);

inline std::string to_decimal(const BigInt& v) { return v.get_str(10); }

}  // namespace critspace
