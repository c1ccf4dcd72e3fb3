#pragma once

#include <string>
#include <vector>

#include "critspace/bigint.hpp"
#include "critspace/format.hpp"

namespace critspace {

/// Integer weight of SL(m) in the basis L_1..L_m, taken modulo (1,...,1).
/// O(c) on P^{m-1} is c*lambda_1; Omega^r(r+1) is lambda_{r+1}.
struct Weight {
    std::vector<long> entries;

    std::size_t rank() const { return entries.size(); }
    bool is_dominant() const;
    /// Shifted so the last entry is 0.
    Weight normalized() const;
    std::string to_string() const;
    friend bool operator==(const Weight&, const Weight&) = default;
};

/// c * lambda_1 + lambda_{r+1}: the weight of Omega^r_{P^n}(r + 1 + c).
Weight omega_weight(int n, int r, long twist);

struct CohomologyAnswer {
    bool singular = true;
    int index = 0;      // the single degree p with H^p != 0
    Weight dominant;    // normalized, non-increasing
    BigInt dim;         // weyl_dim(dominant)
};

/// Bott's closed formula for h^q(Omega^r_{P^n}(twist)).
BigInt h_omega(int n, int r, long twist, int q);

/// Bubble-sorts lambda + delta with the dotted exchanges.
CohomologyAnswer bbw_resolve(const Weight& lambda);

BigInt weyl_dim(const Weight& dominant);

/// h^q(E^(r)) on the product of projective spaces of `format`, assembled
/// from Omega^{r_i}(2 r_i + 1 - r) on each factor via Kunneth.
BigInt h_E(const Format& format, int r, int q);

}  // namespace critspace
