#pragma once

// Base-p binomial combinatorics: p-adic valuation, Lucas' digitwise binomial
// residues, and the predicted valuation p^{nu_p(t)} of (1+delta)^t - 1 for
// v(delta) = 1, together with a direct series oracle for the same quantity.
// The redundancy with pseries is deliberate: prediction and expansion are
// independent routes to the same number.

#include <cstdint>
#include <vector>

#include "ssv/pseries.hpp"

namespace ssv {

// Largest nu with p^nu | t; throws on t = 0.
std::uint32_t nu_p(std::uint64_t t, std::uint32_t p);

// Base-p digits of n, least significant first; empty for n = 0.
std::vector<std::uint32_t> base_p_digits(std::uint64_t n, std::uint32_t p);

// binom(t, m) mod p via digitwise products (Lucas); requires m <= t.
std::uint32_t lucas_binom(std::uint64_t t, std::uint64_t m, std::uint32_t p);

struct PredictedValuation {
  std::uint64_t order;    // p^{nu_p(t)}
  std::uint64_t witness;  // least m >= 1 with binom(t, m) != 0 mod p; equals order
};

// v((1+delta)^t - 1) = p^{nu_p(t)} for any delta with v(delta) = 1,
// by Lucas/Kummer: the smallest m >= 1 whose base-p digits are dominated
// by those of t is m = p^{nu_p(t)}.
PredictedValuation predicted_valuation(std::uint64_t t, std::uint32_t p);

// Direct series computation of v((1+delta)^t - 1) at working precision n.
// Requires v(delta) = 1 and n >= p^{nu_p(t)} + 2 (one guard coefficient past
// the expected valuation, so "exactly" is certified, not just "at least").
// Throws std::runtime_error if the valuation is indeterminate at precision n.
std::uint64_t kummer_oracle(std::uint64_t t, std::uint32_t p, const TruncatedSeries& delta,
                            std::uint32_t n);

}  // namespace ssv
