#ifndef TATE_ORACLES_HPP
#define TATE_ORACLES_HPP

#include "tate/maps.hpp"

namespace tate {

inline constexpr unsigned long long kDefaultEnumerationBudget = 10'000'000;

// Budget from TATE_ENUMERATION_BUDGET when set and valid, else the default.
unsigned long long default_enumeration_budget();

// Compositional inverse of a univariate f with f(0) = 0 and f'(0) a unit,
// through degree cap - 1, by coefficient extraction
//   [x^k] g = (1/k) [x^(k-1)] (x / f(x))^k
// carried out over Q with dense arithmetic. Shares no code with
// formal_inverse. Over exact_integer_adic every coefficient must come out
// integral; a fractional one is reported as a ContractError.
TateSeries lagrange_oracle(const TateSeries &f, unsigned cap);

// Exhaustive bijectivity test of x -> F(x) on (Z/m)^n. F must be a
// polynomial whose coefficients have images in Z/m. Throws ContractError when
// m^n exceeds the budget.
bool bijectivity_oracle(const PolyMap &f, const mpz_class &m,
                        unsigned long long budget = default_enumeration_budget());

} // namespace tate

#endif
