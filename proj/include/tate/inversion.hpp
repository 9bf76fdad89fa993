#ifndef TATE_INVERSION_HPP
#define TATE_INVERSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "tate/maps.hpp"

namespace tate {

struct FormalInverseOptions {
    // Run exactly this many full-cap contraction steps instead of the graded
    // schedule (which raises the working cap by one per step).
    std::optional<unsigned> steps;
};

// The unique G with F o G = G o F = X modulo degree `cap`, for F = X + H with
// F(0) = 0 and identity linear part, via G <- X - H o G.
PolyMap formal_inverse(const PolyMap &f, unsigned cap, const FormalInverseOptions &options = {});

// For a polynomial F with F(0) = 0 and a truncated inverse G whose stored
// terms might be all of it: checks F o G = X without truncation. On success
// G is the inverse and is returned flagged as a polynomial.
std::optional<PolyMap> certify_polynomial_inverse(const PolyMap &f, const PolyMap &g);

// Normalizes first, so any F whose linear part is invertible over R works.
// A nonzero F(0) needs a polynomial normalized inverse.
PolyMap invert_map(const PolyMap &f, unsigned cap);

// Minimum ideal valuation over every stored coefficient of every component.
Valuation min_valuation(const PolyMap &f);

struct LiftStep {
    unsigned step;
    Valuation error_valuation; // of E_k = G_k o F - X
    int required;              // min(2^k, target)
};

struct LiftResult {
    PolyMap inverse;
    std::vector<LiftStep> ledger;
    unsigned target_precision;
};

// Newton-style correction G <- G - E o G with E = G o F - X, starting from a
// G0 inverse to F modulo I. Every step's error valuation is checked against
// min(2^k, target); a violation throws std::logic_error.
LiftResult adic_lift_inverse(const PolyMap &f, const PolyMap &g0, unsigned target_precision);

struct DecayProfile {
    // Minimum valuation among the coefficients of each total degree d < cap.
    std::vector<Valuation> per_degree;
    // tail_floor[d] = min over degrees >= d; every coefficient of degree >= d
    // (below the cap) lies in I^tail_floor[d]. Nondecreasing in d.
    std::vector<Valuation> tail_floor;
    // Degrees whose minimum valuation is 0 (a coefficient that is a unit mod I
    // or, more generally, outside I).
    std::vector<unsigned> valuation_zero_degrees;
};

DecayProfile decay_profile(const PolyMap &g);

struct TransferOptions {
    unsigned cap = 16;
    // Stabilization window for declaring the truncated residue inverse a
    // polynomial; 0 selects cap / 2.
    unsigned window = 0;
    // Lifting precision; 0 selects the domain precision (truncated) or 8.
    unsigned target_precision = 0;
    unsigned long long enumeration_budget = 10'000'000;
};

struct TransferReport {
    bool invertible_mod_i = false;
    // Proof-grade conclusion (exact verification or rigorous obstruction) as
    // opposed to a stabilization heuristic.
    bool conclusive = false;
    std::optional<PolyMap> residue_inverse;
    std::optional<LiftResult> lifted;
    std::string obstruction;
    std::vector<std::string> notes;
};

TransferReport transfer_check(const PolyMap &f, const TransferOptions &options = {});

} // namespace tate

#endif
