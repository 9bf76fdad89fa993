#ifndef TATE_HARNESS_HPP
#define TATE_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tate/inversion.hpp"
#include "tate/io.hpp"

namespace tate {

// Uniform envelope for experiment output. Every numerical claim in `outcome`
// is backed by an entry in `oracles` naming the check that produced it.
struct ExperimentReport {
    std::string kind;
    json domain;
    json inputs;
    json outcome;
    std::vector<std::string> oracles;
    std::vector<std::string> caveats;

    json to_json() const;
    std::string to_text() const;
};

struct TamePair {
    PolyMap map;
    PolyMap inverse;
};

// X_i <- X_i + q, where q has zero constant term and does not involve X_i.
TamePair elementary_map(const Domain &domain, unsigned n, unsigned cap, unsigned i, const TateSeries &q);
// Y = A X with A invertible over R.
TamePair linear_automorphism(const ScalarMatrix &a, unsigned cap);

// Random composition of `length` elementary maps and invertible linear maps
// (deterministic in `seed`), with the reverse composition of the factor
// inverses. F(0) = 0 and det JF is a unit constant by construction.
TamePair generate_tame(std::uint64_t seed, unsigned n, unsigned degree_bound, unsigned length, const Domain &domain,
                       unsigned cap);

struct WitnessOutcome {
    std::vector<AdicElement> target; // the point the witness must hit (default all ones)
    std::vector<AdicElement> b;      // G evaluated at L^-1 (target - F(0))
    std::vector<AdicElement> image;  // F(b)
    Valuation agreement;             // min valuation of F(b) - target (TOP = equal mod p^N)
    bool matches_target = false;
    bool unimodular = false;
    Valuation tail_precision;        // heuristic, from series_eval
    bool exact = false;
};

// Candidate unimodular witness b = G(1) for a polynomial F over Z/p^N whose
// Jacobian determinant is a Tate unit; p must be prime.
WitnessOutcome unimodular_witness(const PolyMap &f, unsigned cap,
                                  std::optional<std::vector<Scalar>> point = std::nullopt);
ExperimentReport witness_report(const PolyMap &f, unsigned cap, const WitnessOutcome &w);

struct CharPOutcome {
    PolyMap map;
    TateSeries jacobian_det;
    UnitCertificate det_certificate;
    PolyMap inverse;
    DecayProfile profile;
    bool oracle_agrees = false;
    std::optional<bool> catalan_parity_agrees; // c = 2 only
};

// F = (X_i - X_i^c) over exact Z with I = (c).
CharPOutcome char_p_outcome(unsigned c, unsigned n, unsigned cap);
ExperimentReport char_p_report(unsigned c, unsigned n, unsigned cap);

json valuation_to_json(Valuation v);
json profile_to_json(const DecayProfile &p);

} // namespace tate

#endif
