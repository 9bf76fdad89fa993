#ifndef TATE_SERIES_HPP
#define TATE_SERIES_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tate/adic.hpp"

namespace tate {

inline constexpr unsigned kMaxVariables = 8;
// Total degree caps are at most 128, so every stored exponent fits in 7 bits.
inline constexpr unsigned kMaxDegreeCap = 128;

// Exponent vector packed into one word: the total degree in the top byte,
// then x1, x2, ... in 7-bit fields. Integer order on the packed word is the
// graded lexicographic order with x1 > x2 > ... > x8.
class MultiIndex {
public:
    constexpr MultiIndex() noexcept = default;

    static MultiIndex from_exponents(std::span<const unsigned> exponents);
    static MultiIndex variable(unsigned i);
    static constexpr MultiIndex from_packed(std::uint64_t bits) noexcept { return MultiIndex(bits); }

    constexpr unsigned degree() const noexcept { return static_cast<unsigned>(bits_ >> 56); }
    constexpr unsigned exponent(unsigned i) const noexcept
    {
        return static_cast<unsigned>((bits_ >> shift(i)) & 0x7f);
    }
    constexpr std::uint64_t packed() const noexcept { return bits_; }
    std::vector<unsigned> exponents(unsigned n) const;

    // Requires degree() + other.degree() < kMaxDegreeCap.
    constexpr MultiIndex operator+(MultiIndex other) const noexcept { return MultiIndex(bits_ + other.bits_); }
    // Requires exponent(i) > 0.
    constexpr MultiIndex lowered(unsigned i) const noexcept
    {
        return MultiIndex(bits_ - (std::uint64_t{1} << 56) - (std::uint64_t{1} << shift(i)));
    }

    friend constexpr auto operator<=>(MultiIndex, MultiIndex) noexcept = default;

    // "x1^2*x3", "1" for the empty monomial; n == 1 prints "x".
    std::string to_string(unsigned n) const;

private:
    constexpr explicit MultiIndex(std::uint64_t bits) noexcept : bits_(bits) {}
    static constexpr unsigned shift(unsigned i) noexcept { return 49 - 7 * i; }
    std::uint64_t bits_ = 0;
};

struct SeriesAccess;

struct Term {
    MultiIndex index;
    Scalar coeff;
};

// Sparse multivariate series over a Domain, truncated at total degree `cap`:
// terms of degree < cap are known exactly (at the domain's precision), terms
// of degree >= cap are not represented. `polynomial` records that the terms
// of degree >= cap are known to vanish, i.e. the stored data is the whole
// series. Stored coefficients are canonical and nonzero, sorted grlex.
class TateSeries {
public:
    TateSeries(Domain domain, unsigned nvars, unsigned cap, bool polynomial = true);

    static TateSeries constant(Domain domain, unsigned nvars, unsigned cap, const Scalar &c);
    static TateSeries variable(Domain domain, unsigned nvars, unsigned cap, unsigned i);
    // Normalizes coefficients, merges duplicate indices and drops zeros.
    // Terms of degree >= cap are discarded; if any of them is nonzero the
    // result is no longer flagged polynomial.
    static TateSeries from_terms(Domain domain, unsigned nvars, unsigned cap, std::vector<Term> terms,
                                 bool polynomial = true);

    const Domain &domain() const noexcept { return domain_; }
    unsigned nvars() const noexcept { return n_; }
    unsigned cap() const noexcept { return cap_; }
    bool is_polynomial() const noexcept { return polynomial_; }
    const std::vector<Term> &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Scalar coefficient(MultiIndex index) const;
    Scalar constant_term() const { return coefficient(MultiIndex{}); }
    // -1 for the zero series.
    int max_degree() const noexcept { return terms_.empty() ? -1 : static_cast<int>(terms_.back().index.degree()); }

    // Lowering the cap truncates. Raising it keeps the stored terms and reads
    // the unknown band as zero, which is exact only for polynomials.
    TateSeries recapped(unsigned cap) const;
    TateSeries with_polynomial_flag(bool polynomial) const;
    // Terms of total degree < d only (cap unchanged).
    TateSeries low_part(unsigned d) const;

    std::string to_string() const;

    // Structural equality of the truncations; the polynomial flag is metadata
    // about the unstored tail and does not take part.
    friend bool operator==(const TateSeries &a, const TateSeries &b);

private:
    friend struct SeriesAccess;
    Domain domain_;
    unsigned n_;
    unsigned cap_;
    bool polynomial_;
    std::vector<Term> terms_;
};

TateSeries series_add(const TateSeries &f, const TateSeries &g);
TateSeries series_sub(const TateSeries &f, const TateSeries &g);
TateSeries series_neg(const TateSeries &f);
TateSeries series_scale(const TateSeries &f, const Scalar &c);
TateSeries series_mul(const TateSeries &f, const TateSeries &g);
// Formal partial derivative in variable j (0-based); the cap drops by one.
TateSeries series_derive(const TateSeries &f, unsigned j);

inline TateSeries operator+(const TateSeries &f, const TateSeries &g) { return series_add(f, g); }
inline TateSeries operator-(const TateSeries &f, const TateSeries &g) { return series_sub(f, g); }
inline TateSeries operator-(const TateSeries &f) { return series_neg(f); }
inline TateSeries operator*(const TateSeries &f, const TateSeries &g) { return series_mul(f, g); }

enum class ComposeStrategy {
    // Each power G^a is built once from G^(a - e_i) and shared.
    power_table,
    // Each monomial of f is expanded independently by repeated products.
    monomialwise,
};

// f(G_1, ..., G_n), truncated at min(cap f, caps of G). Every G_i must have
// zero constant term.
TateSeries series_compose(const TateSeries &f, std::span<const TateSeries> g,
                          ComposeStrategy strategy = ComposeStrategy::power_table);
// Composes every f in `fs` with the same G, sharing one power table.
std::vector<TateSeries> compose_all(std::span<const TateSeries> fs, std::span<const TateSeries> g);
// Like compose_all but also accepts arguments with nonzero constant terms,
// which is only meaningful when every f is a polynomial (checked).
std::vector<TateSeries> substitute_all(std::span<const TateSeries> fs, std::span<const TateSeries> g);

struct EvalResult {
    AdicElement value;
    // Heuristic precision of the unstored tail: the minimum coefficient
    // valuation in the top degree band [cap - window, cap). TOP for
    // polynomials and for an empty band.
    Valuation tail_precision;
    unsigned window;
    bool exact;
};

// Sum of the stored terms at `point`. window == 0 selects max(1, cap / 4).
EvalResult series_eval(const TateSeries &f, std::span<const AdicElement> point, unsigned window = 0);

struct UnitCertificate {
    bool is_unit = false;
    // First offending monomial when !is_unit (the constant monomial when f(0)
    // is not a unit).
    std::optional<MultiIndex> violating;
    std::string reason;
};

UnitCertificate tate_is_unit(const TateSeries &f);
// b * sum_{i<cap} (-u)^i with b = f(0)^-1 and b f = 1 + u. Throws NotAUnit
// carrying the certificate's reason.
TateSeries tate_invert_unit(const TateSeries &f);

} // namespace tate

#endif
