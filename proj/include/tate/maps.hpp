#ifndef TATE_MAPS_HPP
#define TATE_MAPS_HPP

#include <span>
#include <string>
#include <vector>

#include "tate/series.hpp"

namespace tate {

// F = (f_1, ..., f_n): n series in n variables sharing domain and cap.
// Composition convention everywhere: (F o G)(X) = F(G(X)).
class PolyMap {
public:
    explicit PolyMap(std::vector<TateSeries> components);

    static PolyMap identity(Domain domain, unsigned n, unsigned cap);

    unsigned dim() const noexcept { return static_cast<unsigned>(components_.size()); }
    const Domain &domain() const noexcept { return components_.front().domain(); }
    unsigned cap() const noexcept { return components_.front().cap(); }
    bool is_polynomial() const;
    int max_degree() const;

    const std::vector<TateSeries> &components() const noexcept { return components_; }
    const TateSeries &operator[](unsigned i) const { return components_[i]; }

    PolyMap recapped(unsigned cap) const;
    std::vector<Scalar> constant_terms() const;

    std::string to_string() const;

    friend bool operator==(const PolyMap &a, const PolyMap &b) { return a.components_ == b.components_; }

private:
    std::vector<TateSeries> components_;
};

// Dense n x n matrix of ring elements, row-major.
class ScalarMatrix {
public:
    ScalarMatrix(Domain domain, unsigned n);
    static ScalarMatrix identity(Domain domain, unsigned n);

    unsigned dim() const noexcept { return n_; }
    const Domain &domain() const noexcept { return domain_; }
    const Scalar &at(unsigned i, unsigned j) const { return entries_[i * n_ + j]; }
    void set(unsigned i, unsigned j, const Scalar &v) { entries_[i * n_ + j] = domain_.normalize(v); }

    friend bool operator==(const ScalarMatrix &a, const ScalarMatrix &b)
    {
        return a.n_ == b.n_ && a.domain_ == b.domain_ && a.entries_ == b.entries_;
    }

private:
    Domain domain_;
    unsigned n_;
    std::vector<Scalar> entries_;
};

ScalarMatrix matrix_product(const ScalarMatrix &a, const ScalarMatrix &b);
// Division-free determinant (Laplace expansion memoized over column subsets).
Scalar scalar_det(const ScalarMatrix &m);
// adj(M) det(M)^-1; throws ContractError when det M is not a unit of R.
ScalarMatrix scalar_inverse(const ScalarMatrix &m);

// Square matrix of series over one domain and cap.
class SeriesMatrix {
public:
    SeriesMatrix(unsigned n, std::vector<TateSeries> entries);
    static SeriesMatrix identity(Domain domain, unsigned nvars, unsigned dim, unsigned cap);

    unsigned dim() const noexcept { return n_; }
    const TateSeries &at(unsigned i, unsigned j) const { return entries_[i * n_ + j]; }
    const std::vector<TateSeries> &entries() const noexcept { return entries_; }

    friend bool operator==(const SeriesMatrix &a, const SeriesMatrix &b)
    {
        return a.n_ == b.n_ && a.entries_ == b.entries_;
    }

private:
    unsigned n_;
    std::vector<TateSeries> entries_;
};

SeriesMatrix matrix_product(const SeriesMatrix &a, const SeriesMatrix &b);
// Entrywise composition M(G(X)).
SeriesMatrix matrix_compose(const SeriesMatrix &m, const PolyMap &g);

inline constexpr unsigned kDefaultDetBound = 8;

SeriesMatrix jacobian(const PolyMap &f);
// Division-free; R may have zero divisors so elimination is not an option.
TateSeries det(const SeriesMatrix &m, unsigned bound = kDefaultDetBound);

PolyMap map_compose(const PolyMap &f, const PolyMap &g);
bool is_identity(const PolyMap &f);

// Coefficient matrix of the degree-one part: entry (i, j) is [X_j] f_i.
ScalarMatrix linear_part(const PolyMap &f);

struct NormalizedMap {
    // L^-1 (F - F(0)): zero constant term, identity linear part.
    PolyMap map;
    std::vector<Scalar> shift;  // F(0)
    ScalarMatrix linear;         // L
    ScalarMatrix linear_inverse; // L^-1 over R
};

// Throws ContractError("linear part not invertible over R") when det L is not
// a unit of R.
NormalizedMap normalize(const PolyMap &f);
// F = F(0) + L F'. Reconstructs the original map exactly.
PolyMap denormalize(const NormalizedMap &n);
// Inverse of F from an inverse G' of F': G = G' o (L^-1 (Y - F(0))).
// A nonzero shift is only supported when G' is a polynomial.
PolyMap inverse_from_normalized(const NormalizedMap &n, const PolyMap &normalized_inverse);

// Affine map Y -> A Y + b, as series.
PolyMap affine_map(const ScalarMatrix &a, std::span<const Scalar> b, unsigned cap);

// Coefficientwise image of F in another domain (e.g. R -> R/I, or a lift of
// residues back to R through their canonical representatives).
PolyMap change_domain(const PolyMap &f, const Domain &target);
TateSeries change_domain(const TateSeries &f, const Domain &target);

} // namespace tate

#endif
