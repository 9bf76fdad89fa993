#ifndef TATE_ADIC_HPP
#define TATE_ADIC_HPP

#include <climits>
#include <compare>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tate/error.hpp"

namespace tate {

// Every coefficient is carried as a GMP rational. Integer domains keep the
// denominator at 1; truncated domains keep the numerator in [0, m^N).
using Scalar = mpq_class;

// Ideal valuation: the largest k with a in I^k, or TOP. In a truncated domain
// TOP means "at least the working precision"; in an exact domain it means the
// element is zero.
class Valuation {
public:
    constexpr Valuation() noexcept = default;
    constexpr explicit Valuation(int v) noexcept : v_(v < 0 ? 0 : v) {}

    static constexpr Valuation top() noexcept
    {
        Valuation t;
        t.v_ = kTop;
        return t;
    }

    constexpr bool is_top() const noexcept { return v_ == kTop; }
    // Undefined for TOP; callers check is_top() first.
    constexpr int value() const noexcept { return v_; }

    // a >= k, treating TOP as larger than every integer.
    constexpr bool at_least(int k) const noexcept { return is_top() || v_ >= k; }

    friend constexpr auto operator<=>(Valuation, Valuation) noexcept = default;

    friend constexpr Valuation operator+(Valuation a, Valuation b) noexcept
    {
        if (a.is_top() || b.is_top()) {
            return top();
        }
        return Valuation(a.v_ + b.v_);
    }

    std::string to_string() const { return is_top() ? std::string("TOP") : std::to_string(v_); }

private:
    static constexpr int kTop = INT_MAX;
    int v_ = 0;
};

enum class DomainKind { truncated_adic, exact_integer_adic, rational_discrete };

// A coefficient ring R with distinguished ideal I:
//   truncated_adic(m, N)   R = Z, I = (m), elements held in Z/m^N
//   exact_integer_adic(m)  R = Z, I = (m), exact integers
//   rational_discrete()    R = Q, I = (0)
// Copies share one immutable implementation; equality compares (kind, m, N).
class Domain {
public:
    static Domain truncated_adic(const mpz_class &m, unsigned precision);
    static Domain exact_integer_adic(const mpz_class &m);
    static Domain rational_discrete();

    DomainKind kind() const noexcept;
    bool is_adic() const noexcept { return kind() != DomainKind::rational_discrete; }
    bool is_truncated() const noexcept { return kind() == DomainKind::truncated_adic; }

    // m, or 0 for rational_discrete.
    const mpz_class &modulus() const noexcept;
    // N, or 0 when not truncated.
    unsigned precision() const noexcept;
    // m^N for truncated domains, 0 otherwise.
    const mpz_class &modulus_power() const noexcept;
    // Product of the distinct primes dividing m (0 for rational_discrete).
    const mpz_class &radical() const noexcept;
    const std::vector<mpz_class> &prime_factors() const noexcept;

    // R/I as a truncated domain Z/m (precision 1). rational_discrete maps to itself.
    Domain residue_ring() const;

    // "Z/5^3", "Z exact (2)-adic", "Q".
    std::string to_string() const;

    // Canonical representative of q. Throws ContractError when q has no image
    // in the domain (fractional value in Z, denominator not invertible mod m^N).
    Scalar normalize(const Scalar &q) const;
    bool is_canonical(const Scalar &q) const;

    Scalar add(const Scalar &a, const Scalar &b) const { return normalize(a + b); }
    Scalar sub(const Scalar &a, const Scalar &b) const { return normalize(a - b); }
    Scalar mul(const Scalar &a, const Scalar &b) const { return normalize(a * b); }
    Scalar neg(const Scalar &a) const { return normalize(-a); }

    bool is_unit(const Scalar &a) const;
    Scalar invert(const Scalar &a) const;
    Valuation valuation(const Scalar &a) const;
    bool in_radical(const Scalar &a) const;

    friend bool operator==(const Domain &a, const Domain &b);

private:
    struct Impl;
    explicit Domain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Distinct prime divisors of n > 0, ascending.
std::vector<mpz_class> distinct_prime_factors(const mpz_class &n);

class AdicElement {
public:
    AdicElement(Domain domain, const Scalar &value) : domain_(std::move(domain)), value_(domain_.normalize(value)) {}
    AdicElement(Domain domain, long value) : AdicElement(std::move(domain), Scalar(value)) {}

    const Domain &domain() const noexcept { return domain_; }
    const Scalar &value() const noexcept { return value_; }
    bool is_zero() const { return sgn(value_) == 0; }
    std::string to_string() const { return value_.get_str(); }

    friend bool operator==(const AdicElement &a, const AdicElement &b)
    {
        return a.domain_ == b.domain_ && a.value_ == b.value_;
    }

private:
    Domain domain_;
    Scalar value_;
};

enum class RingOp { add, sub, mul };

AdicElement ring_arith(const AdicElement &a, const AdicElement &b, RingOp op);
bool is_unit(const AdicElement &a);
AdicElement invert_unit(const AdicElement &a);
Valuation ideal_valuation(const AdicElement &a);
bool in_radical(const AdicElement &a);

inline AdicElement operator+(const AdicElement &a, const AdicElement &b) { return ring_arith(a, b, RingOp::add); }
inline AdicElement operator-(const AdicElement &a, const AdicElement &b) { return ring_arith(a, b, RingOp::sub); }
inline AdicElement operator*(const AdicElement &a, const AdicElement &b) { return ring_arith(a, b, RingOp::mul); }

} // namespace tate

#endif
