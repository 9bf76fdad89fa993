#include "tate/adic.hpp"

#include <algorithm>

namespace tate {

struct Domain::Impl {
    DomainKind kind;
    mpz_class m;
    unsigned precision = 0;
    mpz_class m_power;
    mpz_class radical;
    std::vector<mpz_class> primes;
};

namespace {

mpz_class pollard_rho(const mpz_class &n)
{
    if (mpz_even_p(n.get_mpz_t())) {
        return 2;
    }
    for (unsigned long c = 1;; ++c) {
        mpz_class x = 2, y = 2, d = 1;
        auto step = [&](mpz_class &v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        while (d == 1) {
            step(x);
            step(y);
            step(y);
            mpz_class diff = abs(x - y);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != n) {
            return d;
        }
    }
}

void collect_primes(const mpz_class &n, std::vector<mpz_class> &out)
{
    if (n == 1) {
        return;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
        out.push_back(n);
        return;
    }
    mpz_class d = pollard_rho(n);
    collect_primes(d, out);
    collect_primes(n / d, out);
}

} // namespace

std::vector<mpz_class> distinct_prime_factors(const mpz_class &n)
{
    if (n <= 0) {
        throw ContractError("prime factorization needs a positive integer");
    }
    std::vector<mpz_class> out;
    mpz_class rest = n;
    // Trial division handles desk-scale moduli; rho only finishes large cofactors.
    for (unsigned long p = 2; p < 1000000 && rest > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            }
        }
        if (mpz_cmp_ui(rest.get_mpz_t(), p * p) < 0) {
            break;
        }
    }
    if (rest > 1) {
        collect_primes(rest, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Domain Domain::truncated_adic(const mpz_class &m, unsigned precision)
{
    if (m < 2) {
        throw ContractError("truncated_adic domain needs modulus m >= 2");
    }
    if (precision < 1) {
        throw ContractError("truncated_adic domain needs precision N >= 1");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = DomainKind::truncated_adic;
    impl->m = m;
    impl->precision = precision;
    mpz_pow_ui(impl->m_power.get_mpz_t(), m.get_mpz_t(), precision);
    impl->primes = distinct_prime_factors(m);
    impl->radical = 1;
    for (const auto &p : impl->primes) {
        impl->radical *= p;
    }
    return Domain(std::move(impl));
}

Domain Domain::exact_integer_adic(const mpz_class &m)
{
    if (m < 2) {
        throw ContractError("exact_integer_adic domain needs modulus m >= 2");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = DomainKind::exact_integer_adic;
    impl->m = m;
    impl->m_power = 0;
    impl->primes = distinct_prime_factors(m);
    impl->radical = 1;
    for (const auto &p : impl->primes) {
        impl->radical *= p;
    }
    return Domain(std::move(impl));
}

Domain Domain::rational_discrete()
{
    static const std::shared_ptr<const Impl> shared = [] {
        auto impl = std::make_shared<Impl>();
        impl->kind = DomainKind::rational_discrete;
        return impl;
    }();
    return Domain(shared);
}

DomainKind Domain::kind() const noexcept { return impl_->kind; }
const mpz_class &Domain::modulus() const noexcept { return impl_->m; }
unsigned Domain::precision() const noexcept { return impl_->precision; }
const mpz_class &Domain::modulus_power() const noexcept { return impl_->m_power; }
const mpz_class &Domain::radical() const noexcept { return impl_->radical; }
const std::vector<mpz_class> &Domain::prime_factors() const noexcept { return impl_->primes; }

Domain Domain::residue_ring() const
{
    if (!is_adic()) {
        return *this;
    }
    return truncated_adic(impl_->m, 1);
}

std::string Domain::to_string() const
{
    switch (impl_->kind) {
    case DomainKind::truncated_adic:
        return "Z/" + impl_->m.get_str() + "^" + std::to_string(impl_->precision);
    case DomainKind::exact_integer_adic:
        return "Z exact (" + impl_->m.get_str() + ")-adic";
    case DomainKind::rational_discrete:
        return "Q";
    }
    return "?";
}

bool operator==(const Domain &a, const Domain &b)
{
    if (a.impl_ == b.impl_) {
        return true;
    }
    return a.impl_->kind == b.impl_->kind && a.impl_->m == b.impl_->m && a.impl_->precision == b.impl_->precision;
}

Scalar Domain::normalize(const Scalar &raw) const
{
    // Values built from a numerator/denominator pair may be unreduced.
    Scalar q(raw);
    if (q.get_den() != 1) {
        q.canonicalize();
    }
    switch (impl_->kind) {
    case DomainKind::rational_discrete:
        return q;
    case DomainKind::exact_integer_adic:
        if (q.get_den() != 1) {
            throw ContractError("value " + q.get_str() + " is not an integer");
        }
        return q;
    case DomainKind::truncated_adic: {
        const mpz_class &mod = impl_->m_power;
        mpz_class r;
        if (q.get_den() == 1) {
            mpz_fdiv_r(r.get_mpz_t(), q.get_num_mpz_t(), mod.get_mpz_t());
        } else {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), mod.get_mpz_t()) == 0) {
                throw ContractError("denominator of " + q.get_str() + " is not invertible in " + to_string());
            }
            r = q.get_num() * inv;
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
        }
        return Scalar(r);
    }
    }
    return q;
}

bool Domain::is_canonical(const Scalar &q) const
{
    switch (impl_->kind) {
    case DomainKind::rational_discrete:
        return true;
    case DomainKind::exact_integer_adic:
        return q.get_den() == 1;
    case DomainKind::truncated_adic:
        return q.get_den() == 1 && sgn(q) >= 0 && q.get_num() < impl_->m_power;
    }
    return false;
}

bool Domain::is_unit(const Scalar &a) const
{
    switch (impl_->kind) {
    case DomainKind::rational_discrete:
        return sgn(a) != 0;
    case DomainKind::exact_integer_adic:
        return a == 1 || a == -1;
    case DomainKind::truncated_adic: {
        mpz_class g;
        mpz_class v = a.get_num();
        mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), impl_->m.get_mpz_t());
        return g == 1;
    }
    }
    return false;
}

Scalar Domain::invert(const Scalar &a) const
{
    if (!is_unit(a)) {
        throw NotAUnit(a.get_str() + " in " + to_string());
    }
    switch (impl_->kind) {
    case DomainKind::rational_discrete:
        return Scalar(1) / a;
    case DomainKind::exact_integer_adic:
        return a;
    case DomainKind::truncated_adic: {
        mpz_class inv;
        mpz_class v = a.get_num();
        mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), impl_->m_power.get_mpz_t());
        return Scalar(inv);
    }
    }
    return a;
}

Valuation Domain::valuation(const Scalar &a) const
{
    if (sgn(a) == 0) {
        return Valuation::top();
    }
    if (!is_adic()) {
        return Valuation(0);
    }
    mpz_class v = abs(a.get_num());
    const mpz_class &m = impl_->m;
    int k = 0;
    while (mpz_divisible_p(v.get_mpz_t(), m.get_mpz_t()) != 0) {
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
        ++k;
    }
    return Valuation(k);
}

bool Domain::in_radical(const Scalar &a) const
{
    if (sgn(a) == 0) {
        return true;
    }
    if (!is_adic()) {
        return false;
    }
    return mpz_divisible_p(a.get_num_mpz_t(), impl_->radical.get_mpz_t()) != 0;
}

AdicElement ring_arith(const AdicElement &a, const AdicElement &b, RingOp op)
{
    if (!(a.domain() == b.domain())) {
        throw DomainMismatch(a.domain().to_string() + " vs " + b.domain().to_string());
    }
    switch (op) {
    case RingOp::add:
        return AdicElement(a.domain(), a.value() + b.value());
    case RingOp::sub:
        return AdicElement(a.domain(), a.value() - b.value());
    case RingOp::mul:
        return AdicElement(a.domain(), a.value() * b.value());
    }
    return a;
}

bool is_unit(const AdicElement &a) { return a.domain().is_unit(a.value()); }

AdicElement invert_unit(const AdicElement &a) { return AdicElement(a.domain(), a.domain().invert(a.value())); }

Valuation ideal_valuation(const AdicElement &a) { return a.domain().valuation(a.value()); }

bool in_radical(const AdicElement &a) { return a.domain().in_radical(a.value()); }

} // namespace tate
