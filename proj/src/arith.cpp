#include "shaforge/arith.hpp"

#include <algorithm>

namespace shaforge::arith {

bool is_prime(const mpz_class& n) {
    // 2 = certainly prime, 1 = BPSW+MR probable prime (exact at this scale).
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

unsigned long valuation(const mpz_class& n, const mpz_class& p, mpz_class* unit) {
    if (n == 0) throw ZeroInput("valuation of 0");
    mpz_class u;
    unsigned long v = mpz_remove(u.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    if (unit) *unit = u;
    return v;
}

long valuation(const mpq_class& q, const mpz_class& p) {
    if (q == 0) throw ZeroInput("valuation of 0");
    return static_cast<long>(valuation(q.get_num(), p)) -
           static_cast<long>(valuation(q.get_den(), p));
}

int legendre_bit(const mpz_class& u, const mpz_class& p) {
    int s = mpz_legendre(u.get_mpz_t(), p.get_mpz_t());
    if (s == 0) throw ZeroInput("legendre_bit: argument divisible by p");
    return s == 1 ? 0 : 1;
}

namespace {

// Brent's variant of Pollard rho with deterministic parameters (increment
// c = 1, 2, ...). Returns a nontrivial factor of odd composite n, or 0 once
// the shared iteration budget runs out.
mpz_class brent_rho(const mpz_class& n, unsigned long budget) {
    unsigned long used = 0;
    const unsigned long block = 128;
    for (unsigned long c = 1; used < budget; ++c) {
        mpz_class y = 2, x, ys, q = 1, g = 1;
        unsigned long r = 1;
        while (g == 1 && used < budget) {
            x = y;
            for (unsigned long i = 0; i < r && used < budget; ++i, ++used) y = (y * y + c) % n;
            for (unsigned long k = 0; k < r && g == 1 && used < budget; k += block) {
                ys = y;
                unsigned long lim = std::min(block, r - k);
                for (unsigned long i = 0; i < lim && used < budget; ++i, ++used) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            do {
                ys = (ys * ys + c) % n;
                mpz_class d = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
        // cycle degenerated for this c, retry with the next increment
    }
    return 0;
}

void factor_into(mpz_class n, const FactorBounds& bounds,
                 std::vector<std::pair<mpz_class, unsigned>>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    mpz_class d = brent_rho(n, bounds.rho_iters);
    if (d == 0)
        throw FactorizationLimitExceeded(
            "factor: composite " + n.get_str() +
            " survived the budget (raise bound rho_iters or trial_limit)");
    factor_into(d, bounds, out);
    factor_into(n / d, bounds, out);
}

}  // namespace

Factorization factor(const mpz_class& n, const FactorBounds& bounds) {
    if (n == 0) throw ZeroInput("factor(0)");
    Factorization f;
    mpz_class m = n;
    if (m < 0) {
        f.sign = -1;
        m = -m;
    }
    std::vector<std::pair<mpz_class, unsigned>> flat;
    // trial division
    mpz_class p = 2;
    while (p * p <= m && p <= bounds.trial_limit) {
        if (m % p == 0) {
            unsigned e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            flat.emplace_back(p, e);
        }
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    if (m > 1) {
        std::vector<std::pair<mpz_class, unsigned>> rest;
        factor_into(m, bounds, rest);
        std::sort(rest.begin(), rest.end());
        for (auto& [q, e] : rest) {
            if (!flat.empty() && flat.back().first == q)
                flat.back().second += e;
            else
                flat.emplace_back(q, e);
        }
    }
    f.primes = std::move(flat);
    return f;
}

SquareClass SquareClass::of(const mpq_class& q, const FactorBounds& bounds) {
    if (q == 0) throw ZeroInput("sqclass_of(0)");
    // num*den differs from the value by den^2, same class
    return of(mpz_class(q.get_num() * q.get_den()), bounds);
}

SquareClass SquareClass::of(const mpz_class& n, const FactorBounds& bounds) {
    Factorization f = factor(n, bounds);
    SquareClass c;
    c.sign_ = f.sign;
    for (auto& [p, e] : f.primes)
        if (e % 2) c.primes_.push_back(p);
    return c;
}

SquareClass SquareClass::of(long n, const FactorBounds& bounds) {
    return of(mpz_class(n), bounds);
}

SquareClass SquareClass::from_parts(int sign, std::vector<mpz_class> primes) {
    if (sign != 1 && sign != -1) throw Error("SquareClass: sign must be +-1");
    for (size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime(primes[i])) throw Error("SquareClass: entry is not prime");
        if (i > 0 && !(primes[i - 1] < primes[i]))
            throw Error("SquareClass: primes not sorted distinct");
    }
    SquareClass c;
    c.sign_ = sign;
    c.primes_ = std::move(primes);
    return c;
}

mpz_class SquareClass::value() const {
    mpz_class v = sign_;
    for (auto& p : primes_) v *= p;
    return v;
}

SquareClass SquareClass::operator*(const SquareClass& o) const {
    SquareClass r;
    r.sign_ = sign_ * o.sign_;
    std::set_symmetric_difference(primes_.begin(), primes_.end(), o.primes_.begin(),
                                  o.primes_.end(), std::back_inserter(r.primes_));
    return r;
}

std::strong_ordering SquareClass::operator<=>(const SquareClass& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_ ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
    if (primes_ != o.primes_)
        return std::lexicographical_compare(primes_.begin(), primes_.end(),
                                            o.primes_.begin(), o.primes_.end())
                   ? std::strong_ordering::less
                   : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::strong_ordering KummerPair::operator<=>(const KummerPair& o) const {
    if (auto c = first <=> o.first; c != 0) return c;
    return second <=> o.second;
}

std::vector<KummerPair> span(const std::vector<KummerPair>& gens) {
    std::vector<KummerPair> out{KummerPair{}};
    for (const auto& g : gens) {
        if (std::find(out.begin(), out.end(), g) != out.end()) continue;
        std::vector<KummerPair> next = out;
        for (const auto& x : out) next.push_back(x * g);
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace shaforge::arith
