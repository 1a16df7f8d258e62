#pragma once

// Exact arithmetic in Q*/Q*^2. A square class is canonically the sign
// together with the sorted set of primes dividing the squarefree part;
// multiplication is sign product plus symmetric difference of prime sets.
// Factorization is trial division with a deterministic Brent-rho fallback
// under a hard budget, so every entry of a SquareClass is a certified prime.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shaforge/errors.hpp"

namespace shaforge::arith {

struct FactorBounds {
    unsigned long trial_limit = 100000;   // trial division by p <= trial_limit
    unsigned long rho_iters = 1u << 22;   // total Brent iterations before giving up
};

struct Factorization {
    int sign = 1;                                        // +1 or -1
    std::vector<std::pair<mpz_class, unsigned>> primes;  // sorted, exponents >= 1
};

bool is_prime(const mpz_class& n);

// v_p(n) for n != 0; on request also yields n / p^v.
unsigned long valuation(const mpz_class& n, const mpz_class& p, mpz_class* unit = nullptr);
long valuation(const mpq_class& q, const mpz_class& p);

// Legendre symbol of u mod odd prime p, additively: 0 for a residue, 1 for a
// nonresidue. Requires p coprime to u.
int legendre_bit(const mpz_class& u, const mpz_class& p);

// Throws ZeroInput on n = 0, FactorizationLimitExceeded if a composite
// cofactor survives the budget (message names the bound to raise).
Factorization factor(const mpz_class& n, const FactorBounds& bounds = {});

class SquareClass {
  public:
    SquareClass() : sign_(1) {}  // the trivial class

    static SquareClass of(const mpq_class& q, const FactorBounds& bounds = {});
    static SquareClass of(const mpz_class& n, const FactorBounds& bounds = {});
    static SquareClass of(long n, const FactorBounds& bounds = {});
    // Trusted constructor for already-sorted distinct primes.
    static SquareClass from_parts(int sign, std::vector<mpz_class> primes);

    int sign() const { return sign_; }
    const std::vector<mpz_class>& primes() const { return primes_; }
    bool is_one() const { return sign_ == 1 && primes_.empty(); }
    mpz_class value() const;  // canonical squarefree representative
    std::string str() const { return value().get_str(); }

    SquareClass operator*(const SquareClass& o) const;  // sq_mul
    bool operator==(const SquareClass& o) const = default;
    std::strong_ordering operator<=>(const SquareClass& o) const;

  private:
    int sign_;
    std::vector<mpz_class> primes_;  // sorted, distinct
};

struct KummerPair {
    SquareClass first, second;

    bool is_one() const { return first.is_one() && second.is_one(); }
    std::string str() const { return "(" + first.str() + "," + second.str() + ")"; }
    KummerPair operator*(const KummerPair& o) const {
        return {first * o.first, second * o.second};
    }
    bool operator==(const KummerPair& o) const = default;
    std::strong_ordering operator<=>(const KummerPair& o) const;
};

// Subgroup of (Q*/Q*^2)^2 generated by `gens`: closes under multiplication,
// returns sorted distinct elements (the identity always included).
std::vector<KummerPair> span(const std::vector<KummerPair>& gens);

}  // namespace shaforge::arith
