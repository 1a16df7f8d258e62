#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "shaforge/arith.hpp"

using namespace shaforge;
using arith::KummerPair;
using arith::SquareClass;

TEST_CASE("valuation strips the exact power") {
    mpz_class unit;
    CHECK(arith::valuation(mpz_class(24), 2, &unit) == 3);
    CHECK(unit == 3);
    CHECK(arith::valuation(mpz_class(-7), 7, &unit) == 1);
    CHECK(unit == -1);
    CHECK(arith::valuation(mpq_class(3, 4), 2) == -2);
    CHECK(arith::valuation(mpq_class(9, 5), 3) == 2);
    CHECK(arith::valuation(mpq_class(9, 5), 7) == 0);
    CHECK_THROWS_AS(arith::valuation(mpz_class(0), 2), ZeroInput);
}

TEST_CASE("legendre bit is additive residue data") {
    CHECK(arith::legendre_bit(2, 7) == 0);   // 2 = 3^2 mod 7
    CHECK(arith::legendre_bit(3, 7) == 1);
    CHECK(arith::legendre_bit(-1, 3) == 1);  // -1 = 2 mod 3
    CHECK(arith::legendre_bit(-1, 5) == 0);
    CHECK_THROWS_AS(arith::legendre_bit(6, 3), ZeroInput);
}

TEST_CASE("is_prime on small and mid-size inputs") {
    CHECK(arith::is_prime(2));
    CHECK(arith::is_prime(17));
    CHECK(arith::is_prime(mpz_class("1000000007")));
    CHECK_FALSE(arith::is_prime(1));
    CHECK_FALSE(arith::is_prime(91));  // 7 * 13
}

TEST_CASE("factor is exact and sorted") {
    arith::Factorization f = arith::factor(mpz_class(12));
    CHECK(f.sign == 1);
    REQUIRE(f.primes.size() == 2);
    CHECK(f.primes[0] == std::pair<mpz_class, unsigned>{2, 2});
    CHECK(f.primes[1] == std::pair<mpz_class, unsigned>{3, 1});

    f = arith::factor(mpz_class(-45));
    CHECK(f.sign == -1);
    REQUIRE(f.primes.size() == 2);
    CHECK(f.primes[0] == std::pair<mpz_class, unsigned>{3, 2});
    CHECK(f.primes[1] == std::pair<mpz_class, unsigned>{5, 1});

    CHECK(arith::factor(mpz_class(1)).primes.empty());
    CHECK(arith::factor(mpz_class(-1)).sign == -1);
    CHECK_THROWS_AS(arith::factor(mpz_class(0)), ZeroInput);
}

TEST_CASE("factor names the bound when the budget dies") {
    // two 10-digit primes: rho needs ~sqrt(1e9) >> 8 iterations
    mpz_class n = mpz_class("1000000007") * mpz_class("1000000009");
    arith::FactorBounds tight{1000, 8};
    CHECK_THROWS_AS(arith::factor(n, tight), FactorizationLimitExceeded);
    try {
        arith::factor(n, tight);
    } catch (const FactorizationLimitExceeded& e) {
        CHECK(std::string(e.what()).find("rho") != std::string::npos);
    }
}

TEST_CASE("square classes reduce to signed squarefree parts") {
    CHECK(SquareClass::of(mpq_class(-45, 8)).value() == -10);
    CHECK(SquareClass::of(mpz_class(360)).value() == 10);
    CHECK(SquareClass::of(1).is_one());
    CHECK(SquareClass::of(4).is_one());
    CHECK(SquareClass::of(-1).sign() == -1);
    CHECK(SquareClass::of(-1).primes().empty());
    CHECK(SquareClass::of(mpq_class(2, 3)).value() == 6);
    CHECK(SquareClass::of(-10).str() == "-10");
}

TEST_CASE("class multiplication is symmetric difference, no factoring") {
    CHECK(SquareClass::of(6) * SquareClass::of(10) == SquareClass::of(15));
    CHECK((SquareClass::of(-2) * SquareClass::of(-3)) == SquareClass::of(6));
    CHECK((SquareClass::of(30) * SquareClass::of(30)).is_one());
    for (long n : {-7L, 5L, -30L, 11L}) {
        SquareClass c = SquareClass::of(n);
        CHECK((c * c).is_one());
        CHECK((c * SquareClass::of(1)) == c);
    }
}

TEST_CASE("from_parts rejects malformed data") {
    CHECK(SquareClass::from_parts(1, {2, 3}) == SquareClass::of(6));
    CHECK_THROWS_AS(SquareClass::from_parts(1, {3, 2}), Error);   // unsorted
    CHECK_THROWS_AS(SquareClass::from_parts(1, {2, 2}), Error);   // repeated
    CHECK_THROWS_AS(SquareClass::from_parts(1, {4}), Error);      // composite
    CHECK_THROWS_AS(SquareClass::from_parts(0, {}), Error);       // bad sign
}

TEST_CASE("pairs multiply coordinatewise") {
    KummerPair a{SquareClass::of(-1), SquareClass::of(-1)};
    KummerPair b{SquareClass::of(1), SquareClass::of(2)};
    CHECK((a * b) == KummerPair{SquareClass::of(-1), SquareClass::of(-2)});
    CHECK(a.str() == "(-1,-1)");
    CHECK(KummerPair{}.is_one());
}

TEST_CASE("span closes the generated subgroup") {
    KummerPair a{SquareClass::of(-1), SquareClass::of(1)};
    KummerPair b{SquareClass::of(1), SquareClass::of(2)};
    auto sp = arith::span({a, b});
    CHECK(sp.size() == 4);
    CHECK(std::find(sp.begin(), sp.end(), KummerPair{}) != sp.end());
    CHECK(std::find(sp.begin(), sp.end(), a * b) != sp.end());
    CHECK(std::is_sorted(sp.begin(), sp.end()));

    CHECK(arith::span({}).size() == 1);
    CHECK(arith::span({a, a}).size() == 2);  // duplicate generator collapses

    // 3 independent generators give 8 elements
    KummerPair c{SquareClass::of(3), SquareClass::of(5)};
    CHECK(arith::span({a, b, c}).size() == 8);
}
