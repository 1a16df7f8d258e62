#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "hilbert_oracle.hpp"
#include "shaforge/localfield.hpp"

using namespace shaforge;
using namespace shaforge::localfield;
using arith::SquareClass;

TEST_CASE("places parse, order, and print") {
    CHECK(parse_place("inf").infinite);
    CHECK(parse_place("17") == Place::finite(17));
    CHECK_THROWS_AS(parse_place("x"), ParseError);
    CHECK_THROWS_AS(parse_place("4"), ParseError);
    CHECK_THROWS_AS(parse_place("-3"), ParseError);

    CHECK(Place::finite(3) < Place::finite(17));
    CHECK(Place::finite(17) < Place::infinity());
    CHECK(Place::infinity().str() == "inf");
    CHECK(Place::finite(2).str() == "2");
    CHECK(Place::finite(3).is_odd());
    CHECK_FALSE(Place::finite(2).is_odd());
}

TEST_CASE("least positive nonresidue") {
    CHECK(least_positive_nonresidue(3) == 2);
    CHECK(least_positive_nonresidue(5) == 2);
    CHECK(least_positive_nonresidue(7) == 3);
    CHECK(least_positive_nonresidue(17) == 3);
    CHECK(least_positive_nonresidue(73) == 5);
}

TEST_CASE("square class transversals") {
    auto vals = [](const std::vector<SquareClass>& t) {
        std::vector<long> out;
        for (const auto& c : t) out.push_back(c.value().get_si());
        return out;
    };
    CHECK(vals(local_square_transversal(Place::infinity())) == std::vector<long>{1, -1});
    CHECK(vals(local_square_transversal(Place::finite(3))) == std::vector<long>{1, 2, 3, 6});
    CHECK(vals(local_square_transversal(Place::finite(7))) == std::vector<long>{1, 3, 7, 21});
    CHECK(vals(local_square_transversal(Place::finite(2))) ==
          std::vector<long>{1, -1, 2, -2, 5, -5, 10, -10});
}

TEST_CASE("local squares") {
    CHECK(is_local_square(mpq_class(17), Place::finite(2)));   // 1 mod 8
    CHECK_FALSE(is_local_square(mpq_class(5), Place::finite(2)));
    CHECK_FALSE(is_local_square(mpq_class(7), Place::finite(2)));
    CHECK(is_local_square(mpq_class(2), Place::finite(7)));    // 2 = 3^2 mod 7
    CHECK_FALSE(is_local_square(mpq_class(-1), Place::infinity()));
    CHECK(is_local_square(mpq_class(4, 9), Place::finite(5)));
    CHECK_FALSE(is_local_square(mpq_class(5), Place::finite(5)));
    CHECK_FALSE(is_local_square(mpq_class(50), Place::finite(2)));  // odd 2-exponent
    CHECK(is_local_square(mpq_class(50), Place::finite(7)));        // 50 = 49 + 1
}

TEST_CASE("local class canonicalization") {
    CHECK(local_class_of(mpq_class(-45, 8), Place::finite(2)).value() == -10);
    CHECK(local_class_of(mpq_class(7), Place::finite(2)).value() == -1);
    CHECK(local_class_of(mpq_class(17), Place::finite(2)).value() == 1);
    CHECK(local_class_of(mpq_class(3), Place::finite(2)).value() == -5);
    CHECK(local_class_of(mpq_class(10), Place::finite(5)).value() == 10);
    CHECK(local_class_of(mpq_class(50), Place::finite(5)).value() == 2);
    CHECK(local_class_of(mpq_class(1, 3), Place::finite(3)).value() == 3);
    CHECK(local_class_of(mpq_class(-9), Place::infinity()).value() == -1);
    CHECK_THROWS_AS(local_class_of(mpq_class(0), Place::finite(3)), ZeroInput);
}

TEST_CASE("hilbert closed forms on pinned values") {
    CHECK(hilbert_bit(mpq_class(-1), mpq_class(-1), Place::infinity()) == 1);
    CHECK(hilbert_bit(mpq_class(-1), mpq_class(-1), Place::finite(2)) == 1);
    CHECK(hilbert_bit(mpq_class(-1), mpq_class(-1), Place::finite(3)) == 0);
    CHECK(hilbert_bit(mpq_class(2), mpq_class(7), Place::finite(7)) == 0);
    CHECK(hilbert_bit(mpq_class(3), mpq_class(7), Place::finite(7)) == 1);
    CHECK(hilbert_bit(mpq_class(2), mpq_class(5), Place::finite(2)) == 1);
    CHECK(hilbert_bit(mpq_class(-1), mpq_class(2), Place::finite(2)) == 0);
}

TEST_CASE("hilbert closed forms match the brute-force oracle on a spot grid") {
    std::vector<long> sf;
    for (long n = 1; n <= 10; ++n)
        if (n % 4 != 0 && n % 9 != 0) {
            sf.push_back(n);
            sf.push_back(-n);
        }
    for (long pl : {0L, 2L, 3L, 5L})
        for (long a : sf)
            for (long b : sf) {
                Place v = pl == 0 ? Place::infinity() : Place::finite(pl);
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(pl);
                CHECK(hilbert_bit(mpq_class(a), mpq_class(b), v) ==
                      testsupport::hilbert_brute(a, b, pl));
            }
}

TEST_CASE("base field arithmetic and valuations") {
    LocalField F3((mpz_class(3)));
    CHECK(F3.kind() == LocalField::Kind::Base);
    CHECK(F3.e2() == 0);
    CHECK(F3.val(F3.from_int(18)) == 2);
    CHECK(F3.val(F3.from_int(0)) == LocalField::kInfVal);
    CHECK(F3.is_square(F3.from_int(4)));
    CHECK(F3.is_square(F3.from_int(7)));   // 7 = 1 mod 3
    CHECK_FALSE(F3.is_square(F3.from_int(3)));
    CHECK_FALSE(F3.is_square(F3.from_int(2)));
    CHECK(F3.is_square(F3.from_int(0)));

    LocalField F2((mpz_class(2)));
    CHECK(F2.e2() == 1);
    CHECK(F2.is_square(F2.from_int(17)));
    CHECK_FALSE(F2.is_square(F2.from_int(7)));
}

TEST_CASE("inert extensions square every base unit at odd p") {
    LocalField F(mpz_class(3), mpz_class(2));  // beta^2 = 2
    CHECK(F.kind() == LocalField::Kind::InertOdd);
    CHECK(F.val(F.from_int(3)) == 1);  // 3 stays the uniformizer
    CHECK(F.is_square(F.from_int(2)));
    CHECK(F.is_square(F.from_int(-1)));
    CHECK(F.is_square(F.from_int(5)));
    CHECK_FALSE(F.is_square(F.from_int(3)));
    CHECK_FALSE(F.is_square(F.from_int(6)));   // odd valuation survives the extension
    CHECK_FALSE(F.is_square(F.from_int(12)));  // 12 = 4 * 3, still odd valuation
    CHECK(F.is_square(F.from_int(18)));        // 18 = 2 * 9: even valuation and a unit
}

TEST_CASE("ramified odd extension keeps nonresidue units nonsquare") {
    LocalField F(mpz_class(3), mpz_class(6));  // beta = sqrt(6), ramified
    CHECK(F.kind() == LocalField::Kind::RamSqrt);
    CHECK(F.ramified());
    CHECK(F.val(F.from_int(3)) == 2);
    CHECK(F.val(F.uniformizer()) == 1);
    CHECK(F.val(F.pow_uniformizer(5)) == 5);
    CHECK(F.is_square(F.from_int(6)));        // beta^2
    CHECK_FALSE(F.is_square(F.from_int(3)));  // 3 = 6/2 and 2 is a nonresidue unit
    CHECK_FALSE(F.is_square(F.from_int(2)));
    CHECK_FALSE(F.is_square(F.from_int(-6)));
    CHECK_FALSE(F.is_square(F.from_int(18)));  // 2 * 9 = beta^4 / 2, and 2 is a nonsquare
    CHECK(F.is_square(F.from_int(36)));
}

TEST_CASE("dyadic ramified extension: 2 stays nonsquare over Q_2(i)") {
    LocalField F(mpz_class(2), mpz_class(-1));
    CHECK(F.kind() == LocalField::Kind::RamUnit2);
    CHECK(F.e2() == 2);
    CHECK(F.val(F.from_int(2)) == 2);
    CHECK(F.val(F.uniformizer()) == 1);  // 1 + beta
    CHECK_FALSE(F.is_square(EltData{0, 1}));  // sqrt(i) would need sqrt(2) as well
    CHECK(F.is_square(F.from_int(-1)));       // beta^2
    CHECK_FALSE(F.is_square(F.from_int(2)));
    CHECK_FALSE(F.is_square(F.from_int(-2)));
}

TEST_CASE("dyadic inert extension") {
    LocalField F(mpz_class(2), mpz_class(5));  // beta = (1+sqrt 5)/2
    CHECK(F.kind() == LocalField::Kind::Inert2);
    CHECK(F.e2() == 1);
    CHECK(F.val(F.from_int(2)) == 1);
    CHECK(F.is_square(F.from_int(5)));  // (2 beta - 1)^2
    CHECK_FALSE(F.is_square(F.from_int(2)));
}

TEST_CASE("squares of arbitrary elements round-trip through sqrt_to_precision") {
    std::vector<LocalField> fields;
    fields.emplace_back(mpz_class(3));
    fields.emplace_back(mpz_class(3), mpz_class(2));
    fields.emplace_back(mpz_class(3), mpz_class(6));
    fields.emplace_back(mpz_class(2));
    fields.emplace_back(mpz_class(2), mpz_class(-1));
    fields.emplace_back(mpz_class(2), mpz_class(5));
    for (const LocalField& F : fields) {
        for (long a = 1; a <= 3; ++a)
            for (long b = 0; b <= 2; ++b) {
                EltData y{a, b};
                if (F.kind() == LocalField::Kind::Base) y.b = 0;
                EltData x = F.mul(y, y);
                CAPTURE(a);
                CAPTURE(b);
                REQUIRE(F.is_square(x));
                // the root is relative to the coordinate-stripped unit part;
                // rescaling to x itself is the certificate layer's job
                EltData u = x;
                long s = 0;
                while (u.a % F.p() == 0 && (u.b == 0 || u.b % F.p() == 0) &&
                       !(u.a == 0 && u.b == 0)) {
                    u.a /= F.p();
                    if (u.b != 0) u.b /= F.p();
                    ++s;
                }
                long prec = 2 * F.e2() + 6;
                if (F.ramified() && s % 2 != 0) {
                    CHECK_THROWS_AS(F.sqrt_to_precision(x, prec), Error);
                } else {
                    EltData r = F.sqrt_to_precision(x, prec);
                    CHECK(F.val(F.sub(F.mul(r, r), u)) >= prec);
                }
            }
    }
}

TEST_CASE("residue walks match materialized reps and stop early") {
    LocalField F5((mpz_class(5)));
    LocalField F5i(mpz_class(5), mpz_class(2));  // 2 is a nonresidue mod 5
    LocalField F2i(mpz_class(2), mpz_class(5));
    auto count = [](const LocalField& F) {
        long n = 0;
        F.for_each_residue([&](const EltData&) {
            ++n;
            return false;
        });
        return n;
    };
    CHECK(count(F5) == 5);
    CHECK(count(F5i) == 25);
    CHECK(count(F2i) == 4);
    CHECK(F5.residue_reps().size() == 5);
    CHECK(F5i.residue_reps().size() == 25);

    long seen = 0;
    bool stopped = F5.for_each_residue([&](const EltData&) { return ++seen == 2; });
    CHECK(stopped);
    CHECK(seen == 2);
}

TEST_CASE("descent models from pairs") {
    using arith::KummerPair;
    KummerPair p{SquareClass::of(-1), SquareClass::of(-1)};
    DescentModel m = DescentModel::make(p, 0, 1, -1);
    CHECK(m.A == -1);
    CHECK(m.B == -1);
    CHECK(m.e1 == 0);
    CHECK(m.e2 == 1);
    CHECK(m.e3 == -1);
}

TEST_CASE("torsion-image models are soluble everywhere, with checkable witnesses") {
    // (-1,-1) is the descent image of (0,0) on y^2 = x(x-1)(x+1)
    using arith::KummerPair;
    DescentModel m = DescentModel::make(
        KummerPair{SquareClass::of(-1), SquareClass::of(-1)}, 0, 1, -1);
    for (const Place& v :
         {Place::infinity(), Place::finite(2), Place::finite(3), Place::finite(17)}) {
        LocalWitness w;
        CAPTURE(v.str());
        REQUIRE(local_points_exist(m, v, std::nullopt, &w));
        CHECK(verify_local_witness(m, w));
    }
}

TEST_CASE("an insoluble model is rejected and splits over the right extensions") {
    // (17, 17): at 17 both coordinates have odd valuation and 17-units split
    using arith::KummerPair;
    DescentModel m = DescentModel::make(
        KummerPair{SquareClass::of(17), SquareClass::of(17)}, 0, 1, -1);
    Place v = Place::finite(17);
    CHECK_FALSE(local_points_exist(m, v));

    // the unramified extension cannot absorb odd valuations; a ramified one can
    mpz_class u = least_positive_nonresidue(17);
    CHECK_FALSE(local_points_exist(m, v, std::optional<mpz_class>(u)));
    LocalWitness w;
    bool ram = local_points_exist(m, v, std::optional<mpz_class>(17), &w);
    if (!ram) REQUIRE(local_points_exist(m, v, std::optional<mpz_class>(mpz_class(17 * u)), &w));
    CHECK(verify_local_witness(m, w));
}

TEST_CASE("witness tampering is detected") {
    using arith::KummerPair;
    DescentModel m = DescentModel::make(
        KummerPair{SquareClass::of(-1), SquareClass::of(-1)}, 0, 1, -1);
    LocalWitness w;
    REQUIRE(local_points_exist(m, Place::finite(3), std::nullopt, &w));
    REQUIRE(verify_local_witness(m, w));
    REQUIRE(w.kind == LocalWitness::Kind::Branch);
    REQUIRE(w.chart == 0);
    REQUIRE(w.depth == 1);

    auto rejected = [&](const LocalWitness& bad) {
        try {
            return !verify_local_witness(m, bad);
        } catch (const Error&) {
            return true;
        }
    };

    // moving the proof to the dyadic place fails: a depth-1 disc clears the
    // odd-place slack but not vh + 2*e2 + 1
    LocalWitness moved = w;
    moved.v = Place::finite(2);
    CHECK(rejected(moved));

    // recorded cert values no longer match the quadratics at the new center
    LocalWitness off = w;
    off.center = EltData{1, 0};
    CHECK(rejected(off));

    // depth-0 disc is too coarse for the decide bound
    LocalWitness shallow = w;
    shallow.depth = 0;
    CHECK(rejected(shallow));

    LocalWitness bent = w;
    bent.cert_f.root.a += 1;
    bent.cert_g.root.a += 1;
    CHECK(rejected(bent));
}
