#pragma once

#include <string>
#include <vector>

#include "shaforge/arith.hpp"
#include "shaforge/errors.hpp"
#include "shaforge/localfield.hpp"

namespace shaforge::curve {

using arith::KummerPair;
using arith::SquareClass;
using localfield::Place;

struct RationalPoint {
    bool at_infinity = true;
    mpq_class x, y;

    static RationalPoint infinity() { return RationalPoint{}; }
    static RationalPoint affine(mpq_class px, mpq_class py) {
        return RationalPoint{false, std::move(px), std::move(py)};
    }
    bool operator==(const RationalPoint& o) const {
        if (at_infinity || o.at_infinity) return at_infinity == o.at_infinity;
        return x == o.x && y == o.y;
    }
};

// y^2 = (x - e1)(x - e2)(x - e3) with distinct integer roots
class FullTwoTorsionCurve {
  public:
    FullTwoTorsionCurve(mpz_class e1, mpz_class e2, mpz_class e3);

    const mpz_class& e1() const { return e1_; }
    const mpz_class& e2() const { return e2_; }
    const mpz_class& e3() const { return e3_; }

    mpq_class rhs(const mpq_class& x) const;
    bool contains(const RationalPoint& p) const;

    // {inf, 2} plus the odd primes dividing the root differences
    std::vector<Place> discriminant_support(const arith::FactorBounds& fb = {}) const;

    RationalPoint negate(const RationalPoint& p) const;
    RationalPoint add(const RationalPoint& p, const RationalPoint& q) const;
    RationalPoint mul_small(const RationalPoint& p, unsigned n) const;

    std::vector<RationalPoint> two_torsion() const;

    std::string str() const;
    bool operator==(const FullTwoTorsionCurve&) const = default;

  private:
    mpz_class e1_, e2_, e3_;
};

struct MWBasis {
    std::vector<RationalPoint> free_gens;
    long declared_rank = 0;
};

struct DescentImage {
    std::vector<KummerPair> generators;
    std::vector<std::string> provenance;  // parallel to generators
    std::vector<KummerPair> elements;     // full span, sorted

    bool contains(const KummerPair& p) const;
};

// local descent image: canonical local square-class reps at v
struct LocalImage {
    Place v;
    std::vector<KummerPair> elements;

    bool contains_localized(const KummerPair& p) const;  // canonicalizes p at v first
};

// (x - e1, x - e2) mod squares, with the vanishing factor at a 2-torsion
// abscissa replaced by the product of the other two differences (the unique
// convention making the map a homomorphism)
KummerPair descent_map(const FullTwoTorsionCurve& c, const RationalPoint& p);

// subgroup of (Q*/Q*^2)^2 generated by the torsion and free-generator images;
// order must be exactly 2^(2+rank), else DegenerateImage
DescentImage global_image(const FullTwoTorsionCurve& c, const MWBasis& basis);

// saturation targets: 4 at odd finite v, 8 at v = 2, 2 at infinity
LocalImage local_image(const FullTwoTorsionCurve& c, const Place& v, unsigned long seed = 1,
                       unsigned long sample_budget = 40000);

// all affine points whose x-numerator and x-denominator are bounded
std::vector<RationalPoint> search_small_points(const FullTwoTorsionCurve& c,
                                               unsigned long height_bound);

struct Fixture {
    std::string id;
    FullTwoTorsionCurve curve;
    MWBasis basis;
};

// one record per line: "<id> ; e1 e2 e3 ; rank r [; gen x y]*"
// x, y exact rationals ("num" or "num/den"); '#' starts a comment
std::vector<Fixture> parse_fixtures(const std::string& text);
Fixture load_fixture(const std::string& path, const std::string& curve_id);

}  // namespace shaforge::curve
