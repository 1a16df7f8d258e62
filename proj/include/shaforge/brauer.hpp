#pragma once

#include <compare>
#include <vector>

#include "shaforge/arith.hpp"
#include "shaforge/errors.hpp"
#include "shaforge/localfield.hpp"

namespace shaforge::brauer {

using arith::SquareClass;
using localfield::Place;

// A 2-torsion Brauer class of Q, stored as the set of places where the local
// invariant is 1/2. Reciprocity forces even cardinality; construction with an
// odd set throws, so every live value satisfies the invariant.
class BrauerClass2 {
  public:
    BrauerClass2() = default;  // zero class

    static BrauerClass2 from_places(std::vector<Place> support);

    const std::vector<Place>& places() const { return places_; }
    bool is_zero() const { return places_.empty(); }
    bool contains(const Place& v) const;

    BrauerClass2 operator+(const BrauerClass2& o) const;  // symmetric difference
    bool operator==(const BrauerClass2& o) const = default;
    std::strong_ordering operator<=>(const BrauerClass2& o) const = default;

  private:
    std::vector<Place> places_;  // sorted: finite ascending, infinity last
};

// quaternion algebra class (a, b): support scanned over infinity and the
// primes dividing 2ab; each local invariant is a Hilbert symbol
BrauerClass2 quaternion(const SquareClass& a, const SquareClass& b);

inline BrauerClass2 br_add(const BrauerClass2& x, const BrauerClass2& y) { return x + y; }
inline bool br_is_zero(const BrauerClass2& x) { return x.is_zero(); }

}  // namespace shaforge::brauer
