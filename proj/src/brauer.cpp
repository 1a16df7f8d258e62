#include "shaforge/brauer.hpp"

#include <algorithm>

namespace shaforge::brauer {

BrauerClass2 BrauerClass2::from_places(std::vector<Place> support) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.size() % 2 != 0)
        throw ParityViolation("Brauer support has odd cardinality (" +
                              std::to_string(support.size()) + " places)");
    BrauerClass2 c;
    c.places_ = std::move(support);
    return c;
}

bool BrauerClass2::contains(const Place& v) const {
    return std::binary_search(places_.begin(), places_.end(), v);
}

BrauerClass2 BrauerClass2::operator+(const BrauerClass2& o) const {
    std::vector<Place> out;
    std::set_symmetric_difference(places_.begin(), places_.end(), o.places_.begin(),
                                  o.places_.end(), std::back_inserter(out));
    BrauerClass2 c;
    c.places_ = std::move(out);  // parity: |x xor y| = |x| + |y| - 2|x and y|
    return c;
}

BrauerClass2 quaternion(const SquareClass& a, const SquareClass& b) {
    std::vector<Place> support;
    std::vector<mpz_class> primes{2};
    for (const auto& p : a.primes()) primes.push_back(p);
    for (const auto& p : b.primes()) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (const auto& p : primes)
        if (localfield::hilbert_bit(a, b, Place::finite(p)) == 1)
            support.push_back(Place::finite(p));
    if (localfield::hilbert_bit(a, b, Place::infinity()) == 1)
        support.push_back(Place::infinity());
    return BrauerClass2::from_places(std::move(support));
}

}  // namespace shaforge::brauer
