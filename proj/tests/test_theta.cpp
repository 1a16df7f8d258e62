#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "shaforge/theta.hpp"

using namespace shaforge;
using namespace shaforge::theta;

TEST_CASE("heisenberg multiplication twists by the top-right pairing") {
    Heisenberg h(2);
    CHECK(h.mul(h.make(0, 1, 0), h.make(0, 0, 1)) == h.make(1, 1, 1));
    CHECK(h.mul(h.make(0, 0, 1), h.make(0, 1, 0)) == h.make(0, 1, 1));
    CHECK(h.elements().size() == 8);
    CHECK(h.make(5, 3, -1) == h.make(1, 1, 1));  // coordinates normalize mod n

    Heisenberg h3(3);
    CHECK(h3.elements().size() == 27);
    CHECK(h3.mul(h3.make(0, 2, 0), h3.make(0, 0, 2)) == h3.make(1, 2, 2));  // 2*2 = 4 = 1
}

TEST_CASE("inverses and the center") {
    for (long n : {2L, 3L}) {
        Heisenberg h(n);
        for (const auto& x : h.elements()) {
            CHECK(h.mul(x, h.inv(x)) == h.identity());
            CHECK(h.mul(h.inv(x), x) == h.identity());
            CHECK(h.central(x) == (x.p1 == 0 && x.p2 == 0));
        }
    }
}

TEST_CASE("heisenberg is associative") {
    Heisenberg h(3);
    auto es = h.elements();
    for (const auto& x : es)
        for (const auto& y : es)
            for (const auto& z : es)
                CHECK(h.mul(h.mul(x, y), z) == h.mul(x, h.mul(y, z)));
}

TEST_CASE("finite abelian groups enumerate componentwise") {
    FiniteAbelianGroup g{{2, 2}};
    CHECK(g.size() == 4);
    CHECK(g.elements().size() == 4);
    CHECK(g.add({1, 1}, {1, 0}) == FiniteAbelianGroup::Elt{0, 1});
    CHECK(g.zero() == FiniteAbelianGroup::Elt{0, 0});
}

TEST_CASE("point map enumeration counts homomorphisms") {
    CHECK(all_point_maps(FiniteAbelianGroup{{2}}, 2).size() == 4);
    CHECK(all_point_maps(FiniteAbelianGroup{{2, 2}}, 2).size() == 16);
    CHECK(all_point_maps(FiniteAbelianGroup{{3}}, 3).size() == 9);

    // each map is additive on the group
    FiniteAbelianGroup g{{2, 2}};
    for (const PointMap& m : all_point_maps(g, 2))
        for (const auto& a : g.elements())
            for (const auto& b : g.elements()) {
                auto [x1, y1] = m.value.at(a);
                auto [x2, y2] = m.value.at(b);
                auto [xs, ys] = m.value.at(g.add(a, b));
                CHECK(xs == (x1 + x2) % 2);
                CHECK(ys == (y1 + y2) % 2);
            }
}

namespace {

FiniteGaloisData sample_data() {
    FiniteGaloisData d;
    d.n = 2;
    d.gamma = FiniteAbelianGroup{{2, 2}};
    for (const auto& e : d.gamma.elements()) {
        d.eta.value[e] = {e[0], e[1]};
        d.chi.value[e] = {e[1], e[0]};
    }
    return d;
}

}  // namespace

TEST_CASE("coboundary equals the closed formula on a nontrivial data set") {
    FiniteGaloisData d = sample_data();
    CocycleTable lhs = coboundary(d);
    CocycleTable rhs = formula_rhs(d);
    CHECK(lhs == rhs);
    CHECK(lhs.satisfies_cocycle_identity(d.gamma));
    CHECK(verify_decomposition(d));
}

TEST_CASE("corrupting one table entry breaks the cocycle identity") {
    FiniteGaloisData d = sample_data();
    CocycleTable t = coboundary(d);
    FiniteAbelianGroup::Elt s{1, 0};
    t.entries[{s, s}] = (t.entries[{s, s}] + 1) % 2;
    CHECK_FALSE(t.satisfies_cocycle_identity(d.gamma));
}

TEST_CASE("exhaustive sweeps cover every eta and chi") {
    CHECK(verify_all(2, FiniteAbelianGroup{{2}}) == 16);
    CHECK(verify_all(2, FiniteAbelianGroup{{2, 2}}) == 256);
    CHECK(verify_all(3, FiniteAbelianGroup{{3}}) == 81);
}
