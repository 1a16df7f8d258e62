#include "shaforge/curve.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace shaforge::curve {

FullTwoTorsionCurve::FullTwoTorsionCurve(mpz_class e1, mpz_class e2, mpz_class e3)
    : e1_(std::move(e1)), e2_(std::move(e2)), e3_(std::move(e3)) {
    if (e1_ == e2_ || e1_ == e3_ || e2_ == e3_)
        throw Error("curve roots must be pairwise distinct");
}

mpq_class FullTwoTorsionCurve::rhs(const mpq_class& x) const {
    return (x - e1_) * (x - e2_) * (x - e3_);
}

bool FullTwoTorsionCurve::contains(const RationalPoint& p) const {
    if (p.at_infinity) return true;
    return p.y * p.y == rhs(p.x);
}

std::vector<Place> FullTwoTorsionCurve::discriminant_support(const arith::FactorBounds& fb) const {
    mpz_class diffs = (e1_ - e2_) * (e1_ - e3_) * (e2_ - e3_);
    arith::Factorization f = arith::factor(diffs, fb);
    std::vector<Place> out{Place::finite(2)};
    for (const auto& [p, e] : f.primes)
        if (p != 2) out.push_back(Place::finite(p));
    out.push_back(Place::infinity());
    std::sort(out.begin(), out.end());
    return out;
}

RationalPoint FullTwoTorsionCurve::negate(const RationalPoint& p) const {
    if (p.at_infinity) return p;
    return RationalPoint::affine(p.x, -p.y);
}

RationalPoint FullTwoTorsionCurve::add(const RationalPoint& p, const RationalPoint& q) const {
    if (!contains(p) || !contains(q)) throw PointNotOnCurve("point_add: input off the curve");
    if (p.at_infinity) return q;
    if (q.at_infinity) return p;
    // y^2 = x^3 + a2 x^2 + a4 x + a6
    mpq_class a2 = -(e1_ + e2_ + e3_);
    mpq_class a4 = e1_ * e2_ + e1_ * e3_ + e2_ * e3_;
    mpq_class lambda;
    if (p.x == q.x) {
        if (p.y != q.y || p.y == 0) return RationalPoint::infinity();
        lambda = (3 * p.x * p.x + 2 * a2 * p.x + a4) / (2 * p.y);
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
    }
    mpq_class x3 = lambda * lambda - a2 - p.x - q.x;
    mpq_class y3 = lambda * (p.x - x3) - p.y;
    return RationalPoint::affine(x3, y3);
}

RationalPoint FullTwoTorsionCurve::mul_small(const RationalPoint& p, unsigned n) const {
    RationalPoint acc = RationalPoint::infinity();
    for (unsigned i = 0; i < n; ++i) acc = add(acc, p);
    return acc;
}

std::vector<RationalPoint> FullTwoTorsionCurve::two_torsion() const {
    return {RationalPoint::affine(mpq_class(e1_), 0), RationalPoint::affine(mpq_class(e2_), 0),
            RationalPoint::affine(mpq_class(e3_), 0)};
}

std::string FullTwoTorsionCurve::str() const {
    return "(" + e1_.get_str() + "," + e2_.get_str() + "," + e3_.get_str() + ")";
}

bool DescentImage::contains(const KummerPair& p) const {
    return std::binary_search(elements.begin(), elements.end(), p);
}

bool LocalImage::contains_localized(const KummerPair& p) const {
    KummerPair canon{localfield::local_class_of(p.first, v),
                     localfield::local_class_of(p.second, v)};
    return std::find(elements.begin(), elements.end(), canon) != elements.end();
}

KummerPair descent_map(const FullTwoTorsionCurve& c, const RationalPoint& p) {
    if (!c.contains(p)) throw PointNotOnCurve("descent_map: point off the curve");
    if (p.at_infinity) return KummerPair{SquareClass::of(1), SquareClass::of(1)};
    SquareClass first = (p.x == c.e1())
                            ? SquareClass::of(mpq_class((c.e1() - c.e2()) * (c.e1() - c.e3())))
                            : SquareClass::of(p.x - c.e1());
    SquareClass second = (p.x == c.e2())
                             ? SquareClass::of(mpq_class((c.e2() - c.e1()) * (c.e2() - c.e3())))
                             : SquareClass::of(p.x - c.e2());
    return KummerPair{first, second};
}

DescentImage global_image(const FullTwoTorsionCurve& c, const MWBasis& basis) {
    if (basis.declared_rank != static_cast<long>(basis.free_gens.size()))
        throw DegenerateImage("declared rank " + std::to_string(basis.declared_rank) + " != " +
                              std::to_string(basis.free_gens.size()) + " free generators");
    DescentImage img;
    auto tors = c.two_torsion();
    img.generators.push_back(descent_map(c, tors[0]));
    img.provenance.push_back("torsion x=e1");
    img.generators.push_back(descent_map(c, tors[1]));
    img.provenance.push_back("torsion x=e2");
    int gi = 0;
    for (const auto& g : basis.free_gens) {
        if (!c.contains(g)) throw PointNotOnCurve("free generator off the curve");
        // non-torsion sanity: no small multiple vanishes (rational torsion has
        // order <= 12, so 12 multiples suffice)
        for (unsigned n = 1; n <= 12; ++n)
            if (c.mul_small(g, n).at_infinity)
                throw DegenerateImage("free generator is torsion (killed by " + std::to_string(n) +
                                      ")");
        img.generators.push_back(descent_map(c, g));
        img.provenance.push_back("free generator #" + std::to_string(gi++));
    }
    img.elements = arith::span(img.generators);
    size_t expected = size_t{1} << (2 + basis.free_gens.size());
    if (img.elements.size() != expected)
        throw DegenerateImage("descent image order " + std::to_string(img.elements.size()) +
                              ", expected " + std::to_string(expected) +
                              " (dependent generator?)");
    return img;
}

namespace {

// canonical local pair of a rational x against the curve, with the 2-torsion
// abscissa convention
KummerPair localized_pair(const FullTwoTorsionCurve& c, const mpq_class& x, const Place& v) {
    mpq_class f1 = (x == c.e1()) ? mpq_class((c.e1() - c.e2()) * (c.e1() - c.e3())) : x - c.e1();
    mpq_class f2 = (x == c.e2()) ? mpq_class((c.e2() - c.e1()) * (c.e2() - c.e3())) : x - c.e2();
    return KummerPair{localfield::local_class_of(f1, v), localfield::local_class_of(f2, v)};
}

bool x_gives_local_point(const FullTwoTorsionCurve& c, const mpq_class& x, const Place& v) {
    mpq_class f = c.rhs(x);
    if (f == 0) return true;  // 2-torsion abscissa
    return localfield::is_local_square(f, v);
}

}  // namespace

LocalImage local_image(const FullTwoTorsionCurve& c, const Place& v, unsigned long seed,
                       unsigned long sample_budget) {
    size_t target = v.infinite ? 2 : (v.p == 2 ? 8 : 4);
    std::vector<KummerPair> gens;
    for (const auto& t : c.two_torsion()) gens.push_back(localized_pair(c, t.x, v));
    std::vector<KummerPair> span = arith::span(gens);

    auto absorb = [&](const mpq_class& x) {
        if (!x_gives_local_point(c, x, v)) return;
        KummerPair pr = localized_pair(c, x, v);
        if (std::find(span.begin(), span.end(), pr) != span.end()) return;
        gens.push_back(pr);
        span = arith::span(gens);
    };

    if (v.infinite) {
        // one sample inside each allowed real component
        std::vector<mpz_class> es{c.e1(), c.e2(), c.e3()};
        std::sort(es.begin(), es.end());
        absorb(mpq_class(es[2] + 1));
        absorb(mpq_class(es[0] + es[1]) / 2);
    } else {
        long sweep = 2000;
        for (long m = 0; m <= sweep && span.size() < target; ++m) {
            absorb(mpq_class(m));
            if (m > 0) absorb(mpq_class(-m));
        }
        if (span.size() < target) {
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<long> num(-1000000, 1000000);
            std::uniform_int_distribution<long> den(1, 1000);
            for (unsigned long i = 0; i < sample_budget && span.size() < target; ++i) {
                mpq_class x(num(rng), den(rng));
                x.canonicalize();
                absorb(x);
            }
        }
    }
    if (span.size() != target)
        throw SaturationFailure("local image at " + v.str() + " reached order " +
                                std::to_string(span.size()) + ", expected " +
                                std::to_string(target) +
                                " (raise the local-samples bound?)");
    return LocalImage{v, std::move(span)};
}

std::vector<RationalPoint> search_small_points(const FullTwoTorsionCurve& c,
                                               unsigned long height_bound) {
    std::vector<RationalPoint> out;
    long h = static_cast<long>(height_bound);
    for (long b = 1; static_cast<unsigned long>(b) * b <= height_bound; ++b) {
        for (long a = -h; a <= h; ++a) {
            if (mpz_class(gcd(mpz_class(a), mpz_class(b))) != 1) continue;
            mpq_class x(a, b * b);
            x.canonicalize();
            mpq_class f = c.rhs(x);
            if (f < 0) continue;
            // exact square test on the rational value
            mpz_class ns, ds;
            if (!mpz_perfect_square_p(f.get_num().get_mpz_t())) continue;
            if (!mpz_perfect_square_p(f.get_den().get_mpz_t())) continue;
            mpz_sqrt(ns.get_mpz_t(), f.get_num().get_mpz_t());
            mpz_sqrt(ds.get_mpz_t(), f.get_den().get_mpz_t());
            mpq_class y(ns, ds);
            y.canonicalize();
            out.push_back(RationalPoint::affine(x, y));
            if (y != 0) out.push_back(RationalPoint::affine(x, -y));
        }
    }
    return out;
}

namespace {

mpq_class parse_rational(const std::string& tok) {
    try {
        mpq_class q(tok);
        if (q.get_den() == 0) throw ParseError("bad rational '" + tok + "'");
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational '" + tok + "'");
    }
}

}  // namespace

std::vector<Fixture> parse_fixtures(const std::string& text) {
    std::vector<Fixture> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        std::vector<std::string> parts;
        std::string cur;
        std::istringstream ls(line);
        while (std::getline(ls, cur, ';')) parts.push_back(cur);
        auto fail = [&](const std::string& why) -> ParseError {
            return ParseError("fixture line " + std::to_string(lineno) + ": " + why);
        };
        if (parts.size() < 3) throw fail("need '<id> ; e1 e2 e3 ; rank r'");

        std::istringstream ids(parts[0]);
        std::string id;
        ids >> id;
        std::string extra;
        if (id.empty() || (ids >> extra)) throw fail("bad id field");

        std::istringstream es(parts[1]);
        std::string t1, t2, t3;
        if (!(es >> t1 >> t2 >> t3) || (es >> extra)) throw fail("need three roots");
        mpz_class e1, e2, e3;
        try {
            e1 = mpz_class(t1);
            e2 = mpz_class(t2);
            e3 = mpz_class(t3);
        } catch (const std::invalid_argument&) {
            throw fail("roots must be integers");
        }

        std::istringstream rs(parts[2]);
        std::string kw;
        long rank = -1;
        if (!(rs >> kw >> rank) || kw != "rank" || rank < 0 || (rs >> extra))
            throw fail("need 'rank <r>'");

        MWBasis basis;
        basis.declared_rank = rank;
        for (size_t i = 3; i < parts.size(); ++i) {
            std::istringstream gs(parts[i]);
            std::string gkw, xs, ys;
            if (!(gs >> gkw >> xs >> ys) || gkw != "gen" || (gs >> extra))
                throw fail("need 'gen <x> <y>'");
            basis.free_gens.push_back(RationalPoint::affine(parse_rational(xs), parse_rational(ys)));
        }
        if (static_cast<long>(basis.free_gens.size()) != rank)
            throw fail("rank/generator count mismatch");

        Fixture fx{id, FullTwoTorsionCurve(e1, e2, e3), basis};
        for (const auto& g : fx.basis.free_gens)
            if (!fx.curve.contains(g)) throw fail("generator not on curve");
        out.push_back(std::move(fx));
    }
    return out;
}

Fixture load_fixture(const std::string& path, const std::string& curve_id) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open fixture file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto all = parse_fixtures(buf.str());
    for (auto& fx : all)
        if (fx.id == curve_id) return fx;
    throw ParseError("no fixture with id '" + curve_id + "' in " + path);
}

}  // namespace shaforge::curve
