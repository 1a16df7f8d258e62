#include "shaforge/construct.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace shaforge::construct {

namespace {

bool place_listed(const std::vector<Place>& places, const Place& v) {
    return std::find(places.begin(), places.end(), v) != places.end();
}

bool prime_listed(const std::vector<Place>& places, const mpz_class& p) {
    return place_listed(places, Place::finite(p));
}

// prime is a local square at every listed place (infinite places hold for any
// positive prime)
bool splits_everywhere(const mpz_class& prime, const std::vector<Place>& places) {
    for (const Place& w : places) {
        if (w.infinite) continue;
        if (!localfield::is_local_square(mpq_class(prime), w)) return false;
    }
    return true;
}

void merge_support(std::vector<Place>& acc, const SquareClass& s) {
    for (const mpz_class& p : s.primes())
        if (!prime_listed(acc, p)) acc.push_back(Place::finite(p));
}

void merge_support(std::vector<Place>& acc, const BrauerClass2& b) {
    for (const Place& v : b.places())
        if (!place_listed(acc, v)) acc.push_back(v);
}

}  // namespace

ForgeContext build_forge_context(const FullTwoTorsionCurve& c, const ObstructionConstants& k,
                                 const std::vector<KummerPair>& image_elements,
                                 const std::vector<KummerPair>& prior_span,
                                 const Bounds& bounds) {
    ForgeContext ctx;
    ctx.qc = brauer::quaternion(k.c1, k.c2);

    std::vector<KummerPair> h_group;
    for (const KummerPair& h : image_elements) {
        h_group.push_back(h);
        for (const KummerPair& g : prior_span)
            if (!g.is_one()) h_group.push_back(h * g);
    }
    std::sort(h_group.begin(), h_group.end());
    h_group.erase(std::unique(h_group.begin(), h_group.end()), h_group.end());
    for (const KummerPair& h : h_group)
        ctx.translated.push_back(KummerPair{k.c1 * h.first, k.c2 * h.second});

    ctx.bad = c.discriminant_support(bounds.factor);
    for (const KummerPair& t : ctx.translated) {
        merge_support(ctx.bad, t.first);
        merge_support(ctx.bad, t.second);
        BrauerClass2 q = brauer::quaternion(t.first, t.second);
        merge_support(ctx.bad, q);
        merge_support(ctx.bad, q + ctx.qc);
    }
    std::sort(ctx.bad.begin(), ctx.bad.end());
    return ctx;
}

bool is_simultaneous_norm(const mpz_class& q, const std::vector<SquareClass>& hs) {
    SquareClass qc = SquareClass::from_parts(1, {q});
    for (const SquareClass& h : hs)
        if (!brauer::quaternion(h, qc).is_zero()) return false;
    return true;
}

mpz_class simultaneous_norm_prime(const std::vector<SquareClass>& hs,
                                  const std::vector<Place>& avoid,
                                  const std::vector<Place>& split_at, unsigned long bound) {
    mpz_class q = 2;
    while (q <= static_cast<long>(bound)) {
        if (!prime_listed(avoid, q) && splits_everywhere(q, split_at) &&
            is_simultaneous_norm(q, hs))
            return q;
        mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    }
    throw SearchExhausted("no simultaneous-norm prime below " + std::to_string(bound) +
                          " (raise the prime-search bound)");
}

ForgedClass forge_class(const ForgeContext& ctx, const std::vector<Place>& split_at,
                        const Bounds& bounds) {
    // stage 1: q a norm from every Q(sqrt t1)
    std::vector<SquareClass> firsts;
    for (const KummerPair& t : ctx.translated) firsts.push_back(t.first);
    mpz_class q = simultaneous_norm_prime(firsts, ctx.bad, split_at, bounds.prime_search);
    SquareClass q_class = SquareClass::from_parts(1, {q});

    // stage 2: per pair a fresh odd place where q * t2 is not a square
    std::vector<mpz_class> vplaces;
    for (const KummerPair& t : ctx.translated) {
        SquareClass target = q_class * t.second;
        if (target.is_one())
            throw VerificationFailure("q * t2 is a global square (q collides with supports?)");
        mpz_class v = 3;
        bool found = false;
        while (v <= static_cast<long>(bounds.prime_search)) {
            if (!prime_listed(ctx.bad, v) && v != q &&
                std::find(vplaces.begin(), vplaces.end(), v) == vplaces.end() &&
                splits_everywhere(v, split_at) &&
                !localfield::is_local_square(target, Place::finite(v))) {
                found = true;
                break;
            }
            mpz_nextprime(v.get_mpz_t(), v.get_mpz_t());
        }
        if (!found)
            throw SearchExhausted("no admissible place for pair " + t.str() +
                                  " below the prime-search bound");
        vplaces.push_back(v);
    }

    // stage 3: g1 = product of the places; verify the defining condition
    std::vector<mpz_class> sorted_v = vplaces;
    std::sort(sorted_v.begin(), sorted_v.end());
    SquareClass g1 = SquareClass::from_parts(1, sorted_v);
    ForgedClass out{KummerPair{g1, q_class}, q, vplaces};
    for (const KummerPair& t : ctx.translated) {
        BrauerClass2 obs = brauer::quaternion(t.first * g1, t.second * q_class);
        if (obs.is_zero() || obs == ctx.qc)
            throw VerificationFailure("forged class fails the obstruction condition at " +
                                      t.str());
    }
    return out;
}

ForgedGroup forge_group(const FullTwoTorsionCurve& c, const MWBasis& basis,
                        const ObstructionConstants& k, unsigned r, const Bounds& bounds) {
    curve::DescentImage image = curve::global_image(c, basis);
    ForgedGroup out;
    std::vector<KummerPair> prior_span{KummerPair{}};  // identity
    for (unsigned i = 0; i < r; ++i) {
        ForgeContext ctx = build_forge_context(c, k, image.elements, prior_span, bounds);
        ForgedClass fc = forge_class(ctx, {}, bounds);
        out.generators.push_back(fc.cls);
        prior_span = arith::span(out.generators);
    }
    for (const KummerPair& s : prior_span)
        if (!s.is_one()) out.span_nonzero.push_back(s);
    if (out.span_nonzero.size() + 1 != (size_t{1} << r))
        throw VerificationFailure("forged generators are dependent");
    for (const KummerPair& s : out.span_nonzero) {
        if (image.contains(s))
            throw VerificationFailure("span element " + s.str() + " lies in the descent image");
        obstruction::LiftCoset coset{s, &image};
        IndexCertificate cert = obstruction::certify_index(coset, k);
        if (cert.verdict != obstruction::IndexVerdict::Index4)
            throw VerificationFailure("span element " + s.str() + " certified " +
                                      obstruction::verdict_str(cert.verdict) +
                                      ", expected index-4");
        out.certificates.push_back(std::move(cert));
    }
    return out;
}

std::vector<SquareClass> local_splitting_options(const FullTwoTorsionCurve& c,
                                                 const KummerPair& cls, const Place& v) {
    auto model = localfield::DescentModel::make(cls, c.e1(), c.e2(), c.e3());
    std::vector<SquareClass> options;
    for (const SquareClass& t : localfield::local_square_transversal(v)) {
        bool ok = t.is_one() ? localfield::local_points_exist(model, v)
                             : localfield::local_points_exist(model, v, t.value());
        if (ok) options.push_back(t);
    }
    if (options.empty())
        throw EmptyOptionSet("no quadratic extension splits " + cls.str() + " at " + v.str() +
                             " (local solver bug)");
    return options;
}

std::vector<Place> support_places(const FullTwoTorsionCurve& c, const KummerPair& cls,
                                  const arith::FactorBounds& fb) {
    std::vector<Place> out = c.discriminant_support(fb);
    merge_support(out, cls.first);
    merge_support(out, cls.second);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Place> nontrivial_places(const FullTwoTorsionCurve& c, const KummerPair& cls,
                                     const arith::FactorBounds& fb) {
    auto model = localfield::DescentModel::make(cls, c.e1(), c.e2(), c.e3());
    std::vector<Place> out;
    for (const Place& v : support_places(c, cls, fb))
        if (!localfield::local_points_exist(model, v)) out.push_back(v);
    return out;
}

std::vector<size_t> pick_disjoint(const std::vector<ClassWithSupport>& pool, unsigned r) {
    std::vector<size_t> chosen;
    auto disjoint_with_chosen = [&](size_t cand) {
        for (size_t i : chosen)
            for (const Place& v : pool[i].sigma)
                if (place_listed(pool[cand].sigma, v)) return false;
        return true;
    };
    // depth-first over index combinations in lexicographic order
    std::function<bool(size_t)> grow = [&](size_t from) {
        if (chosen.size() == r) return true;
        for (size_t i = from; i < pool.size(); ++i) {
            if (!disjoint_with_chosen(i)) continue;
            chosen.push_back(i);
            if (grow(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (!grow(0))
        throw PoolExhausted("no " + std::to_string(r) +
                            " classes with pairwise disjoint supports in a pool of " +
                            std::to_string(pool.size()));
    return chosen;
}

ShaExtension find_sha_extension(const FullTwoTorsionCurve& c,
                                const std::vector<ClassWithSupport>& classes,
                                const Bounds& bounds) {
    // per (class, place): the admissible nontrivial local classes of d
    struct Constraint {
        size_t class_index;
        Place v;
        std::vector<SquareClass> allowed;
    };
    std::vector<Constraint> constraints;
    for (size_t i = 0; i < classes.size(); ++i)
        for (const Place& v : classes[i].sigma) {
            std::vector<SquareClass> opts =
                local_splitting_options(c, classes[i].cls, v);
            std::erase_if(opts, [](const SquareClass& s) { return s.is_one(); });
            if (opts.empty())
                throw NoCompatibleD("class " + classes[i].cls.str() +
                                    " admits only the trivial extension at " + v.str());
            constraints.push_back({i, v, std::move(opts)});
        }

    auto admissible = [&](const mpz_class& d) {
        for (const Constraint& con : constraints) {
            SquareClass dc = localfield::local_class_of(mpq_class(d), con.v);
            if (std::find(con.allowed.begin(), con.allowed.end(), dc) == con.allowed.end())
                return false;
        }
        return true;
    };

    // Forced skeleton: at a place where every admissible extension class has
    // odd valuation, that place must divide d. The remaining constraints are
    // residue conditions on the cofactor, so d is minimized by walking the
    // smallest squarefree cofactors of the skeleton.
    mpz_class skeleton = 1;
    bool force_negative = false;
    for (const Constraint& con : constraints) {
        if (con.v.infinite) {
            force_negative = true;  // the nontrivial option at infinity is -1
            continue;
        }
        bool all_ramified = true;
        for (const SquareClass& s : con.allowed)
            if ((arith::valuation(s.value(), con.v.p) & 1) == 0) all_ramified = false;
        if (all_ramified) skeleton *= con.v.p;
    }

    mpz_class d = 0;
    bool found = false;
    for (mpz_class t = 1; t <= static_cast<long>(bounds.d_search) && !found; ++t) {
        if (gcd(t, skeleton) != 1) continue;
        arith::Factorization f = arith::factor(t, bounds.factor);
        bool sf = true;
        for (const auto& [p, e] : f.primes)
            if (e > 1) sf = false;
        if (!sf) continue;
        mpz_class cand = skeleton * t;
        if (!force_negative && cand != 1 && admissible(cand)) {
            d = cand;
            found = true;
        } else if (admissible(-cand)) {
            d = -cand;
            found = true;
        }
    }
    if (!found)
        throw SearchExhausted("no admissible squarefree d = " + skeleton.get_str() +
                              " * t with |t| <= " + std::to_string(bounds.d_search) +
                              " (raise the d-search bound)");

    ShaExtension out;
    out.d = d;
    for (size_t i = 0; i < classes.size(); ++i) {
        auto model = localfield::DescentModel::make(classes[i].cls, c.e1(), c.e2(), c.e3());
        for (const Place& v : classes[i].sigma) {
            LocalWitness wit;
            if (!localfield::local_points_exist(model, v, d, &wit))
                throw VerificationFailure("chosen d fails to split class " +
                                          std::to_string(i) + " at " + v.str());
            out.witnesses.push_back({i, std::move(wit)});
        }
    }
    return out;
}

ShaCertificateData grow_sha(const FullTwoTorsionCurve& c, const MWBasis& basis,
                            const ObstructionConstants& k, unsigned r, const Bounds& bounds) {
    curve::DescentImage image = curve::global_image(c, basis);
    ShaCertificateData out;
    out.r = r;

    std::vector<KummerPair> gens;
    std::vector<KummerPair> prior_span{KummerPair{}};
    std::vector<Place> earlier_sigma;
    for (unsigned i = 0; i < r; ++i) {
        ForgeContext ctx = build_forge_context(c, k, image.elements, prior_span, bounds);
        ForgedClass fc = forge_class(ctx, earlier_sigma, bounds);
        std::vector<Place> sigma = nontrivial_places(c, fc.cls, bounds.factor);
        if (sigma.empty())
            throw VerificationFailure("forged class has empty local-nontriviality set");
        for (const Place& v : sigma)
            if (place_listed(earlier_sigma, v))
                throw VerificationFailure("support disjointness violated at " + v.str());
        for (const Place& v : sigma) earlier_sigma.push_back(v);
        out.classes.push_back({fc.cls, std::move(sigma)});
        gens.push_back(fc.cls);
        prior_span = arith::span(gens);
    }

    // formal disjointness selection over the constructed pool
    pick_disjoint(out.classes, r);

    ShaExtension ext = find_sha_extension(c, out.classes, bounds);
    out.d = ext.d;
    out.witnesses = std::move(ext.witnesses);

    for (const KummerPair& s : prior_span)
        if (!s.is_one()) out.span_nonzero.push_back(s);
    if (out.span_nonzero.size() + 1 != (size_t{1} << r))
        throw VerificationFailure("forged generators are dependent");
    for (const KummerPair& s : out.span_nonzero) {
        if (image.contains(s))
            throw VerificationFailure("span element " + s.str() + " lies in the descent image");
        obstruction::LiftCoset coset{s, &image};
        IndexCertificate cert = obstruction::certify_index(coset, k);
        if (cert.verdict != obstruction::IndexVerdict::Index4)
            throw VerificationFailure("span element " + s.str() + " certified " +
                                      obstruction::verdict_str(cert.verdict) +
                                      ", expected index-4");
        out.span_certificates.push_back(std::move(cert));
    }
    return out;
}

std::vector<Place> audit_good_places(const FullTwoTorsionCurve& c, const KummerPair& cls,
                                     unsigned count, const arith::FactorBounds& fb) {
    auto model = localfield::DescentModel::make(cls, c.e1(), c.e2(), c.e3());
    std::vector<Place> bad = support_places(c, cls, fb);
    std::vector<Place> verified;
    mpz_class p = 2;
    while (verified.size() < count) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        if (prime_listed(bad, p)) continue;
        Place v = Place::finite(p);
        if (!localfield::local_points_exist(model, v))
            throw VerificationFailure("class locally nontrivial at good place " + v.str());
        verified.push_back(v);
    }
    return verified;
}

}  // namespace shaforge::construct
