#include "shaforge/obstruction.hpp"

#include <algorithm>

namespace shaforge::obstruction {

BrauerClass2 delta(const KummerPair& pair, const SquareClass& c1, const SquareClass& c2) {
    return brauer::quaternion(c1 * pair.first, c2 * pair.second) + brauer::quaternion(c1, c2);
}

BrauerClass2 delta(const KummerPair& pair, const ObstructionConstants& k) {
    return delta(pair, k.c1, k.c2);
}

BrauerClass2 delta_expanded(const KummerPair& pair, const SquareClass& c1,
                            const SquareClass& c2) {
    return brauer::quaternion(pair.first, pair.second) + brauer::quaternion(pair.first, c2) +
           brauer::quaternion(c1, pair.second);
}

int delta_local_bit(const KummerPair& pair, const SquareClass& c1, const SquareClass& c2,
                    const Place& v) {
    return localfield::hilbert_bit(c1 * pair.first, c2 * pair.second, v) ^
           localfield::hilbert_bit(c1, c2, v);
}

ObstructionConstants fit_constants(const FullTwoTorsionCurve& c, const MWBasis& basis,
                                   const std::vector<Place>& places_to_probe,
                                   const DescentImage* image,
                                   const std::vector<LocalImage>* local_images,
                                   bool require_full_probe) {
    std::vector<Place> support = c.discriminant_support();
    if (require_full_probe)
        for (const Place& v : support)
            if (std::find(places_to_probe.begin(), places_to_probe.end(), v) ==
                places_to_probe.end())
                throw Error("fit_constants: probe list must contain " + v.str());

    DescentImage owned_image;
    if (!image) {
        owned_image = curve::global_image(c, basis);
        image = &owned_image;
    }
    std::vector<LocalImage> owned_locals;
    if (!local_images) {
        for (const Place& v : places_to_probe) owned_locals.push_back(curve::local_image(c, v));
        local_images = &owned_locals;
    }

    // candidate pool: span of -1 and the discriminant primes
    std::vector<SquareClass> gens{SquareClass::of(-1)};
    for (const Place& v : support)
        if (!v.infinite) gens.push_back(SquareClass::of(v.p));
    std::vector<SquareClass> pool{SquareClass::of(1)};
    for (const SquareClass& g : gens) {
        std::vector<SquareClass> next = pool;
        for (const SquareClass& p : pool) next.push_back(p * g);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        pool = std::move(next);
    }

    std::vector<KummerPair> survivors;
    for (const SquareClass& c1 : pool)
        for (const SquareClass& c2 : pool) {
            bool ok = true;
            for (const KummerPair& h : image->elements)
                if (!delta(h, c1, c2).is_zero()) {
                    ok = false;
                    break;
                }
            for (const LocalImage& li : *local_images) {
                if (!ok) break;
                for (const KummerPair& h : li.elements)
                    if (delta_local_bit(h, c1, c2, li.v) != 0) {
                        ok = false;
                        break;
                    }
            }
            if (ok) survivors.push_back(KummerPair{c1, c2});
        }
    if (survivors.empty())
        throw NoSolution("no (c1, c2) pair vanishes on the descent images (symbol bug?)");
    std::sort(survivors.begin(), survivors.end());

    // all survivors must lie in one shift orbit of the global image
    const KummerPair& primary = survivors.front();
    if (require_full_probe)
        for (const KummerPair& s : survivors) {
            KummerPair shift{primary.first * s.first, primary.second * s.second};
            if (!image->contains(shift))
                throw AmbiguousBeyondShift("survivors " + primary.str() + " and " + s.str() +
                                           " differ by a non-image shift " + shift.str());
        }

    ObstructionConstants k;
    k.c1 = primary.first;
    k.c2 = primary.second;
    k.fitted_support = require_full_probe ? support : places_to_probe;
    k.surviving = std::move(survivors);
    return k;
}

std::vector<KummerPair> enumerate_lifts(const LiftCoset& coset) {
    std::vector<KummerPair> out;
    out.reserve(coset.image->elements.size());
    for (const KummerPair& h : coset.image->elements)
        out.push_back(KummerPair{coset.representative.first * h.first,
                                 coset.representative.second * h.second});
    std::sort(out.begin(), out.end());
    return out;
}

std::string verdict_str(IndexVerdict v) {
    switch (v) {
        case IndexVerdict::TrivialClass:
            return "trivial-class";
        case IndexVerdict::Index2:
            return "index-2";
        case IndexVerdict::Index4:
            return "index-4";
    }
    return "?";
}

IndexCertificate certify_index(const LiftCoset& coset, const ObstructionConstants& k) {
    auto verdict_under = [&](const SquareClass& c1, const SquareClass& c2,
                             std::vector<std::pair<KummerPair, BrauerClass2>>* table) {
        if (coset.image->contains(coset.representative)) {
            if (table)
                for (const KummerPair& lift : enumerate_lifts(coset))
                    table->emplace_back(lift, delta(lift, c1, c2));
            return IndexVerdict::TrivialClass;
        }
        bool any_zero = false;
        for (const KummerPair& lift : enumerate_lifts(coset)) {
            BrauerClass2 d = delta(lift, c1, c2);
            if (d.is_zero()) any_zero = true;
            if (table) table->emplace_back(lift, d);
        }
        return any_zero ? IndexVerdict::Index2 : IndexVerdict::Index4;
    };

    IndexCertificate cert;
    cert.representative = coset.representative;
    cert.c1 = k.c1;
    cert.c2 = k.c2;
    cert.verdict = verdict_under(k.c1, k.c2, &cert.lifts);
    for (const KummerPair& cand : k.surviving) {
        if (verdict_under(cand.first, cand.second, nullptr) != cert.verdict) {
            cert.cross_candidate_consistent = false;
            throw InconsistentCandidates("verdict for " + coset.representative.str() +
                                         " differs under candidate " + cand.str());
        }
    }
    return cert;
}

bool shift_delta_check(const ObstructionConstants& k, const KummerPair& h,
                       const std::vector<KummerPair>& samples) {
    SquareClass s1 = k.c1 * h.first, s2 = k.c2 * h.second;
    for (const KummerPair& x : samples) {
        KummerPair xh{x.first * h.first, x.second * h.second};
        if (!(delta(x, s1, s2) == delta(xh, k.c1, k.c2))) return false;
    }
    return true;
}

}  // namespace shaforge::obstruction
