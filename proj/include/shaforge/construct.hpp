#pragma once

#include <vector>

#include "shaforge/obstruction.hpp"

namespace shaforge::construct {

using arith::KummerPair;
using arith::SquareClass;
using brauer::BrauerClass2;
using curve::FullTwoTorsionCurve;
using curve::MWBasis;
using localfield::LocalWitness;
using localfield::Place;
using obstruction::IndexCertificate;
using obstruction::ObstructionConstants;

struct Bounds {
    unsigned long prime_search = 200000;  // cap for norm-prime and place searches
    unsigned long d_search = 200000;      // cap on |d| in the extension search
    unsigned long local_samples = 40000;  // local-image saturation budget
    arith::FactorBounds factor;
};

// state for one forging round: the constraint subgroup is carried in
// constant-translated form t(h) = (c1*h1, c2*h2), so the target condition
// reads quaternion(t1*g1, t2*g2) not in C = {0, qc}
struct ForgeContext {
    std::vector<KummerPair> translated;  // t(h) for h in image x prior span
    BrauerClass2 qc;                     // quaternion(c1, c2)
    std::vector<Place> bad;              // B: inf, 2, disc primes, coord and symbol supports
};

ForgeContext build_forge_context(const FullTwoTorsionCurve& c, const ObstructionConstants& k,
                                 const std::vector<KummerPair>& image_elements,
                                 const std::vector<KummerPair>& prior_span,
                                 const Bounds& bounds = {});

// true iff q is a norm from Q(sqrt h) for every h: all quaternion(h, q) vanish
bool is_simultaneous_norm(const mpz_class& q, const std::vector<SquareClass>& hs);

// smallest prime q not lying under any avoided place, a simultaneous norm for
// every listed class, and a local square at every place of `split_at`
mpz_class simultaneous_norm_prime(const std::vector<SquareClass>& hs,
                                  const std::vector<Place>& avoid,
                                  const std::vector<Place>& split_at, unsigned long bound);

struct ForgedClass {
    KummerPair cls;                  // (prod v_i, q)
    mpz_class q;                     // stage-1 prime
    std::vector<mpz_class> vplaces;  // stage-2 primes, one per translated pair
};

// Stage 1: g2 = q, a simultaneous norm for all translated first coordinates.
// Stage 2: per translated pair, a fresh odd place where q * t2 is a nonsquare.
// Stage 3: g1 = product of those places. Each choice is the smallest
// admissible value; the returned class is re-verified against the whole
// translated group. `split_at` forces every fresh prime to be a local square
// there, making the class locally trivial at those places.
ForgedClass forge_class(const ForgeContext& ctx, const std::vector<Place>& split_at,
                        const Bounds& bounds);

struct ForgedGroup {
    std::vector<KummerPair> generators;
    std::vector<KummerPair> span_nonzero;       // 2^r - 1 products
    std::vector<IndexCertificate> certificates;  // parallel to span_nonzero
};

ForgedGroup forge_group(const FullTwoTorsionCurve& c, const MWBasis& basis,
                        const ObstructionConstants& k, unsigned r, const Bounds& bounds = {});

// quadratic extension classes d in the local transversal at v (1 = trivial
// extension) over which the descent model of cls acquires a point
std::vector<SquareClass> local_splitting_options(const FullTwoTorsionCurve& c,
                                                 const KummerPair& cls, const Place& v);

// superset of places where cls can be locally nontrivial: inf, 2, the
// discriminant primes, and the odd primes of the coordinate supports
std::vector<Place> support_places(const FullTwoTorsionCurve& c, const KummerPair& cls,
                                  const arith::FactorBounds& fb = {});

// Sigma(cls): the places of the superset where the model has no local point
std::vector<Place> nontrivial_places(const FullTwoTorsionCurve& c, const KummerPair& cls,
                                     const arith::FactorBounds& fb = {});

struct ClassWithSupport {
    KummerPair cls;
    std::vector<Place> sigma;
};

// first r-subset (lexicographic by index) with pairwise disjoint supports
std::vector<size_t> pick_disjoint(const std::vector<ClassWithSupport>& pool, unsigned r);

struct WitnessRecord {
    size_t class_index;
    LocalWitness wit;
};

struct ShaExtension {
    mpz_class d;
    std::vector<WitnessRecord> witnesses;  // one per (class, place of its Sigma)
};

// smallest admissible squarefree d whose local class at every v in Sigma_i is
// a nontrivial splitting option of class i: the product of the places where
// every option is ramified, times the smallest compatible cofactor, positive
// before negative; witnesses re-verified over Q_v(sqrt d)
ShaExtension find_sha_extension(const FullTwoTorsionCurve& c,
                                const std::vector<ClassWithSupport>& classes,
                                const Bounds& bounds);

struct ShaCertificateData {
    unsigned r = 0;
    mpz_class d;
    std::vector<ClassWithSupport> classes;
    std::vector<WitnessRecord> witnesses;
    std::vector<KummerPair> span_nonzero;
    std::vector<IndexCertificate> span_certificates;
};

// full pipeline: r forged classes with pairwise disjoint supports (later
// rounds constrain fresh primes to split at all earlier supports), one d
// splitting every class at its support, witnesses everywhere, and index-4
// certificates for the whole nonzero span
ShaCertificateData grow_sha(const FullTwoTorsionCurve& c, const MWBasis& basis,
                            const ObstructionConstants& k, unsigned r,
                            const Bounds& bounds = {});

// audit helper: places of good reduction for the class, where local
// triviality is expected; returns the sampled places that verified
std::vector<Place> audit_good_places(const FullTwoTorsionCurve& c, const KummerPair& cls,
                                     unsigned count, const arith::FactorBounds& fb = {});

}  // namespace shaforge::construct
