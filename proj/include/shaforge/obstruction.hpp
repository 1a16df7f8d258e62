#pragma once

#include <string>
#include <vector>

#include "shaforge/brauer.hpp"
#include "shaforge/curve.hpp"
#include "shaforge/errors.hpp"

namespace shaforge::obstruction {

using arith::KummerPair;
using arith::SquareClass;
using brauer::BrauerClass2;
using curve::DescentImage;
using curve::FullTwoTorsionCurve;
using curve::LocalImage;
using curve::MWBasis;
using localfield::Place;

struct ObstructionConstants {
    SquareClass c1, c2;  // designated primary candidate
    std::vector<Place> fitted_support;
    std::vector<KummerPair> surviving;  // all candidates, primary included
};

// Delta(a, b) = quaternion(c1*a, c2*b) + quaternion(c1, c2)
BrauerClass2 delta(const KummerPair& pair, const SquareClass& c1, const SquareClass& c2);
BrauerClass2 delta(const KummerPair& pair, const ObstructionConstants& k);

// expanded three-symbol form <a,b> + <a,c2> + <c1,b>; equal to delta by
// bimultiplicativity, kept separate as a cross-check
BrauerClass2 delta_expanded(const KummerPair& pair, const SquareClass& c1, const SquareClass& c2);

// the v-component of Delta against locally-canonicalized pairs
int delta_local_bit(const KummerPair& pair, const SquareClass& c1, const SquareClass& c2,
                    const Place& v);

// exhaustive fit over the subgroup generated by -1 and the discriminant-support
// primes: a candidate survives iff Delta vanishes on the whole global image and
// the v-component vanishes on every element of each probed local image.
// require_full_probe demands the probe list cover the discriminant support and
// the survivors form one image-shift orbit; relaxing it (diagnostic mode only)
// keeps whatever survives and records the truncated probe list as the support
ObstructionConstants fit_constants(const FullTwoTorsionCurve& c, const MWBasis& basis,
                                   const std::vector<Place>& places_to_probe,
                                   const DescentImage* image = nullptr,
                                   const std::vector<LocalImage>* local_images = nullptr,
                                   bool require_full_probe = true);

struct LiftCoset {
    KummerPair representative;
    const DescentImage* image = nullptr;
};

std::vector<KummerPair> enumerate_lifts(const LiftCoset& coset);

enum class IndexVerdict { TrivialClass, Index2, Index4 };
std::string verdict_str(IndexVerdict v);

struct IndexCertificate {
    KummerPair representative;
    SquareClass c1, c2;  // constants the lift table was computed under
    std::vector<std::pair<KummerPair, BrauerClass2>> lifts;
    IndexVerdict verdict = IndexVerdict::TrivialClass;
    bool cross_candidate_consistent = true;
};

// trivial iff representative in image; index-2 iff some lift has Delta = 0;
// index-4 otherwise; the verdict is recomputed under every surviving
// candidate and must agree (InconsistentCandidates)
IndexCertificate certify_index(const LiftCoset& coset, const ObstructionConstants& k);

// Delta with constants shifted by h equals x -> Delta(x*h), on the samples;
// exact for h in the descent image
bool shift_delta_check(const ObstructionConstants& k, const KummerPair& h,
                       const std::vector<KummerPair>& samples);

}  // namespace shaforge::obstruction
