#pragma once

// Local arithmetic over Q_v and its quadratic extensions.
//
// Square classes locally: odd p has transversal {1, u, p, up} with u the
// least positive nonresidue; p = 2 has {1,-1,2,-2,5,-5,10,-10}; the real
// place has {1,-1}. Hilbert symbols are computed additively ({0,1}) by the
// closed formulas: the tame rule at odd p, the epsilon/omega rule at 2, the
// sign rule at infinity.
//
// local_points_exist decides whether the genus-one model
//     A z1^2 - B z2^2 = (e2-e1) z0^2,   A z1^2 - A B z3^2 = (e3-e1) z0^2
// has a point over Q_v or over a given quadratic extension Q_v(sqrt(d)).
// A point forces (z0, z1) != (0, 0), so the model projects to (z0 : z1) and
// solvability reduces to: some (s : t) in P^1 makes both
//     f(s,t) = B (A t^2 - (e2-e1) s^2)   and   g(s,t) = A B (A t^2 - (e3-e1) s^2)
// squares (zero allowed, never both). The decision is a branch-and-prune
// walk over pi-adic residue discs: a disc on which the value's square class
// is provably constant is decided outright; otherwise it is subdivided.
// Discs shrinking toward an in-field root of f or g are the only
// non-terminating descent, and those roots are dispatched exactly first
// (f vanishes at a P^1(F)-point iff (e2-e1)A is a square in F, and there the
// other value is AB(e2-e3) up to squares; symmetrically for g). Every true
// verdict carries a Hensel witness checkable by verify_local_witness from
// the serialized data alone; a false verdict is an exhaustive search below
// the precomputed depth bound.

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "shaforge/arith.hpp"
#include "shaforge/errors.hpp"

namespace shaforge::localfield {

using arith::SquareClass;

struct Place {
    bool infinite = false;
    mpz_class p;  // valid iff !infinite

    static Place infinity() { return Place{true, 0}; }
    static Place finite(mpz_class q) { return Place{false, std::move(q)}; }

    bool is_odd() const { return !infinite && p != 2; }
    std::string str() const { return infinite ? "inf" : p.get_str(); }

    bool operator==(const Place& o) const = default;
    // finite primes ascending, the infinite place after all of them
    std::strong_ordering operator<=>(const Place& o) const {
        if (infinite != o.infinite)
            return infinite ? std::strong_ordering::greater : std::strong_ordering::less;
        if (infinite) return std::strong_ordering::equal;
        return p < o.p   ? std::strong_ordering::less
               : p > o.p ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
    }
};

Place parse_place(const std::string& s);

// least positive quadratic nonresidue mod odd prime p (always itself prime)
mpz_class least_positive_nonresidue(const mpz_class& p);

bool is_local_square(const mpq_class& q, const Place& v);
bool is_local_square(const SquareClass& c, const Place& v);

// additive Hilbert symbol: 0 split, 1 nonsplit; a, b nonzero
int hilbert_bit(const mpq_class& a, const mpq_class& b, const Place& v);
int hilbert_bit(const SquareClass& a, const SquareClass& b, const Place& v);

// canonical transversal of Q_v*/Q_v*^2, trivial class first
std::vector<SquareClass> local_square_transversal(const Place& v);

// the transversal member representing q in Q_v*/Q_v*^2
SquareClass local_class_of(const mpq_class& q, const Place& v);
SquareClass local_class_of(const SquareClass& c, const Place& v);

// ---------------------------------------------------------------------------
// Quadratic extension arithmetic, exact integer coordinates a + b*beta.
// beta depends on the extension kind:
//   inert odd p:        beta = sqrt(d), d a unit nonsquare
//   inert 2-adic:       beta = (1+sqrt(d))/2 for d = 5 mod 8, beta^2 = beta + (d-1)/4
//   ramified, v(d)=1:   beta = sqrt(d) = uniformizer
//   ramified 2, d=3(4): beta = sqrt(d), uniformizer 1 + beta
// The base field is the degenerate case b = 0.

struct EltData {
    mpz_class a, b;
    bool operator==(const EltData&) const = default;
};

class LocalField {
  public:
    enum class Kind { Base, InertOdd, Inert2, RamSqrt, RamUnit2 };

    explicit LocalField(mpz_class p);                       // Q_p
    LocalField(mpz_class p, const mpz_class& d);            // Q_p(sqrt d), d a local nonsquare

    Kind kind() const { return kind_; }
    const mpz_class& p() const { return p_; }
    long e2() const { return e2_; }  // val of 2 (0 at odd p; 1 base/inert at 2; 2 ramified)
    bool ramified() const { return kind_ == Kind::RamSqrt || kind_ == Kind::RamUnit2; }

    EltData from_int(const mpz_class& n) const { return {n, 0}; }
    EltData add(const EltData& x, const EltData& y) const;
    EltData sub(const EltData& x, const EltData& y) const;
    EltData mul(const EltData& x, const EltData& y) const;
    EltData uniformizer() const;
    EltData pow_uniformizer(long k) const;

    static constexpr long kInfVal = 1'000'000'000;
    long val(const EltData& x) const;  // kInfVal on 0
    bool is_square(const EltData& x) const;  // x = 0 counts as a square

    // digit-lifted square root: root with val(root^2 - x) >= prec;
    // requires is_square(x), x != 0 and, in ramified fields, an even
    // p-exponent (odd exponents are folded by the certificate builder)
    EltData sqrt_to_precision(const EltData& x, long prec) const;

    std::vector<EltData> residue_reps() const;  // coset reps of O/pi

    // walk the coset reps of O/pi without materializing them, stopping when
    // fn returns true; returns whether fn stopped the walk. The search and
    // lifting loops run this at residue-field scale, so no allocation per rep.
    template <typename Fn>
    bool for_each_residue(Fn&& fn) const {
        EltData r{0, 0};
        switch (kind_) {
            case Kind::Base:
            case Kind::RamSqrt:
            case Kind::RamUnit2:
                for (r.a = 0; r.a < p_; ++r.a)
                    if (fn(r)) return true;
                return false;
            case Kind::InertOdd:
                for (r.a = 0; r.a < p_; ++r.a)
                    for (r.b = 0; r.b < p_; ++r.b)
                        if (fn(r)) return true;
                return false;
            case Kind::Inert2:
                for (long a = 0; a < 2; ++a)
                    for (long b = 0; b < 2; ++b) {
                        r.a = a;
                        r.b = b;
                        if (fn(r)) return true;
                    }
                return false;
        }
        return false;
    }

  private:
    Kind kind_;
    mpz_class p_;
    mpz_class d_;  // beta^2 = d_ (sqrt kinds); Inert2: beta^2 = beta + c_
    mpz_class c_;
    long e2_;

    long strip(const EltData& x, EltData* stripped) const;  // max s with p^s | both coords
    bool unit_square(const EltData& u) const;
    EltData ram_cofactor() const;  // c with p = pi^2 * c^{-1}, ramified kinds only
};

// ---------------------------------------------------------------------------

struct DescentModel {
    mpz_class A, B;        // squarefree nonzero
    mpz_class e1, e2, e3;  // distinct

    static DescentModel make(const arith::KummerPair& pair, const mpz_class& e1,
                             const mpz_class& e2, const mpz_class& e3);
};

struct SqrtCert {
    EltData value;  // the element certified square (0 allowed)
    EltData root;
    mpz_class scale = 1;  // integer factor absorbing an odd uniformizer exponent
    long prec = 0;  // claim: val(root^2 - value*scale^2) >= prec >= val(value*scale^2) + 2*val(2) + 1
};

struct LocalWitness {
    enum class Kind {
        RealInfinity,  // chart point (0:1): needs A > 0, B > 0
        RealT0,        // chart point (1:0): needs -B(e2-e1) > 0, -AB(e3-e1) > 0
        RealRootF,     // f-root real: A(e2-e1) > 0 and AB(e2-e3) > 0
        RealRootG,     // g-root real: A(e3-e1) > 0 and B(e3-e2) > 0
        Complex,       // extension of the real place is C
        RootF,         // (e2-e1)A and AB(e2-e3) both squares in F
        RootG,         // (e3-e1)A and B(e3-e2) both squares in F
        Branch         // whole disc center + pi^depth O decided square for f and g
    };

    Place v;
    std::optional<mpz_class> ext;  // d of the quadratic extension, if any
    Kind kind = Kind::Branch;
    int chart = 0;        // 0: t in O at (1:t); 1: s in piO at (s:1)
    EltData center{0, 0};
    long depth = 0;
    SqrtCert cert_f, cert_g;  // Branch: certs for f(center), g(center); Root*: the two integral values
};

// Decide solvability over Q_v (ext absent) or Q_v(sqrt d) (ext = d, must be a
// nonsquare in Q_v). On success fills *wit when given. Throws
// PrecisionExhausted only if the documented depth bound is exceeded, which a
// valid model cannot trigger.
bool local_points_exist(const DescentModel& m, const Place& v,
                        const std::optional<mpz_class>& ext = std::nullopt,
                        LocalWitness* wit = nullptr);

// Re-check a serialized witness against the model, from the data alone.
bool verify_local_witness(const DescentModel& m, const LocalWitness& w);

}  // namespace shaforge::localfield
