#pragma once

#include <map>
#include <vector>

#include "shaforge/errors.hpp"

namespace shaforge::theta {

// Finite Heisenberg group H_n: pairs (scalar, point) with scalar an exponent
// in Z/n (a root of unity written additively) and point in (Z/n)^2. The
// product twists the scalar by the top-right pairing of the two points:
//   (s, P) * (t, Q) = (s + t + P1*Q2, P + Q).
struct HeisenbergElement {
    long s = 0;
    long p1 = 0;
    long p2 = 0;
    bool operator==(const HeisenbergElement&) const = default;
    auto operator<=>(const HeisenbergElement&) const = default;
};

class Heisenberg {
  public:
    explicit Heisenberg(long n);

    long n() const { return n_; }
    HeisenbergElement identity() const { return {0, 0, 0}; }
    HeisenbergElement make(long s, long p1, long p2) const;
    HeisenbergElement mul(const HeisenbergElement& x, const HeisenbergElement& y) const;
    HeisenbergElement inv(const HeisenbergElement& x) const;
    bool central(const HeisenbergElement& x) const { return x.p1 == 0 && x.p2 == 0; }

    std::vector<HeisenbergElement> elements() const;  // all n^3

  private:
    long n_;
    long norm(long v) const { return ((v % n_) + n_) % n_; }
};

// Finite abelian group presented as a product of cyclic factors; elements are
// componentwise residue vectors.
struct FiniteAbelianGroup {
    std::vector<long> orders;
    using Elt = std::vector<long>;

    Elt zero() const { return Elt(orders.size(), 0); }
    Elt add(const Elt& a, const Elt& b) const;
    std::vector<Elt> elements() const;
    long size() const;
};

// A point of (Z/n)^2 and a character of (Z/n)^2, both written by coordinates;
// chi as a functional (c1, c2) acts by P -> c1*P1 + c2*P2 mod n.
struct PointMap {
    // homomorphism Gamma -> (Z/n)^2, stored by value on every element
    std::map<FiniteAbelianGroup::Elt, std::pair<long, long>> value;
};

// Trivial-action Galois data: eta is the cocycle layer (a homomorphism
// Gamma -> (Z/n)^2 since the action on the point group is trivial) and chi is
// the twist (a homomorphism into characters of the point group). The twisted
// action on the Heisenberg group is
//   sigma . (s, P) = (s + chi(sigma)(P), P).
struct FiniteGaloisData {
    long n = 2;
    FiniteAbelianGroup gamma;
    PointMap eta;  // values are points (P1, P2)
    PointMap chi;  // values are functional coordinates (c1, c2)
};

// table (sigma, tau) -> scalar exponent in Z/n
struct CocycleTable {
    long n = 2;
    std::map<std::pair<FiniteAbelianGroup::Elt, FiniteAbelianGroup::Elt>, long> entries;

    bool operator==(const CocycleTable&) const = default;
    // c(tau,rho) - c(sigma*tau,rho) + c(sigma,tau*rho) - c(sigma,tau) = 0
    bool satisfies_cocycle_identity(const FiniteAbelianGroup& gamma) const;
};

// scalar of lift(sigma) * (sigma . lift(tau)) * lift(sigma tau)^(-1), computed
// entirely by Heisenberg group operations with the identity-section lifts
// (0, eta(sigma)); throws if any product fails to be central
CocycleTable coboundary(const FiniteGaloisData& data);

// closed form chi(sigma)(eta(tau)) + eta1(sigma)*eta2(tau)
CocycleTable formula_rhs(const FiniteGaloisData& data);

// coboundary == formula_rhs entrywise, and both pass the cocycle identity
bool verify_decomposition(const FiniteGaloisData& data);

// all homomorphisms Gamma -> (Z/n)^2 by exhaustive check (desk-scale groups)
std::vector<PointMap> all_point_maps(const FiniteAbelianGroup& gamma, long n);

// exhaustive sweep over every (eta, chi) pair; returns the number of data
// sets checked, throwing VerificationFailure on the first mismatch
long verify_all(long n, const FiniteAbelianGroup& gamma);

}  // namespace shaforge::theta
