#pragma once

// Brute-force norm-equation solvability over completions of Q, independent
// of the library: decides whether z^2 = a*x^2 + b*y^2 has a nontrivial local
// zero. Additive convention matching hilbert_bit: 0 solvable, 1 not.
// Inputs must be nonzero squarefree and small enough that the residue
// enumerations fit in machine longs.

namespace testsupport {

// place encoding: 0 is the real place, otherwise an odd prime or 2
int hilbert_brute(long a, long b, long place);

}  // namespace testsupport
