#pragma once

#include <stdexcept>
#include <string>

namespace gkp {

// Base class for all library failures so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A candidate generator matrix does not describe a valid code lattice:
// M Omega M^T has a non-integer entry.
struct NotSymplecticallyIntegral : Error {
    using Error::Error;
};

// |det M| rounds away from a positive integer.
struct NonIntegerDeterminant : Error {
    using Error::Error;
};

struct SingularGenerator : Error {
    using Error::Error;
};

// The Gram matrix is not of the canonical diag(d_1..d_N) (x) omega form,
// so no square-lattice factorization exists in this basis.
struct NotCanonicalBasis : Error {
    using Error::Error;
};

struct UnknownLattice : Error {
    using Error::Error;
};

// Enumeration over lattice points exceeded its budget before reaching the
// requested truncation tolerance.
struct EnumerationBudgetExceeded : Error {
    using Error::Error;
};

// A Fock-space cutoff leaves more probability mass above it than allowed.
struct CutoffTooSmall : Error {
    using Error::Error;
};

// A codeword comb window omits peaks that still carry weight above tolerance.
struct WindowTooSmall : Error {
    using Error::Error;
};

// A matrix expected to be positive semidefinite has a significantly negative
// eigenvalue.
struct NotPositiveSemidefinite : Error {
    using Error::Error;
};

// An iterative series or recurrence failed to converge within its budget.
struct NonConvergent : Error {
    using Error::Error;
};

// The raw codeword set is (numerically) linearly dependent, so no code
// projector can be built from it.
struct RankDeficientCodespace : Error {
    using Error::Error;
};

// An operation specific to one channel family was invoked with the other.
struct WrongChannelKind : Error {
    using Error::Error;
};

// No lattice scaling in the allowed range meets the error ceiling.
struct NoFeasibleLambda : Error {
    using Error::Error;
};

// A precondition on plain arguments (ranges, sizes, flags) was violated.
struct InvalidArgument : Error {
    using Error::Error;
};

// Every perturbative weight underflowed, so the weighted residual norm is
// undefined.
struct DegenerateWeights : Error {
    using Error::Error;
};

// A Bessel-kernel series did not decay within its adaptive term budget.
struct SeriesNonConvergent : Error {
    using Error::Error;
};

// The double lattice sum grew past its point budget before truncation.
struct LatticeSumBudgetExceeded : Error {
    using Error::Error;
};

}  // namespace gkp
