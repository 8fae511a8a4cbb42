#pragma once

// Exact-sign geometric predicates. Each is evaluated in double precision
// first; when the result is within a conservative error bound of zero the
// determinant is recomputed with GMP rationals, so the returned sign is
// always the sign of the exact determinant of the given doubles.

namespace rankfield::predicates {

/// > 0 when a, b, c turn counterclockwise.
int orient2d(const double* a, const double* b, const double* c);

/// > 0 when d is strictly inside the circle through a, b, c, given that
/// a, b, c turn counterclockwise (the sign flips otherwise).
int incircle(const double* a, const double* b, const double* c, const double* d);

/// Sign of det[a-d; b-d; c-d].
int orient3d(const double* a, const double* b, const double* c, const double* d);

/// > 0 when e is strictly inside the sphere through a, b, c, d, given that
/// orient3d(a, b, c, d) > 0 (the sign flips otherwise).
int insphere(const double* a, const double* b, const double* c, const double* d,
             const double* e);

/// Sign of (a - p) . (b - p) in `dim` dimensions; negative iff p lies
/// strictly between a and b when the three are collinear.
int dot_sign(const double* a, const double* b, const double* p, int dim);

/// Number of exact fallbacks taken so far by this thread (diagnostics).
unsigned long long exact_fallbacks() noexcept;

}  // namespace rankfield::predicates
