#pragma once

#include <iosfwd>
#include <vector>

#include "geozeta/numeric.hpp"
#include "geozeta/spectra.hpp"

namespace geozeta {

// A zero/pole multiset: positive order = zero, negative order = pole.
struct DivisorPoint {
    cdouble location{0.0, 0.0};
    long order = 0;
};

struct Divisor {
    // Sorted by |location|, then by argument; duplicate locations merged and
    // zero orders dropped.
    std::vector<DivisorPoint> points;
};

// Normalize a raw point list into the canonical sorted/merged form.
Divisor make_divisor(std::vector<DivisorPoint> raw);

// Laplace-type data: entry (s, m) with s != 0 yields points +-is of order m;
// (0, m) yields the point 0 of order 2m.  Requires tag A.
Divisor divisor_case_a(const SpectralInput& input);

// The same map applied to the Laplace entries regardless of tag: the divisor
// of the symmetrized product Z(s, sigma) Z(s, w sigma).
Divisor divisor_symmetrized(const SpectralInput& input);

// Dirac-type data: each entry (s, m_s) yields the single point is of order
// m_s; no forced +- symmetry.  Requires tag B.
Divisor divisor_super(const SpectralInput& input);

// Half-sum of the two spectra on the union of their supports: order at is is
// (m(|s|) + m_s(s))/2 for s != 0 and m(0) at the origin.  Non-integer
// half-sums are a parity violation and are rejected.  Requires tag B.
Divisor divisor_selberg_case_b(const SpectralInput& input);

struct SqrtMismatch {
    cdouble location{0.0, 0.0};
    long doubled_selberg_order = 0; // 2 * order in d_selberg_b
    long combined_order = 0;        // order(d_s) + order(d_super)
};

struct SqrtCheckReport {
    bool ok = true;
    std::vector<SqrtMismatch> mismatches;
};

// True iff order(d_selberg_b) = (order(d_s) + order(d_super)) / 2 at every
// location; mismatching locations are reported.
SqrtCheckReport combine_sqrt_check(const Divisor& d_s, const Divisor& d_super,
                                   const Divisor& d_selberg_b);

// CSV with header `re,im,order`, one row per point, canonical order.
void write_divisor_csv(std::ostream& out, const Divisor& divisor);

} // namespace geozeta
