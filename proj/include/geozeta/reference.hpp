#pragma once

#include "geozeta/euler.hpp"
#include "geozeta/hadamard.hpp"
#include "geozeta/spectra.hpp"

// Serial reference implementations on independent computational routes.
// The production kernels use a closed-form local factor and a blocked
// parallel reduction; the routines here expand the symmetric-power tower
// term by term and sum serially, so agreement between the two is a real
// cross-check (and the benchmark baseline), not a tautology.
namespace geozeta::reference {

// Local Selberg log as an explicit sum over symmetric powers k = 0,1,2,...:
//   sum_k log det(1 - mu (x) S^k(P^s) e^{-(s+rho) l}),
// each determinant through the eigenvalue trace series, the k-sum capped
// once its geometric tail drops below eps_tail.
cdouble log_selberg_local_monomial(const PrimeGeodesic& c, cdouble s,
                                   const SigmaCharacter& sigma, int dimension, double rho,
                                   double eps_tail);

// Serial log_zeta over the spectrum using the monomial local factor.
EvalResult log_zeta_serial(const LengthSpectrum& spectrum, const EvalRequest& req);

// Direct product of elementary factors in storage order, no log-space
// accumulation.  Suitable for moderate |s| where the product stays in range.
cdouble direct_canonical_product(const ZeroSet& z, int genus, cdouble s);

} // namespace geozeta::reference
