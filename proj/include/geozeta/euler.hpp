#pragma once

#include <complex>
#include <string>
#include <vector>

#include "geozeta/spectra.hpp"

namespace geozeta {

// A torus character of M, given by its integer weights against the holonomy
// angles.  Irreducible sigma for n = 3; for general odd n reducible objects
// are handled as weight multisets at the call sites that need them.
struct SigmaCharacter {
    std::vector<long> weight_vector; // floor((n-1)/2) entries
    std::string label;
};

// The nontrivial Weyl element flips the sign of the last weight.
SigmaCharacter weyl_flip(const SigmaCharacter& sigma);

enum class ZetaKind { selberg, ruelle, symmetrized_s, super_s };

struct EvalRequest {
    cdouble s{0.0, 0.0};
    ZetaKind zeta_kind = ZetaKind::selberg;
    SigmaCharacter sigma;
    double tail_tolerance = 1e-12; // budget for the truncated trace series
    double margin = 0.05;          // convergence abscissa safety margin
};

struct EvalResult {
    cdouble log_value{0.0, 0.0};
    double truncation_bound = 0.0;   // series_bound + spectrum_tail_bound
    long terms_used = 0;
    double series_bound = 0.0;       // omitted trace-series tails, all geodesics
    double spectrum_tail_bound = 0.0; // missing geodesics beyond the cutoff
    bool tail_conditional = false;   // true when the density is assumed, not generated
};

// Eigenvalues of the stable monodromy: e^{-l} e^{+-i theta_j} for each
// holonomy angle, n-1 values in total.
std::vector<cdouble> stable_eigenvalues(const PrimeGeodesic& c, int dimension);

// Eigenvalues of the k-th symmetric power: all degree-k monomials in the
// stable eigenvalues (multiset).
std::vector<cdouble> symmetric_power_eigenvalues(const std::vector<cdouble>& stable, int k);

// log of the local Selberg factor
//   sum_{k>=0} log det(1 - mu_{chi,sigma}(c) (x) S^k(P_c^s) e^{-(s+rho) l(c)}),
// branch fixed by the trace series.  Requires Re(s) > rho.
cdouble log_selberg_local(const PrimeGeodesic& c, cdouble s, const SigmaCharacter& sigma,
                          int dimension, double rho, double eps_tail);

// log of one zeta function as a sum of local logs over the spectrum, with a
// rigorous bound for the omitted series tails and a density-based bound for
// the geodesics missing beyond the cutoff.
EvalResult log_zeta(const LengthSpectrum& spectrum, const EvalRequest& req);

// Bound for the contribution of all geodesics with length > cutoff, under
// the generator's density e^{2 rho u}/u (reported conditional for ingested
// spectra).  Exposed for the empty-spectrum contract and diagnostics.
double spectrum_tail_bound(const LengthSpectrum& spectrum, const EvalRequest& req);

} // namespace geozeta
