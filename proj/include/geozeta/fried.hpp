#pragma once

#include <vector>

#include "geozeta/euler.hpp"
#include "geozeta/spectra.hpp"

namespace geozeta {

// One exterior degree of the dynamical identity
//   log Z_R(s, sigma) = sum_p (-1)^p sum_{w in tau_p} log Z_S(s + rho - lambda_p, w + sigma).
// tau_weights is the weight multiset of the p-th exterior power of the
// standard (n-1)-dimensional torus representation with weights
// {+-e_1, ..., +-e_{(n-1)/2}}; weights of a tensor product add.
struct FriedTerm {
    int p = 0;
    double lambda = 0.0; // equals p: each exterior degree carries unit A-weight
    int sign = 1;        // (-1)^p
    std::vector<std::vector<long>> tau_weights;
};

// Exterior-power decomposition for odd dimension >= 3, p = 0..n-1, computed
// by brute-force expansion of degree-p subsets of the torus weights.
std::vector<FriedTerm> fried_decomposition(int dimension);

struct FriedReport {
    double residual = 0.0;
    cdouble lhs{0.0, 0.0}; // log Z_R(s, sigma)
    cdouble rhs{0.0, 0.0}; // alternating sum of shifted Selberg logs
    // Series bounds only: geodesics missing beyond the shared cutoff
    // contribute identically to both sides and cancel in the residual.
    double lhs_series_bound = 0.0;
    double rhs_series_bound = 0.0;
    long terms_used = 0;
};

// Evaluate both sides of the identity on the same spectrum with per-side
// tail tolerance eps/10 and return the residual with its bounds.
// Requires Re(s) > 2 rho + margin and the geometric normalization
// rho = (n-1)/2 that fixes lambda_p = p.
FriedReport fried_check(const LengthSpectrum& spectrum, const SigmaCharacter& sigma, cdouble s,
                        double eps, double margin = 0.05);

} // namespace geozeta
