#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "geozeta/divisor.hpp"
#include "geozeta/numeric.hpp"

namespace geozeta {

struct ZeroEntry {
    cdouble z{0.0, 0.0};
    long multiplicity = 1;
};

// A zero multiset away from the origin.  A truncated set stores only the
// zeros with |z| <= radius_cutoff and declares a counting-function bound
// N(r) <= density_constant * r^declared_dimension for the rest; a complete
// set has no tail at all.
struct ZeroSet {
    std::vector<ZeroEntry> zeros;
    int declared_dimension = 3;
    bool truncated = false;
    double radius_cutoff = 0.0;
    double density_constant = 0.0;
    bool density_conditional = false; // density declared, not generated

    long total_multiplicity() const;
    double max_radius() const;
};

// Validating constructor: no zero at the origin, multiplicities >= 1.
ZeroSet make_zero_set(std::vector<ZeroEntry> zeros, int declared_dimension);

// Weierstrass elementary factor E(u,k) = (1-u) exp(u + u^2/2 + ... + u^k/k).
cdouble elementary_factor(cdouble u, int k);

// log E(u,k) on the branch fixed by the tail series -sum_{j>k} u^j/j for
// |u| <= 1/2 and by the principal log(1-u) otherwise; the two agree on the
// overlap because Re(1-u) > 0 there.
cdouble log_elementary_factor(cdouble u, int k);

struct ExponentEstimate {
    double value = 0.0;
    double fit_residual = 0.0;
    bool bounded_set = false; // radius spread too small for a growth estimate
};

// Least-squares slope of log N(r) against log r over the outer half of the
// radius range: a numerical stand-in for inf{t : sum |z|^{-t} < inf}.
ExponentEstimate convergence_exponent(const ZeroSet& z);

struct GenusEstimate {
    int value = 0;
    bool clamped = false; // estimate exceeded the declared dimension
};

// Smallest p with sum |z|^{-(p+1)} numerically convergent (shell-sum ratio
// test at geometric checkpoints), clamped to the declared dimension.
// Complete finite sets have genus 0 exactly.
GenusEstimate genus_of(const ZeroSet& z);

// Partial sum of mult * |z|^{-t} over the stored zeros (diagnostic).
double power_sum(const ZeroSet& z, double t);

struct ProductResult {
    cdouble log_value{0.0, 0.0};
    bool is_zero = false;
    long zero_multiplicity = 0;
    double tail_bound = 0.0;      // bound on the omitted |log| mass
    bool tail_conditional = false;
    cdouble value() const; // exp(log_value), or 0 at a hit zero
};

// W(s) = prod E(s/z, p) accumulated in log space.  For truncated sets the
// omitted zeros are bounded through the declared density; the bound must
// come in under eps_tail or the evaluation is refused.
ProductResult canonical_product(const ZeroSet& z, int genus, cdouble s, double eps_tail);

// Zeros (positive orders), poles (negative orders) and the origin order of a
// divisor, as canonical-product inputs.
struct DivisorSplit {
    ZeroSet z1;
    ZeroSet z2;
    long m0 = 0;
};
DivisorSplit split_divisor(const Divisor& divisor, int declared_dimension);

struct Factorization {
    ZeroSet z1;
    ZeroSet z2;
    int p1 = 0;
    int p2 = 0;
    long m0 = 0;
    std::vector<cdouble> g_coefficients; // monomial, constant first; empty = 0
};

// Validating constructor: genus fields must match genus_of where it is
// defined, and deg g <= declared dimension.
Factorization make_factorization(ZeroSet z1, ZeroSet z2, int p1, int p2, long m0,
                                 std::vector<cdouble> g_coefficients);

struct GFit {
    std::vector<cdouble> coefficients; // monomial, constant first
    double rms_residual = 0.0;
};

// Recover g from samples of log f along a connected path:
//   g(s) = log f(s) + log W2(s) - log W1(s) - m0 Log s,
// with imaginary jumps beyond pi unwound, then a least-squares polynomial of
// the requested degree (<= declared dimension) in a centered, scaled basis.
GFit fit_g(const std::vector<std::pair<cdouble, cdouble>>& f_log_samples,
           const Factorization& fact, int degree, double eps_tail);

struct FactorizationValue {
    cdouble log_value{0.0, 0.0};
    cdouble value{0.0, 0.0};
    bool is_zero = false;
    long zero_order = 0;
    bool is_pole = false;
    long pole_order = 0;
    double tail_bound = 0.0;
    bool tail_conditional = false;
};

// s^{m0} e^{g(s)} W1(s)/W2(s), in log space; zero/pole hits are reported
// with their orders instead of a value.
FactorizationValue evaluate_factorization(const Factorization& fact, cdouble s, double eps_tail);

struct OrderEstimate {
    double order = 0.0;
    double rms_residual = 0.0;
    std::vector<std::pair<double, double>> points; // (r, log log M(r))
};

// Growth order from a log-scale evaluator (s -> log f(s)): for each radius,
// log M(r) = max over angular samples of Re log f, and the order is the
// slope of log log M(r) against log r over the larger half of the radii.
// The evaluator works in log scale so that functions whose modulus overflows
// a double stay measurable.
OrderEstimate estimate_order(const std::function<cdouble(cdouble)>& log_evaluator,
                             const std::vector<double>& radii, int angular_samples = 64);

// JSON document {"m0":..., "g":[[re,im]...], "z1": {...}, "z2": {...}}.
void save_factorization(std::ostream& out, const Factorization& fact);
Factorization load_factorization(std::istream& in);

} // namespace geozeta
