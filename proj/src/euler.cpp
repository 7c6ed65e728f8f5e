#include "geozeta/euler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <omp.h>

#include "geozeta/errors.hpp"

namespace geozeta {

namespace {

// Fixed block size for the parallel reduction.  Partial sums are produced
// per block and combined serially in block order, so the result is
// byte-identical for any thread count.
constexpr long kBlock = 2048;
constexpr long kMaxSeriesTerms = 200000;

struct LocalLog {
    cdouble value{0.0, 0.0};
    double tail = 0.0;
    long terms = 0;
};

double weight_argument(const SigmaCharacter& sigma, const std::vector<double>& angles) {
    double arg = 0.0;
    for (std::size_t j = 0; j < angles.size(); ++j)
        arg += static_cast<double>(sigma.weight_vector[j]) * angles[j];
    return arg;
}

// Eigenvalues of mu_{chi,sigma}(c): each twist eigenvalue times the character
// value e^{i <w, theta_c>}.
std::vector<cdouble> mu_eigenvalues(const PrimeGeodesic& c, const SigmaCharacter& sigma) {
    const cdouble phase = std::polar(1.0, weight_argument(sigma, c.holonomy_angles));
    std::vector<cdouble> mu;
    mu.reserve(c.twist_eigenvalues.size());
    for (const cdouble& chi : c.twist_eigenvalues) mu.push_back(chi * phase);
    return mu;
}

void check_sigma(const SigmaCharacter& sigma, int dimension) {
    const std::size_t rank = static_cast<std::size_t>((dimension - 1) / 2);
    if (sigma.weight_vector.size() != rank)
        throw ValidationError("sigma-rank", "weight vector has " +
                                                std::to_string(sigma.weight_vector.size()) +
                                                " entries, expected " + std::to_string(rank));
}

// log det over the full symmetric-power tower, as the trace series
//   -sum_{m>=1} tr(mu^m) e^{-m(s+rho)l} / (m prod_i (1 - a_i^m)),
// where a_i are the stable eigenvalues.  The closed denominator is the
// geometric sum over all symmetric powers at once.
LocalLog selberg_local(const PrimeGeodesic& c, cdouble s, const SigmaCharacter& sigma,
                       int dimension, double rho, double eps_tail) {
    LocalLog out;
    const std::vector<cdouble> mu = mu_eigenvalues(c, sigma);
    if (mu.empty()) return out;

    const double l = c.length;
    const cdouble t = std::exp(-(s + rho) * l);
    const double tabs = std::abs(t);
    const double dim = static_cast<double>(mu.size());
    const double q = std::exp(-l);
    const double denom_floor = std::pow(1.0 - q, dimension - 1);

    const std::vector<cdouble> a = stable_eigenvalues(c, dimension);
    std::vector<cdouble> apow = a;
    std::vector<cdouble> mupow = mu;
    cdouble tpow = t;
    double tabs_pow = tabs; // |t|^m

    for (long m = 1;; ++m) {
        cdouble tr{0.0, 0.0};
        for (const cdouble& e : mupow) tr += e;
        cdouble denom{1.0, 0.0};
        for (const cdouble& ap : apow) denom *= (1.0 - ap);
        out.value -= tr * tpow / (static_cast<double>(m) * denom);
        out.terms = m;

        tabs_pow *= tabs;
        const double tail =
            dim * tabs_pow / (static_cast<double>(m + 1) * (1.0 - tabs) * denom_floor);
        if (tail <= eps_tail) {
            out.tail = tail;
            return out;
        }
        if (m >= kMaxSeriesTerms)
            throw ConvergenceError("series-stall",
                                   "local factor series did not reach the requested tolerance");
        for (std::size_t i = 0; i < apow.size(); ++i) apow[i] *= a[i];
        for (std::size_t i = 0; i < mupow.size(); ++i) mupow[i] *= mu[i];
        tpow *= t;
    }
}

// log det(1 - mu e^{-s l}); the dynamical exponent (-1)^{n-1} is +1 in odd
// dimension, so the local log enters with a plus sign.
LocalLog ruelle_local(const PrimeGeodesic& c, cdouble s, const SigmaCharacter& sigma,
                      double eps_tail) {
    LocalLog out;
    const std::vector<cdouble> mu = mu_eigenvalues(c, sigma);
    if (mu.empty()) return out;

    const cdouble t = std::exp(-s * c.length);
    const double tabs = std::abs(t);
    const double dim = static_cast<double>(mu.size());

    std::vector<cdouble> mupow = mu;
    cdouble tpow = t;
    double tabs_pow = tabs;

    for (long m = 1;; ++m) {
        cdouble tr{0.0, 0.0};
        for (const cdouble& e : mupow) tr += e;
        out.value -= tr * tpow / static_cast<double>(m);
        out.terms = m;

        tabs_pow *= tabs;
        const double tail = dim * tabs_pow / (static_cast<double>(m + 1) * (1.0 - tabs));
        if (tail <= eps_tail) {
            out.tail = tail;
            return out;
        }
        if (m >= kMaxSeriesTerms)
            throw ConvergenceError("series-stall",
                                   "local factor series did not reach the requested tolerance");
        for (std::size_t i = 0; i < mupow.size(); ++i) mupow[i] *= mu[i];
        tpow *= t;
    }
}

struct Sweep {
    SigmaCharacter sigma;
    double sign = 1.0;
    bool ruelle = false;
};

std::vector<Sweep> sweeps_for(const EvalRequest& req) {
    switch (req.zeta_kind) {
        case ZetaKind::selberg:
            return {{req.sigma, 1.0, false}};
        case ZetaKind::ruelle:
            return {{req.sigma, 1.0, true}};
        case ZetaKind::symmetrized_s:
            return {{req.sigma, 1.0, false}, {weyl_flip(req.sigma), 1.0, false}};
        case ZetaKind::super_s:
            return {{req.sigma, 1.0, false}, {weyl_flip(req.sigma), -1.0, false}};
    }
    throw ValidationError("zeta-kind", "unknown zeta kind");
}

double abscissa_for(ZetaKind kind, double rho) {
    return kind == ZetaKind::ruelle ? 2.0 * rho : rho;
}

} // namespace

SigmaCharacter weyl_flip(const SigmaCharacter& sigma) {
    SigmaCharacter flipped = sigma;
    if (!flipped.weight_vector.empty()) flipped.weight_vector.back() *= -1;
    flipped.label = sigma.label.empty() ? "w*sigma" : "w*" + sigma.label;
    return flipped;
}

std::vector<cdouble> stable_eigenvalues(const PrimeGeodesic& c, int dimension) {
    const std::size_t rank = static_cast<std::size_t>((dimension - 1) / 2);
    if (c.holonomy_angles.size() != rank)
        throw ValidationError("holonomy-rank", "geodesic carries " +
                                                   std::to_string(c.holonomy_angles.size()) +
                                                   " holonomy angles, expected " +
                                                   std::to_string(rank));
    const double q = std::exp(-c.length);
    std::vector<cdouble> eigs;
    eigs.reserve(2 * rank);
    for (double theta : c.holonomy_angles) {
        eigs.push_back(std::polar(q, theta));
        eigs.push_back(std::polar(q, -theta));
    }
    return eigs;
}

std::vector<cdouble> symmetric_power_eigenvalues(const std::vector<cdouble>& stable, int k) {
    if (k < 0) throw ValidationError("symmetric-power", "negative power");
    std::vector<cdouble> out;
    if (k == 0) {
        out.push_back(cdouble{1.0, 0.0});
        return out;
    }
    if (stable.empty()) return out;
    // Enumerate all non-decreasing index tuples of length k.
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (;;) {
        cdouble prod{1.0, 0.0};
        for (std::size_t i : idx) prod *= stable[i];
        out.push_back(prod);
        long pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == stable.size() - 1) --pos;
        if (pos < 0) break;
        const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
        for (std::size_t i = static_cast<std::size_t>(pos); i < idx.size(); ++i) idx[i] = next;
    }
    return out;
}

cdouble log_selberg_local(const PrimeGeodesic& c, cdouble s, const SigmaCharacter& sigma,
                          int dimension, double rho, double eps_tail) {
    check_sigma(sigma, dimension);
    if (!(s.real() > rho))
        throw ConvergenceError("abscissa", "local factor requires Re(s) > rho");
    if (!(eps_tail > 0.0)) throw ValidationError("tolerance", "tail tolerance must be positive");
    return selberg_local(c, s, sigma, dimension, rho, eps_tail).value;
}

double spectrum_tail_bound(const LengthSpectrum& spectrum, const EvalRequest& req) {
    const double x = req.s.real();
    const double rho = spectrum.rho;
    const double L = spectrum.cutoff;
    const int n = spectrum.dimension;

    std::size_t max_dim = 1;
    for (const PrimeGeodesic& c : spectrum.geodesics)
        max_dim = std::max(max_dim, c.twist_eigenvalues.size());
    const double dim = static_cast<double>(max_dim);

    // Missing geodesics have length > L; their count is bounded by the
    // density e^{2 rho u}/u.  Integrating the per-geodesic bound gives the
    // closed forms below.
    if (req.zeta_kind == ZetaKind::ruelle) {
        const double gap = x - 2.0 * rho;
        if (!(gap > 0.0)) throw ConvergenceError("abscissa", "tail bound requires Re(s) > 2 rho");
        const double k = 1.0 / (1.0 - std::exp(-x * L));
        return dim * k * std::exp(-gap * L) / (L * gap);
    }
    const double gap = x - rho;
    if (!(gap > 0.0)) throw ConvergenceError("abscissa", "tail bound requires Re(s) > rho");
    const double k = 1.0 / (std::pow(1.0 - std::exp(-L), n - 1) *
                            (1.0 - std::exp(-(x + rho) * L)));
    const double one = dim * k * std::exp(-gap * L) / (L * gap);
    const bool doubled = req.zeta_kind == ZetaKind::symmetrized_s ||
                         req.zeta_kind == ZetaKind::super_s;
    return doubled ? 2.0 * one : one;
}

EvalResult log_zeta(const LengthSpectrum& spectrum, const EvalRequest& req) {
    check_sigma(req.sigma, spectrum.dimension);
    if (!(req.margin > 0.0)) throw ValidationError("margin", "margin must be positive");
    if (!(req.tail_tolerance > 0.0))
        throw ValidationError("tolerance", "tail tolerance must be positive");
    const double abscissa = abscissa_for(req.zeta_kind, spectrum.rho);
    if (!(req.s.real() > abscissa + req.margin))
        throw ConvergenceError("abscissa",
                              "Re(s) must exceed the convergence abscissa plus the margin");

    const std::vector<Sweep> sweeps = sweeps_for(req);

    EvalResult result;
    result.spectrum_tail_bound = spectrum_tail_bound(spectrum, req);
    result.tail_conditional = spectrum.provenance == SpectrumProvenance::ingested;

    const std::vector<PrimeGeodesic>& gs = spectrum.geodesics;
    const long count = static_cast<long>(gs.size());
    if (count == 0) {
        result.truncation_bound = result.spectrum_tail_bound;
        return result;
    }

    double weight_total = 0.0;
    for (const PrimeGeodesic& c : gs) weight_total += static_cast<double>(c.multiplicity);
    const double eps_local =
        req.tail_tolerance / (weight_total * static_cast<double>(sweeps.size()));

    struct BlockPartial {
        cdouble value{0.0, 0.0};
        double tail = 0.0;
        long terms = 0;
    };
    const long nblocks = (count + kBlock - 1) / kBlock;
    std::vector<BlockPartial> partials(static_cast<std::size_t>(nblocks));
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < nblocks; ++b) {
        if (failure) continue;
        try {
            BlockPartial part;
            const long lo = b * kBlock;
            const long hi = std::min(count, lo + kBlock);
            for (long i = lo; i < hi; ++i) {
                const PrimeGeodesic& c = gs[static_cast<std::size_t>(i)];
                const double mult = static_cast<double>(c.multiplicity);
                for (const Sweep& sweep : sweeps) {
                    const LocalLog local =
                        sweep.ruelle
                            ? ruelle_local(c, req.s, sweep.sigma, eps_local)
                            : selberg_local(c, req.s, sweep.sigma, spectrum.dimension,
                                            spectrum.rho, eps_local);
                    part.value += sweep.sign * mult * local.value;
                    part.tail += mult * local.tail;
                    part.terms += local.terms;
                }
            }
            partials[static_cast<std::size_t>(b)] = part;
        } catch (...) {
#pragma omp critical(geozeta_log_zeta_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (const BlockPartial& part : partials) {
        result.log_value += part.value;
        result.series_bound += part.tail;
        result.terms_used += part.terms;
    }
    result.truncation_bound = result.series_bound + result.spectrum_tail_bound;
    return result;
}

} // namespace geozeta
