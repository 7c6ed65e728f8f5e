#include "geozeta/reference.hpp"

#include <cmath>

#include "geozeta/errors.hpp"

namespace geozeta::reference {

namespace {

constexpr int kMaxSymmetricPower = 4096;

cdouble weight_phase(const SigmaCharacter& sigma, const std::vector<double>& angles) {
    double arg = 0.0;
    for (std::size_t j = 0; j < angles.size(); ++j)
        arg += static_cast<double>(sigma.weight_vector[j]) * angles[j];
    return std::polar(1.0, arg);
}

cdouble log_ruelle_local(const PrimeGeodesic& c, cdouble s, const SigmaCharacter& sigma,
                         double eps_tail) {
    const cdouble phase = weight_phase(sigma, c.holonomy_angles);
    std::vector<cdouble> mu;
    mu.reserve(c.twist_eigenvalues.size());
    for (const cdouble& chi : c.twist_eigenvalues) mu.push_back(chi * phase);
    if (mu.empty()) return cdouble{0.0, 0.0};
    return log_det_one_minus(mu, std::exp(-s * c.length), eps_tail).value;
}

} // namespace

cdouble log_selberg_local_monomial(const PrimeGeodesic& c, cdouble s,
                                   const SigmaCharacter& sigma, int dimension, double rho,
                                   double eps_tail) {
    if (!(s.real() > rho))
        throw ConvergenceError("abscissa", "local factor requires Re(s) > rho");
    const cdouble phase = weight_phase(sigma, c.holonomy_angles);
    std::vector<cdouble> mu;
    mu.reserve(c.twist_eigenvalues.size());
    for (const cdouble& chi : c.twist_eigenvalues) mu.push_back(chi * phase);
    if (mu.empty()) return cdouble{0.0, 0.0};

    const double dim_chi = static_cast<double>(mu.size());
    const cdouble t = std::exp(-(s + rho) * c.length);
    const double tabs = std::abs(t);
    const double q = std::exp(-c.length);
    const std::vector<cdouble> stable = stable_eigenvalues(c, dimension);

    cdouble acc{0.0, 0.0};
    for (int k = 0; k <= kMaxSymmetricPower; ++k) {
        const std::vector<cdouble> sym = symmetric_power_eigenvalues(stable, k);
        std::vector<cdouble> eigs;
        eigs.reserve(mu.size() * sym.size());
        for (const cdouble& me : mu)
            for (const cdouble& se : sym) eigs.push_back(me * se);
        acc += log_det_one_minus(eigs, t, eps_tail / 2.0).value;

        // Tail over the remaining powers: the k-th term is bounded by
        // dim_chi dim(S^k) q^k |t| / (1 - |t|), and dim(S^k) grows by the
        // factor (k+n-1)/(k+1); once q (k+n-1)/(k+1) < 1 the tail is
        // geometric.
        const double dim_sym = static_cast<double>(sym.size());
        const double ratio = q * static_cast<double>(k + dimension - 1) /
                             static_cast<double>(k + 1);
        if (ratio < 1.0) {
            const double term = dim_chi * dim_sym * std::pow(q, k) * tabs / (1.0 - tabs);
            const double tail = term * ratio / (1.0 - ratio);
            if (tail <= eps_tail / 2.0) return acc;
        }
    }
    throw ConvergenceError("series-stall",
                           "symmetric-power expansion did not reach the requested tolerance");
}

EvalResult log_zeta_serial(const LengthSpectrum& spectrum, const EvalRequest& req) {
    if (!(req.margin > 0.0)) throw ValidationError("margin", "margin must be positive");
    if (!(req.tail_tolerance > 0.0))
        throw ValidationError("tolerance", "tail tolerance must be positive");
    const double abscissa =
        req.zeta_kind == ZetaKind::ruelle ? 2.0 * spectrum.rho : spectrum.rho;
    if (!(req.s.real() > abscissa + req.margin))
        throw ConvergenceError("abscissa",
                              "Re(s) must exceed the convergence abscissa plus the margin");

    std::vector<std::pair<SigmaCharacter, double>> sweeps;
    switch (req.zeta_kind) {
        case ZetaKind::selberg:
        case ZetaKind::ruelle:
            sweeps = {{req.sigma, 1.0}};
            break;
        case ZetaKind::symmetrized_s:
            sweeps = {{req.sigma, 1.0}, {weyl_flip(req.sigma), 1.0}};
            break;
        case ZetaKind::super_s:
            sweeps = {{req.sigma, 1.0}, {weyl_flip(req.sigma), -1.0}};
            break;
    }

    EvalResult result;
    result.spectrum_tail_bound = spectrum_tail_bound(spectrum, req);
    result.tail_conditional = spectrum.provenance == SpectrumProvenance::ingested;
    if (spectrum.geodesics.empty()) {
        result.truncation_bound = result.spectrum_tail_bound;
        return result;
    }

    double weight_total = 0.0;
    for (const PrimeGeodesic& c : spectrum.geodesics)
        weight_total += static_cast<double>(c.multiplicity);
    const double eps_local =
        req.tail_tolerance / (weight_total * static_cast<double>(sweeps.size()));

    for (const PrimeGeodesic& c : spectrum.geodesics) {
        const double mult = static_cast<double>(c.multiplicity);
        for (const auto& [sigma, sign] : sweeps) {
            const cdouble local =
                req.zeta_kind == ZetaKind::ruelle
                    ? log_ruelle_local(c, req.s, sigma, eps_local)
                    : log_selberg_local_monomial(c, req.s, sigma, spectrum.dimension,
                                                 spectrum.rho, eps_local);
            result.log_value += sign * mult * local;
            result.series_bound += mult * eps_local;
        }
        result.terms_used += 1;
    }
    result.truncation_bound = result.series_bound + result.spectrum_tail_bound;
    return result;
}

cdouble direct_canonical_product(const ZeroSet& z, int genus, cdouble s) {
    cdouble prod{1.0, 0.0};
    for (const ZeroEntry& e : z.zeros) {
        const cdouble factor = elementary_factor(s / e.z, genus);
        for (long m = 0; m < e.multiplicity; ++m) prod *= factor;
    }
    return prod;
}

} // namespace geozeta::reference
