#include "geozeta/fried.hpp"

#include <cmath>
#include <string>

#include "geozeta/errors.hpp"

namespace geozeta {

namespace {

constexpr double kRhoTolerance = 1e-12;

SigmaCharacter tensor_weight(const SigmaCharacter& sigma, const std::vector<long>& tau) {
    SigmaCharacter out = sigma;
    for (std::size_t j = 0; j < tau.size(); ++j) out.weight_vector[j] += tau[j];
    return out;
}

} // namespace

std::vector<FriedTerm> fried_decomposition(int dimension) {
    if (dimension < 3 || dimension % 2 == 0)
        throw ValidationError("dimension", "dimension must be odd and at least 3");
    const int rank = (dimension - 1) / 2;

    // The standard representation has the 2*rank weights +-e_1 .. +-e_rank.
    std::vector<std::vector<long>> basis;
    for (int j = 0; j < rank; ++j) {
        for (int sign : {+1, -1}) {
            std::vector<long> w(static_cast<std::size_t>(rank), 0);
            w[static_cast<std::size_t>(j)] = sign;
            basis.push_back(w);
        }
    }

    const int total = dimension - 1;
    std::vector<FriedTerm> terms;
    terms.reserve(static_cast<std::size_t>(dimension));
    for (int p = 0; p < dimension; ++p) {
        FriedTerm term;
        term.p = p;
        term.lambda = static_cast<double>(p);
        term.sign = (p % 2 == 0) ? 1 : -1;
        // All size-p subsets of the weight list; subset weights add.
        std::vector<int> idx(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
        if (p == 0) {
            term.tau_weights.push_back(std::vector<long>(static_cast<std::size_t>(rank), 0));
        } else {
            for (;;) {
                std::vector<long> sum(static_cast<std::size_t>(rank), 0);
                for (int i : idx)
                    for (std::size_t j = 0; j < sum.size(); ++j)
                        sum[j] += basis[static_cast<std::size_t>(i)][j];
                term.tau_weights.push_back(std::move(sum));
                int pos = p - 1;
                while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == total - (p - pos)) --pos;
                if (pos < 0) break;
                ++idx[static_cast<std::size_t>(pos)];
                for (int i = pos + 1; i < p; ++i)
                    idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
            }
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

FriedReport fried_check(const LengthSpectrum& spectrum, const SigmaCharacter& sigma, cdouble s,
                        double eps, double margin) {
    if (!(eps > 0.0)) throw ValidationError("tolerance", "eps must be positive");
    const double rho = spectrum.rho;
    const double expected_rho = static_cast<double>(spectrum.dimension - 1) / 2.0;
    if (std::abs(rho - expected_rho) > kRhoTolerance)
        throw ValidationError("rho-normalization",
                              "the shifted-argument identity requires rho = (n-1)/2, got rho = " +
                                  std::to_string(rho));
    if (!(s.real() > 2.0 * rho + margin))
        throw ConvergenceError("abscissa", "fried check requires Re(s) > 2 rho + margin");

    const std::vector<FriedTerm> terms = fried_decomposition(spectrum.dimension);
    std::size_t rhs_calls = 0;
    for (const FriedTerm& term : terms) rhs_calls += term.tau_weights.size();

    FriedReport report;

    EvalRequest lhs_req;
    lhs_req.s = s;
    lhs_req.zeta_kind = ZetaKind::ruelle;
    lhs_req.sigma = sigma;
    lhs_req.tail_tolerance = eps / 10.0;
    lhs_req.margin = margin;
    const EvalResult lhs = log_zeta(spectrum, lhs_req);
    report.lhs = lhs.log_value;
    report.lhs_series_bound = lhs.series_bound;
    report.terms_used = lhs.terms_used;

    const double rhs_call_tolerance = eps / (10.0 * static_cast<double>(rhs_calls));
    for (const FriedTerm& term : terms) {
        for (const std::vector<long>& tau : term.tau_weights) {
            EvalRequest req;
            req.s = s + cdouble{rho - term.lambda, 0.0};
            req.zeta_kind = ZetaKind::selberg;
            req.sigma = tensor_weight(sigma, tau);
            req.tail_tolerance = rhs_call_tolerance;
            // Shifted arguments satisfy Re(s) + rho - lambda > rho + margin
            // exactly when Re(s) > 2 rho + margin, already checked above.
            req.margin = margin;
            const EvalResult part = log_zeta(spectrum, req);
            report.rhs += static_cast<double>(term.sign) * part.log_value;
            report.rhs_series_bound += part.series_bound;
            report.terms_used += part.terms_used;
        }
    }

    report.residual = std::abs(report.lhs - report.rhs);
    return report;
}

} // namespace geozeta
