#include "geozeta/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "geozeta/divisor.hpp"
#include "geozeta/errors.hpp"
#include "geozeta/euler.hpp"
#include "geozeta/fried.hpp"
#include "geozeta/hadamard.hpp"
#include "geozeta/spectra.hpp"

namespace geozeta {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Flag parsing helpers
// ---------------------------------------------------------------------------

double parse_real(const std::string& text, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty())
        throw ValidationError("flag", std::string("cannot parse ") + what + ": '" + text + "'");
    return v;
}

// RE, RE+IMi, RE-IMi, IMi
cdouble parse_complex(const std::string& text) {
    if (text.empty()) throw ValidationError("flag", "empty complex literal");
    if (text.back() == 'i') {
        const std::string body = text.substr(0, text.size() - 1);
        // Find the split sign of RE+IMi: a +/- not at position 0 and not
        // part of an exponent.
        for (std::size_t i = body.size(); i-- > 1;) {
            const char c = body[i];
            if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                const std::string re = body.substr(0, i);
                std::string im = body.substr(i);
                if (im == "+") im = "1";
                if (im == "-") im = "-1";
                return {parse_real(re, "real part"), parse_real(im, "imaginary part")};
            }
        }
        const std::string im = body.empty() ? "1" : body;
        return {0.0, parse_real(im, "imaginary part")};
    }
    return {parse_real(text, "real part"), 0.0};
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<long> parse_sigma(const std::string& text, std::size_t rank) {
    if (text.empty()) return std::vector<long>(rank, 0);
    std::vector<long> weights;
    for (const std::string& part : split(text, ',')) {
        char* end = nullptr;
        const long v = std::strtol(part.c_str(), &end, 10);
        if (end != part.c_str() + part.size() || part.empty())
            throw ValidationError("flag", "cannot parse sigma weight '" + part + "'");
        weights.push_back(v);
    }
    return weights;
}

// re0:re1:imax:steps -> a connected segment of sample points
std::vector<cdouble> parse_grid(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 4)
        throw ValidationError("flag", "--grid expects re0:re1:imax:steps");
    const double re0 = parse_real(parts[0], "grid re0");
    const double re1 = parse_real(parts[1], "grid re1");
    const double imax = parse_real(parts[2], "grid imax");
    const long steps = std::strtol(parts[3].c_str(), nullptr, 10);
    if (steps < 1) throw ValidationError("flag", "--grid needs at least one step");
    std::vector<cdouble> points;
    points.reserve(static_cast<std::size_t>(steps));
    for (long j = 0; j < steps; ++j) {
        const double t = steps == 1 ? 0.0
                                    : static_cast<double>(j) / static_cast<double>(steps - 1);
        points.push_back(cdouble{re0 + t * (re1 - re0), imax});
    }
    return points;
}

// r0:r1:count -> log-spaced radii
std::vector<double> parse_radii(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3)
        throw ValidationError("flag", "--radii expects r0:r1:count");
    const double r0 = parse_real(parts[0], "radius r0");
    const double r1 = parse_real(parts[1], "radius r1");
    const long count = std::strtol(parts[2].c_str(), nullptr, 10);
    if (!(r0 > 0.0) || !(r1 > r0) || count < 2)
        throw ValidationError("flag", "--radii needs 0 < r0 < r1 and count >= 2");
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(count));
    const double lr0 = std::log(r0);
    const double lr1 = std::log(r1);
    for (long j = 0; j < count; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(count - 1);
        radii.push_back(std::exp(lr0 + t * (lr1 - lr0)));
    }
    return radii;
}

ZetaKind parse_zeta_kind(const std::string& name) {
    if (name == "selberg") return ZetaKind::selberg;
    if (name == "ruelle") return ZetaKind::ruelle;
    if (name == "sym") return ZetaKind::symmetrized_s;
    if (name == "super") return ZetaKind::super_s;
    throw ValidationError("flag", "--zeta must be selberg|ruelle|sym|super");
}

// ---------------------------------------------------------------------------
// File plumbing with provenance digests
// ---------------------------------------------------------------------------

struct LoadedFile {
    std::string path;
    std::string content;
    std::string digest;
};

LoadedFile read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("input", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    LoadedFile f;
    f.path = path;
    f.content = buf.str();
    f.digest = fnv1a64_hex(f.content);
    return f;
}

LengthSpectrum load_spectrum_file(const LoadedFile& f) {
    std::istringstream in(f.content);
    return load_length_spectrum(in);
}

SpectralInput load_spectral_file(const LoadedFile& f) {
    std::istringstream in(f.content);
    return load_spectral_input(in);
}

void write_artifact(const std::string& out_path, std::ostream& fallback,
                    const std::string& content) {
    if (out_path.empty()) {
        fallback << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("output", "cannot write '" + out_path + "'");
    out << content;
}

json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Verb implementations
// ---------------------------------------------------------------------------

struct GenSpectrumOptions {
    int dimension = 3;
    double rho = 0.0; // 0 = default (n-1)/2
    double cutoff = 0.0;
    unsigned long long seed = 0;
    double density_scale = 1.0;
    std::string out_path;
};

int cmd_gen_spectrum(const GenSpectrumOptions& opt, std::ostream& out) {
    const double rho =
        opt.rho > 0.0 ? opt.rho : static_cast<double>(opt.dimension - 1) / 2.0;
    const LengthSpectrum spectrum =
        generate_length_spectrum(opt.dimension, rho, opt.cutoff, opt.seed, opt.density_scale);
    std::ostringstream artifact;
    save_length_spectrum(spectrum, artifact);
    write_artifact(opt.out_path, out, artifact.str());
    if (!opt.out_path.empty()) {
        json summary;
        summary["artifact"] = opt.out_path;
        summary["count"] = spectrum.geodesics.size();
        summary["digest"] = fnv1a64_hex(artifact.str());
        summary["expected_count"] =
            geodesic_count_estimate(rho, opt.cutoff, opt.density_scale);
        summary["seed"] = opt.seed;
        out << summary.dump(2) << '\n';
    }
    return 0;
}

struct GenSpectralOptions {
    int dimension = 3;
    double weyl_constant = 1.0;
    double r_max = 0.0;
    std::string case_tag = "A";
    unsigned long long seed = 0;
    std::string out_path;
};

int cmd_gen_spectral(const GenSpectralOptions& opt, std::ostream& out) {
    if (opt.case_tag != "A" && opt.case_tag != "B")
        throw ValidationError("flag", "--case must be A or B");
    const CaseTag tag = opt.case_tag == "A" ? CaseTag::A : CaseTag::B;
    const SpectralInput input =
        generate_spectral_input(opt.dimension, opt.weyl_constant, opt.r_max, tag, opt.seed);
    std::ostringstream artifact;
    save_spectral_input(input, artifact);
    write_artifact(opt.out_path, out, artifact.str());
    if (!opt.out_path.empty()) {
        json summary;
        summary["artifact"] = opt.out_path;
        summary["laplace_count"] = input.laplace_spectrum.size();
        summary["dirac_count"] = input.dirac_spectrum.size();
        summary["digest"] = fnv1a64_hex(artifact.str());
        summary["seed"] = opt.seed;
        out << summary.dump(2) << '\n';
    }
    return 0;
}

struct EvalOptions {
    std::string spectrum_path;
    std::string zeta;
    std::string sigma;
    std::string s_text;
    std::string grid_text;
    double tail_tol = 1e-12;
    double margin = 0.05;
    std::string format = "json";
    std::string out_path;
};

json eval_point_json(cdouble s, const EvalResult& r) {
    json obj;
    obj["s"] = complex_json(s);
    obj["log_value"] = complex_json(r.log_value);
    obj["truncation_bound"] = r.truncation_bound;
    obj["series_bound"] = r.series_bound;
    obj["spectrum_tail_bound"] = r.spectrum_tail_bound;
    obj["tail_conditional"] = r.tail_conditional;
    obj["terms_used"] = r.terms_used;
    return obj;
}

int cmd_eval(const EvalOptions& opt, std::ostream& out) {
    if (opt.s_text.empty() == opt.grid_text.empty())
        throw ValidationError("flag", "exactly one of --s and --grid is required");
    if (opt.format != "json" && opt.format != "csv")
        throw ValidationError("flag", "--format must be json or csv");

    const LoadedFile file = read_file(opt.spectrum_path);
    const LengthSpectrum spectrum = load_spectrum_file(file);

    EvalRequest req;
    req.zeta_kind = parse_zeta_kind(opt.zeta);
    req.sigma.weight_vector = parse_sigma(opt.sigma, spectrum.holonomy_rank());
    req.sigma.label = "sigma";
    req.tail_tolerance = opt.tail_tol;
    req.margin = opt.margin;

    const std::vector<cdouble> points =
        opt.s_text.empty() ? parse_grid(opt.grid_text)
                           : std::vector<cdouble>{parse_complex(opt.s_text)};

    std::vector<EvalResult> results;
    results.reserve(points.size());
    for (cdouble s : points) {
        req.s = s;
        results.push_back(log_zeta(spectrum, req));
    }

    std::ostringstream artifact;
    if (opt.format == "csv") {
        artifact << "s_re,s_im,log_re,log_im,series_bound,spectrum_tail_bound,"
                    "truncation_bound,terms_used,tail_conditional\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const EvalResult& r = results[i];
            artifact << format_double(points[i].real()) << ','
                     << format_double(points[i].imag()) << ','
                     << format_double(r.log_value.real()) << ','
                     << format_double(r.log_value.imag()) << ','
                     << format_double(r.series_bound) << ','
                     << format_double(r.spectrum_tail_bound) << ','
                     << format_double(r.truncation_bound) << ',' << r.terms_used << ','
                     << (r.tail_conditional ? 1 : 0) << '\n';
        }
    } else {
        json doc;
        if (points.size() == 1) {
            doc["result"] = eval_point_json(points[0], results[0]);
        } else {
            json arr = json::array();
            for (std::size_t i = 0; i < points.size(); ++i)
                arr.push_back(eval_point_json(points[i], results[i]));
            doc["results"] = std::move(arr);
        }
        doc["provenance"] = {{"spectrum", file.digest},
                             {"zeta", opt.zeta},
                             {"sigma", req.sigma.weight_vector},
                             {"tail_tolerance", opt.tail_tol},
                             {"margin", opt.margin}};
        artifact << doc.dump(2) << '\n';
    }
    write_artifact(opt.out_path, out, artifact.str());
    return 0;
}

struct FriedOptions {
    std::string spectrum_path;
    std::string sigma;
    std::string s_text;
    double tail_tol = 1e-12;
    double margin = 0.05;
    std::string out_path;
};

int cmd_fried_check(const FriedOptions& opt, std::ostream& out) {
    const LoadedFile file = read_file(opt.spectrum_path);
    const LengthSpectrum spectrum = load_spectrum_file(file);
    SigmaCharacter sigma;
    sigma.weight_vector = parse_sigma(opt.sigma, spectrum.holonomy_rank());
    sigma.label = "sigma";
    const cdouble s = parse_complex(opt.s_text);

    const FriedReport report = fried_check(spectrum, sigma, s, opt.tail_tol, opt.margin);

    json doc;
    doc["residual"] = report.residual;
    doc["bound"] = report.lhs_series_bound + report.rhs_series_bound;
    doc["ok"] = report.residual <= report.lhs_series_bound + report.rhs_series_bound;
    doc["lhs"] = complex_json(report.lhs);
    doc["rhs"] = complex_json(report.rhs);
    doc["lhs_series_bound"] = report.lhs_series_bound;
    doc["rhs_series_bound"] = report.rhs_series_bound;
    doc["terms_used"] = report.terms_used;
    doc["provenance"] = {{"spectrum", file.digest},
                         {"sigma", sigma.weight_vector},
                         {"s", complex_json(s)},
                         {"tail_tolerance", opt.tail_tol},
                         {"margin", opt.margin}};
    write_artifact(opt.out_path, out, doc.dump(2) + "\n");
    return 0;
}

struct DivisorOptions {
    std::string spectral_path;
    std::string zeta;
    std::string format = "json";
    std::string out_path;
};

Divisor divisor_for(const SpectralInput& input, const std::string& zeta) {
    if (zeta == "selberg")
        return input.case_tag == CaseTag::A ? divisor_case_a(input)
                                            : divisor_selberg_case_b(input);
    if (zeta == "sym") return divisor_symmetrized(input);
    if (zeta == "super") return divisor_super(input);
    throw ValidationError("flag", "--zeta must be selberg|sym|super for divisors");
}

json divisor_json(const Divisor& d) {
    json arr = json::array();
    for (const DivisorPoint& pt : d.points)
        arr.push_back({{"location", complex_json(pt.location)}, {"order", pt.order}});
    return arr;
}

int cmd_divisor(const DivisorOptions& opt, std::ostream& out) {
    if (opt.format != "json" && opt.format != "csv")
        throw ValidationError("flag", "--format must be json or csv");
    const LoadedFile file = read_file(opt.spectral_path);
    const SpectralInput input = load_spectral_file(file);
    const Divisor d = divisor_for(input, opt.zeta);

    std::ostringstream artifact;
    if (opt.format == "csv") {
        write_divisor_csv(artifact, d);
    } else {
        json doc;
        doc["points"] = divisor_json(d);
        doc["count"] = d.points.size();
        doc["provenance"] = {{"spectral", file.digest}, {"zeta", opt.zeta}};
        artifact << doc.dump(2) << '\n';
    }
    write_artifact(opt.out_path, out, artifact.str());
    return 0;
}

struct FactorizeOptions {
    std::string spectral_path;
    std::string spectrum_path;
    std::string zeta = "sym";
    std::string sigma;
    int degree = -1; // default: declared dimension
    std::string grid_text;
    double tail_tol = 1e-12;
    double margin = 0.05;
    std::string out_path;
};

int cmd_factorize(const FactorizeOptions& opt, std::ostream& out) {
    const LoadedFile spectral_file = read_file(opt.spectral_path);
    const SpectralInput input = load_spectral_file(spectral_file);
    const LoadedFile spectrum_file = read_file(opt.spectrum_path);
    const LengthSpectrum spectrum = load_spectrum_file(spectrum_file);
    if (spectrum.dimension != input.dimension)
        throw ValidationError("dimension", "spectral input and length spectrum disagree");

    const Divisor d = divisor_for(input, opt.zeta);
    DivisorSplit parts = split_divisor(d, input.dimension);
    if (parts.m0 < 0)
        throw ValidationError("origin-order", "negative origin order cannot be factorized");
    Factorization fact = make_factorization(std::move(parts.z1), std::move(parts.z2), 0, 0,
                                            parts.m0, {});

    const int degree = opt.degree < 0 ? input.dimension : opt.degree;

    EvalRequest req;
    req.zeta_kind = parse_zeta_kind(opt.zeta);
    req.sigma.weight_vector = parse_sigma(opt.sigma, spectrum.holonomy_rank());
    req.sigma.label = "sigma";
    req.tail_tolerance = opt.tail_tol;
    req.margin = opt.margin;

    std::vector<cdouble> path;
    if (!opt.grid_text.empty()) {
        path = parse_grid(opt.grid_text);
    } else {
        const double re0 = (req.zeta_kind == ZetaKind::ruelle ? 2.0 : 1.0) * spectrum.rho +
                           1.0;
        const long steps = 2 * (static_cast<long>(degree) + 1) + 4;
        for (long j = 0; j < steps; ++j)
            path.push_back(cdouble{
                re0 + 2.0 * static_cast<double>(j) / static_cast<double>(steps - 1), 0.0});
    }

    std::vector<std::pair<cdouble, cdouble>> samples;
    samples.reserve(path.size());
    for (cdouble s : path) {
        req.s = s;
        samples.push_back({s, log_zeta(spectrum, req).log_value});
    }

    const GFit fit = fit_g(samples, fact, degree, opt.tail_tol);
    fact.g_coefficients = fit.coefficients;

    std::ostringstream doc_stream;
    save_factorization(doc_stream, fact);
    json doc = json::parse(doc_stream.str());
    doc["fit"] = {{"rms_residual", fit.rms_residual},
                  {"sample_count", samples.size()},
                  {"degree", degree}};
    doc["provenance"] = {{"spectral", spectral_file.digest},
                         {"spectrum", spectrum_file.digest},
                         {"zeta", opt.zeta},
                         {"sigma", req.sigma.weight_vector},
                         {"tail_tolerance", opt.tail_tol},
                         {"margin", opt.margin}};
    write_artifact(opt.out_path, out, doc.dump(2) + "\n");
    return 0;
}

struct OrderOptions {
    std::string factorization_path;
    std::string radii_text;
    int angles = 64;
    bool assume_complete = false;
    double tail_tol = 1e-12;
    std::string out_path;
    std::string csv_path;
};

int cmd_order_estimate(const OrderOptions& opt, std::ostream& out) {
    const LoadedFile file = read_file(opt.factorization_path);
    std::istringstream in(file.content);
    Factorization fact = load_factorization(in);
    if (opt.assume_complete) {
        // Measure the stored finite product itself, with no tail bookkeeping.
        fact.z1.truncated = false;
        fact.z2.truncated = false;
    }
    const std::vector<double> radii = parse_radii(opt.radii_text);

    const auto evaluator = [&fact, &opt](cdouble s) -> cdouble {
        const FactorizationValue v = evaluate_factorization(fact, s, opt.tail_tol);
        if (v.is_pole)
            return cdouble{std::numeric_limits<double>::infinity(), 0.0};
        if (v.is_zero)
            return cdouble{-1e300, 0.0}; // log of an exact zero; never the max
        return v.log_value;
    };
    const OrderEstimate est = estimate_order(evaluator, radii, opt.angles);

    std::ostringstream csv;
    csv << "r,loglogM\n";
    for (const auto& [r, y] : est.points)
        csv << format_double(r) << ',' << format_double(y) << '\n';
    if (!opt.csv_path.empty()) write_artifact(opt.csv_path, out, csv.str());

    json doc;
    doc["order"] = est.order;
    doc["rms_residual"] = est.rms_residual;
    json points = json::array();
    for (const auto& [r, y] : est.points) points.push_back({r, y});
    doc["points"] = std::move(points);
    doc["provenance"] = {{"factorization", file.digest},
                         {"radii", opt.radii_text},
                         {"angles", opt.angles},
                         {"assume_complete", opt.assume_complete},
                         {"tail_tolerance", opt.tail_tol}};
    write_artifact(opt.out_path, out, doc.dump(2) + "\n");
    return 0;
}

struct SqrtOptions {
    std::string spectral_path;
    std::string out_path;
};

int cmd_sqrt_check(const SqrtOptions& opt, std::ostream& out) {
    const LoadedFile file = read_file(opt.spectral_path);
    const SpectralInput input = load_spectral_file(file);
    const Divisor d_s = divisor_symmetrized(input);
    const Divisor d_super = divisor_super(input);
    const Divisor d_selberg = divisor_selberg_case_b(input);
    const SqrtCheckReport report = combine_sqrt_check(d_s, d_super, d_selberg);

    json doc;
    doc["ok"] = report.ok;
    json mism = json::array();
    for (const SqrtMismatch& m : report.mismatches)
        mism.push_back({{"location", complex_json(m.location)},
                        {"doubled_selberg_order", m.doubled_selberg_order},
                        {"combined_order", m.combined_order}});
    doc["mismatches"] = std::move(mism);
    doc["provenance"] = {{"spectral", file.digest}};
    write_artifact(opt.out_path, out, doc.dump(2) + "\n");
    return 0;
}

void apply_thread_cap() {
    const char* cap = std::getenv("GEOZETA_THREADS");
    if (!cap) return;
    const long n = std::strtol(cap, nullptr, 10);
    if (n >= 1) omp_set_num_threads(static_cast<int>(n));
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& code,
                const std::string& message) {
    json doc;
    doc["error"] = {{"kind", kind}, {"code", code}, {"message", message}};
    err << doc.dump(2) << '\n';
}

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::convergence: return "convergence";
        case ErrorKind::numeric: return "numeric";
    }
    return "numeric";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    apply_thread_cap();

    CLI::App app{"Euler products, spectral divisors and Hadamard factorizations "
                 "for geodesic zeta functions"};
    app.require_subcommand(1);

    GenSpectrumOptions gen_spectrum;
    auto* sub_gen_spectrum =
        app.add_subcommand("gen-spectrum", "Generate a synthetic length spectrum");
    sub_gen_spectrum->add_option("--dimension", gen_spectrum.dimension, "odd dimension n");
    sub_gen_spectrum->add_option("--rho", gen_spectrum.rho, "half-sum of roots (default (n-1)/2)");
    sub_gen_spectrum->add_option("--cutoff", gen_spectrum.cutoff, "length cutoff L")->required();
    sub_gen_spectrum->add_option("--seed", gen_spectrum.seed, "RNG seed");
    sub_gen_spectrum->add_option("--density-scale", gen_spectrum.density_scale,
                                 "scale on the counting density");
    sub_gen_spectrum->add_option("--out", gen_spectrum.out_path, "artifact path");

    GenSpectralOptions gen_spectral;
    auto* sub_gen_spectral =
        app.add_subcommand("gen-spectral", "Generate synthetic operator spectra");
    sub_gen_spectral->add_option("--dimension", gen_spectral.dimension, "odd dimension n");
    sub_gen_spectral->add_option("--weyl-constant", gen_spectral.weyl_constant,
                                 "C in N(r) ~ C r^n");
    sub_gen_spectral->add_option("--r-max", gen_spectral.r_max, "eigenvalue cutoff")->required();
    sub_gen_spectral->add_option("--case", gen_spectral.case_tag, "A or B");
    sub_gen_spectral->add_option("--seed", gen_spectral.seed, "RNG seed");
    sub_gen_spectral->add_option("--out", gen_spectral.out_path, "artifact path");

    EvalOptions eval;
    auto* sub_eval = app.add_subcommand("eval", "Evaluate a zeta log via its Euler product");
    sub_eval->add_option("--spectrum", eval.spectrum_path, "length spectrum path")->required();
    sub_eval->add_option("--zeta", eval.zeta, "selberg|ruelle|sym|super")->required();
    sub_eval->add_option("--sigma", eval.sigma, "weights K[,K...]");
    sub_eval->add_option("--s", eval.s_text, "evaluation point RE[+IMi]");
    sub_eval->add_option("--grid", eval.grid_text, "re0:re1:imax:steps");
    sub_eval->add_option("--tail-tol", eval.tail_tol, "series tail tolerance");
    sub_eval->add_option("--margin", eval.margin, "abscissa safety margin");
    sub_eval->add_option("--format", eval.format, "json|csv");
    sub_eval->add_option("--out", eval.out_path, "artifact path");

    FriedOptions fried;
    auto* sub_fried =
        app.add_subcommand("fried-check", "Check the shifted-Selberg expression of Ruelle");
    sub_fried->add_option("--spectrum", fried.spectrum_path, "length spectrum path")->required();
    sub_fried->add_option("--sigma", fried.sigma, "weights K[,K...]");
    sub_fried->add_option("--s", fried.s_text, "evaluation point RE[+IMi]")->required();
    sub_fried->add_option("--tail-tol", fried.tail_tol, "check tolerance");
    sub_fried->add_option("--margin", fried.margin, "abscissa safety margin");
    sub_fried->add_option("--out", fried.out_path, "artifact path");

    DivisorOptions divisor;
    auto* sub_divisor = app.add_subcommand("divisor", "Divisor of a zeta from operator spectra");
    sub_divisor->add_option("--spectral", divisor.spectral_path, "spectral input path")
        ->required();
    sub_divisor->add_option("--zeta", divisor.zeta, "selberg|sym|super")->required();
    sub_divisor->add_option("--format", divisor.format, "json|csv");
    sub_divisor->add_option("--out", divisor.out_path, "artifact path");

    FactorizeOptions factorize;
    auto* sub_factorize =
        app.add_subcommand("factorize", "Fit the s^m0 e^g W1/W2 representation");
    sub_factorize->add_option("--spectral", factorize.spectral_path, "spectral input path")
        ->required();
    sub_factorize->add_option("--spectrum", factorize.spectrum_path, "length spectrum path")
        ->required();
    sub_factorize->add_option("--zeta", factorize.zeta, "selberg|sym|super");
    sub_factorize->add_option("--sigma", factorize.sigma, "weights K[,K...]");
    sub_factorize->add_option("--degree", factorize.degree, "polynomial degree (default n)");
    sub_factorize->add_option("--grid", factorize.grid_text, "sample path re0:re1:imax:steps");
    sub_factorize->add_option("--tail-tol", factorize.tail_tol, "tail tolerance");
    sub_factorize->add_option("--margin", factorize.margin, "abscissa safety margin");
    sub_factorize->add_option("--out", factorize.out_path, "artifact path");

    OrderOptions order;
    auto* sub_order =
        app.add_subcommand("order-estimate", "Growth order of a stored factorization");
    sub_order->add_option("--factorization", order.factorization_path, "factorization path")
        ->required();
    sub_order->add_option("--radii", order.radii_text, "r0:r1:count (log-spaced)")->required();
    sub_order->add_option("--angles", order.angles, "angular samples per circle (min 64)");
    sub_order->add_flag("--assume-complete", order.assume_complete,
                        "measure the stored finite product, no tail bookkeeping");
    sub_order->add_option("--tail-tol", order.tail_tol, "tail tolerance");
    sub_order->add_option("--out", order.out_path, "JSON artifact path");
    sub_order->add_option("--csv", order.csv_path, "plot-point CSV path");

    SqrtOptions sqrt_check;
    auto* sub_sqrt = app.add_subcommand("sqrt-check",
                                        "Half-sum consistency of the three case-B divisors");
    sub_sqrt->add_option("--spectral", sqrt_check.spectral_path, "spectral input path")
        ->required();
    sub_sqrt->add_option("--out", sqrt_check.out_path, "artifact path");

    std::vector<std::string> argv_storage;
    argv_storage.push_back("geozeta");
    for (const std::string& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "validation", "cli", e.what());
        return 2;
    }

    try {
        if (sub_gen_spectrum->parsed()) return cmd_gen_spectrum(gen_spectrum, out);
        if (sub_gen_spectral->parsed()) return cmd_gen_spectral(gen_spectral, out);
        if (sub_eval->parsed()) return cmd_eval(eval, out);
        if (sub_fried->parsed()) return cmd_fried_check(fried, out);
        if (sub_divisor->parsed()) return cmd_divisor(divisor, out);
        if (sub_factorize->parsed()) return cmd_factorize(factorize, out);
        if (sub_order->parsed()) return cmd_order_estimate(order, out);
        if (sub_sqrt->parsed()) return cmd_sqrt_check(sqrt_check, out);
        emit_error(err, "validation", "cli", "no verb given");
        return 2;
    } catch (const Error& e) {
        emit_error(err, kind_name(e.kind()), e.code(), e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        emit_error(err, "numeric", "internal", e.what());
        return 4;
    }
}

} // namespace geozeta
