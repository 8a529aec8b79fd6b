// Command-line surface of the cone laboratory: verification, integrable
// diagnostics, torus search, mesh and trace export.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slcone/integrable.hpp"
#include "slcone/report.hpp"

namespace {

using namespace slc;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_triple(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    return vals;
}

// Flat key=value config file; '#' starts a comment. Values apply only to
// options not set on the command line, so flags override the file.
void apply_flat_config(CLI::App* sub, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw CLI::ValidationError("--config", "unknown key " + key);
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

struct VerifyOptions {
    std::string config;
    double theta = 1.0, b_level = 0.3, c_level = 0.4;
    bool three = false;
    std::string alpha = "";
    double a_level = 0.2;
    int grid = 20;
    double tol = 1e-9;
    double integrator_tol = 1e-12;
    std::string out;
};

int run_verify(const VerifyOptions& opt) {
    if (!opt.three) {
        const ConeParams params = derive_params(opt.theta, opt.b_level, opt.c_level);
        const PeriodResult sp = strand_period(params.beta_coeffs(), params.B);
        const PeriodResult tp = strand_period(params.gamma_coeffs(), params.C);
        const double s1 = sp.kind == PeriodResult::Kind::periodic ? sp.S : 10.0;
        const double t1 = tp.kind == PeriodResult::Kind::periodic ? tp.S : 10.0;
        const ConeStrands strands =
            integrate_cone_strands(params, 0, s1, 0, t1, opt.integrator_tol);
        GridSpec grid;
        grid.ns = grid.nt = opt.grid;
        grid.s1 = s1;
        grid.t1 = t1;
        const SlReport rep = verify_sl(params, strands, grid, opt.tol);
        const std::string payload = sl_report_json(rep, params, grid);
        if (!opt.out.empty())
            atomic_write(opt.out, payload);
        else
            std::cout << payload;
        return rep.pass ? kExitPass : kExitFail;
    }
    const auto avals = parse_triple(opt.alpha);
    if (avals.size() != 3) throw CLI::ValidationError("--alpha needs three components");
    TripleParams params =
        make_triple_params({avals[0], avals[1], avals[2]}, opt.a_level, opt.b_level, opt.c_level);
    try {
        // Canonical sign pattern: the angular strands then extend globally.
        const NormalizedTriples norm = normalize_signs(params.alpha, params.beta, params.gamma);
        const std::array<double, 3> levels = {params.A, params.B, params.C};
        params.alpha = norm.alpha;
        params.beta = norm.beta;
        params.gamma = norm.gamma;
        params.A = levels[norm.log.vector_order[0]];
        params.B = levels[norm.log.vector_order[1]];
        params.C = levels[norm.log.vector_order[2]];
    } catch (const cannot_normalize_error&) {
        // Zero components: verify on the raw triples over a reduced span.
    }
    const MaximalInterval iv = maximal_interval(
        params.alpha_coeffs(), initial_state(params.alpha_coeffs(), params.A), 1e3, 1e-12);
    const double r0 = iv.lo_finite ? 0.8 * iv.lo : -2.0;
    const double r1 = iv.hi_finite ? 0.8 * iv.hi : 2.0;
    const TripleStrands strands =
        integrate_triple_strands(params, r0, r1, -3, 3, -3, 3, opt.integrator_tol);
    GridSpec3 grid;
    grid.nr = grid.ns = grid.nt = std::max(2, opt.grid);
    grid.r0 = std::max(r0, strands.x.lo());
    grid.r1 = std::min(r1, strands.x.hi());
    grid.s0 = std::max(-3.0, 0.9 * strands.y.lo());
    grid.s1 = std::min(3.0, 0.9 * strands.y.hi());
    grid.t0 = std::max(-3.0, 0.9 * strands.z.lo());
    grid.t1 = std::min(3.0, 0.9 * strands.z.hi());
    const SlReport rep = verify_sl3(params, strands, grid, opt.tol);
    const std::string payload = sl_report_json3(rep, params, grid);
    if (!opt.out.empty())
        atomic_write(opt.out, payload);
    else
        std::cout << payload;
    return rep.pass ? kExitPass : kExitFail;
}

struct DiagnoseOptions {
    std::string config;
    double theta = 0.0, b_level = 0.3, c_level = 0.5;
    double h = 1e-3;
    double tol = 1e-5;
    int lambda_samples = 512;
    double integrator_tol = 1e-12;
    std::string out, curve_csv;
};

int run_diagnose(const DiagnoseOptions& opt) {
    const ConeParams params = derive_params(opt.theta, opt.b_level, opt.c_level);
    DiagnosticsReport rep;
    rep.params = params;
    rep.classification = to_string(classify_case(params));
    rep.fd_step = opt.h;
    const auto [xi, conf] = xi_and_classify(params);
    rep.isotropic = (conf == Conformality::isotropic);

    const double margin = 2.0;
    FdGrid grid;
    grid.ns = grid.nt = 5;
    grid.s0 = grid.t0 = 0.2;
    grid.s1 = grid.t1 = 1.4;
    const ConeStrands strands = integrate_cone_strands(
        params, -margin, grid.s1 + margin, -margin, grid.t1 + margin, opt.integrator_tol);

    if (rep.isotropic) {
        rep.isotropic_phi2 = isotropic_residual(params, strands, grid, 1e-4);
        rep.pass = rep.isotropic_phi2 < 1e-6;
    } else {
        rep.return_map = return_map_residual(params, strands, grid, 1e-4);
        rep.return_map_vs_xi = return_map_residual_vs_xi(params, strands, grid, 1e-4);
        rep.toda = toda_residual(params, grid, opt.h);
        rep.tzitzeica = tzitzeica_residual(params, grid, opt.h);
        rep.killing = killing_residual(params, grid, opt.h);
        const KillingField kf = killing_field(params, 0.7, 1.1);
        rep.killing_reality = killing_reality_defect(kf);
        rep.killing_equivariance = killing_equivariance_defect(kf);
        rep.kappa_symmetry = killing_kappa_defect(kf);
        rep.flatness = flatness_residual(params, 0.7, 1.1, std::polar(1.0, 0.9), opt.h);
        const FiniteTypeReport ft = finite_type_certificate(params, 0.7, 1.1);
        rep.finite_type_top = ft.defect_top;
        rep.finite_type_next = ft.defect_next;

        std::vector<std::pair<double, double>> samples;
        for (int i = 0; i < 10; ++i) samples.push_back({0.1 + 0.12 * i, 1.3 - 0.11 * i});
        const SpectralConstants sc = spectral_constants(params, samples);
        rep.D = sc.D;
        rep.E = sc.E;
        rep.d_spread = sc.spread_D;
        rep.e_spread = sc.spread_E;
        rep.d_closed_defect = std::abs(sc.D - spectral_d_closed(params));
        rep.e_closed_defect = std::abs(sc.E - spectral_e_closed(params));
        double cp = 0, ci = 0;
        for (int k = 0; k < 8; ++k) {
            const Complex lam = std::polar(1.0, 0.25 + 2 * M_PI * k / 8.0);
            cp = std::max(cp, char_poly_defect(kf, sc.D, sc.E, sc.xi, lam));
            ci = std::max(ci, cubic_identity_residual(kf, sc.D, sc.E, sc.xi, lam));
        }
        rep.char_poly = cp;
        rep.cubic_identity = ci;
        const auto lgrid = default_lambda_grid(opt.lambda_samples);
        const InvolutionResiduals inv = involution_residuals(sc.D, sc.E, sc.xi, lgrid, 2);
        rep.involution_rho = inv.rho;
        rep.involution_sigma = inv.sigma;
        if (!opt.curve_csv.empty()) {
            const auto samples_csv = curve_samples(sc.D, sc.E, sc.xi, lgrid, 2);
            std::ostringstream os;
            write_curve_csv(os, samples_csv);
            atomic_write(opt.curve_csv, os.str());
            atomic_write(opt.curve_csv + ".meta.json", curve_metadata_json(sc, inv));
        }
        rep.pass = rep.return_map < 1e-6 && rep.toda < 1e-6 && rep.tzitzeica < 1e-6
                   && rep.killing < opt.tol && rep.killing_reality < 1e-12
                   && rep.killing_equivariance < 1e-12 && rep.kappa_symmetry < 1e-12
                   && rep.finite_type_top < 1e-9 && rep.finite_type_next < 1e-9
                   && rep.d_spread < 1e-8 && rep.d_closed_defect < 1e-9
                   && rep.e_closed_defect < 1e-9 && rep.char_poly < 1e-9
                   && rep.cubic_identity < 1e-9 && rep.involution_rho < 1e-9
                   && rep.involution_sigma < 1e-9;
    }
    const std::string payload = diagnostics_json(rep);
    if (!opt.out.empty())
        atomic_write(opt.out, payload);
    else
        std::cout << payload;
    return rep.pass ? kExitPass : kExitFail;
}

struct TorusOptions {
    std::string config;
    std::string search_case = "a";
    double theta = 0.0, b_level = 0.0;
    double sweep_lo = -0.9, sweep_hi = 0.9, sweep_step = 1e-3;
    long max_den = 40;
    double tol = 1e-7;
    std::string out = "catalog.jsonl";
    std::string summary;
    bool resume = false;
};

int run_torus_search(const TorusOptions& opt) {
    TorusSearchConfig cfg;
    if (opt.search_case == "a") cfg.search_case = SearchCase::case_a;
    else if (opt.search_case == "b") cfg.search_case = SearchCase::case_b;
    else if (opt.search_case == "c") cfg.search_case = SearchCase::case_c;
    else if (opt.search_case == "generic") cfg.search_case = SearchCase::generic;
    else throw CLI::ValidationError("--case must be one of a, b, c, generic");
    cfg.theta = opt.theta;
    cfg.B = opt.b_level;
    cfg.sweep_lo = opt.sweep_lo;
    cfg.sweep_hi = opt.sweep_hi;
    cfg.sweep_step = opt.sweep_step;
    cfg.max_den = opt.max_den;
    cfg.tol = opt.tol;
    if (cfg.search_case == SearchCase::case_b) {
        for (int k = 0; k < 6; ++k) cfg.theta_values.push_back(k * M_PI / 3.0);
    }
    if (cfg.search_case == SearchCase::generic) {
        cfg.theta_values = {0.7, 1.3, 2.1};
        cfg.B_values = {0.25, 0.55};
    }

    std::vector<std::string> existing;
    if (opt.resume) {
        std::ifstream is(opt.out);
        std::string line;
        while (std::getline(is, line))
            if (!line.empty()) existing.push_back(line + "\n");
    }
    const auto candidates = torus_search(cfg);
    std::string payload;
    for (const auto& line : existing) payload += line;
    for (const auto& c : candidates) {
        const std::string line = candidate_jsonl(c);
        bool dup = false;
        for (const auto& e : existing)
            if (e == line) dup = true;
        if (!dup) payload += line;
    }
    atomic_write(opt.out, payload);
    if (!opt.summary.empty()) atomic_write(opt.summary, catalog_summary_csv(candidates));
    std::cout << "candidates: " << candidates.size() << "\n";
    return kExitPass;
}

struct MeshOptions {
    std::string config;
    double theta = 0.0, b_level = 0.0, c_level = 0.0;
    bool three = false;
    std::string alpha = "";
    double a_level = 0.2;
    int nu = 64, nv = 64, nr = 8;
    double r = 1.0;
    std::string project = "re1,re2,re3";
    std::string format = "obj";
    std::string out = "mesh.obj";
    double integrator_tol = 1e-10;
};

int run_mesh(const MeshOptions& opt) {
    const Projection proj = Projection::parse(opt.project);
    std::vector<std::array<double, 3>> points;

    if (opt.three) {
        const auto avals = parse_triple(opt.alpha);
        if (avals.size() != 3) throw CLI::ValidationError("--alpha needs three components");
        const TripleParams params = make_triple_params({avals[0], avals[1], avals[2]},
                                                       opt.a_level, opt.b_level, opt.c_level);
        const MaximalInterval iv = maximal_interval(
            params.alpha_coeffs(), initial_state(params.alpha_coeffs(), params.A), 1e3, 1e-10);
        const double r0 = iv.lo_finite ? 0.8 * iv.lo : -2.0;
        const double r1 = iv.hi_finite ? 0.8 * iv.hi : 2.0;
        const TripleStrands strands =
            integrate_triple_strands(params, r0, r1, -3, 3, -3, 3, opt.integrator_tol);
        points.reserve(std::size_t(opt.nr) * opt.nu * opt.nv);
        for (int i = 0; i < opt.nr; ++i)
            for (int j = 0; j < opt.nu; ++j)
                for (int k = 0; k < opt.nv; ++k) {
                    const double rr = strands.x.lo()
                                      + (strands.x.hi() - strands.x.lo()) * (i + 0.5)
                                            / double(opt.nr);
                    const double s = strands.y.lo()
                                     + (strands.y.hi() - strands.y.lo()) * (j + 0.5)
                                           / double(opt.nu);
                    const double t = strands.z.lo()
                                     + (strands.z.hi() - strands.z.lo()) * (k + 0.5)
                                           / double(opt.nv);
                    points.push_back(proj.apply(immersion3(params, strands, rr, s, t)));
                }
    } else {
        const ConeParams params = derive_params(opt.theta, opt.b_level, opt.c_level);
        const PeriodResult sp = strand_period(params.beta_coeffs(), params.B);
        const PeriodResult tp = strand_period(params.gamma_coeffs(), params.C);
        const double s1 = sp.kind == PeriodResult::Kind::periodic ? sp.S : 10.0;
        const double t1 = tp.kind == PeriodResult::Kind::periodic ? tp.S : 10.0;
        const ConeStrands strands =
            integrate_cone_strands(params, 0, s1, 0, t1, opt.integrator_tol);
        points.reserve(std::size_t(opt.nu) * opt.nv);
        for (int i = 0; i < opt.nu; ++i)
            for (int j = 0; j < opt.nv; ++j) {
                const double s = s1 * double(i) / double(opt.nu);
                const double t = t1 * double(j) / double(opt.nv);
                points.push_back(proj.apply(immersion(params, strands, opt.r, s, t)));
            }
    }
    std::ostringstream os;
    if (opt.format == "obj")
        write_obj(os, points);
    else if (opt.format == "ply")
        write_ply(os, points);
    else
        throw CLI::ValidationError("--format must be obj or ply");
    atomic_write(opt.out, os.str());
    return kExitPass;
}

struct AreaOptions {
    std::string config;
    double theta = 0.0, b_level = 0.0, c_level = 0.5;
    std::string lattice = "1,0,0,1";
    std::string out;
};

int run_area(const AreaOptions& opt) {
    const ConeParams params = derive_params(opt.theta, opt.b_level, opt.c_level);
    const auto lv = parse_triple(opt.lattice);
    if (lv.size() != 4) throw CLI::ValidationError("--lattice needs four integers");
    const Lattice2 lattice{long(lv[0]), long(lv[1]), long(lv[2]), long(lv[3])};

    const PeriodResult sp = strand_period(params.beta_coeffs(), params.B);
    const PeriodResult tp = strand_period(params.gamma_coeffs(), params.C);
    PeriodData ydata, zdata;
    if (sp.kind == PeriodResult::Kind::periodic) {
        ydata.S = sp.S;
        ydata.eta = rotation_phases(params.beta_coeffs(), params.B, sp.S);
    } else if (sp.kind == PeriodResult::Kind::constant_potential) {
        ydata.S = 2.0 * M_PI; // constant potential: any base length works
    } else {
        throw std::runtime_error("area: y potential is not periodic");
    }
    if (tp.kind == PeriodResult::Kind::periodic) {
        zdata.S = tp.S;
        zdata.eta = rotation_phases(params.gamma_coeffs(), params.C, tp.S);
    } else if (tp.kind == PeriodResult::Kind::constant_potential) {
        zdata.S = 2.0 * M_PI;
    } else {
        throw std::runtime_error("area: z potential is not periodic");
    }
    const TorusRecord rec = assemble_torus(params, ydata, zdata, lattice);
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"kind", "area"},
                     {"area", rec.area_value},
                     {"area_quadrature", rec.area_quadrature},
                     {"S", ydata.S},
                     {"T", zdata.S},
                     {"N", lattice.det_abs()}};
    const std::string payload = j.dump(2) + "\n";
    if (!opt.out.empty())
        atomic_write(opt.out, payload);
    else
        std::cout << payload;
    return kExitPass;
}

struct TraceOptions {
    std::string config;
    std::string coeffs = "";
    double theta = 0.0;
    bool use_gamma = false;
    double level = 0.3;
    double span_lo = 0.0, span_hi = 10.0;
    double tol = 1e-10;
    int samples = 512;
    std::string out = "trace.csv";
};

int run_trace(const TraceOptions& opt) {
    StrandCoefficients sc{1, -1, 0, true};
    if (!opt.coeffs.empty()) {
        const auto cv = parse_triple(opt.coeffs);
        if (cv.size() != 3) throw CLI::ValidationError("--coeffs needs three components");
        sc = StrandCoefficients{cv[0], cv[1], cv[2], false};
    } else {
        const ConeParams params = derive_params(opt.theta, 0, 0);
        sc = opt.use_gamma ? params.gamma_coeffs() : params.beta_coeffs();
    }
    const Trajectory traj = integrate_strand(sc, initial_state(sc, opt.level), opt.span_lo,
                                             opt.span_hi, opt.tol);
    std::ostringstream os;
    write_trajectory_csv(os, traj, std::size_t(opt.samples));
    atomic_write(opt.out, os.str());
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"special Lagrangian cone laboratory"};
    app.require_subcommand(1);

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "verify the SL identities on a sample grid");
    verify->add_option("--config", vo.config, "flat key=value configuration file");
    verify->add_option("--theta", vo.theta, "family angle");
    verify->add_option("--b-level", vo.b_level)->check(CLI::Range(-1.0, 1.0));
    verify->add_option("--c-level", vo.c_level)->check(CLI::Range(-1.0, 1.0));
    verify->add_flag("--three", vo.three, "three-variable family");
    verify->add_option("--alpha", vo.alpha, "radial coefficient triple a1,a2,a3");
    verify->add_option("--a-level", vo.a_level)->check(CLI::Range(-1.0, 1.0));
    verify->add_option("--grid", vo.grid)->check(CLI::Range(2, 4096));
    verify->add_option("--tol", vo.tol)->check(CLI::PositiveNumber);
    verify->add_option("--integrator-tol", vo.integrator_tol)->check(CLI::PositiveNumber);
    verify->add_option("--out", vo.out, "report JSON path");

    DiagnoseOptions dg;
    auto* diagnose = app.add_subcommand("diagnose", "integrable-systems identity diagnostics");
    diagnose->add_option("--config", dg.config, "flat key=value configuration file");
    diagnose->add_option("--theta", dg.theta);
    diagnose->add_option("--b-level", dg.b_level)->check(CLI::Range(-1.0, 1.0));
    diagnose->add_option("--c-level", dg.c_level)->check(CLI::Range(-1.0, 1.0));
    diagnose->add_option("--fd-step", dg.h)->check(CLI::PositiveNumber);
    diagnose->add_option("--tol", dg.tol)->check(CLI::PositiveNumber);
    diagnose->add_option("--lambda-samples", dg.lambda_samples)->check(CLI::Range(8, 100000));
    diagnose->add_option("--out", dg.out, "diagnostics JSON path");
    diagnose->add_option("--curve-csv", dg.curve_csv, "spectral curve CSV path");

    TorusOptions to;
    auto* torus = app.add_subcommand("torus-search", "rationality search for torus solutions");
    torus->add_option("--config", to.config, "flat key=value configuration file");
    torus->add_option("--case", to.search_case, "a|b|c|generic");
    torus->add_option("--theta", to.theta);
    torus->add_option("--b-level", to.b_level)->check(CLI::Range(-1.0, 1.0));
    torus->add_option("--sweep-lo", to.sweep_lo);
    torus->add_option("--sweep-hi", to.sweep_hi);
    torus->add_option("--sweep-step", to.sweep_step)->check(CLI::PositiveNumber);
    torus->add_option("--max-den", to.max_den)->check(CLI::Range(1l, 100000l));
    torus->add_option("--tol", to.tol)->check(CLI::PositiveNumber);
    torus->add_option("--out", to.out, "catalog JSONL path");
    torus->add_option("--summary", to.summary, "summary CSV path");
    torus->add_flag("--resume", to.resume, "keep existing catalog lines");

    MeshOptions mo;
    auto* mesh = app.add_subcommand("mesh", "export a sampled surface as OBJ/PLY");
    mesh->add_option("--config", mo.config, "flat key=value configuration file");
    mesh->add_option("--theta", mo.theta);
    mesh->add_option("--b-level", mo.b_level)->check(CLI::Range(-1.0, 1.0));
    mesh->add_option("--c-level", mo.c_level)->check(CLI::Range(-1.0, 1.0));
    mesh->add_flag("--three", mo.three, "three-variable family slab");
    mesh->add_option("--alpha", mo.alpha, "radial coefficient triple a1,a2,a3");
    mesh->add_option("--a-level", mo.a_level)->check(CLI::Range(-1.0, 1.0));
    mesh->add_option("--nu", mo.nu)->check(CLI::Range(2, 4096));
    mesh->add_option("--nv", mo.nv)->check(CLI::Range(2, 4096));
    mesh->add_option("--nr", mo.nr)->check(CLI::Range(2, 256));
    mesh->add_option("--r", mo.r)->check(CLI::PositiveNumber);
    mesh->add_option("--project", mo.project, "three of re1,im1,re2,im2,re3,im3");
    mesh->add_option("--format", mo.format, "obj|ply");
    mesh->add_option("--out", mo.out);

    AreaOptions ao;
    auto* area_cmd = app.add_subcommand("area", "torus area from the period lattice");
    area_cmd->add_option("--config", ao.config, "flat key=value configuration file");
    area_cmd->add_option("--theta", ao.theta);
    area_cmd->add_option("--b-level", ao.b_level)->check(CLI::Range(-1.0, 1.0));
    area_cmd->add_option("--c-level", ao.c_level)->check(CLI::Range(-1.0, 1.0));
    area_cmd->add_option("--lattice", ao.lattice, "a11,a12,a21,a22");
    area_cmd->add_option("--out", ao.out);

    TraceOptions tr;
    auto* trace = app.add_subcommand("strand-trace", "integrate one strand and export CSV");
    trace->add_option("--config", tr.config, "flat key=value configuration file");
    trace->add_option("--coeffs", tr.coeffs, "coefficient triple c1,c2,c3");
    trace->add_option("--theta", tr.theta, "use the normalized family coefficients");
    trace->add_flag("--gamma", tr.use_gamma, "use the second family triple");
    trace->add_option("--level", tr.level)->check(CLI::Range(-1.0, 1.0));
    trace->add_option("--span-lo", tr.span_lo);
    trace->add_option("--span-hi", tr.span_hi);
    trace->add_option("--tol", tr.tol)->check(CLI::PositiveNumber);
    trace->add_option("--samples", tr.samples)->check(CLI::Range(2, 1000000));
    trace->add_option("--out", tr.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify) {
            if (!vo.config.empty()) apply_flat_config(verify, vo.config);
            return run_verify(vo);
        }
        if (*diagnose) {
            if (!dg.config.empty()) apply_flat_config(diagnose, dg.config);
            return run_diagnose(dg);
        }
        if (*torus) {
            if (!to.config.empty()) apply_flat_config(torus, to.config);
            return run_torus_search(to);
        }
        if (*mesh) {
            if (!mo.config.empty()) apply_flat_config(mesh, mo.config);
            return run_mesh(mo);
        }
        if (*area_cmd) {
            if (!ao.config.empty()) apply_flat_config(area_cmd, ao.config);
            return run_area(ao);
        }
        if (*trace) {
            if (!tr.config.empty()) apply_flat_config(trace, tr.config);
            return run_trace(tr);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const invalid_level_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
