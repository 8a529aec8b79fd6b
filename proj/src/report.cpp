#include "slcone/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace slc {

using nlohmann::json;

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

json params_json(const ConeParams& p) {
    return json{{"theta", p.theta},
                {"b_level", p.B},
                {"c_level", p.C},
                {"beta", p.beta},
                {"gamma", p.gamma},
                {"a", p.a},
                {"b", p.b},
                {"c", p.c},
                {"xi", {p.xi.real(), p.xi.imag()}}};
}

json residuals_json(const SlReport& r) {
    json j{{"omega_rs_max", r.omega_rs_max},
           {"omega_rt_max", r.omega_rt_max},
           {"omega_st_max", r.omega_st_max},
           {"im_omega_max", r.im_omega_max},
           {"radius_defect_max", r.radius_defect_max},
           {"metric_orth_max", r.metric_orth_max}};
    if (r.dimension == 2) {
        j["conformality_max"] = r.conformality_max;
        j["frame_norm_defect_max"] = r.frame_norm_defect_max;
    }
    return j;
}

} // namespace

std::string sl_report_json(const SlReport& report, const ConeParams& params,
                           const GridSpec& grid) {
    json j{{"schema_version", kSchemaVersion},
           {"kind", "sl-verify"},
           {"dimension", 2},
           {"params", params_json(params)},
           {"grid",
            {{"ns", grid.ns},
             {"nt", grid.nt},
             {"s_range", {grid.s0, grid.s1}},
             {"t_range", {grid.t0, grid.t1}},
             {"r_values", grid.r_values}}},
           {"tol", report.tol},
           {"residuals", residuals_json(report)},
           {"worst", report.worst()},
           {"pass", report.pass}};
    return j.dump(2) + "\n";
}

std::string sl_report_json3(const SlReport& report, const TripleParams& params,
                            const GridSpec3& grid) {
    json j{{"schema_version", kSchemaVersion},
           {"kind", "sl-verify"},
           {"dimension", 3},
           {"params",
            {{"alpha", params.alpha},
             {"beta", params.beta},
             {"gamma", params.gamma},
             {"a_level", params.A},
             {"b_level", params.B},
             {"c_level", params.C}}},
           {"grid",
            {{"nr", grid.nr},
             {"ns", grid.ns},
             {"nt", grid.nt},
             {"r_range", {grid.r0, grid.r1}},
             {"s_range", {grid.s0, grid.s1}},
             {"t_range", {grid.t0, grid.t1}}}},
           {"tol", report.tol},
           {"residuals", residuals_json(report)},
           {"worst", report.worst()},
           {"pass", report.pass}};
    return j.dump(2) + "\n";
}

std::string diagnostics_json(const DiagnosticsReport& r) {
    json j{{"schema_version", kSchemaVersion},
           {"kind", "diagnostics"},
           {"params", params_json(r.params)},
           {"classification", r.classification},
           {"isotropic", r.isotropic},
           {"fd_step", r.fd_step},
           {"pass", r.pass}};
    if (r.isotropic) {
        j["return_map"] = {{"phi2_max", r.isotropic_phi2}};
    } else {
        j["return_map"] = {{"residual", r.return_map}, {"residual_vs_xi", r.return_map_vs_xi}};
        j["toda"] = {{"residual", r.toda}};
        j["tzitzeica"] = {{"residual", r.tzitzeica}};
        j["killing"] = {{"residual", r.killing},
                        {"reality", r.killing_reality},
                        {"equivariance", r.killing_equivariance},
                        {"kappa_symmetry", r.kappa_symmetry},
                        {"flatness", r.flatness}};
        j["finite_type"] = {{"defect_top", r.finite_type_top},
                            {"defect_next", r.finite_type_next}};
        j["spectral"] = {{"D", r.D},
                         {"E", r.E},
                         {"d_spread", r.d_spread},
                         {"e_spread", r.e_spread},
                         {"d_closed_defect", r.d_closed_defect},
                         {"e_closed_defect", r.e_closed_defect},
                         {"char_poly", r.char_poly},
                         {"cubic_identity", r.cubic_identity},
                         {"involution_rho", r.involution_rho},
                         {"involution_sigma", r.involution_sigma}};
    }
    return j.dump(2) + "\n";
}

namespace {

json period_data_json(const PeriodData& pd) {
    json j{{"S", pd.S}, {"eta", pd.eta}};
    if (pd.rational_approx) {
        json rats = json::array();
        for (const auto& r : *pd.rational_approx) rats.push_back({r.p, r.q});
        j["rational"] = rats;
    }
    if (pd.torus_multiple) j["multiple"] = *pd.torus_multiple;
    return j;
}

} // namespace

std::string candidate_jsonl(const TorusCandidate& c) {
    json j{{"schema_version", kSchemaVersion},
           {"kind", "torus-candidate"},
           {"case", to_string(c.search_case)},
           {"theta", c.theta},
           {"b_level", c.B},
           {"c_level", c.C},
           {"y", period_data_json(c.y_data)},
           {"z", period_data_json(c.z_data)},
           {"lattice", {c.lattice.a11, c.lattice.a12, c.lattice.a21, c.lattice.a22}},
           {"N", c.N},
           {"area", c.area_value},
           {"verify_residual", c.verify_residual},
           {"sweep_index", c.sweep_index},
           {"max_denominator", c.max_denominator}};
    return j.dump() + "\n";
}

std::string catalog_summary_csv(const std::vector<TorusCandidate>& candidates) {
    std::ostringstream os;
    os.precision(17);
    os << "case,theta,b_level,c_level,S,T,n_y,n_z,N,area,max_denominator,verify_residual\n";
    for (const auto& c : candidates) {
        os << to_string(c.search_case) << ',' << c.theta << ',' << c.B << ',' << c.C << ','
           << c.y_data.S << ',' << c.z_data.S << ',' << c.y_data.torus_multiple.value_or(1)
           << ',' << c.z_data.torus_multiple.value_or(1) << ',' << c.N << ',' << c.area_value
           << ',' << c.max_denominator << ',' << c.verify_residual << '\n';
    }
    return os.str();
}

void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& samples) {
    os << "re_lambda,im_lambda,re_mu1,im_mu1,re_mu2,im_mu2,re_mu3,im_mu3\n";
    os.precision(17);
    for (const auto& s : samples) {
        os << s.lambda.real() << ',' << s.lambda.imag();
        for (const auto& mu : s.mu) os << ',' << mu.real() << ',' << mu.imag();
        os << '\n';
    }
}

std::string curve_metadata_json(const SpectralConstants& constants,
                                const InvolutionResiduals& involutions) {
    json j{{"schema_version", kSchemaVersion},
           {"kind", "curve-metadata"},
           {"D", constants.D},
           {"E", constants.E},
           {"xi", {constants.xi.real(), constants.xi.imag()}},
           {"spread_D", constants.spread_D},
           {"spread_E", constants.spread_E},
           {"involution_rho", involutions.rho},
           {"involution_sigma", involutions.sigma}};
    return j.dump(2) + "\n";
}

std::array<double, 3> Projection::apply(const ComplexTriple& p) const {
    const std::array<double, 6> comps = {p.z1.real(), p.z1.imag(), p.z2.real(),
                                         p.z2.imag(), p.z3.real(), p.z3.imag()};
    return {comps[components[0]], comps[components[1]], comps[components[2]]};
}

Projection Projection::parse(const std::string& spec) {
    Projection proj;
    std::stringstream ss(spec);
    std::string tok;
    int idx = 0;
    while (std::getline(ss, tok, ',') && idx < 3) {
        int comp = -1;
        if (tok == "re1") comp = 0;
        else if (tok == "im1") comp = 1;
        else if (tok == "re2") comp = 2;
        else if (tok == "im2") comp = 3;
        else if (tok == "re3") comp = 4;
        else if (tok == "im3") comp = 5;
        if (comp < 0) throw std::invalid_argument("Projection: unknown component " + tok);
        proj.components[idx++] = comp;
    }
    if (idx != 3) throw std::invalid_argument("Projection: need exactly three components");
    return proj;
}

void write_obj(std::ostream& os, const std::vector<std::array<double, 3>>& points) {
    os << "# point cloud, " << points.size() << " vertices\n";
    os.precision(12);
    for (const auto& p : points) os << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
}

void write_ply(std::ostream& os, const std::vector<std::array<double, 3>>& points) {
    os << "ply\nformat ascii 1.0\nelement vertex " << points.size()
       << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    os.precision(12);
    for (const auto& p : points) os << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
}

} // namespace slc
