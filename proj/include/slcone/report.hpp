#pragma once

#include <string>
#include <vector>

#include "slcone/cone2.hpp"
#include "slcone/cone3.hpp"
#include "slcone/periodicity.hpp"
#include "slcone/spectral.hpp"

namespace slc {

constexpr int kSchemaVersion = 1;

/// Writes content to path atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::string& path, const std::string& content);

std::string sl_report_json(const SlReport& report, const ConeParams& params,
                           const GridSpec& grid);
std::string sl_report_json3(const SlReport& report, const TripleParams& params,
                            const GridSpec3& grid);

struct DiagnosticsReport {
    ConeParams params;
    std::string classification;
    bool isotropic = false;
    double return_map = 0;        // against the family's return coefficient
    double return_map_vs_xi = 0;  // against the literal xi
    double isotropic_phi2 = 0;    // |phi_2| for isotropic parameters
    double toda = 0;
    double tzitzeica = 0;
    double killing = 0;
    double killing_reality = 0;
    double killing_equivariance = 0;
    double kappa_symmetry = 0;
    double flatness = 0;
    double finite_type_top = 0;
    double finite_type_next = 0;
    double D = 0, E = 0;
    double d_spread = 0, e_spread = 0;
    double d_closed_defect = 0, e_closed_defect = 0;
    double char_poly = 0;
    double cubic_identity = 0;
    double involution_rho = 0;
    double involution_sigma = 0;
    double fd_step = 0;
    bool pass = false;
};

std::string diagnostics_json(const DiagnosticsReport& report);

std::string candidate_jsonl(const TorusCandidate& candidate);
std::string catalog_summary_csv(const std::vector<TorusCandidate>& candidates);

void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& samples);
std::string curve_metadata_json(const SpectralConstants& constants,
                                const InvolutionResiduals& involutions);

/// Coordinate projection R^6 -> R^3 by component selection (re1, im1, re2,
/// im2, re3, im3).
struct Projection {
    std::array<int, 3> components{0, 2, 4}; // indices into (re1, im1, re2, im2, re3, im3)
    std::array<double, 3> apply(const ComplexTriple& p) const;
    static Projection parse(const std::string& spec); // e.g. "re1,re2,re3"
};

void write_obj(std::ostream& os, const std::vector<std::array<double, 3>>& points);
void write_ply(std::ostream& os, const std::vector<std::array<double, 3>>& points);

} // namespace slc
