// Full analysis pipeline: validation, definiteness certificate, symmetry
// detection, multiplier-set geometry, every condition checker, the
// relaxation solve, constructive recovery where the theory licenses it, and
// optional brute-force confirmation. Renders to JSON and to a human table
// that names each checked condition.
#pragma once

#include <chrono>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcex/conditions.hpp"
#include "qcex/gamma.hpp"
#include "qcex/io.hpp"
#include "qcex/model.hpp"
#include "qcex/oracle.hpp"
#include "qcex/rounding.hpp"
#include "qcex/shor.hpp"
#include "qcex/symmetry.hpp"

namespace qcex {

struct AnalysisOptions {
    SolverOptions solver;
    OracleOptions oracle;
    GammaOptions gamma;
    TightnessOptions tight;
    PivotOptions pivot;
    PurifyOptions purify;
    bool run_oracle = false;
    bool run_socp = true;
    bool run_shor = true;  // conditions-only callers switch the solves off
    std::uint64_t seed = 0;
};

struct AnalysisResult {
    std::string name;
    int N = 0, m_I = 0, m_E = 0, k = 1;
    std::vector<std::string> warnings;

    Assumption1Certificate assumption1;
    std::optional<GammaPolyhedron> gp;
    std::string gamma_note;
    std::vector<Face> faces;

    std::vector<ConditionReport> conditions;
    ShorSolution shor;
    std::optional<SocpSolution> socp;

    std::optional<EpigraphPoint> extracted;
    std::string extraction_note;
    std::optional<ConvexDecomposition> pivot;
    std::string pivot_note;
    std::optional<ConvexDecomposition> purification;
    std::string purification_variant;
    std::string purification_note;

    std::optional<OracleEstimate> oracle;
    std::map<std::string, double> timings_ms;

    const ConditionReport* condition(ConditionId id) const {
        for (const ConditionReport& c : conditions)
            if (c.id == id) return &c;
        return nullptr;
    }
};

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        case Tri::unknown: return "unknown";
    }
    return "?";
}

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::inaccurate: return "inaccurate";
    }
    return "?";
}

inline const char* to_string(GammaProvenance p) {
    switch (p) {
        case GammaProvenance::diagonal: return "diagonal";
        case GammaProvenance::congruence: return "congruence";
        case GammaProvenance::convex_orthant: return "convex_orthant";
        case GammaProvenance::user_asserted: return "user_asserted";
    }
    return "?";
}

inline AnalysisResult analyze(const QcqpInstance& inst,
                              const std::vector<HalfSpace>* gamma_assert = nullptr,
                              const AnalysisOptions& opt = {}) {
    using clock = std::chrono::steady_clock;
    AnalysisResult res;
    res.name = inst.name;
    res.N = inst.dim;
    res.m_I = inst.ineq_count;
    res.m_E = inst.eq_count;

    auto timed = [&](const std::string& label, auto&& fn) {
        const auto t0 = clock::now();
        fn();
        res.timings_ms[label] =
            std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    OracleOptions oopt = opt.oracle;
    oopt.seed = opt.seed;
    timed("assumption1", [&] { res.assumption1 = certify_assumption1(inst, opt.solver, oopt); });

    MultiplicityReport krep;
    timed("detect_k", [&] {
        krep = detect_k(inst);
        res.k = krep.k;
    });

    timed("gamma", [&] {
        try {
            res.gp = build_gamma(inst, &res.assumption1, gamma_assert, opt.gamma);
        } catch (const std::runtime_error& e) {
            res.gamma_note = e.what();
        }
    });
    if (res.gp) timed("faces", [&] { res.faces = enumerate_faces(inst, *res.gp, opt.gamma); });

    timed("conditions", [&] {
        TightnessOptions topt = opt.tight;
        topt.seed = opt.seed;
        if (res.gp) {
            res.conditions.push_back(check_hull_main(inst, *res.gp, res.faces));
            res.conditions.push_back(check_hull_symmetries(inst, res.faces, res.k));
            res.conditions.push_back(check_tight_main(inst, *res.gp, res.faces, topt));
            res.conditions.push_back(check_tight_perturbed(inst, *res.gp, res.faces, topt));
        } else {
            const std::string why = "multiplier set not certifiably polyhedral";
            res.conditions.push_back(unavailable_report(ConditionId::hull_main, why));
            res.conditions.push_back(unavailable_report(ConditionId::hull_symmetries, why));
            res.conditions.push_back(unavailable_report(ConditionId::tight_main, why));
            res.conditions.push_back(unavailable_report(ConditionId::tight_perturbed, why));
        }
        auto [hk, tk] = check_k_thresholds(inst, res.k);
        res.conditions.push_back(hk);
        res.conditions.push_back(tk);
        res.conditions.push_back(check_burer_ye(inst, topt));
        res.conditions.push_back(classify_corollary(inst, res.gp.has_value()));
    });

    if (!opt.run_shor) return res;

    timed("shor", [&] { res.shor = solve_shor(inst, opt.solver); });
    if (opt.run_socp && is_diagonal_instance(inst))
        timed("socp", [&] { res.socp = solve_socp(inst, opt.solver); });

    if (res.gp && res.shor.status == SolveStatus::optimal) {
        timed("extract", [&] {
            try {
                const ExtractionResult er =
                    extract_if_definite(inst, *res.gp, res.faces, res.shor, opt.purify.tol_feas);
                if (er.point)
                    res.extracted = er.point;
                else
                    res.extraction_note = "relaxation optimizer sits on a semidefinite face";
            } catch (const std::runtime_error& e) {
                res.extraction_note = e.what();
            }
        });
    }
    // when the optimizer sits on a semidefinite face but the hull criterion
    // holds, the pivoting decomposition recovers feasible points instead
    if (res.gp && res.shor.status == SolveStatus::optimal && !res.extracted) {
        const ConditionReport* hull = res.condition(ConditionId::hull_main);
        if (hull != nullptr && hull->verdict == Verdict::holds) {
            timed("pivot", [&] {
                try {
                    res.pivot = pivot_decompose(inst, *res.gp, res.faces,
                                                {res.shor.x, 0.5 * res.shor.opt_sdp}, opt.pivot);
                } catch (const std::runtime_error& e) {
                    res.pivot_note = e.what();
                }
            });
        }
    }
    if (res.shor.status == SolveStatus::optimal && krep.method == MultiplicityMethod::structural) {
        const bool hull_ok = res.k >= inst.m() + 2;
        const bool slice_ok = res.k >= inst.m() + 1;
        if (hull_ok || slice_ok) {
            timed("purify", [&] {
                try {
                    const PurifyVariant variant =
                        hull_ok ? PurifyVariant::hull : PurifyVariant::optimal_slice;
                    res.purification =
                        purify_rank_reduction(inst, krep, res.shor, variant, opt.purify);
                    res.purification_variant = hull_ok ? "hull" : "optimal_slice";
                } catch (const std::runtime_error& e) {
                    res.purification_note = e.what();
                }
            });
        }
    }

    if (opt.run_oracle) {
        timed("oracle", [&] {
            OracleOptions search = oopt;
            if (res.assumption1.holds == Tri::yes) search.gamma_star = res.assumption1.gamma_star;
            res.oracle = estimate_opt(inst, search);
        });
    }
    return res;
}

// ---------------------------------------------------------------------------
// rendering

inline nlohmann::json report_to_json(const AnalysisResult& res) {
    nlohmann::json j;
    j["name"] = res.name;
    j["N"] = res.N;
    j["m_I"] = res.m_I;
    j["m_E"] = res.m_E;
    j["k"] = res.k;

    j["assumption1"] = {{"holds", to_string(res.assumption1.holds)},
                        {"margin", res.assumption1.margin}};
    if (res.assumption1.gamma_star.size() > 0)
        j["assumption1"]["gamma_star"] = detail::vector_to_json(res.assumption1.gamma_star);

    nlohmann::json gj;
    gj["available"] = res.gp.has_value();
    if (res.gp) {
        gj["provenance"] = to_string(res.gp->provenance);
        nlohmann::json verts = nlohmann::json::array();
        for (const Vector& v : res.gp->vertices) verts.push_back(detail::vector_to_json(v));
        nlohmann::json rays = nlohmann::json::array();
        for (const Vector& r : res.gp->rays) rays.push_back(detail::vector_to_json(r));
        gj["vertices"] = verts;
        gj["rays"] = rays;
        int semi = 0, maximal = 0;
        for (const Face& f : res.faces) {
            semi += f.semidefinite ? 1 : 0;
            maximal += f.maximal_semidefinite ? 1 : 0;
        }
        gj["faces"] = {{"count", res.faces.size()},
                       {"semidefinite", semi},
                       {"maximal_semidefinite", maximal}};
    } else {
        gj["error"] = res.gamma_note;
    }
    j["gamma"] = gj;

    nlohmann::json conds = nlohmann::json::array();
    for (const ConditionReport& c : res.conditions) {
        nlohmann::json cj;
        cj["id"] = to_string(c.id);
        cj["verdict"] = to_string(c.verdict);
        if (!c.notes.empty()) cj["notes"] = c.notes;
        if (!c.tags.empty()) cj["tags"] = c.tags;
        if (c.witness_face) cj["witness_face"] = *c.witness_face;
        if (c.witness_coordinate) cj["witness_coordinate"] = *c.witness_coordinate;
        if (c.witness_gamma) cj["witness_gamma"] = detail::vector_to_json(*c.witness_gamma);
        if (c.witness_h) cj["witness_h"] = detail::vector_to_json(*c.witness_h);
        if (!c.face_records.empty()) {
            nlohmann::json recs = nlohmann::json::array();
            for (const FaceRecord& r : c.face_records)
                recs.push_back({{"face", r.face_index},
                                {"v_dim", r.v_dim},
                                {"b_affdim", r.b_affdim},
                                {"margin", r.margin}});
            cj["face_records"] = recs;
        }
        conds.push_back(cj);
    }
    j["conditions"] = conds;

    j["shor"] = {{"status", to_string(res.shor.status)},
                 {"opt_sdp", res.shor.opt_sdp},
                 {"gap", res.shor.gap},
                 {"x", detail::vector_to_json(res.shor.x)}};
    if (res.socp)
        j["socp"] = {{"status", to_string(res.socp->status)}, {"opt_socp", res.socp->opt_socp}};

    nlohmann::json ej;
    ej["extracted"] = res.extracted.has_value();
    if (res.extracted) {
        ej["x"] = detail::vector_to_json(res.extracted->x);
        ej["objective"] = 2.0 * res.extracted->t;
    } else if (!res.extraction_note.empty()) {
        ej["note"] = res.extraction_note;
    }
    j["extraction"] = ej;

    nlohmann::json vj;
    vj["ran"] = res.pivot.has_value();
    if (res.pivot) {
        vj["leaves"] = res.pivot->points.size();
        vj["all_in_D"] = res.pivot->all_in_D;
    } else if (!res.pivot_note.empty()) {
        vj["note"] = res.pivot_note;
    }
    j["pivot_decomposition"] = vj;

    nlohmann::json pj;
    pj["ran"] = res.purification.has_value();
    if (res.purification) {
        pj["variant"] = res.purification_variant;
        pj["leaves"] = res.purification->points.size();
        pj["all_in_D"] = res.purification->all_in_D;
    } else if (!res.purification_note.empty()) {
        pj["note"] = res.purification_note;
    }
    j["purification"] = pj;

    if (res.oracle) {
        j["oracle"] = {{"found", res.oracle->found},
                       {"best_value", res.oracle->best_value},
                       {"residual", res.oracle->feasibility_residual}};
        if (res.oracle->found) j["oracle"]["best_point"] = detail::vector_to_json(res.oracle->best_point);
    }

    nlohmann::json tj;
    for (const auto& [label, ms] : res.timings_ms) tj[label] = ms;
    j["timings_ms"] = tj;
    return j;
}

inline const char* condition_description(ConditionId id) {
    switch (id) {
        case ConditionId::hull_main:
            return "hull exactness: dim V(F) >= affdim b(F) + 1 on semidefinite faces";
        case ConditionId::hull_symmetries:
            return "hull exactness via symmetry: k >= affdim b(F) + 1 on semidefinite faces";
        case ConditionId::tight_main:
            return "objective tightness: origin excluded from Proj_V(F) b(F)";
        case ConditionId::tight_perturbed:
            return "objective tightness, perturbed: some vanishing h excludes the origin";
        case ConditionId::hull_k_ge_m_plus_2:
            return "hull exactness without polyhedrality: k >= m + 2";
        case ConditionId::tight_k_ge_m_plus_1:
            return "objective tightness without polyhedrality: k >= m + 1";
        case ConditionId::burer_ye:
            return "Burer-Ye coordinate condition (diagonal, inequalities only)";
        case ConditionId::corollary_class:
            return "corollary classes: convex / gtrs / homogeneous-constraint / scaled-identity";
    }
    return "";
}

inline void print_report(std::ostream& os, const AnalysisResult& res) {
    os << "instance: " << (res.name.empty() ? "(unnamed)" : res.name) << "\n";
    os << "  N = " << res.N << ", m_I = " << res.m_I << ", m_E = " << res.m_E
       << ", quadratic eigenvalue multiplicity k = " << res.k
       << " (in the given coordinates; no revealing basis is searched)\n";
    os << "  definiteness certificate: " << to_string(res.assumption1.holds)
       << " (margin " << res.assumption1.margin << ")\n";
    if (res.gp) {
        int semi = 0, maximal = 0;
        for (const Face& f : res.faces) {
            semi += f.semidefinite ? 1 : 0;
            maximal += f.maximal_semidefinite ? 1 : 0;
        }
        os << "  multiplier set: polyhedral (" << to_string(res.gp->provenance) << "), "
           << res.gp->vertices.size() << " vertices, " << res.gp->rays.size() << " rays, "
           << res.faces.size() << " faces (" << semi << " semidefinite, " << maximal
           << " maximal)\n";
    } else {
        os << "  multiplier set: not available (" << res.gamma_note << ")\n";
    }
    os << "  relaxation: status " << to_string(res.shor.status) << ", Opt_SDP = " << res.shor.opt_sdp
       << "\n";
    if (res.socp)
        os << "  lifted SOCP: status " << to_string(res.socp->status)
           << ", Opt_SOCP = " << res.socp->opt_socp << "\n";
    if (res.oracle) {
        if (res.oracle->found)
            os << "  search upper bound: " << res.oracle->best_value << " (residual "
               << res.oracle->feasibility_residual << ")\n";
        else
            os << "  search upper bound: no feasible point found\n";
    }

    os << "  conditions:\n";
    for (const ConditionReport& c : res.conditions) {
        os << "    " << to_string(c.id);
        for (std::size_t pad = std::string(to_string(c.id)).size(); pad < 22; ++pad) os << ' ';
        os << to_string(c.verdict) << "    " << condition_description(c.id) << "\n";
        if (!c.tags.empty()) {
            os << "      tags:";
            for (const std::string& t : c.tags) os << ' ' << t;
            os << "\n";
        }
        if (c.witness_coordinate) os << "      witness coordinate: " << *c.witness_coordinate << "\n";
        if (!c.notes.empty()) os << "      note: " << c.notes << "\n";
    }

    if (res.extracted) {
        os << "  extraction: feasible point recovered, objective " << 2.0 * res.extracted->t
           << "\n";
    } else if (!res.extraction_note.empty()) {
        os << "  extraction: " << res.extraction_note << "\n";
    }
    if (res.pivot) {
        os << "  pivot decomposition: " << res.pivot->points.size()
           << " feasible leaves reconstruct the relaxation optimizer\n";
    } else if (!res.pivot_note.empty()) {
        os << "  pivot decomposition: " << res.pivot_note << "\n";
    }
    if (res.purification) {
        os << "  purification (" << res.purification_variant << "): "
           << res.purification->points.size() << " leaves, all in D: "
           << (res.purification->all_in_D ? "yes" : "no") << "\n";
    } else if (!res.purification_note.empty()) {
        os << "  purification: " << res.purification_note << "\n";
    }
}

}  // namespace qcex
