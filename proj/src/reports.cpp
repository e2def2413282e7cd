#include "spikelab/reports.hpp"

namespace spikelab {

using nlohmann::json;

json groundstate_report(const RadialProfile& profile, const GroundStateConstants& g) {
    return json{{"format_version", kFormatVersion},
                {"w0", profile.w0},
                {"residual_sup", profile.residual_sup},
                {"tail_C", profile.tail_C},
                {"r_max", profile.r_grid.back()},
                {"n", profile.r_grid.size()},
                {"int_w2", g.int_w2},
                {"int_w3", g.int_w3},
                {"c1", g.c1},
                {"c2", g.c2}};
}

json equilibrium_report(int k, bool with_centre, const ModelParams& params,
                        const ReducedConstants& rc, const RadiusResult& root, double asymptotic) {
    return json{{"format_version", kFormatVersion},
                {"k", k},
                {"with_centre", with_centre},
                {"epsilon", params.epsilon},
                {"D", params.D},
                {"sigma", params.sigma},
                {"mu_second", params.mu_second},
                {"xi", rc.xi},
                {"radius", root.radius},
                {"radius_physical", params.epsilon * root.radius},
                {"residual", root.residual},
                {"asymptotic_radius", asymptotic}};
}

json stability_report(int k) {
    const auto rep = classify(k);
    const auto centre = classify_centre(k);
    return json{{"format_version", kFormatVersion},
                {"k", k},
                {"mu", rep.mu_values},
                {"verdict", verdict_name(rep.verdict)},
                {"witness", rep.witness},
                {"centre_verdict", verdict_name(centre.verdict)}};
}

json nlep_report(const RadialOperator& op, const Spectrum& spectrum) {
    json vals = json::array();
    for (const auto& v : spectrum.values) vals.push_back({v.real(), v.imag()});
    return json{{"format_version", kFormatVersion},
                {"m", op.m},
                {"gamma", op.gamma},
                {"n", op.n},
                {"r_max", op.r_max},
                {"eigenvalues", vals}};
}

json field_sidecar(const Field2D& field, double t, const std::string& data_file) {
    return json{{"format_version", kFormatVersion},
                {"nx", field.nx},
                {"ny", field.ny},
                {"h", field.h},
                {"L", field.L},
                {"t", t},
                {"data_file", data_file},
                {"layout", "row-major float64"}};
}

json reproduce_report(const std::vector<CriterionResult>& results) {
    json arr = json::array();
    for (const auto& r : results)
        arr.push_back({{"id", r.id},
                       {"title", r.title},
                       {"passed", r.passed},
                       {"expected_failure", r.expected_failure},
                       {"detail", r.detail}});
    return json{{"format_version", kFormatVersion}, {"results", arr}};
}

}  // namespace spikelab
