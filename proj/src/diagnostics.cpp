#include "hedgemap/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hedgemap/errors.hpp"

namespace hedgemap {

Point3 SequenceSpec::term(int k, const AdmissibleTriple& triple) const {
    const double r = triple.boat.r;
    switch (kind) {
        case SequenceKind::basic_lsc: {
            const double n = static_cast<double>(k);
            return rotate({0.0, r / std::sqrt(n), 1.0 / n}) + shift;
        }
        case SequenceKind::twisted_alternating: {
            // k = 2n-1 hits the negative side, k = 2n the positive one.
            const bool positive = (k % 2) == 0;
            const double n = positive ? k / 2.0 : (k + 1) / 2.0;
            const double side = positive ? 1.0 : -1.0;
            return rotate({0.0, side * r / std::sqrt(n), 0.0}) + shift;
        }
        case SequenceKind::custom:
            return custom_terms.at(static_cast<std::size_t>(k - 1)) + shift;
    }
    return shift;
}

double point_segment_distance(const Point3& p, const Segment& seg) {
    const Point3 d = seg.b - seg.a;
    const double len2 = norm2(d);
    if (len2 <= 0.0) return distance(p, seg.a);
    const double t = std::clamp(dot(p - seg.a, d) / len2, 0.0, 1.0);
    return distance(p, seg.a + t * d);
}

double excess(std::span<const Point3> points, const Segment& seg) {
    double worst = 0.0;
    for (const auto& p : points)
        worst = std::max(worst, point_segment_distance(p, seg));
    return worst;
}

LscReport lsc_probe(const Point3& x, const SequenceSpec& seq,
                    const AdmissibleTriple& triple, const SolverConfig& cfg) {
    LscReport report;
    report.probe_x = x;
    report.n_max = seq.n_max;
    report.at_x = optimal_set(x, triple, cfg);

    const Point3 endpoints[2] = {report.at_x.endpoint_lo, report.at_x.endpoint_hi};
    std::vector<double> dist_lo, dist_hi;
    dist_lo.reserve(seq.n_max);
    dist_hi.reserve(seq.n_max);
    for (int k = 1; k <= seq.n_max; ++k) {
        const OptimalSet pert = optimal_set(seq.term(k, triple), triple, cfg);
        const Segment s{pert.endpoint_lo, pert.endpoint_hi};
        dist_lo.push_back(point_segment_distance(endpoints[0], s));
        dist_hi.push_back(point_segment_distance(endpoints[1], s));
    }

    // Tail minimum over the second half approximates the limit inferior.
    const std::size_t tail_from = static_cast<std::size_t>(seq.n_max) / 2;
    auto tail_min = [&](const std::vector<double>& d) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = tail_from; i < d.size(); ++i) m = std::min(m, d[i]);
        return d.empty() ? 0.0 : m;
    };
    const double gap_lo = tail_min(dist_lo);
    const double gap_hi = tail_min(dist_hi);
    if (gap_lo >= gap_hi) {
        report.witness = endpoints[0];
        report.gap = gap_lo;
        report.distances = std::move(dist_lo);
    } else {
        report.witness = endpoints[1];
        report.gap = gap_hi;
        report.distances = std::move(dist_hi);
    }
    return report;
}

SelectionReport selection_oscillation(const SequenceSpec& seq,
                                      const AdmissibleTriple& triple,
                                      const SolverConfig& cfg) {
    SelectionReport report;
    report.n_max = seq.n_max;
    report.values.reserve(seq.n_max);
    report.widths.reserve(seq.n_max);

    // Face endpoints only need to confirm near-singleton width here.
    SolverConfig run_cfg = cfg;
    run_cfg.face_tol = std::min(cfg.face_tol * 100.0, 1e-6);

    for (int k = 1; k <= seq.n_max; ++k) {
        const OptimalSet set = optimal_set(seq.term(k, triple), triple, run_cfg);
        if (set.w1.width() > 1e-4)
            throw NonSingletonSequence(
                "selection_oscillation: optimal set wider than 1e-4 at term " +
                std::to_string(k));
        report.widths.push_back(set.w1.width());
        report.values.push_back(rotate({set.w1.mid(), 0.0, set.w3_star}));
    }

    // Cluster points from the last quarter of each parity class.
    auto tail_average = [&](int parity) {
        std::vector<const Point3*> vals;
        for (int k = 1; k <= seq.n_max; ++k)
            if (k % 2 == parity) vals.push_back(&report.values[k - 1]);
        const std::size_t take = std::max<std::size_t>(1, vals.size() / 4);
        Point3 sum{};
        for (std::size_t i = vals.size() - take; i < vals.size(); ++i)
            sum = sum + *vals[i];
        return (1.0 / static_cast<double>(take)) * sum;
    };
    report.odd_limit = tail_average(1);
    report.even_limit = tail_average(0);
    report.oscillation = distance(report.odd_limit, report.even_limit);
    return report;
}

namespace {

nlohmann::json point_to_json(const Point3& p) { return {p.x1, p.x2, p.x3}; }

Point3 point_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

nlohmann::json lsc_report_to_json(const LscReport& report) {
    nlohmann::json j;
    j["probe_x"] = point_to_json(report.probe_x);
    j["witness"] = point_to_json(report.witness);
    j["gap"] = report.gap;
    j["n_max"] = report.n_max;
    j["rho_at_x"] = report.at_x.rho;
    j["set_at_x"] = {{"w1_lo", report.at_x.w1.lo},
                     {"w1_hi", report.at_x.w1.hi},
                     {"endpoint_lo", point_to_json(report.at_x.endpoint_lo)},
                     {"endpoint_hi", point_to_json(report.at_x.endpoint_hi)}};
    j["distances"] = report.distances;
    return j;
}

LscReport lsc_report_from_json(const nlohmann::json& j) {
    LscReport report;
    report.probe_x = point_from_json(j.at("probe_x"));
    report.witness = point_from_json(j.at("witness"));
    report.gap = j.at("gap").get<double>();
    report.n_max = j.at("n_max").get<int>();
    report.at_x.rho = j.at("rho_at_x").get<double>();
    report.at_x.w1.lo = j.at("set_at_x").at("w1_lo").get<double>();
    report.at_x.w1.hi = j.at("set_at_x").at("w1_hi").get<double>();
    report.at_x.endpoint_lo = point_from_json(j.at("set_at_x").at("endpoint_lo"));
    report.at_x.endpoint_hi = point_from_json(j.at("set_at_x").at("endpoint_hi"));
    report.distances = j.at("distances").get<std::vector<double>>();
    return report;
}

void write_lsc_csv(std::ostream& os, const LscReport& report) {
    os << "n,distance\n";
    char line[64];
    for (std::size_t i = 0; i < report.distances.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%.17g\n", i + 1, report.distances[i]);
        os << line;
    }
}

nlohmann::json selection_report_to_json(const SelectionReport& report) {
    nlohmann::json j;
    j["odd_limit"] = point_to_json(report.odd_limit);
    j["even_limit"] = point_to_json(report.even_limit);
    j["oscillation"] = report.oscillation;
    j["n_max"] = report.n_max;
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : report.values) values.push_back(point_to_json(v));
    j["values"] = values;
    j["widths"] = report.widths;
    return j;
}

SelectionReport selection_report_from_json(const nlohmann::json& j) {
    SelectionReport report;
    report.odd_limit = point_from_json(j.at("odd_limit"));
    report.even_limit = point_from_json(j.at("even_limit"));
    report.oscillation = j.at("oscillation").get<double>();
    report.n_max = j.at("n_max").get<int>();
    for (const auto& v : j.at("values")) report.values.push_back(point_from_json(v));
    report.widths = j.at("widths").get<std::vector<double>>();
    return report;
}

void write_selection_csv(std::ostream& os, const SelectionReport& report) {
    os << "n,z1,z2,z3,width\n";
    char line[160];
    for (std::size_t i = 0; i < report.values.size(); ++i) {
        const Point3& v = report.values[i];
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%.17g\n", i + 1, v.x1,
                      v.x2, v.x3, report.widths[i]);
        os << line;
    }
}

}  // namespace hedgemap
