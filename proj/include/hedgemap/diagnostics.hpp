#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hedgemap/solver.hpp"

#include "json.hpp"

namespace hedgemap {

enum class SequenceKind { basic_lsc, twisted_alternating, custom };

// A perturbation sequence converging to a base point (market coordinates).
//   basic_lsc:            Phi(0, r/sqrt(n), 1/n) + shift
//   twisted_alternating:  Phi(0, -+r/sqrt(n), 0) + shift, sides alternating
struct SequenceSpec {
    SequenceKind kind = SequenceKind::basic_lsc;
    int n_max = 100;  // number of terms
    Point3 shift{};
    std::vector<Point3> custom_terms{};

    // 1-based term index.
    Point3 term(int k, const AdmissibleTriple& triple) const;
};

struct Segment {
    Point3 a, b;
};

double point_segment_distance(const Point3& p, const Segment& seg);

// One-sided set distance: sup over the points of the distance to the segment.
double excess(std::span<const Point3> points, const Segment& seg);

// How far the solution set at x sits from the solution sets along a
// perturbation sequence: the witness is the endpoint of the x-set whose
// tail distance to the perturbed sets stays largest.
struct LscReport {
    Point3 probe_x;
    OptimalSet at_x;
    Point3 witness;
    double gap = 0.0;                // tail-min distance for the witness
    std::vector<double> distances;   // per-term distance for the witness
    int n_max = 0;
};

LscReport lsc_probe(const Point3& x, const SequenceSpec& seq,
                    const AdmissibleTriple& triple, const SolverConfig& cfg = {});

// Oscillation of the forced selection along an alternating sequence whose
// solution sets are singletons: cluster points of the odd and even
// subsequences, estimated by tail averaging, and their distance.
struct SelectionReport {
    Point3 odd_limit, even_limit;
    double oscillation = 0.0;
    std::vector<Point3> values;   // singleton payoff per term
    std::vector<double> widths;   // solution-interval width per term
    int n_max = 0;
};

SelectionReport selection_oscillation(const SequenceSpec& seq,
                                      const AdmissibleTriple& triple,
                                      const SolverConfig& cfg = {});

nlohmann::json lsc_report_to_json(const LscReport& report);
LscReport lsc_report_from_json(const nlohmann::json& j);
void write_lsc_csv(std::ostream& os, const LscReport& report);

nlohmann::json selection_report_to_json(const SelectionReport& report);
SelectionReport selection_report_from_json(const nlohmann::json& j);
void write_selection_csv(std::ostream& os, const SelectionReport& report);

}  // namespace hedgemap
