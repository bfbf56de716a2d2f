// Convex decomposition record: a weighted list of epigraph points together
// with the per-step trace emitted by the constructive algorithms.
#pragma once

#include <string>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/model.hpp"

namespace qcex {

struct DecompositionStep {
    // pivoting steps
    int face_affdim_before = -1;
    int face_affdim_after_pos = -1;
    int face_affdim_after_neg = -1;
    Vector direction;        // v
    double direction_t = 0.0;  // s
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    std::string root_kind;   // "vertex" or "ray": which member of Q crossed first
    // purification steps
    Vector split_x;  // iterate at the split
    Vector split_y;
    Vector split_z;
    double first_order_term = 0.0;  // <A_0 x + b_0, y (x) z>
    int rank_before = -1;
};

struct ConvexDecomposition {
    std::vector<EpigraphPoint> points;
    std::vector<double> weights;
    bool all_in_D = false;
    std::vector<DecompositionStep> trace;
};

}  // namespace qcex
