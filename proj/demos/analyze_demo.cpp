// Minimal library walkthrough: build an instance in code, certify the
// definiteness assumption, inspect the multiplier set, solve the
// relaxation, and recover a feasible decomposition of a boundary point.
#include <iostream>

#include "qcex/analysis.hpp"
#include "qcex/fixtures.hpp"
#include "qcex/oracle.hpp"
#include "qcex/rounding.hpp"

int main() {
    using namespace qcex;

    const QcqpInstance inst = fixtures::b_zero();
    AnalysisOptions opt;
    opt.run_oracle = true;
    opt.oracle.starts = 64;

    const AnalysisResult res = analyze(inst, nullptr, opt);
    print_report(std::cout, res);

    // decompose a boundary point of the projected epigraph by pivoting
    const GammaPolyhedron& gp = *res.gp;
    Vector x(2);
    x << 3.0, 0.0;
    const double t = tighten_t(inst, gp, x);
    const ConvexDecomposition dec = pivot_decompose(inst, gp, res.faces, {x, t});
    std::cout << "\npivot decomposition of the boundary point (3, 0):\n";
    for (std::size_t i = 0; i < dec.points.size(); ++i)
        std::cout << "  weight " << dec.weights[i] << " at x = (" << dec.points[i].x(0) << ", "
                  << dec.points[i].x(1) << ")\n";
    const DecompositionReport rep = verify_decomposition(inst, dec, {x, t});
    std::cout << "verification: " << (rep.ok ? "passed" : "failed") << "\n";
    return rep.ok ? 0 : 1;
}
