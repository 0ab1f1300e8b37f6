#include <cmath>
#include <random>

#include "doctest.h"
#include "gfq/cases.hpp"
#include "gfq/errors.hpp"
#include "gfq/wellprep.hpp"
#include "helpers.hpp"

using namespace gfq;
using gfq::testing::random_field;

namespace {

AnalyticField from_case(const std::string& name) { return make_case(name).at(0.0); }

double max_abs(const StateField& q) {
    return std::max({q.u.cwiseAbs().maxCoeff(), q.v.cwiseAbs().maxCoeff(), 1.0});
}

double diff(const StateField& a, const StateField& b) {
    return std::max({(a.u - b.u).cwiseAbs().maxCoeff(), (a.v - b.v).cwiseAbs().maxCoeff(),
                     (a.p - b.p).cwiseAbs().maxCoeff()});
}

// Flattened (u, v) inner product.
double dot_uv(const StateField& a, const StateField& b) {
    return (a.u.array() * b.u.array()).sum() + (a.v.array() * b.v.array()).sum();
}

}  // namespace

TEST_CASE("llrr reproduces constants") {
    AnalyticField f{[](double, double) { return 0.3; }, [](double, double) { return -1.7; },
                    [](double, double) { return 2.0; }, true};
    for (int K = 1; K <= 4; ++K) {
        const Grid2D g(5, 4, K, Boundary::dirichlet);
        const StateField q = llrr_project(f, g);
        CHECK(diff(q, sample_nodal(f, g)) < 1e-13);
    }
}

TEST_CASE("llrr is exact for solenoidal polynomials of degree K") {
    // Stream function x^2 y^2 gives a cubic field.
    AnalyticField f{[](double x, double y) { return 2.0 * x * x * y; },
                    [](double x, double y) { return -2.0 * x * y * y; }, [](double, double) { return 0.0; }, true};
    for (int K = 3; K <= 4; ++K) {
        const Grid2D g(4, 5, K, Boundary::dirichlet, 1.0, 1.3);
        CHECK(diff(llrr_project(f, g), sample_nodal(f, g)) < 1e-12);
        LlrrOptions rev;
        rev.reversed = true;
        CHECK(diff(llrr_project(f, g, rev), sample_nodal(f, g)) < 1e-12);
    }
}

TEST_CASE("llrr output is GFq divergence free") {
    const AnalyticField f = from_case("vortex_smooth");
    const Grid2D g(13, 13, 3, Boundary::dirichlet);
    const StateField q = llrr_project(f, g);
    CHECK(divergence_max(DivergenceKind::gfq, g, q) <= 1e-10 * max_abs(q));
    LlrrOptions rev;
    rev.reversed = true;
    const StateField qr = llrr_project(f, g, rev);
    CHECK(divergence_max(DivergenceKind::gfq, g, qr) <= 1e-10 * max_abs(qr));
    // Both are close to the nodal samples.
    CHECK(diff(q, sample_nodal(f, g)) < 1e-2);
    CHECK(diff(qr, sample_nodal(f, g)) < 1e-2);
}

TEST_CASE("llrr rejects periodic grids") {
    const Grid2D g(4, 4, 2, Boundary::periodic);
    CHECK_THROWS_AS(llrr_project(from_case("vortex_smooth"), g), ParameterError);
}

TEST_CASE("opt projection") {
    SUBCASE("C6 vortex, Q2") {
        const Grid2D g(20, 20, 2, Boundary::dirichlet);
        ProjectionReport rep;
        const StateField q = opt_project(from_case("vortex_c6"), g, -1.0, &rep);
        CHECK(divergence_max(DivergenceKind::gfq, g, q) <= 1e-11 * max_abs(q));
        CHECK(rep.divergence <= 1e-11 * max_abs(q));
        CHECK(rep.method == "direct");
        CHECK((q.p.array() == 1.0).all());
    }
    SUBCASE("feasible points are fixed") {
        const Grid2D g(9, 7, 3, Boundary::dirichlet);
        const StateField q = llrr_project(from_case("vortex_smooth"), g);
        CHECK(diff(opt_project(q, g), q) < 1e-12);
    }
    SUBCASE("orthogonal projector") {
        std::mt19937 gen(11);
        for (int K = 1; K <= 3; ++K) {
            const Grid2D g(5, 6, K, Boundary::dirichlet);
            const StateField x{random_field(g.nx(), g.ny(), gen), random_field(g.nx(), g.ny(), gen),
                               random_field(g.nx(), g.ny(), gen)};
            const StateField y{random_field(g.nx(), g.ny(), gen), random_field(g.nx(), g.ny(), gen), x.p};
            const StateField px = opt_project(x, g), py = opt_project(y, g);
            CHECK(diff(opt_project(px, g), px) < 1e-12);
            // The residual is orthogonal to every feasible direction.
            const StateField r{x.u - px.u, x.v - px.v, x.p};
            const StateField d{py.u - px.u, py.v - px.v, x.p};
            CHECK(std::abs(dot_uv(r, d)) < 1e-10 * (1.0 + std::sqrt(dot_uv(r, r) * dot_uv(d, d))));
        }
    }
    SUBCASE("periodic grids") {
        std::mt19937 gen(5);
        const Grid2D g(6, 6, 2, Boundary::periodic);
        const StateField x{random_field(g.nx(), g.ny(), gen), random_field(g.nx(), g.ny(), gen),
                           random_field(g.nx(), g.ny(), gen)};
        const StateField px = opt_project(x, g);
        CHECK(divergence_max(DivergenceKind::gfq, g, px) < 1e-11);
    }
}

TEST_CASE("projected data is steady for the GFq schemes") {
    const Grid2D g(8, 8, 2, Boundary::dirichlet);
    const StateField q = opt_project(from_case("vortex_smooth"), g);
    for (SchemeKind s : {SchemeKind::supg_gfq, SchemeKind::oss_gfq}) {
        const SchemeOps ops = build_scheme({s, 0.1, g});
        const StateField e = ops.apply_E(q);
        const double scale = max_abs(q);
        CHECK(e.u.cwiseAbs().maxCoeff() < 1e-10 * scale);
        CHECK(e.v.cwiseAbs().maxCoeff() < 1e-10 * scale);
        CHECK(e.p.cwiseAbs().maxCoeff() < 1e-10 * scale);
    }
}

TEST_CASE("opt error converges at the nodal rate") {
    const AnalyticField f = from_case("vortex_smooth");
    for (int K = 1; K <= 2; ++K) {
        std::vector<double> err;
        const std::vector<int> Ns{10, 20, 40};
        for (int N : Ns) {
            const Grid2D g(N, N, K, Boundary::dirichlet);
            const StateField q = opt_project(f, g);
            const StateField s = sample_nodal(f, g);
            err.push_back(std::hypot(l2_norm(g, q.u - s.u), l2_norm(g, q.v - s.v)));
        }
        const auto rates = eoc(err, Ns);
        CHECK(rates.back() > K + 0.8);
    }
}
