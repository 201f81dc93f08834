#include "doctest.h"
#include "rbp/simplex.hpp"

using namespace rbp;

namespace {

HPolyhedron box01() {
    HPolyhedron p;
    p.dim = 2;
    p.nonneg = true;
    p.rows.push_back({{make_rat(1), make_rat(0)}, make_rat(1)});
    p.rows.push_back({{make_rat(0), make_rat(1)}, make_rat(1)});
    return p;
}

}  // namespace

TEST_CASE("simplex face optimum") {
    HPolyhedron p;
    p.dim = 2;
    p.nonneg = true;
    p.rows.push_back({{make_rat(1), make_rat(1)}, make_rat(1)});
    auto out = lp_optimize({make_rat(1), make_rat(1)}, p, Sense::maximize);
    CHECK(out.status == LpStatus::optimal);
    CHECK(out.value == make_rat(1));
    CHECK(dot({make_rat(1), make_rat(1)}, out.point) == make_rat(1));
}

TEST_CASE("free direction is reported with its ray") {
    HPolyhedron p;
    p.dim = 2;
    p.nonneg = true;
    p.rows.push_back({{make_rat(0), make_rat(1)}, make_rat(1)});
    auto out = lp_optimize({make_rat(1), make_rat(0)}, p, Sense::maximize);
    CHECK(out.status == LpStatus::unbounded);
    CHECK(out.ray == Vec{make_rat(1), make_rat(0)});
}

TEST_CASE("empty set produces a verified farkas witness") {
    HPolyhedron p;
    p.dim = 2;
    p.nonneg = true;
    p.rows.push_back({{make_rat(1), make_rat(0)}, make_rat(-1)});
    auto out = lp_optimize({make_rat(1), make_rat(1)}, p, Sense::maximize);
    CHECK(out.status == LpStatus::infeasible);
    // The outcome verifies internally; spot-check the contradiction here too.
    Rat lb(0);
    for (size_t i = 0; i < out.farkas.size(); ++i) lb += out.farkas[i] * p.rows[i].b;
    CHECK(lb < 0);
}

TEST_CASE("minimization and free variables") {
    // min x1 - x2 over the triangle x1 + x2 <= 2, x1 >= 0, x2 >= 0 shifted to
    // free coordinates via explicit rows.
    HPolyhedron p;
    p.dim = 2;
    p.nonneg = false;
    p.rows.push_back({{make_rat(1), make_rat(1)}, make_rat(2)});
    p.rows.push_back({{make_rat(-1), make_rat(0)}, make_rat(0)});
    p.rows.push_back({{make_rat(0), make_rat(-1)}, make_rat(0)});
    auto out = lp_optimize({make_rat(1), make_rat(-1)}, p, Sense::minimize);
    CHECK(out.status == LpStatus::optimal);
    CHECK(out.value == make_rat(-2));
    CHECK(out.point == Vec{make_rat(0), make_rat(2)});
}

TEST_CASE("negative rhs triggers phase one") {
    // x1 >= 1/3 (written as -x1 <= -1/3), x1 <= 1: feasible band.
    HPolyhedron p;
    p.dim = 1;
    p.nonneg = true;
    p.rows.push_back({{make_rat(-1)}, make_rat(-1, 3)});
    p.rows.push_back({{make_rat(1)}, make_rat(1)});
    auto out = lp_optimize({make_rat(-1)}, p, Sense::maximize);
    CHECK(out.status == LpStatus::optimal);
    CHECK(out.point == Vec{make_rat(1, 3)});
}

TEST_CASE("outcomes are bit-identical across runs") {
    auto p = box01();
    p.rows.push_back({{make_rat(1), make_rat(1)}, make_rat(3, 2)});
    Vec obj{make_rat(2), make_rat(3)};
    auto a = lp_optimize(obj, p, Sense::maximize);
    for (int k = 0; k < 5; ++k) {
        auto b = lp_optimize(obj, p, Sense::maximize);
        CHECK(a.value == b.value);
        CHECK(a.point == b.point);
    }
}

TEST_CASE("zero-dimensional problems") {
    HPolyhedron p;
    p.dim = 0;
    auto out = lp_optimize({}, p, Sense::maximize);
    CHECK(out.status == LpStatus::optimal);
    CHECK(out.value == make_rat(0));
}
