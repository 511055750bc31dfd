#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "mlab/rng.hpp"
#include "mlab/symbols.hpp"

using namespace mlab;
using namespace mlab::symbols;

TEST_CASE("piecewise profile values") {
    CHECK(calderon_phi(-1.0) == -1.0);
    CHECK(calderon_phi(-0.5) == 0.0);
    CHECK(calderon_phi(3.0) == 1.0);
    CHECK(calderon_phi(-2.0) == -1.0);
    CHECK(calderon_phi(0.0) == 1.0);
    // continuity at the knots
    CHECK(calderon_phi(-1.0 - 1e-12) == doctest::Approx(calderon_phi(-1.0 + 1e-12)));
    CHECK(calderon_phi(0.0 - 1e-12) == doctest::Approx(calderon_phi(0.0 + 1e-12)));
}

TEST_CASE("commutator symbol values, extension, and singular point") {
    Symbol s = calderon_symbol();
    CHECK(s.arity == 2);
    CHECK(s.dim == 1);
    auto at = [&](double xi, double eta) {
        double v[2] = {xi, eta};
        return s.eval(std::span<const double>(v, 2));
    };
    CHECK(at(1.0, 2.0) == Complex(1.0, 0.0));
    CHECK(at(-1.0, 2.0) == Complex(0.0, 0.0));
    // the two one-sided limits along eta -> 0 agree with sgn(xi)
    CHECK(at(1.0, 1e-12) == Complex(1.0, 0.0));
    CHECK(at(1.0, -1e-12).real() == doctest::Approx(1.0));
    CHECK(at(1.0, 0.0) == Complex(1.0, 0.0));
    CHECK(at(-1.0, 0.0) == Complex(-1.0, 0.0));
    CHECK_THROWS_AS(at(0.0, 0.0), Error);

    SUBCASE("bounded by 1 and degree-0 homogeneous") {
        Rng rng(8);
        for (int t = 0; t < 1000; ++t) {
            double xi = rng.uniform(-5.0, 5.0), eta = rng.uniform(-5.0, 5.0);
            if (xi == 0.0 && eta == 0.0) continue;
            CHECK(std::abs(at(xi, eta)) <= 1.0 + 1e-15);
            CHECK(std::abs(at(2.0 * xi, 2.0 * eta) - at(xi, eta)) == 0.0);
        }
    }
}

TEST_CASE("tensor symbol multiplies factor evaluations") {
    std::vector<Symbol> factors{calderon_symbol(), calderon_symbol()};
    Symbol t = tensor_symbol(factors);
    CHECK(t.arity == 2);
    CHECK(t.dim == 2);
    REQUIRE(t.homogeneous_degree.has_value());
    CHECK(*t.homogeneous_degree == 0.0);
    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        // layout: (xi_11, xi_12, xi_21, xi_22); factor l sees column l
        double v[4];
        for (double& c : v) c = rng.uniform(-3.0, 3.0);
        double c0[2] = {v[0], v[2]}, c1[2] = {v[1], v[3]};
        Symbol f = calderon_symbol();
        Complex expect = f.eval(std::span<const double>(c0, 2)) *
                         f.eval(std::span<const double>(c1, 2));
        Complex got = t.eval(std::span<const double>(v, 4));
        CHECK(std::abs(got - expect) <= 1e-15);
    }

    SUBCASE("all-ones factors give the constant 1") {
        std::vector<Symbol> ones{catalog_lookup("one", 2, 1), catalog_lookup("one", 2, 1)};
        Symbol u = tensor_symbol(ones);
        double v[4] = {0.3, -0.7, 1.1, 9.0};
        CHECK(u.eval(std::span<const double>(v, 4)) == Complex(1.0, 0.0));
    }
    SUBCASE("arity mismatch is rejected") {
        std::vector<Symbol> bad{calderon_symbol(), catalog_lookup("one", 3, 1)};
        CHECK_THROWS_AS(tensor_symbol(bad), Error);
    }
}

TEST_CASE("cone partition sums to one and honors supports") {
    CHECK_THROWS_AS(cone_partition(1, 1), Error);
    for (int m : {2, 3}) {
        auto pieces = cone_partition(m, 1);
        CHECK(static_cast<int>(pieces.size()) == 2 * m * (m - 1));
        Rng rng(100 + m);
        for (int t = 0; t < 1000; ++t) {
            std::vector<double> xi(m);
            double r2 = 0.0;
            for (double& c : xi) {
                c = rng.gaussian();
                r2 += c * c;
            }
            if (r2 == 0.0) continue;
            for (double& c : xi) c /= std::sqrt(r2);  // unit sphere
            Complex total = 0.0;
            for (const auto& piece : pieces) total += piece.symbol.eval(xi);
            CHECK(std::abs(total - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("cone pieces vanish off their sector: |xi_2| >= 20 |xi_1|, m = 2") {
    auto pieces = cone_partition(2, 1);
    Rng rng(55);
    for (int t = 0; t < 200; ++t) {
        double x1 = rng.uniform(-1.0, 1.0);
        double x2 = (20.0 + rng.uniform(0.0, 30.0)) * std::abs(x1) *
                    (rng.uniform() < 0.5 ? -1.0 : 1.0);
        if (x1 == 0.0) continue;
        double xi[2] = {x1, x2};
        Complex only_l2 = 0.0;
        for (const auto& piece : pieces) {
            Complex v = piece.symbol.eval(std::span<const double>(xi, 2));
            if (piece.l != 1) CHECK(std::abs(v) == 0.0);  // only l = 2 may fire
            else only_l2 += v;
        }
        CHECK(std::abs(only_l2 - 1.0) <= 1e-10);
    }
}

TEST_CASE("cone pieces are degree-0 homogeneous") {
    auto pieces = cone_partition(2, 2);
    Rng rng(66);
    for (int t = 0; t < 200; ++t) {
        double xi[4], xi2[4];
        for (int i = 0; i < 4; ++i) {
            xi[i] = rng.gaussian();
            xi2[i] = 2.0 * xi[i];
        }
        for (const auto& piece : pieces) {
            Complex a = piece.symbol.eval(std::span<const double>(xi, 4));
            Complex b = piece.symbol.eval(std::span<const double>(xi2, 4));
            CHECK(std::abs(a - b) <= 1e-12);
        }
    }
}

TEST_CASE("coifman-meyer baseline example") {
    Symbol s = coifman_meyer_example("cm-ratio");
    double v[2] = {1.0, 1.0};
    CHECK(s.eval(std::span<const double>(v, 2)) == Complex(0.5, 0.0));
    double w[2] = {2.0, 2.0};
    CHECK(s.eval(std::span<const double>(w, 2)) == Complex(0.5, 0.0));
    Rng rng(77);
    for (int t = 0; t < 500; ++t) {
        double u[2] = {rng.gaussian(), rng.gaussian()};
        if (u[0] == 0.0 && u[1] == 0.0) continue;
        CHECK(std::abs(s.eval(std::span<const double>(u, 2))) <= 0.5 + 1e-15);
    }
    CHECK_THROWS_AS(coifman_meyer_example("nope"), Error);
}

TEST_CASE("h profile: values, monotonicity, and C1 joins") {
    CHECK(h_profile(1.0) == 1.0);
    CHECK(h_profile(5.0) == 3.0);
    CHECK(h_profile(0.0) == 0.0625);
    CHECK(h_profile(-3.0) == 0.0625);
    CHECK(h_profile(0.125) == 0.125);

    double prev = h_profile(-1.0);
    for (int i = 1; i <= 9000; ++i) {
        double t = -1.0 + i * 1e-3;
        double v = h_profile(t);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
    // C1 at the joins: one-sided difference quotients agree
    for (double knot : {0.03125, 0.125, 2.0, 4.0}) {
        double d = 1e-6;
        double left = (h_profile(knot) - h_profile(knot - d)) / d;
        double right = (h_profile(knot + d) - h_profile(knot)) / d;
        CHECK(std::abs(left - right) < 1e-4);
    }
}

TEST_CASE("catalog lookup") {
    CHECK_NOTHROW(catalog_lookup("one", 3, 2));
    CHECK_NOTHROW(catalog_lookup("calderon", 2, 1));
    CHECK_THROWS_AS(catalog_lookup("calderon", 3, 1), Error);
    CHECK_NOTHROW(catalog_lookup("calderon-tensor", 2, 2));
    CHECK_NOTHROW(catalog_lookup("cone-phi:1:2", 2, 1));
    CHECK_NOTHROW(catalog_lookup("cone-psi:2:1", 2, 1));
    CHECK_THROWS_AS(catalog_lookup("cone-phi:1:1", 2, 1), Error);
    CHECK_THROWS_AS(catalog_lookup("???", 2, 1), Error);
}
