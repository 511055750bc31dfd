#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "mlab.h"

namespace {

struct GridHandle {
    mlab_grid* g = nullptr;
    GridHandle(int d, int n, double L) { REQUIRE(mlab_grid_create(d, n, L, &g) == MLAB_OK); }
    ~GridHandle() { mlab_grid_destroy(g); }
};

struct FieldHandle {
    mlab_field* f = nullptr;
    FieldHandle() = default;
    explicit FieldHandle(mlab_field* p) : f(p) {}
    ~FieldHandle() { mlab_field_destroy(f); }
    mlab_field** out() { return &f; }
};

} // namespace

TEST_CASE("grid and field lifecycle with argument validation") {
    CHECK(mlab_grid_create(1, 7, 1.0, nullptr) == MLAB_ERR_INVALID_ARGUMENT);
    mlab_grid* bad = nullptr;
    CHECK(mlab_grid_create(1, 7, 1.0, &bad) == MLAB_ERR_INVALID_ARGUMENT);
    CHECK(std::string(mlab_last_error()).find("even") != std::string::npos);

    GridHandle g(2, 16, 2.0);
    CHECK(mlab_grid_dim(g.g) == 2);
    CHECK(mlab_grid_samples(g.g) == 16);
    CHECK(mlab_grid_half_length(g.g) == 2.0);
    CHECK(mlab_grid_total_points(g.g) == 256);

    std::vector<double> vals(2 * 256, 0.0);
    vals[0] = 1.5;
    vals[1] = -0.5;
    FieldHandle f;
    REQUIRE(mlab_field_create(g.g, vals.data(), f.out()) == MLAB_OK);
    CHECK(mlab_field_size(f.f) == 256);
    std::vector<double> back(2 * 256, 7.0);
    REQUIRE(mlab_field_values(f.f, back.data()) == MLAB_OK);
    CHECK(back[0] == 1.5);
    CHECK(back[1] == -0.5);
}

TEST_CASE("transform round trip and norms through the shared surface") {
    GridHandle g(1, 256, 8.0);
    FieldHandle f;
    REQUIRE(mlab_field_gaussian(g.g, 0.0, f.out()) == MLAB_OK);

    double l2 = 0.0;
    REQUIRE(mlab_norm_lp(f.f, 2.0, &l2) == MLAB_OK);
    CHECK(std::abs(l2 - std::pow(2.0, -0.25)) < 1e-8);
    CHECK(mlab_norm_lp(f.f, -1.0, &l2) == MLAB_ERR_DOMAIN);
    double weak = 0.0;
    REQUIRE(mlab_norm_weak_lp(f.f, 1.0, &weak) == MLAB_OK);
    double l1 = 0.0;
    REQUIRE(mlab_norm_lp(f.f, 1.0, &l1) == MLAB_OK);
    CHECK(weak <= l1);
    double frac = 1.0;
    REQUIRE(mlab_boundary_mass_fraction(f.f, &frac) == MLAB_OK);
    CHECK(frac < 1e-6);

    mlab_spectrum* F = nullptr;
    REQUIRE(mlab_forward_transform(f.f, &F) == MLAB_OK);
    CHECK(mlab_spectrum_size(F) == 256);
    FieldHandle round;
    REQUIRE(mlab_inverse_transform(F, round.out()) == MLAB_OK);
    mlab_spectrum_destroy(F);
    std::vector<double> a(512), b(512);
    REQUIRE(mlab_field_values(f.f, a.data()) == MLAB_OK);
    REQUIRE(mlab_field_values(round.f, b.data()) == MLAB_OK);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("binary container io through the shared surface") {
    auto dir = std::filesystem::temp_directory_path() / "mlab-capi";
    std::filesystem::create_directories(dir);
    std::string path = (dir / "f.mlab").string();
    GridHandle g(1, 64, 4.0);
    FieldHandle f;
    REQUIRE(mlab_field_gaussian(g.g, 0.25, f.out()) == MLAB_OK);
    REQUIRE(mlab_field_write(f.f, path.c_str()) == MLAB_OK);
    FieldHandle r;
    REQUIRE(mlab_field_read(path.c_str(), r.out()) == MLAB_OK);
    CHECK(mlab_field_size(r.f) == 64);
    CHECK(mlab_field_read((path + ".absent").c_str(), r.out()) == MLAB_ERR_IO);
    REQUIRE(mlab_field_export_csv(f.f, (dir / "f.csv").string().c_str()) == MLAB_OK);
}

TEST_CASE("symbols: catalog, evaluation, singular points") {
    mlab_symbol* s = nullptr;
    CHECK(mlab_symbol_create("garbage", 2, 1, &s) == MLAB_ERR_UNKNOWN_ID);
    REQUIRE(mlab_symbol_create("calderon", 2, 1, &s) == MLAB_OK);
    CHECK(mlab_symbol_arity(s) == 2);
    CHECK(mlab_symbol_dim(s) == 1);
    double xi[2] = {1.0, 2.0}, re = 0.0, im = 1.0;
    REQUIRE(mlab_symbol_eval(s, xi, &re, &im) == MLAB_OK);
    CHECK(re == 1.0);
    CHECK(im == 0.0);
    double origin[2] = {0.0, 0.0};
    CHECK(mlab_symbol_eval(s, origin, &re, &im) == MLAB_ERR_SINGULAR_POINT);
    mlab_symbol_destroy(s);

    CHECK(mlab_calderon_phi(-0.5) == 0.0);
    CHECK(mlab_h_profile(5.0) == 3.0);
    CHECK(mlab_dyadic_profile(1.0) == 1.0);
    CHECK(mlab_dyadic_profile(0.25) == 0.0);
}

TEST_CASE("sobolev surface: fractional ops and constants") {
    GridHandle g(2, 32, 4.0);
    FieldHandle f;
    REQUIRE(mlab_field_gaussian(g.g, 0.0, f.out()) == MLAB_OK);
    double gam[1] = {1.1};
    mlab_smoothness_spec spec{MLAB_FAMILY_FULL, 2, 1, gam, 1, 2.0};
    FieldHandle lifted;
    REQUIRE(mlab_fractional_apply(f.f, &spec, lifted.out()) == MLAB_OK);
    double ngam[1] = {-1.1};
    mlab_smoothness_spec inv{MLAB_FAMILY_FULL, 2, 1, ngam, 1, 2.0};
    FieldHandle back;
    REQUIRE(mlab_fractional_apply(lifted.f, &inv, back.out()) == MLAB_OK);
    std::vector<double> a(2 * 1024), b(2 * 1024);
    REQUIRE(mlab_field_values(f.f, a.data()) == MLAB_OK);
    REQUIRE(mlab_field_values(back.f, b.data()) == MLAB_OK);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst < 1e-9);

    mlab_symbol* cal = nullptr;
    REQUIRE(mlab_symbol_create("calderon", 2, 1, &cal) == MLAB_OK);
    double cw[2] = {0.8, 0.8};
    mlab_smoothness_spec hspec{MLAB_FAMILY_COORDINATEWISE, 2, 1, cw, 2, 1.5};
    double amax = 0.0;
    std::vector<double> profile(5, 0.0);
    REQUIRE(mlab_hormander_constant(cal, &hspec, 64, 4.0, -2, 2, &amax, profile.data()) ==
            MLAB_OK);
    CHECK(amax > 0.0);
    for (double v : profile) CHECK(std::abs(v - amax) / amax < 0.02);
    mlab_symbol_destroy(cal);
}

TEST_CASE("multiplier plan and commutator cross-check through the C API") {
    GridHandle g(1, 256, 8.0);
    FieldHandle f, a;
    REQUIRE(mlab_field_gaussian(g.g, 0.0, f.out()) == MLAB_OK);
    REQUIRE(mlab_field_gaussian(g.g, 0.25, a.out()) == MLAB_OK);

    double eps[3] = {3.0, 2.0, 1.0};
    FieldHandle direct;
    REQUIRE(mlab_calderon_c1_direct(f.f, a.f, eps, 3, 1, 1, direct.out()) == MLAB_OK);
    FieldHandle mult;
    REQUIRE(mlab_calderon_c1_multiplier(f.f, a.f, 64, 1, mult.out()) == MLAB_OK);

    std::vector<double> d(512), m(512);
    REQUIRE(mlab_field_values(direct.f, d.data()) == MLAB_OK);
    REQUIRE(mlab_field_values(mult.f, m.data()) == MLAB_OK);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d.size(); i += 2) {
        double dre = d[i] - m[i], dim = d[i + 1] - m[i + 1];
        num += dre * dre + dim * dim;
        den += m[i] * m[i] + m[i + 1] * m[i + 1];
    }
    CHECK(std::sqrt(num / den) < 1e-3);

    SUBCASE("operator norm sampling is reachable and deterministic") {
        mlab_symbol* one = nullptr;
        REQUIRE(mlab_symbol_create("one", 2, 1, &one) == MLAB_OK);
        mlab_plan* plan = nullptr;
        REQUIRE(mlab_plan_create(one, g.g, 32, 0, MLAB_SINGULAR_ZERO, 1, &plan) ==
                MLAB_OK);
        const mlab_field* ins[2] = {f.f, a.f};
        FieldHandle prod;
        REQUIRE(mlab_apply(plan, ins, 2, prod.out()) == MLAB_OK);
        double ps[2] = {2.0, 2.0};
        double ratios_a[5], ratios_b[5], mx_a = 0, mx_b = 0;
        REQUIRE(mlab_estimate_operator_norm(plan, ps, 2, 5, 99, ratios_a, &mx_a) ==
                MLAB_OK);
        REQUIRE(mlab_estimate_operator_norm(plan, ps, 2, 5, 99, ratios_b, &mx_b) ==
                MLAB_OK);
        CHECK(mx_a == mx_b);
        for (int i = 0; i < 5; ++i) CHECK(ratios_a[i] == ratios_b[i]);
        CHECK(mx_a <= 1.0 + 1e-12);
        mlab_plan_destroy(plan);
        mlab_symbol_destroy(one);
    }
}

TEST_CASE("validation checks and refinement through the C API") {
    double c = 0.0, res = 1.0;
    REQUIRE(mlab_phi_transform_check(1.5, 2048, 64.0, &c, &res) == MLAB_OK);
    CHECK(res <= 0.05);
    CHECK(c < 0.0);
    CHECK(mlab_phi_transform_check(2.5, 2048, 64.0, &c, &res) == MLAB_ERR_DOMAIN);

    double order = 0.0, errs[3];
    double ladder[3] = {24, 32, 48};
    REQUIRE(mlab_refinement_study("gaussian-transform", ladder, 3, &order, errs) ==
            MLAB_OK);
    CHECK(order >= 4.0);
    CHECK(mlab_refinement_study("nope", ladder, 3, &order, errs) ==
          MLAB_ERR_UNKNOWN_ID);
}

TEST_CASE("experiment runner through the C API") {
    CHECK(mlab_command_count() == 12);
    CHECK(std::string(mlab_command_id(0)).size() > 0);
    CHECK(std::string(mlab_command_help("partition-check")).find("partition") !=
          std::string::npos);

    auto out = std::filesystem::temp_directory_path() / "mlab-capi-run";
    int exit_code = -1;
    char summary[4096];
    REQUIRE(mlab_run_experiment("command = partition-check\nsamples = 256\n",
                                out.string().c_str(), &exit_code, summary,
                                sizeof(summary)) == MLAB_OK);
    CHECK(exit_code == 0);
    CHECK(std::string(summary).find("\"status\":\"pass\"") != std::string::npos);

    CHECK(mlab_run_experiment("command = nope\n", out.string().c_str(), &exit_code,
                              summary, sizeof(summary)) == MLAB_ERR_CONFIG);
}
