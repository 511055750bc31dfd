#include "mlab.h"

#include <cmath>
#include <cstring>
#include <string>

#include "mlab/commutator.hpp"
#include "mlab/experiments.hpp"
#include "mlab/grid.hpp"
#include "mlab/littlewood_paley.hpp"
#include "mlab/multiplier.hpp"
#include "mlab/sobolev.hpp"
#include "mlab/symbols.hpp"
#include "mlab/validation.hpp"

struct mlab_grid {
    mlab::GridSpec v;
};
struct mlab_field {
    mlab::SampledFunction v;
};
struct mlab_spectrum {
    mlab::SpectralFunction v;
};
struct mlab_symbol {
    mlab::symbols::Symbol v;
};
struct mlab_plan {
    mlab::multiplier::MultilinearPlan v;
};

namespace {

thread_local std::string t_last_error = "";

mlab_status to_status(mlab::ErrorCode code) {
    return static_cast<mlab_status>(static_cast<int>(code));
}

template <typename Fn>
mlab_status guarded(Fn&& fn) {
    try {
        fn();
        return MLAB_OK;
    } catch (const mlab::Error& e) {
        t_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return MLAB_ERR_INTERNAL;
    }
}

mlab_status need(bool ok, const char* what) {
    if (ok) return MLAB_OK;
    t_last_error = what;
    return MLAB_ERR_INVALID_ARGUMENT;
}

mlab::sobolev::SmoothnessSpec convert(const mlab_smoothness_spec* spec) {
    mlab::require(spec != nullptr, mlab::ErrorCode::invalid_argument,
                  "smoothness spec is null");
    mlab::sobolev::SmoothnessSpec s;
    switch (spec->family) {
        case MLAB_FAMILY_COORDINATEWISE:
            s.family = mlab::sobolev::SmoothnessFamily::coordinatewise;
            break;
        case MLAB_FAMILY_PER_VARIABLE:
            s.family = mlab::sobolev::SmoothnessFamily::per_variable;
            break;
        case MLAB_FAMILY_FULL:
            s.family = mlab::sobolev::SmoothnessFamily::full;
            break;
        default:
            mlab::fail(mlab::ErrorCode::invalid_argument, "unknown family");
    }
    s.arity = spec->arity;
    s.dim = spec->dim;
    mlab::require(spec->gamma != nullptr && spec->gamma_len > 0,
                  mlab::ErrorCode::invalid_argument, "gamma missing");
    s.gamma.assign(spec->gamma, spec->gamma + spec->gamma_len);
    s.r = spec->r;
    s.validate_shapes();
    return s;
}

mlab::commutator::PvQuadratureSpec convert_pv(const double* eps, int n_eps,
                                              int use_richardson) {
    mlab::require(eps != nullptr && n_eps > 0, mlab::ErrorCode::invalid_argument,
                  "epsilon list missing");
    mlab::commutator::PvQuadratureSpec q;
    q.epsilons.assign(eps, eps + n_eps);
    q.extrapolation = use_richardson
                          ? mlab::commutator::PvQuadratureSpec::Extrapolation::richardson
                          : mlab::commutator::PvQuadratureSpec::Extrapolation::none;
    return q;
}

void copy_interleaved(const std::vector<mlab::Complex>& src, double* dst) {
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[2 * i] = src[i].real();
        dst[2 * i + 1] = src[i].imag();
    }
}

} // namespace

extern "C" {

const char* mlab_version(void) { return "1.0.0"; }

const char* mlab_last_error(void) { return t_last_error.c_str(); }

mlab_status mlab_grid_create(int dim, int samples_per_axis, double box_half_length,
                             mlab_grid** out) {
    if (mlab_status s = need(out != nullptr, "out is null"); s != MLAB_OK) return s;
    return guarded([&] {
        *out = new mlab_grid{mlab::GridSpec(dim, samples_per_axis, box_half_length)};
    });
}

void mlab_grid_destroy(mlab_grid* g) { delete g; }
int mlab_grid_dim(const mlab_grid* g) { return g ? g->v.dim : 0; }
int mlab_grid_samples(const mlab_grid* g) { return g ? g->v.samples_per_axis : 0; }
double mlab_grid_half_length(const mlab_grid* g) {
    return g ? g->v.box_half_length : 0.0;
}
size_t mlab_grid_total_points(const mlab_grid* g) {
    return g ? g->v.total_points() : 0;
}

mlab_status mlab_field_create(const mlab_grid* g, const double* values,
                              mlab_field** out) {
    if (mlab_status s = need(g && values && out, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        mlab::SampledFunction f = mlab::SampledFunction::zeros(g->v);
        for (std::size_t i = 0; i < f.values.size(); ++i)
            f.values[i] = mlab::Complex(values[2 * i], values[2 * i + 1]);
        f.check();
        *out = new mlab_field{std::move(f)};
    });
}

void mlab_field_destroy(mlab_field* f) { delete f; }
size_t mlab_field_size(const mlab_field* f) { return f ? f->v.values.size() : 0; }

mlab_status mlab_field_values(const mlab_field* f, double* out_values) {
    if (mlab_status s = need(f && out_values, "null argument"); s != MLAB_OK) return s;
    copy_interleaved(f->v.values, out_values);
    return MLAB_OK;
}

mlab_status mlab_field_grid(const mlab_field* f, mlab_grid** out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    *out = new mlab_grid{f->v.spec};
    return MLAB_OK;
}

mlab_status mlab_field_gaussian(const mlab_grid* g, double center, mlab_field** out) {
    if (mlab_status s = need(g && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] {
        *out = new mlab_field{mlab::sample(
            g->v, [center](std::span<const double> x) -> mlab::Complex {
                double r2 = 0.0;
                for (double c : x) r2 += (c - center) * (c - center);
                return std::exp(-M_PI * r2);
            })};
    });
}

mlab_status mlab_forward_transform(const mlab_field* f, mlab_spectrum** out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { *out = new mlab_spectrum{mlab::forward_transform(f->v)}; });
}

mlab_status mlab_inverse_transform(const mlab_spectrum* F, mlab_field** out) {
    if (mlab_status s = need(F && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { *out = new mlab_field{mlab::inverse_transform(F->v)}; });
}

void mlab_spectrum_destroy(mlab_spectrum* F) { delete F; }
size_t mlab_spectrum_size(const mlab_spectrum* F) {
    return F ? F->v.coeffs.size() : 0;
}

mlab_status mlab_spectrum_values(const mlab_spectrum* F, double* out_values) {
    if (mlab_status s = need(F && out_values, "null argument"); s != MLAB_OK)
        return s;
    copy_interleaved(F->v.coeffs, out_values);
    return MLAB_OK;
}

mlab_status mlab_norm_lp(const mlab_field* f, double p, double* out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { *out = mlab::norm_lp(f->v, p); });
}

mlab_status mlab_norm_weak_lp(const mlab_field* f, double p, double* out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { *out = mlab::norm_weak_lp(f->v, p); });
}

mlab_status mlab_boundary_mass_fraction(const mlab_field* f, double* out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { *out = mlab::boundary_mass_fraction(f->v); });
}

mlab_status mlab_field_write(const mlab_field* f, const char* path) {
    if (mlab_status s = need(f && path, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { mlab::write_field(path, f->v); });
}

mlab_status mlab_field_read(const char* path, mlab_field** out) {
    if (mlab_status s = need(path && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { *out = new mlab_field{mlab::read_field(path)}; });
}

mlab_status mlab_field_export_csv(const mlab_field* f, const char* path) {
    if (mlab_status s = need(f && path, "null argument"); s != MLAB_OK) return s;
    return guarded([&] { mlab::export_csv(path, f->v); });
}

double mlab_dyadic_profile(double r) {
    return mlab::lp::DyadicPartition{1}.eval_radial(r);
}

mlab_status mlab_delta_full(const mlab_field* f, int j, mlab_field** out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] {
        auto p = mlab::lp::build_dyadic_partition(f->v.spec.dim);
        *out = new mlab_field{mlab::lp::delta_full(f->v, j, p)};
    });
}

mlab_status mlab_delta_coord(const mlab_field* f, int j, int axis, mlab_field** out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] {
        auto p1 = mlab::lp::build_dyadic_partition(1);
        *out = new mlab_field{mlab::lp::delta_coord(f->v, j, axis - 1, p1)};
    });
}

mlab_status mlab_square_function(const mlab_field* f, const int* axes, int n_axes,
                                 int jmin, int jmax, mlab_field** out) {
    if (mlab_status s = need(f && axes && n_axes > 0 && out, "null argument");
        s != MLAB_OK)
        return s;
    return guarded([&] {
        auto p1 = mlab::lp::build_dyadic_partition(1);
        std::vector<int> ax(axes, axes + n_axes);
        for (int& a : ax) a -= 1;
        *out = new mlab_field{mlab::lp::square_function(f->v, ax, jmin, jmax, p1)};
    });
}

mlab_status mlab_symbol_create(const char* id, int arity, int dim, mlab_symbol** out) {
    if (mlab_status s = need(id && out, "null argument"); s != MLAB_OK) return s;
    return guarded(
        [&] { *out = new mlab_symbol{mlab::symbols::catalog_lookup(id, arity, dim)}; });
}

void mlab_symbol_destroy(mlab_symbol* s) { delete s; }
int mlab_symbol_arity(const mlab_symbol* s) { return s ? s->v.arity : 0; }
int mlab_symbol_dim(const mlab_symbol* s) { return s ? s->v.dim : 0; }

mlab_status mlab_symbol_eval(const mlab_symbol* s, const double* xi, double* out_re,
                             double* out_im) {
    if (mlab_status st = need(s && xi && out_re && out_im, "null argument");
        st != MLAB_OK)
        return st;
    return guarded([&] {
        std::span<const double> span(xi, static_cast<std::size_t>(s->v.arity) * s->v.dim);
        mlab::Complex v = s->v.eval(span);
        *out_re = v.real();
        *out_im = v.imag();
    });
}

double mlab_calderon_phi(double s) { return mlab::symbols::calderon_phi(s); }
double mlab_h_profile(double t) { return mlab::symbols::h_profile(t); }

mlab_status mlab_fractional_apply(const mlab_field* f,
                                  const mlab_smoothness_spec* spec, mlab_field** out) {
    if (mlab_status s = need(f && spec && out, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        *out = new mlab_field{mlab::sobolev::fractional_apply(f->v, convert(spec))};
    });
}

mlab_status mlab_localized_norm(const mlab_symbol* sigma, int j,
                                const mlab_smoothness_spec* spec, int samples,
                                double box_half_length, double* out) {
    if (mlab_status s = need(sigma && spec && out, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        auto cs = convert(spec);
        mlab::GridSpec g(cs.arity * cs.dim, samples, box_half_length);
        auto p = mlab::lp::build_dyadic_partition(g.dim);
        *out = mlab::sobolev::localized_norm(sigma->v, j, p, cs, g);
    });
}

mlab_status mlab_hormander_constant(const mlab_symbol* sigma,
                                    const mlab_smoothness_spec* spec, int samples,
                                    double box_half_length, int jmin, int jmax,
                                    double* out_max, double* profile) {
    if (mlab_status s = need(sigma && spec && out_max, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        auto cs = convert(spec);
        mlab::GridSpec g(cs.arity * cs.dim, samples, box_half_length);
        auto p = mlab::lp::build_dyadic_partition(g.dim);
        auto prof = mlab::sobolev::hormander_constant(sigma->v, p, cs, g, jmin, jmax);
        *out_max = prof.max_norm;
        if (profile)
            for (std::size_t i = 0; i < prof.norms.size(); ++i) profile[i] = prof.norms[i];
    });
}

mlab_status mlab_multiparameter_constant(const mlab_symbol* sigma,
                                         const mlab_smoothness_spec* spec,
                                         int samples, double box_half_length,
                                         int kmin, int kmax, double* out_max) {
    if (mlab_status s = need(sigma && spec && out_max, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        auto cs = convert(spec);
        mlab::GridSpec g(cs.arity * cs.dim, samples, box_half_length);
        std::vector<mlab::lp::DyadicPartition> bumps(
            static_cast<std::size_t>(cs.dim), mlab::lp::build_dyadic_partition(cs.arity));
        auto prof =
            mlab::sobolev::multiparameter_constant(sigma->v, bumps, cs, g, kmin, kmax);
        *out_max = prof.max_norm;
    });
}

mlab_status mlab_stein_ialpha(const mlab_field* f, double alpha, mlab_field** out) {
    if (mlab_status s = need(f && out, "null argument"); s != MLAB_OK) return s;
    return guarded(
        [&] { *out = new mlab_field{mlab::sobolev::stein_ialpha(f->v, alpha)}; });
}

mlab_status mlab_plan_create(const mlab_symbol* sigma, const mlab_grid* g,
                             int trunc_radius, int dealias_factor,
                             mlab_singular_policy policy, int jobs, mlab_plan** out) {
    if (mlab_status s = need(sigma && g && out, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        *out = new mlab_plan{mlab::multiplier::make_plan(
            sigma->v, g->v, trunc_radius, dealias_factor,
            policy == MLAB_SINGULAR_ZERO ? mlab::multiplier::SingularPolicy::zero
                                         : mlab::multiplier::SingularPolicy::error,
            jobs)};
    });
}

void mlab_plan_destroy(mlab_plan* p) { delete p; }

mlab_status mlab_apply(const mlab_plan* plan, const mlab_field* const* inputs,
                       int n_inputs, mlab_field** out) {
    if (mlab_status s = need(plan && inputs && n_inputs > 0 && out, "null argument");
        s != MLAB_OK)
        return s;
    return guarded([&] {
        std::vector<mlab::SampledFunction> in;
        in.reserve(static_cast<std::size_t>(n_inputs));
        for (int i = 0; i < n_inputs; ++i) {
            mlab::require(inputs[i] != nullptr, mlab::ErrorCode::invalid_argument,
                          "null input field");
            in.push_back(inputs[i]->v);
        }
        *out = new mlab_field{mlab::multiplier::apply(plan->v, in)};
    });
}

mlab_status mlab_estimate_operator_norm(const mlab_plan* plan, const double* p_list,
                                        int n_p, int trials, uint64_t seed,
                                        double* ratios, double* out_max) {
    if (mlab_status s = need(plan && p_list && n_p > 0 && out_max, "null argument");
        s != MLAB_OK)
        return s;
    return guarded([&] {
        std::span<const double> ps(p_list, static_cast<std::size_t>(n_p));
        auto est = mlab::multiplier::estimate_operator_norm(plan->v, ps, trials, seed);
        *out_max = est.max_ratio;
        if (ratios)
            for (std::size_t i = 0; i < est.ratios.size(); ++i) ratios[i] = est.ratios[i];
    });
}

mlab_status mlab_antiderivative(const mlab_field* a, mlab_field** out) {
    if (mlab_status s = need(a && out, "null argument"); s != MLAB_OK) return s;
    return guarded(
        [&] { *out = new mlab_field{mlab::commutator::antiderivative(a->v)}; });
}

mlab_status mlab_calderon_c1_direct(const mlab_field* f, const mlab_field* a,
                                    const double* eps, int n_eps, int use_richardson,
                                    int jobs, mlab_field** out) {
    if (mlab_status s = need(f && a && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] {
        *out = new mlab_field{mlab::commutator::calderon_c1_direct(
            f->v, a->v, convert_pv(eps, n_eps, use_richardson), jobs)};
    });
}

mlab_status mlab_calderon_c1_multiplier(const mlab_field* f, const mlab_field* a,
                                        int trunc_radius, int jobs, mlab_field** out) {
    if (mlab_status s = need(f && a && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] {
        *out = new mlab_field{
            mlab::commutator::calderon_c1_multiplier(f->v, a->v, trunc_radius, jobs)};
    });
}

mlab_status mlab_calderon_cn(const mlab_field* f, const mlab_field* a,
                             mlab_commutator_mode mode, const double* eps, int n_eps,
                             int use_richardson, int trunc_radius, int jobs,
                             mlab_field** out) {
    if (mlab_status s = need(f && a && out, "null argument"); s != MLAB_OK) return s;
    return guarded([&] {
        auto q = mode == MLAB_COMMUTATOR_DIRECT
                     ? convert_pv(eps, n_eps, use_richardson)
                     : mlab::commutator::PvQuadratureSpec::richardson_default();
        *out = new mlab_field{mlab::commutator::calderon_cn(
            f->v, a->v,
            mode == MLAB_COMMUTATOR_DIRECT ? mlab::commutator::Mode::direct
                                           : mlab::commutator::Mode::multiplier,
            q, trunc_radius, jobs)};
    });
}

mlab_status mlab_phi_transform_check(double gamma, int samples,
                                     double box_half_length, double* out_fitted_c,
                                     double* out_residual) {
    if (mlab_status s = need(out_fitted_c && out_residual, "null argument");
        s != MLAB_OK)
        return s;
    return guarded([&] {
        auto rep = mlab::validation::phi_fractional_transform_check(
            gamma, mlab::GridSpec(1, samples, box_half_length));
        *out_fitted_c = rep.fitted_c;
        *out_residual = rep.residual;
    });
}

mlab_status mlab_phi_derivative_check(int samples, double box_half_length,
                                      double* out_max_error) {
    if (mlab_status s = need(out_max_error != nullptr, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        auto rep = mlab::validation::phi_derivative_identity_check(
            mlab::GridSpec(1, samples, box_half_length));
        *out_max_error = rep.max_error;
    });
}

mlab_status mlab_refinement_study(const char* experiment_id, const double* ladder,
                                  int n_ladder, double* out_order, double* errors) {
    if (mlab_status s =
            need(experiment_id && ladder && n_ladder >= 2 && out_order, "null argument");
        s != MLAB_OK)
        return s;
    return guarded([&] {
        mlab::experiments::init();
        std::span<const double> l(ladder, static_cast<std::size_t>(n_ladder));
        auto rep = mlab::validation::refinement_study(experiment_id, l);
        *out_order = rep.fitted_order;
        if (errors)
            for (std::size_t i = 0; i < rep.errors.size(); ++i) errors[i] = rep.errors[i];
    });
}

int mlab_command_count(void) {
    return static_cast<int>(mlab::experiments::command_ids().size());
}

const char* mlab_command_id(int index) {
    static thread_local std::string keep;
    auto ids = mlab::experiments::command_ids();
    if (index < 0 || index >= static_cast<int>(ids.size())) return nullptr;
    keep = ids[static_cast<std::size_t>(index)];
    return keep.c_str();
}

const char* mlab_command_help(const char* id) {
    static thread_local std::string keep;
    keep = id ? mlab::experiments::command_help(id) : "";
    return keep.c_str();
}

mlab_status mlab_run_experiment(const char* config_text, const char* out_root,
                                int* exit_code, char* summary, size_t cap) {
    if (mlab_status s = need(config_text && exit_code, "null argument"); s != MLAB_OK)
        return s;
    return guarded([&] {
        auto cfg = mlab::experiments::ExperimentConfig::parse(config_text);
        auto res = mlab::experiments::run(
            cfg, mlab::experiments::resolve_out_root(out_root ? out_root : ""));
        *exit_code = res.exit_code;
        if (summary && cap > 0) {
            std::size_t n = std::min(cap - 1, res.summary.size());
            std::memcpy(summary, res.summary.data(), n);
            summary[n] = '\0';
        }
    });
}

} // extern "C"
