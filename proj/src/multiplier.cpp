#include "mlab/multiplier.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "mlab/rng.hpp"

namespace mlab::multiplier {

namespace {

constexpr std::size_t max_cached_table = std::size_t(1) << 22;

struct Band {
    std::vector<int> freqs;        // band point b, axis a -> freqs[b*n + a]
    std::vector<std::size_t> slot; // flat slot of band point in an input spectrum
    int count = 0;                 // points per axis
    int lo = 0;
};

Band make_band(const GridSpec& g, int trunc) {
    Band band;
    band.lo = std::max(-trunc, g.freq_min());
    const int hi = std::min(trunc, g.freq_max());
    band.count = hi - band.lo + 1;
    const int n = g.dim;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(band.count);
    band.freqs.resize(total * n);
    band.slot.resize(total);
    std::vector<int> idx(n, 0);
    std::size_t b = 0;
    do {
        std::size_t flat = 0;
        for (int a = 0; a < n; ++a) {
            int k = band.lo + idx[a];
            band.freqs[b * n + a] = k;
            flat = flat * g.samples_per_axis + g.slot_of_freq(k);
        }
        band.slot[b] = flat;
        ++b;
    } while (advance_index(idx.data(), n, band.count));
    return band;
}

std::string tuple_name(const Band& band, const std::size_t* t, int m, int n) {
    std::string s = "(";
    for (int i = 0; i < m; ++i) {
        for (int a = 0; a < n; ++a) {
            if (i || a) s += ",";
            s += std::to_string(band.freqs[t[i] * n + a]);
        }
    }
    return s + ")";
}

} // namespace

std::size_t MultilinearPlan::band_count() const {
    const int lo = std::max(-trunc_radius, grid.freq_min());
    const int hi = std::min(trunc_radius, grid.freq_max());
    std::size_t total = 1;
    for (int a = 0; a < grid.dim; ++a)
        total *= static_cast<std::size_t>(hi - lo + 1);
    return total;
}

MultilinearPlan make_plan(symbols::Symbol sigma, const GridSpec& g, int trunc_radius,
                          int dealias_factor, SingularPolicy policy, int jobs) {
    g.validate();
    require(sigma.dim == g.dim, ErrorCode::dimension_mismatch,
            "plan: symbol dimension must match the grid");
    require(sigma.arity >= 1, ErrorCode::invalid_argument, "plan: arity must be >= 1");
    require(sigma.arity * sigma.dim <= 4, ErrorCode::invalid_argument,
            "plan: m*n > 4 exceeds the desk-scale budget for exhaustive accumulation");
    require(trunc_radius >= 1 && trunc_radius <= g.samples_per_axis / 2,
            ErrorCode::invalid_argument, "plan: need 1 <= K <= N/2");
    if (dealias_factor == 0) dealias_factor = sigma.arity + 1;
    require(dealias_factor >= sigma.arity + 1, ErrorCode::invalid_argument,
            "plan: dealias factor must be at least m+1");
    require(jobs >= 1, ErrorCode::invalid_argument, "plan: jobs must be >= 1");

    MultilinearPlan plan;
    plan.symbol = std::move(sigma);
    plan.grid = g;
    plan.dealias_factor = dealias_factor;
    plan.trunc_radius = trunc_radius;
    plan.policy = policy;
    plan.jobs = jobs;

    const int m = plan.symbol.arity, n = plan.symbol.dim;
    std::size_t tuples = 1;
    bool overflow = false;
    const std::size_t B = plan.band_count();
    for (int i = 0; i < m; ++i) {
        if (tuples > max_cached_table / std::max<std::size_t>(B, 1)) overflow = true;
        tuples *= B;
    }
    if (!overflow && tuples <= max_cached_table) {
        Band band = make_band(g, trunc_radius);
        plan.symbol_table.resize(tuples);
        std::vector<std::size_t> t(m, 0);
        std::vector<double> xi(static_cast<std::size_t>(m) * n);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t flat = 0; flat < tuples; ++flat) {
            std::size_t rem = flat;
            for (int i = m - 1; i >= 0; --i) {
                t[i] = rem % B;
                rem /= B;
            }
            for (int i = 0; i < m; ++i)
                for (int a = 0; a < n; ++a)
                    xi[i * n + a] = g.xi(band.freqs[t[i] * n + a]);
            try {
                plan.symbol_table[flat] = plan.symbol.eval(xi);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::singular_point) throw;
                plan.symbol_table[flat] = Complex(nan, nan);
            }
        }
    }
    return plan;
}

SampledFunction apply(const MultilinearPlan& plan,
                      std::span<const SampledFunction> inputs) {
    const int m = plan.symbol.arity, n = plan.symbol.dim;
    require(static_cast<int>(inputs.size()) == m, ErrorCode::dimension_mismatch,
            "apply: expected m = " + std::to_string(m) + " inputs");
    for (const SampledFunction& f : inputs) {
        f.check();
        require(f.spec == plan.grid, ErrorCode::dimension_mismatch,
                "apply: all inputs must live on the plan's grid");
    }

    const GridSpec& g = plan.grid;
    Band band = make_band(g, plan.trunc_radius);
    const std::size_t B = band.slot.size();

    // Truncated spectra of the inputs.
    std::vector<std::vector<Complex>> trunc(m);
    for (int i = 0; i < m; ++i) {
        SpectralFunction F = forward_transform(inputs[i]);
        trunc[i].resize(B);
        for (std::size_t b = 0; b < B; ++b) trunc[i][b] = F.coeffs[band.slot[b]];
    }

    const int fine_n = plan.dealias_factor * g.samples_per_axis;
    GridSpec fine(g.dim, fine_n, g.box_half_length);
    const std::size_t fine_total = fine.total_points();

    std::size_t tuples = 1;
    for (int i = 0; i < m; ++i) tuples *= B;
    const bool cached = !plan.symbol_table.empty();

    const int jobs = std::max(1, plan.jobs);
    std::vector<std::vector<Complex>> partial(
        static_cast<std::size_t>(jobs), std::vector<Complex>(fine_total, Complex{}));
    std::vector<std::string> worker_error(static_cast<std::size_t>(jobs));
    std::vector<ErrorCode> worker_code(static_cast<std::size_t>(jobs), ErrorCode::ok);

    auto work = [&](int w, std::size_t begin, std::size_t end) {
        std::vector<Complex>& acc = partial[w];
        std::vector<std::size_t> t(m, 0);
        std::vector<double> xi(static_cast<std::size_t>(m) * n);
        std::vector<int> ssum(n);
        std::size_t rem = begin;
        for (int i = m - 1; i >= 0; --i) {
            t[i] = rem % B;
            rem /= B;
        }
        for (std::size_t flat = begin; flat < end; ++flat) {
            Complex coeff = trunc[0][t[0]];
            for (int i = 1; i < m; ++i) coeff *= trunc[i][t[i]];
            if (coeff != Complex{}) {
                Complex sym;
                bool singular = false;
                if (cached) {
                    sym = plan.symbol_table[flat];
                    singular = std::isnan(sym.real());
                } else {
                    for (int i = 0; i < m; ++i)
                        for (int a = 0; a < n; ++a)
                            xi[i * n + a] = g.xi(band.freqs[t[i] * n + a]);
                    try {
                        sym = plan.symbol.eval(xi);
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::singular_point) throw;
                        singular = true;
                    }
                }
                if (singular) {
                    if (plan.policy == SingularPolicy::error)
                        fail(ErrorCode::singular_point,
                             "apply: symbol singular at frequency tuple " +
                                 tuple_name(band, t.data(), m, n));
                    sym = 0.0;
                }
                if (sym != Complex{}) {
                    for (int a = 0; a < n; ++a) {
                        int s = 0;
                        for (int i = 0; i < m; ++i) s += band.freqs[t[i] * n + a];
                        ssum[a] = s;
                    }
                    std::size_t slot = 0;
                    for (int a = 0; a < n; ++a)
                        slot = slot * fine_n + static_cast<std::size_t>(ssum[a] + fine_n / 2);
                    acc[slot] += coeff * sym;
                }
            }
            // odometer
            for (int i = m - 1; i >= 0; --i) {
                if (++t[i] < B) break;
                t[i] = 0;
            }
        }
    };

    if (jobs == 1) {
        work(0, 0, tuples);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (tuples + jobs - 1) / jobs;
        for (int w = 0; w < jobs; ++w) {
            std::size_t b = std::min(tuples, static_cast<std::size_t>(w) * chunk);
            std::size_t e = std::min(tuples, b + chunk);
            pool.emplace_back([&, w, b, e] {
                try {
                    work(w, b, e);
                } catch (const Error& ex) {
                    worker_error[w] = ex.what();
                    worker_code[w] = ex.code();
                } catch (const std::exception& ex) {
                    worker_error[w] = ex.what();
                    worker_code[w] = ErrorCode::internal;
                }
            });
        }
        for (auto& th : pool) th.join();
        for (int w = 0; w < jobs; ++w)
            if (!worker_error[w].empty()) fail(worker_code[w], worker_error[w]);
    }

    // Merge in worker order, then invert on the dealiased grid.
    SpectralFunction out_spec = SpectralFunction::zeros(fine);
    for (int w = 0; w < jobs; ++w)
        for (std::size_t i = 0; i < fine_total; ++i)
            out_spec.coeffs[i] += partial[w][i];

    double measure = 1.0;
    for (int a = 0; a < (m - 1) * n; ++a) measure /= 2.0 * g.box_half_length;
    for (Complex& c : out_spec.coeffs) c *= measure;

    SampledFunction fine_out = inverse_transform(out_spec);
    SampledFunction out = SampledFunction::zeros(g);
    const int q = plan.dealias_factor;
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        std::size_t fslot = 0;
        for (int a = 0; a < g.dim; ++a)
            fslot = fslot * fine_n + static_cast<std::size_t>(idx[a]) * q;
        out.values[flat] = fine_out.values[fslot];
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return out;
}

SampledFunction random_band_limited(const GridSpec& g, int trunc_radius,
                                    std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t substream) {
    g.validate();
    require(trunc_radius >= 1 && trunc_radius <= g.samples_per_axis / 2,
            ErrorCode::invalid_argument, "random_band_limited: need 1 <= K <= N/2");
    Rng rng = Rng::derive(seed, stream, substream);
    SpectralFunction F = SpectralFunction::zeros(g);
    const double k_sigma = std::max(1.0, trunc_radius / 3.0);
    std::vector<int> idx(g.dim, 0);
    std::size_t flat = 0;
    do {
        bool inside = true;
        double k2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            int k = g.freq_of_slot(idx[a]);
            if (k < -trunc_radius || k > trunc_radius) inside = false;
            k2 += static_cast<double>(k) * k;
        }
        if (inside) {
            double env = std::exp(-0.5 * k2 / (k_sigma * k_sigma));
            F.coeffs[flat] = Complex(rng.gaussian(), rng.gaussian()) * env;
        }
        ++flat;
    } while (advance_index(idx.data(), g.dim, g.samples_per_axis));
    return inverse_transform(F);
}

NormEstimate estimate_operator_norm(const MultilinearPlan& plan,
                                    std::span<const double> p_list, int trials,
                                    std::uint64_t seed) {
    const int m = plan.symbol.arity;
    require(static_cast<int>(p_list.size()) == m, ErrorCode::invalid_argument,
            "estimate_operator_norm: need one exponent per input slot");
    double inv_p = 0.0;
    for (double p : p_list) {
        require(p > 1.0 && std::isfinite(p), ErrorCode::domain,
                "estimate_operator_norm: exponents must lie in (1, inf)");
        inv_p += 1.0 / p;
    }
    const double p_out = 1.0 / inv_p;
    require(trials >= 1, ErrorCode::invalid_argument,
            "estimate_operator_norm: trials must be >= 1");

    NormEstimate est;
    std::vector<SampledFunction> inputs;
    for (int t = 0; t < trials; ++t) {
        inputs.clear();
        double denom = 1.0;
        for (int i = 0; i < m; ++i) {
            inputs.push_back(
                random_band_limited(plan.grid, plan.trunc_radius, seed, t, i));
            denom *= norm_lp(inputs.back(), p_list[i]);
        }
        SampledFunction out =
            multiplier::apply(plan, std::span<const SampledFunction>(inputs));
        double ratio = denom > 0.0 ? norm_lp(out, p_out) / denom : 0.0;
        est.ratios.push_back(ratio);
        est.max_ratio = std::max(est.max_ratio, ratio);
    }
    return est;
}

} // namespace mlab::multiplier
