#include "mlab/symbols.hpp"

#include <cmath>
#include <memory>

#include "mlab/littlewood_paley.hpp"

namespace mlab::symbols {

double calderon_phi(double s) {
    if (s <= -1.0) return -1.0;
    if (s <= 0.0) return 1.0 + 2.0 * s;
    return 1.0;
}

Symbol calderon_symbol() {
    Symbol s;
    s.arity = 2;
    s.dim = 1;
    s.homogeneous_degree = 0.0;
    s.singular_set = "{(0,0)}";
    s.bounded = true;
    s.bound = 1.0;
    s.id = "calderon";
    s.eval_fn = [](std::span<const double> v) -> Complex {
        double xi = v[0], eta = v[1];
        if (eta == 0.0) {
            require(xi != 0.0, ErrorCode::singular_point,
                    "calderon symbol: singular at (0,0)");
            return xi > 0.0 ? 1.0 : -1.0;
        }
        double sgn = eta > 0.0 ? 1.0 : -1.0;
        return sgn * calderon_phi(xi / eta);
    };
    return s;
}

Symbol tensor_symbol(std::vector<Symbol> factors) {
    require(!factors.empty(), ErrorCode::invalid_argument,
            "tensor_symbol: needs at least one factor");
    const int m = factors[0].arity;
    for (const Symbol& f : factors) {
        require(f.arity == m, ErrorCode::invalid_argument,
                "tensor_symbol: factors disagree on arity");
        require(f.dim == 1, ErrorCode::invalid_argument,
                "tensor_symbol: factors must have per-variable dimension 1");
    }
    const int n = static_cast<int>(factors.size());

    Symbol s;
    s.arity = m;
    s.dim = n;
    bool homog0 = true;
    double deg = 0.0;
    s.bounded = true;
    s.bound = 1.0;
    std::string singular;
    for (const Symbol& f : factors) {
        if (f.homogeneous_degree)
            deg += *f.homogeneous_degree;
        else
            homog0 = false;
        s.bounded = s.bounded && f.bounded;
        s.bound *= f.bound;
        if (!f.singular_set.empty()) {
            if (!singular.empty()) singular += " u ";
            singular += f.singular_set;
        }
        if (!s.id.empty()) s.id += "*";
        s.id += f.id;
    }
    if (homog0) s.homogeneous_degree = deg;
    s.singular_set = singular;

    auto fs = std::make_shared<std::vector<Symbol>>(std::move(factors));
    s.eval_fn = [fs, m, n](std::span<const double> v) -> Complex {
        Complex prod = 1.0;
        std::vector<double> col(m);
        for (int l = 0; l < n; ++l) {
            for (int i = 0; i < m; ++i) col[i] = v[i * n + l];
            prod *= (*fs)[l].eval(col);
        }
        return prod;
    };
    return s;
}

namespace {

// t1/t2 with the conventions 0/0 = 0 and t/0 = +inf for t > 0, so support
// tests stay meaningful on coordinate hyperplanes.
double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// 1 for t <= a, 0 for t >= b, smooth in between.
double fall(double t, double a, double b) {
    if (t <= a) return 1.0;
    if (t >= b) return 0.0;
    return lp::smooth_step01((b - t) / (b - a));
}

double rise(double t, double a, double b) { return 1.0 - fall(t, a, b); }

struct ConeGeometry {
    int m, n;
    // Unnormalized bump for pair (k,l). narrow: supported where
    // max_{j!=k,l}|xi_j| <= (11/10)|xi_k| and (11/10)|xi_k| <= (11/50m)|xi_l|;
    // comparable: same j-condition with (1/10m)|xi_l| <= |xi_k| <= 2|xi_l|.
    double bump(const double* mag, int k, int l, bool narrow) const {
        double v = 1.0;
        for (int j = 0; j < m; ++j) {
            if (j == k || j == l) continue;
            v *= fall(safe_ratio(mag[j], mag[k]), 1.0, 1.1);
            if (v == 0.0) return 0.0;
        }
        double tau = safe_ratio(mag[k], mag[l]);
        double mm = static_cast<double>(m);
        if (narrow) {
            v *= fall(tau, 1.0 / (10.0 * mm), 1.0 / (5.0 * mm));
        } else {
            v *= rise(tau, 1.0 / (10.0 * mm), 1.0 / (8.0 * mm));
            v *= fall(tau, 1.5, 2.0);
        }
        return v;
    }

    double total(const double* mag) const {
        double s = 0.0;
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                if (k == l) continue;
                s += bump(mag, k, l, true) + bump(mag, k, l, false);
            }
        return s;
    }

    void magnitudes(std::span<const double> v, double* mag) const {
        for (int i = 0; i < m; ++i) {
            double r2 = 0.0;
            for (int l = 0; l < n; ++l) r2 += v[i * n + l] * v[i * n + l];
            mag[i] = std::sqrt(r2);
        }
    }
};

} // namespace

std::vector<ConePiece> cone_partition(int m, int n) {
    require(m >= 2, ErrorCode::invalid_argument, "cone_partition: m must be >= 2");
    require(n >= 1, ErrorCode::invalid_argument, "cone_partition: n must be >= 1");
    auto geo = std::make_shared<ConeGeometry>(ConeGeometry{m, n});

    std::vector<ConePiece> pieces;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            if (k == l) continue;
            for (bool narrow : {true, false}) {
                ConePiece piece;
                piece.k = k;
                piece.l = l;
                piece.narrow = narrow;
                Symbol& s = piece.symbol;
                s.arity = m;
                s.dim = n;
                s.homogeneous_degree = 0.0;
                s.singular_set = "{0}";
                s.bounded = true;
                s.bound = 1.0;
                s.id = std::string(narrow ? "cone-phi:" : "cone-psi:") +
                       std::to_string(k + 1) + ":" + std::to_string(l + 1);
                s.eval_fn = [geo, k, l, narrow](std::span<const double> v) -> Complex {
                    std::vector<double> mag(geo->m);
                    geo->magnitudes(v, mag.data());
                    double tot = geo->total(mag.data());
                    require(tot > 0.0, ErrorCode::singular_point,
                            "cone piece: undefined at the origin");
                    return geo->bump(mag.data(), k, l, narrow) / tot;
                };
                pieces.push_back(std::move(piece));
            }
        }
    return pieces;
}

Symbol coifman_meyer_example(const std::string& id) {
    if (id == "cm-ratio") {
        Symbol s;
        s.arity = 2;
        s.dim = 1;
        s.homogeneous_degree = 0.0;
        s.singular_set = "{0}";
        s.bounded = true;
        s.bound = 0.5;
        s.id = "cm-ratio";
        s.eval_fn = [](std::span<const double> v) -> Complex {
            double xi = v[0], eta = v[1];
            double den = xi * xi + eta * eta;
            require(den > 0.0, ErrorCode::singular_point,
                    "cm-ratio: undefined at the origin");
            return xi * eta / den;
        };
        return s;
    }
    if (id == "cm-ratio-2d") {
        // m = 2, n = 2 analogue: dot(xi_1, xi_2) / (|xi_1|^2 + |xi_2|^2).
        Symbol s;
        s.arity = 2;
        s.dim = 2;
        s.homogeneous_degree = 0.0;
        s.singular_set = "{0}";
        s.bounded = true;
        s.bound = 0.5;
        s.id = "cm-ratio-2d";
        s.eval_fn = [](std::span<const double> v) -> Complex {
            double dot = v[0] * v[2] + v[1] * v[3];
            double den = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
            require(den > 0.0, ErrorCode::singular_point,
                    "cm-ratio-2d: undefined at the origin");
            return dot / den;
        };
        return s;
    }
    fail(ErrorCode::unknown_id, "coifman_meyer_example: unknown id '" + id + "'");
}

namespace {

// Cubic Hermite on [a,b] matching values/slopes at the ends.
double hermite(double t, double a, double b, double va, double vb, double sa,
               double sb) {
    double w = b - a;
    double u = (t - a) / w;
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * va + (u3 - 2 * u2 + u) * w * sa +
           (-2 * u3 + 3 * u2) * vb + (u3 - u2) * w * sb;
}

} // namespace

double h_profile(double t) {
    if (t >= 4.0) return 3.0;
    if (t >= 2.0) return hermite(t, 2.0, 4.0, 2.0, 3.0, 1.0, 0.0);
    if (t >= 0.125) return t;
    if (t >= 0.03125) return hermite(t, 0.03125, 0.125, 0.0625, 0.125, 0.0, 1.0);
    return 0.0625;
}

Symbol catalog_lookup(const std::string& id, int m, int n) {
    if (id == "one") {
        Symbol s;
        s.arity = m;
        s.dim = n;
        s.homogeneous_degree = 0.0;
        s.bounded = true;
        s.bound = 1.0;
        s.id = "one";
        s.eval_fn = [](std::span<const double>) -> Complex { return 1.0; };
        return s;
    }
    if (id == "calderon") {
        require(m == 2 && n == 1, ErrorCode::invalid_argument,
                "catalog: calderon requires m=2, n=1");
        return calderon_symbol();
    }
    if (id == "calderon-tensor") {
        require(m == 2, ErrorCode::invalid_argument,
                "catalog: calderon-tensor requires m=2");
        std::vector<Symbol> factors(static_cast<std::size_t>(n), calderon_symbol());
        return tensor_symbol(std::move(factors));
    }
    if (id == "cm-ratio" || id == "cm-ratio-2d") return coifman_meyer_example(id);
    if (id.rfind("cone-phi:", 0) == 0 || id.rfind("cone-psi:", 0) == 0) {
        bool narrow = id[5] == 'h';  // cone-phi vs cone-psi
        std::size_t c1 = id.find(':');
        std::size_t c2 = id.find(':', c1 + 1);
        require(c2 != std::string::npos, ErrorCode::unknown_id,
                "catalog: malformed cone id '" + id + "'");
        int k = std::stoi(id.substr(c1 + 1, c2 - c1 - 1));
        int l = std::stoi(id.substr(c2 + 1));
        require(k >= 1 && l >= 1 && k <= m && l <= m && k != l,
                ErrorCode::invalid_argument, "catalog: cone indices out of range");
        for (ConePiece& piece : cone_partition(m, n))
            if (piece.k == k - 1 && piece.l == l - 1 && piece.narrow == narrow)
                return std::move(piece.symbol);
    }
    fail(ErrorCode::unknown_id, "catalog: unknown symbol id '" + id + "'");
}

} // namespace mlab::symbols
