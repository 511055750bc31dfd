#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlab/grid.hpp"

namespace mlab::symbols {

// An n-dimensional m-linear multiplier symbol: a bounded map on R^{mn}
// minus a declared singular set. The argument layout is variable-major:
// (xi_11,...,xi_1n, xi_21,...,xi_2n, ..., xi_m1,...,xi_mn).
struct Symbol {
    int arity = 1;                // m
    int dim = 1;                  // n
    std::function<Complex(std::span<const double>)> eval_fn;
    std::optional<double> homogeneous_degree;
    std::string singular_set;     // textual description, empty if none
    bool bounded = true;
    double bound = 1.0;
    std::string id;

    Complex eval(std::span<const double> xi) const {
        require(static_cast<int>(xi.size()) == arity * dim,
                ErrorCode::dimension_mismatch, "symbol eval: wrong dimension");
        return eval_fn(xi);
    }
};

// Piecewise-linear profile: -1 for s <= -1, 1+2s for -1 < s <= 0, 1 for s > 0.
double calderon_phi(double s);

// sgn(eta) * calderon_phi(xi/eta) for eta != 0, continuously extended to
// sgn(xi) on the punctured line {eta = 0, xi != 0}; singular only at (0,0).
Symbol calderon_symbol();

// Product of n arity-m, dimension-1 factors: factor l sees column l,
// i.e. (xi_1l, ..., xi_ml).
Symbol tensor_symbol(std::vector<Symbol> factors);

// One piece of the cone partition of unity on R^{mn} \ {0}.
struct ConePiece {
    int k = 0;            // second-largest slot (0-based)
    int l = 0;            // largest slot (0-based)
    bool narrow = true;   // true: the piece supported where |xi_k| << |xi_l|
    Symbol symbol;
};

// Smooth degree-0 homogeneous pieces, one narrow and one comparable piece
// per ordered pair (k, l), k != l, summing to 1 away from the origin.
// Built from bumps in the magnitude ratios |xi_j|/|xi_k| and |xi_k|/|xi_l|,
// normalized by the (strictly positive) total sum.
std::vector<ConePiece> cone_partition(int m, int n);

// Cataloged smooth baselines, e.g. "cm-ratio": dot(xi_1,xi_2)/(|xi_1|^2+|xi_2|^2).
Symbol coifman_meyer_example(const std::string& id);

// Nondecreasing C^1 profile: 1/16 below 1/32, t on [1/8,2), 3 from 4 on,
// with monotone cubic Hermite joins on [1/32,1/8) and [2,4).
double h_profile(double t);

// String-addressable catalog for configs. Understood ids:
//   "one", "calderon", "cm-ratio", "calderon-tensor" (n factors),
//   "cone-phi:<k>:<l>", "cone-psi:<k>:<l>" (1-based k, l).
Symbol catalog_lookup(const std::string& id, int m, int n);

} // namespace mlab::symbols
