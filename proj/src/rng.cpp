#include "jetlift/rng.hpp"

namespace jetlift {

static MultiIndex random_jet_index(Rng& rng, int dim, int max_order) {
    MultiIndex J(dim);
    int order = rng.uniform(0, max_order);
    for (int k = 0; k < order; ++k) J.at(rng.uniform(1, dim)) += 1;
    return J;
}

LocalFunction random_lf(Rng& rng, int dim, const LfGenParams& p) {
    LocalFunction f(dim);
    int nterms = rng.uniform(1, p.max_terms);
    for (int t = 0; t < nterms; ++t) {
        Monomial m;
        m.x = MultiIndex(dim);
        int xdeg = rng.uniform(0, p.max_x_degree);
        for (int k = 0; k < xdeg; ++k) m.x.at(rng.uniform(1, dim)) += 1;
        int nu = rng.uniform(0, p.max_u_factors);
        for (int k = 0; k < nu; ++k) {
            m.u[random_jet_index(rng, dim, p.max_jet_order)] += 1;
        }
        f.add_term(m, rng.rational(p.coeff_bound));
    }
    return f;
}

} // namespace jetlift
