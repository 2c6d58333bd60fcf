#include "seqsel/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <stdexcept>

namespace seqsel {

QuadratureRule gauss_legendre_01(int n) {
    if (n < 1) throw std::invalid_argument("quadrature node count must be >= 1");
    gsl_integration_glfixed_table* table =
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!table) throw std::runtime_error("failed to allocate Gauss-Legendre table");
    QuadratureRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = 0.0, wi = 0.0;
        gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &xi, &wi, table);
        rule.x[i] = xi;
        rule.w[i] = wi;
    }
    gsl_integration_glfixed_table_free(table);
    return rule;
}

}  // namespace seqsel
