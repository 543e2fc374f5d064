#include "crlab/polynomial.hpp"

#include <functional>
#include <sstream>

namespace crlab {

std::string HoloPolynomial::to_string(std::span<const std::string> var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            out << "*" << var_names[v];
            if (e[v] > 1) out << "^" << e[v];
        }
    }
    return out.str();
}

HoloPolynomial random_polynomial(int nvars, unsigned max_degree, Rng& rng) {
    HoloPolynomial p(nvars);
    MultiIndex e(static_cast<size_t>(nvars), 0u);
    // Walk all multi-indices of total degree <= max_degree.
    std::function<void(size_t, unsigned)> walk = [&](size_t v, unsigned budget) {
        if (v + 1 == e.size()) {
            for (unsigned k = 0; k <= budget; ++k) {
                e[v] = k;
                p.add_term(e, Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
            }
            e[v] = 0;
            return;
        }
        for (unsigned k = 0; k <= budget; ++k) {
            e[v] = k;
            walk(v + 1, budget - k);
        }
        e[v] = 0;
    };
    if (nvars > 0) walk(0, max_degree);
    return p;
}

}  // namespace crlab
