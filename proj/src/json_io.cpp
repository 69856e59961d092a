#include "opshift/json_io.hpp"

#include <stdexcept>

namespace opshift::io {

json matrix_to_json(const numlin::ComplexMatrix& m) {
    json entries = json::array();
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c)
            entries.push_back({m(r, c).real(), m(r, c).imag()});
    return {{"dim", m.dim()}, {"entries", std::move(entries)}};
}

numlin::ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw std::invalid_argument("matrix JSON must be {dim, entries}");
    const int d = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (d < 1 || !entries.is_array() || entries.size() != static_cast<size_t>(d) * d)
        throw std::invalid_argument("matrix JSON: entries must hold dim*dim [re, im] pairs");
    numlin::ComplexMatrix m(d);
    size_t i = 0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c, ++i) {
            const auto& e = entries[i];
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix JSON: each entry must be [re, im]");
            m(r, c) = {e[0].get<double>(), e[1].get<double>()};
        }
    if (!m.all_finite())
        throw std::invalid_argument("matrix JSON: non-finite entry");
    return m;
}

json poly_to_json(const poly::Polynomial& p) {
    json coeffs = json::array();
    for (const auto& c : p.coefficients())
        coeffs.push_back({c.real(), c.imag()});
    return coeffs;
}

poly::Polynomial poly_from_json(const json& j) {
    if (!j.is_array())
        throw std::invalid_argument("polynomial JSON must be an array of [re, im] pairs");
    std::vector<numlin::Complex> coeffs;
    coeffs.reserve(j.size());
    for (const auto& e : j) {
        if (e.is_number()) {
            coeffs.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2) {
            coeffs.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            throw std::invalid_argument("polynomial JSON: coefficient must be number or [re, im]");
        }
    }
    return poly::Polynomial(std::move(coeffs));
}

json pair_to_json(const numlin::ContractionPair& p) {
    return {{"u0", matrix_to_json(p.u0)}, {"v", matrix_to_json(p.v)}};
}

numlin::ContractionPair pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("u0") || !j.contains("v"))
        throw std::invalid_argument("pair JSON must be {u0, v}");
    return numlin::ContractionPair(matrix_from_json(j.at("u0")), matrix_from_json(j.at("v")));
}

} // namespace opshift::io
