#include "opshift/multipoly.hpp"

#include <cmath>
#include <stdexcept>

namespace opshift::poly {

MultiPoly MultiPoly::constant(int var_count, Complex c) {
    MultiPoly p(var_count);
    p.add_term(std::vector<int>(var_count, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int var_count, int index) {
    if (index < 0 || index >= var_count)
        throw std::invalid_argument("MultiPoly::variable: index out of range");
    MultiPoly p(var_count);
    std::vector<int> e(var_count, 0);
    e[index] = 1;
    p.add_term(std::move(e), 1.0);
    return p;
}

MultiPoly MultiPoly::affine(int var_count, Complex c0, std::span<const Complex> ci) {
    if (static_cast<int>(ci.size()) != var_count)
        throw std::invalid_argument("MultiPoly::affine: coefficient count mismatch");
    MultiPoly p(var_count);
    p.add_term(std::vector<int>(var_count, 0), c0);
    for (int i = 0; i < var_count; ++i) {
        std::vector<int> e(var_count, 0);
        e[i] = 1;
        p.add_term(std::move(e), ci[i]);
    }
    return p;
}

MultiPoly MultiPoly::compose(const Polynomial& h, const MultiPoly& inner) {
    MultiPoly r(inner.var_count());
    const auto& c = h.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        r = r * inner;
        r += constant(inner.var_count(), *it);
    }
    return r;
}

void MultiPoly::add_term(std::vector<int> exponents, Complex c) {
    if (static_cast<int>(exponents.size()) != vars_)
        throw std::invalid_argument("MultiPoly::add_term: exponent tuple length mismatch");
    if (c == Complex(0.0))
        return;
    auto [it, inserted] = terms_.emplace(std::move(exponents), c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0))
            terms_.erase(it);
    }
}

Complex MultiPoly::constant_value() const {
    if (terms_.empty())
        return 0.0;
    if (terms_.size() != 1)
        throw std::logic_error("MultiPoly::constant_value: not a constant");
    const auto& [e, c] = *terms_.begin();
    for (int x : e)
        if (x != 0)
            throw std::logic_error("MultiPoly::constant_value: not a constant");
    return c;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    if (vars_ != o.vars_)
        throw std::invalid_argument("MultiPoly: variable count mismatch");
    for (const auto& [e, c] : o.terms_)
        add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(Complex s) {
    if (s == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_)
        c *= s;
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_)
        throw std::invalid_argument("MultiPoly: variable count mismatch");
    MultiPoly r(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            std::vector<int> e(a.vars_);
            for (int i = 0; i < a.vars_; ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(std::move(e), ca * cb);
        }
    return r;
}

Complex MultiPoly::eval(std::span<const Complex> point) const {
    if (static_cast<int>(point.size()) != vars_)
        throw std::invalid_argument("MultiPoly::eval: point dimension mismatch");
    Complex total = 0.0;
    for (const auto& [e, c] : terms_) {
        Complex term = c;
        for (int i = 0; i < vars_; ++i)
            for (int p = 0; p < e[i]; ++p)
                term *= point[i];
        total += term;
    }
    return total;
}

MultiPoly MultiPoly::antiderivative(int var) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        std::vector<int> ne = e;
        ne[var] += 1;
        r.add_term(std::move(ne), c / static_cast<double>(e[var] + 1));
    }
    return r;
}

MultiPoly MultiPoly::substitute_var(int var, int other) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        std::vector<int> ne = e;
        ne[other] += ne[var];
        ne[var] = 0;
        r.add_term(std::move(ne), c);
    }
    return r;
}

MultiPoly MultiPoly::substitute_value(int var, Complex value) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        Complex factor = 1.0;
        for (int p = 0; p < e[var]; ++p)
            factor *= value;
        std::vector<int> ne = e;
        ne[var] = 0;
        r.add_term(std::move(ne), c * factor);
    }
    return r;
}

Complex integrate_simplex(const MultiPoly& p) {
    return integrate_simplex_scaled(p, 1.0);
}

Complex integrate_simplex_scaled(const MultiPoly& p, double kappa) {
    const int m = p.var_count();
    if (m < 1)
        throw std::invalid_argument("integrate_simplex: need at least one variable");
    MultiPoly cur = p;
    for (int v = 0; v < m; ++v) {
        cur = cur.antiderivative(v); // lower limit 0 contributes nothing
        if (v + 1 < m)
            cur = cur.substitute_var(v, v + 1);
        else
            cur = cur.substitute_value(v, kappa);
    }
    return cur.constant_value();
}

} // namespace opshift::poly
