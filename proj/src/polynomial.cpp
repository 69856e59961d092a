#include "opshift/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opshift::poly {

Polynomial::Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> real_coeffs) {
    c_.reserve(real_coeffs.size());
    for (double v : real_coeffs)
        c_.emplace_back(v, 0.0);
    trim();
}

Polynomial Polynomial::monomial(int power, Complex coeff) {
    if (power < 0)
        throw std::invalid_argument("monomial: negative power");
    std::vector<Complex> c(power + 1);
    c[power] = coeff;
    return Polynomial(std::move(c));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == Complex(0.0))
        c_.pop_back();
}

Complex Polynomial::coefficient(int power) const {
    if (power < 0 || power >= static_cast<int>(c_.size()))
        return 0.0;
    return c_[power];
}

Complex Polynomial::operator()(Complex z) const {
    Complex r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        r = r * z + *it;
    return r;
}

Polynomial Polynomial::derivative(int n) const {
    if (n < 0)
        throw std::invalid_argument("derivative: order must be >= 0");
    std::vector<Complex> c = c_;
    for (int pass = 0; pass < n; ++pass) {
        if (c.empty())
            break;
        for (size_t j = 1; j < c.size(); ++j)
            c[j - 1] = c[j] * static_cast<double>(j);
        c.pop_back();
    }
    return Polynomial(std::move(c));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<Complex> c(c_.size() + 1);
    for (size_t j = 0; j < c_.size(); ++j)
        c[j + 1] = c_[j] / static_cast<double>(j + 1);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::compose_affine(Complex a, Complex b) const {
    // Horner in the affine argument: result = (...(c_d (a+bt) + c_{d-1})...).
    std::vector<Complex> r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        std::vector<Complex> next(r.size() + 1);
        for (size_t j = 0; j < r.size(); ++j) {
            next[j] += r[j] * a;
            next[j + 1] += r[j] * b;
        }
        next[0] += *it;
        r = std::move(next);
    }
    return Polynomial(std::move(r));
}

numlin::ComplexMatrix Polynomial::operator()(const numlin::ComplexMatrix& x) const {
    const int d = x.dim();
    numlin::ComplexMatrix r(d);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        r = r * x;
        for (int i = 0; i < d; ++i)
            r(i, i) += *it;
    }
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (size_t j = 0; j < o.c_.size(); ++j)
        c_[j] += o.c_[j];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (size_t j = 0; j < o.c_.size(); ++j)
        c_[j] -= o.c_[j];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(Complex s) {
    for (auto& v : c_)
        v *= s;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<Complex> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
}

double sup_norm_circle(const Polynomial& f) {
    if (f.is_zero())
        return 0.0;
    constexpr int kGrid = 4096;
    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    std::vector<std::pair<double, double>> best; // (value, theta), keep top 8
    auto value_at = [&](double theta) { return std::abs(f(std::polar(1.0, theta))); };

    std::vector<double> vals(kGrid);
    for (int i = 0; i < kGrid; ++i)
        vals[i] = value_at(kTwoPi * i / kGrid);
    std::vector<int> idx(kGrid);
    for (int i = 0; i < kGrid; ++i)
        idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + 8, idx.end(),
                      [&](int a, int b) { return vals[a] > vals[b]; });

    double m = 0.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int r = 0; r < 8; ++r) {
        double lo = kTwoPi * (idx[r] - 1) / kGrid;
        double hi = kTwoPi * (idx[r] + 1) / kGrid;
        // Golden-section maximization of |f| on [lo, hi].
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = value_at(x1), f2 = value_at(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = value_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = value_at(x1);
            }
        }
        m = std::max({m, f1, f2});
    }
    return m;
}

Complex divided_difference(const Polynomial& f, std::span<const Complex> nodes) {
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n < 0)
        throw std::invalid_argument("divided_difference: need at least one node");
    if (n == 0)
        return f(nodes[0]);

    // Sort so near-equal nodes are adjacent, then snap clusters to their
    // representative; the confluent table needs exact coincidences.
    std::vector<Complex> x(nodes.begin(), nodes.end());
    std::sort(x.begin(), x.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    int max_cluster = 1;
    {
        int run = 1;
        for (size_t i = 1; i < x.size(); ++i) {
            if (std::abs(x[i] - x[i - run]) <= 1e-12) {
                x[i] = x[i - run];
                ++run;
            } else {
                run = 1;
            }
            max_cluster = std::max(max_cluster, run);
        }
    }

    std::vector<Polynomial> derivs(max_cluster);
    derivs[0] = f;
    for (int j = 1; j < max_cluster; ++j)
        derivs[j] = derivs[j - 1].derivative();

    // Newton table with repeated nodes: f[x_i,...,x_{i+j}].
    std::vector<Complex> dd(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        dd[i] = f(x[i]);
    double factorial = 1.0;
    for (int j = 1; j <= n; ++j) {
        factorial *= j;
        for (int i = 0; i + j <= n; ++i) {
            if (x[i + j] == x[i])
                dd[i] = derivs[j](x[i]) / factorial;
            else
                dd[i] = (dd[i + 1] - dd[i]) / (x[i + j] - x[i]);
        }
    }
    return dd[0];
}

Complex divided_difference_monomial(int k, std::span<const Complex> nodes) {
    if (k < 0)
        throw std::invalid_argument("divided_difference_monomial: power must be >= 0");
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n < 0)
        throw std::invalid_argument("divided_difference_monomial: need at least one node");
    const int deg = k - n;
    if (deg < 0)
        return 0.0; // empty composition sum
    // Complete homogeneous symmetric sum h_deg(nodes) by the standard
    // one-variable-at-a-time recurrence.
    std::vector<Complex> h(deg + 1);
    h[0] = 1.0;
    for (const Complex& z : nodes)
        for (int d = 1; d <= deg; ++d)
            h[d] += z * h[d - 1];
    return h[deg];
}

Polynomial random_polynomial(int min_deg, int max_deg, numlin::SplitRng& rng) {
    if (min_deg < 0 || max_deg < min_deg)
        throw std::invalid_argument("random_polynomial: bad degree range");
    const int deg = min_deg + static_cast<int>(rng.below(max_deg - min_deg + 1));
    std::vector<Complex> c(deg + 1);
    for (auto& v : c)
        v = rng.gaussian();
    if (c.back() == Complex(0.0))
        c.back() = 1.0;
    return Polynomial(std::move(c));
}

double binomial(int n, int k) {
    constexpr int kMax = 64;
    static const auto table = [] {
        std::array<std::array<double, kMax + 1>, kMax + 1> t{};
        for (int i = 0; i <= kMax; ++i) {
            t[i][0] = 1.0;
            for (int j = 1; j <= i; ++j)
                t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0.0);
        }
        return t;
    }();
    if (n < 0 || n > kMax || k < 0 || k > n)
        throw std::invalid_argument("binomial: out of table range");
    return table[n][k];
}

} // namespace opshift::poly
