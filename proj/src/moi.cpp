#include "opshift/moi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "opshift/json_io.hpp"
#include "opshift/schatten.hpp"

namespace opshift::moi {

namespace {

constexpr double kCoincident = 1e-14;

double principal_arg(Complex z) {
    double a = std::arg(z);
    if (a < 0.0)
        a += 2.0 * std::numbers::pi;
    return a;
}

int arc_of(Complex z, int arc_count) {
    const double width = 2.0 * std::numbers::pi / arc_count;
    int idx = static_cast<int>(std::floor(principal_arg(z) / width + 1e-9));
    return idx % arc_count;
}

template <typename T>
std::vector<T> rotated_left(std::span<const T> v) {
    std::vector<T> r(v.begin() + 1, v.end());
    r.push_back(v.front());
    return r;
}

template <typename T>
std::vector<T> reversed(std::span<const T> v) {
    return std::vector<T>(v.rbegin(), v.rend());
}

} // namespace

// ---- Region -----------------------------------------------------------------

Region Region::full(int arity) {
    if (arity < 2)
        throw std::invalid_argument("Region: arity must be >= 2");
    return Region(Kind::Full, arity);
}

Region Region::diagonal(int arity) {
    if (arity < 2)
        throw std::invalid_argument("Region: arity must be >= 2");
    return Region(Kind::Diagonal, arity);
}

Region Region::order(int arity, const std::string& constraints) {
    Region r(Kind::Order, arity);
    size_t pos = 0;
    auto fail = [&]() { throw std::invalid_argument("Region::order: cannot parse '" + constraints + "'"); };
    auto parse_slot = [&]() -> int {
        if (pos >= constraints.size() || constraints[pos] != 'j')
            fail();
        ++pos;
        size_t start = pos;
        while (pos < constraints.size() && std::isdigit(static_cast<unsigned char>(constraints[pos])))
            ++pos;
        if (start == pos)
            fail();
        const int slot = std::stoi(constraints.substr(start, pos - start));
        if (slot < 0 || slot >= arity)
            throw std::invalid_argument("Region::order: slot index out of range");
        return slot;
    };
    while (pos < constraints.size()) {
        int lhs = parse_slot();
        while (pos < constraints.size() && constraints[pos] != '&') {
            bool strict;
            if (constraints.compare(pos, 2, "<=") == 0) {
                strict = false;
                pos += 2;
            } else if (constraints[pos] == '<') {
                strict = true;
                pos += 1;
            } else {
                fail();
                return r; // unreachable
            }
            const int rhs = parse_slot();
            r.rels_.push_back({lhs, strict, rhs});
            lhs = rhs;
        }
        if (pos < constraints.size() && constraints[pos] == '&')
            ++pos;
    }
    if (r.rels_.empty())
        throw std::invalid_argument("Region::order: no constraints given");
    return r;
}

Region Region::arcs(int arity, int arc_count, std::vector<int> arc_index) {
    if (arc_count < 1 || static_cast<int>(arc_index.size()) != arity)
        throw std::invalid_argument("Region::arcs: need one arc per slot");
    for (int a : arc_index)
        if (a < 0 || a >= arc_count)
            throw std::invalid_argument("Region::arcs: arc index out of range");
    Region r(Kind::Arcs, arity);
    r.arc_count_ = arc_count;
    r.arc_index_ = std::move(arc_index);
    return r;
}

Region Region::union_of(std::vector<Region> parts) {
    if (parts.empty())
        throw std::invalid_argument("Region::union_of: empty part list");
    const int arity = parts.front().arity();
    for (const Region& p : parts)
        if (p.arity() != arity)
            throw std::invalid_argument("Region::union_of: arity mismatch");
    Region r(Kind::Union, arity);
    r.children_ = std::move(parts);
    return r;
}

Region Region::custom(int arity, Predicate pred) {
    Region r(Kind::Custom, arity);
    r.pred_ = std::move(pred);
    return r;
}

Region Region::join_product(Region b1, Region b2) {
    const int arity = b1.arity() + b2.arity() - 1;
    Region r(Kind::JoinProduct, arity);
    r.children_.push_back(std::move(b1));
    r.children_.push_back(std::move(b2));
    return r;
}

Region Region::join_compose(Region b1, Region b2) {
    // b2 sees (j_0, j_k, j_{k+1}, ..., j_n); combined tuple has
    // b1.arity + b2.arity - 2 slots.
    const int arity = b1.arity() + b2.arity() - 2;
    if (arity < b1.arity())
        throw std::invalid_argument("Region::join_compose: arity underflow");
    Region r(Kind::JoinCompose, arity);
    r.children_.push_back(std::move(b1));
    r.children_.push_back(std::move(b2));
    return r;
}

Region Region::bar() const {
    Region r(Kind::Reverse, arity_);
    r.children_.push_back(*this);
    return r;
}

Region Region::star() const {
    Region r(Kind::Rotate, arity_);
    r.children_.push_back(*this);
    return r;
}

bool Region::contains(std::span<const int> idx, const SpectralUnitary& spec) const {
    if (static_cast<int>(idx.size()) != arity_)
        throw std::invalid_argument("Region::contains: tuple length mismatch");
    switch (kind_) {
    case Kind::Full:
        return true;
    case Kind::Diagonal:
        for (size_t i = 1; i < idx.size(); ++i)
            if (idx[i] != idx[0])
                return false;
        return true;
    case Kind::Order:
        for (const OrderRel& rel : rels_) {
            if (rel.strict ? !(idx[rel.lhs] < idx[rel.rhs]) : !(idx[rel.lhs] <= idx[rel.rhs]))
                return false;
        }
        return true;
    case Kind::Arcs:
        for (int i = 0; i < arity_; ++i)
            if (arc_of(spec.eigenvalue(idx[i]), arc_count_) != arc_index_[i])
                return false;
        return true;
    case Kind::Union:
        for (const Region& c : children_)
            if (c.contains(idx, spec))
                return true;
        return false;
    case Kind::JoinProduct: {
        const int k = children_[0].arity() - 1;
        return children_[0].contains(idx.subspan(0, k + 1), spec) &&
               children_[1].contains(idx.subspan(k), spec);
    }
    case Kind::JoinCompose: {
        const int k = children_[0].arity() - 1;
        if (!children_[0].contains(idx.subspan(0, k + 1), spec))
            return false;
        std::vector<int> tail;
        tail.reserve(idx.size() - k + 1);
        tail.push_back(idx[0]);
        for (size_t i = k; i < idx.size(); ++i)
            tail.push_back(idx[i]);
        return children_[1].contains(tail, spec);
    }
    case Kind::Reverse: {
        const std::vector<int> rev = reversed(idx);
        return children_[0].contains(rev, spec);
    }
    case Kind::Rotate: {
        const std::vector<int> rot = rotated_left(idx);
        return children_[0].contains(rot, spec);
    }
    case Kind::Custom:
        return pred_(idx, spec);
    }
    return false;
}

// ---- MoiSymbol ---------------------------------------------------------------

MoiSymbol MoiSymbol::constant(int arity, Complex c) {
    MoiSymbol s(Kind::Constant, arity);
    s.c_ = c;
    return s;
}

MoiSymbol MoiSymbol::divided_difference(poly::Polynomial f, int order) {
    if (order < 0)
        throw std::invalid_argument("MoiSymbol: divided difference order must be >= 0");
    MoiSymbol s(Kind::DividedDifference, order + 1);
    s.f_ = std::move(f);
    s.order_ = order;
    return s;
}

MoiSymbol MoiSymbol::phi(poly::SymbolPhi sym) {
    MoiSymbol s(Kind::Phi, sym.order + 1);
    s.phi_ = std::move(sym);
    return s;
}

MoiSymbol MoiSymbol::phase_power(int arity, int m, int slot_a, int slot_b) {
    MoiSymbol s(Kind::PhasePower, arity);
    s.int_param_ = m;
    s.slot_a_ = slot_a;
    s.slot_b_ = slot_b;
    return s;
}

MoiSymbol MoiSymbol::modulus_power(int arity, double sexp, int slot_a, int slot_b) {
    MoiSymbol s(Kind::ModulusPower, arity);
    s.real_param_ = sexp;
    s.slot_a_ = slot_a;
    s.slot_b_ = slot_b;
    return s;
}

MoiSymbol MoiSymbol::product(std::vector<MoiSymbol> factors) {
    if (factors.empty())
        throw std::invalid_argument("MoiSymbol::product: empty factor list");
    const int arity = factors.front().arity();
    for (const MoiSymbol& f : factors)
        if (f.arity() != arity)
            throw std::invalid_argument("MoiSymbol::product: arity mismatch");
    MoiSymbol s(Kind::Product, arity);
    s.children_ = std::move(factors);
    return s;
}

MoiSymbol MoiSymbol::sum(std::vector<MoiSymbol> terms) {
    if (terms.empty())
        throw std::invalid_argument("MoiSymbol::sum: empty term list");
    const int arity = terms.front().arity();
    for (const MoiSymbol& t : terms)
        if (t.arity() != arity)
            throw std::invalid_argument("MoiSymbol::sum: arity mismatch");
    MoiSymbol s(Kind::Sum, arity);
    s.children_ = std::move(terms);
    return s;
}

MoiSymbol MoiSymbol::join_product(MoiSymbol f1, MoiSymbol f2) {
    MoiSymbol s(Kind::JoinProduct, f1.arity() + f2.arity() - 1);
    s.children_.push_back(std::move(f1));
    s.children_.push_back(std::move(f2));
    return s;
}

MoiSymbol MoiSymbol::join_compose(MoiSymbol f1, MoiSymbol f2) {
    MoiSymbol s(Kind::JoinCompose, f1.arity() + f2.arity() - 2);
    s.children_.push_back(std::move(f1));
    s.children_.push_back(std::move(f2));
    return s;
}

MoiSymbol MoiSymbol::bar() const {
    MoiSymbol s(Kind::Reverse, arity_);
    s.children_.push_back(*this);
    return s;
}

MoiSymbol MoiSymbol::star() const {
    MoiSymbol s(Kind::Rotate, arity_);
    s.children_.push_back(*this);
    return s;
}

Complex MoiSymbol::eval(std::span<const Complex> z) const {
    if (static_cast<int>(z.size()) != arity_)
        throw std::invalid_argument("MoiSymbol::eval: tuple length mismatch");
    switch (kind_) {
    case Kind::Constant:
        return c_;
    case Kind::DividedDifference:
        return poly::divided_difference(f_, z);
    case Kind::Phi:
        return poly::eval_phi(phi_, z);
    case Kind::PhasePower: {
        const Complex d = z[slot_a_] - z[slot_b_];
        const double ad = std::abs(d);
        if (ad <= kCoincident)
            return 0.0;
        return std::pow(d / ad, int_param_);
    }
    case Kind::ModulusPower: {
        const double ad = std::abs(z[slot_a_] - z[slot_b_]);
        if (ad <= kCoincident)
            return 0.0;
        return std::polar(1.0, real_param_ * std::log(ad));
    }
    case Kind::Product: {
        Complex p = 1.0;
        for (const MoiSymbol& c : children_)
            p *= c.eval(z);
        return p;
    }
    case Kind::Sum: {
        Complex s = 0.0;
        for (const MoiSymbol& c : children_)
            s += c.eval(z);
        return s;
    }
    case Kind::JoinProduct: {
        const int k = children_[0].arity() - 1;
        return children_[0].eval(z.subspan(0, k + 1)) * children_[1].eval(z.subspan(k));
    }
    case Kind::JoinCompose: {
        const int k = children_[0].arity() - 1;
        std::vector<Complex> tail;
        tail.reserve(z.size() - k + 1);
        tail.push_back(z[0]);
        for (size_t i = k; i < z.size(); ++i)
            tail.push_back(z[i]);
        return children_[0].eval(z.subspan(0, k + 1)) * children_[1].eval(tail);
    }
    case Kind::Reverse: {
        const std::vector<Complex> rev = reversed(z);
        return std::conj(children_[0].eval(rev));
    }
    case Kind::Rotate: {
        const std::vector<Complex> rot = rotated_left(z);
        return children_[0].eval(rot);
    }
    }
    return 0.0;
}

double MoiSymbol::bound() const {
    switch (kind_) {
    case Kind::Constant:
        return std::abs(c_);
    case Kind::DividedDifference: {
        double fact = 1.0;
        for (int j = 2; j <= order_; ++j)
            fact *= j;
        return order_ == 0 ? poly::sup_norm_circle(f_)
                           : poly::sup_norm_circle(f_.derivative(order_)) / fact;
    }
    case Kind::Phi: {
        const double hsup = poly::sup_norm_circle(phi_.h);
        if (phi_.order == 1)
            return hsup / (phi_.k + 1);
        return hsup * poly::diagonal_constant(phi_.order, phi_.m + 1, phi_.k + 1);
    }
    case Kind::PhasePower:
    case Kind::ModulusPower:
        return 1.0;
    case Kind::Product:
    case Kind::JoinProduct:
    case Kind::JoinCompose: {
        double b = 1.0;
        for (const MoiSymbol& c : children_)
            b *= c.bound();
        return b;
    }
    case Kind::Sum: {
        double b = 0.0;
        for (const MoiSymbol& c : children_)
            b += c.bound();
        return b;
    }
    case Kind::Reverse:
    case Kind::Rotate:
        return children_[0].bound();
    }
    return 0.0;
}

// ---- moi_apply ---------------------------------------------------------------

namespace {

struct Block {
    int rows = 0, cols = 0;
    std::vector<Complex> a;
    Complex& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Complex& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// out = left * (block of y at group pair (ga, gb)), tight sizes.
void mult_into(const Block& left, const ComplexMatrix& y, const SpectralUnitary::Group& ga,
               const SpectralUnitary::Group& gb, Block& out) {
    out.rows = left.rows;
    out.cols = gb.rank;
    out.a.assign(static_cast<size_t>(out.rows) * out.cols, Complex(0.0));
    for (int r = 0; r < left.rows; ++r)
        for (int m = 0; m < ga.rank; ++m) {
            const Complex lv = left.at(r, m);
            if (lv == Complex(0.0))
                continue;
            for (int c = 0; c < gb.rank; ++c)
                out.at(r, c) += lv * y(ga.offset + m, gb.offset + c);
        }
}

void check_budget(int n, int groups) {
    if (n > 4)
        throw std::runtime_error("moi_apply: order budget exceeded (n <= 4)");
    const int cap = n <= 3 ? 64 : 32;
    if (groups > cap)
        throw std::runtime_error(
            "moi_apply: spectral group budget exceeded (G <= 64 for n <= 3, G <= 32 for n = 4)");
}

} // namespace

ComplexMatrix moi_apply(const SpectralUnitary& spec, const MoiSymbol& sym, const Region& region,
                        std::span<const ComplexMatrix> xs) {
    const int n = static_cast<int>(xs.size());
    if (n < 1)
        throw std::invalid_argument("moi_apply: need at least one matrix argument");
    if (sym.arity() != n + 1 || region.arity() != n + 1)
        throw std::invalid_argument("moi_apply: symbol/region arity mismatch");
    const int d = spec.dim();
    for (const ComplexMatrix& x : xs)
        if (x.dim() != d)
            throw std::invalid_argument("moi_apply: matrix dimension mismatch");
    const int g = spec.group_count();
    check_budget(n, g);

    std::vector<ComplexMatrix> xt;
    xt.reserve(n);
    for (const ComplexMatrix& x : xs)
        xt.push_back(spec.to_basis(x));

    const auto& groups = spec.groups();
    ComplexMatrix acc(d);
    std::vector<int> idx(n + 1);
    std::vector<Complex> zbuf(n + 1);
    std::vector<Block> blocks(n + 1);

    const bool full = region.is_full();

    // Depth-first over index tuples; blocks[depth] carries
    // E_{j_0} x_1 ... x_depth E_{j_depth} restricted to its group block.
    auto recurse = [&](auto&& self, int depth) -> void {
        for (int j = 0; j < g; ++j) {
            idx[depth] = j;
            zbuf[depth] = groups[j].eigenvalue;
            if (depth == 1) {
                Block& b = blocks[1];
                const auto& g0 = groups[idx[0]];
                const auto& g1 = groups[j];
                b.rows = g0.rank;
                b.cols = g1.rank;
                b.a.resize(static_cast<size_t>(b.rows) * b.cols);
                for (int r = 0; r < b.rows; ++r)
                    for (int c = 0; c < b.cols; ++c)
                        b.at(r, c) = xt[0](g0.offset + r, g1.offset + c);
            } else {
                mult_into(blocks[depth - 1], xt[depth - 1], groups[idx[depth - 1]], groups[j],
                          blocks[depth]);
            }
            if (depth < n) {
                self(self, depth + 1);
                continue;
            }
            if (!full && !region.contains(idx, spec))
                continue;
            const Complex c = sym.eval(zbuf);
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::runtime_error("moi_apply: symbol evaluated to a non-finite value");
            if (c == Complex(0.0))
                continue;
            const Block& b = blocks[n];
            const auto& g0 = groups[idx[0]];
            const auto& gn = groups[j];
            for (int r = 0; r < b.rows; ++r)
                for (int cc = 0; cc < b.cols; ++cc)
                    acc(g0.offset + r, gn.offset + cc) += c * b.at(r, cc);
        }
    };

    for (int j0 = 0; j0 < g; ++j0) {
        idx[0] = j0;
        zbuf[0] = groups[j0].eigenvalue;
        recurse(recurse, 1);
    }
    return spec.from_basis(acc);
}

// ---- identity checks ----------------------------------------------------------

namespace {

// Enumerate all index tuples; used for disjointness validation.
template <typename Fn>
void for_all_tuples(int arity, int groups, Fn&& fn) {
    std::vector<int> idx(arity, 0);
    while (true) {
        fn(std::span<const int>(idx));
        int pos = arity - 1;
        while (pos >= 0 && ++idx[pos] == groups) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0)
            break;
    }
}

} // namespace

double region_additivity_check(const SpectralUnitary& spec, const MoiSymbol& sym,
                               const Region& b, const Region& c,
                               std::span<const ComplexMatrix> xs) {
    if (b.arity() != c.arity())
        throw std::invalid_argument("region_additivity_check: arity mismatch");
    bool overlap = false;
    for_all_tuples(b.arity(), spec.group_count(), [&](std::span<const int> idx) {
        if (!overlap && b.contains(idx, spec) && c.contains(idx, spec))
            overlap = true;
    });
    if (overlap)
        throw std::invalid_argument("region_additivity_check: regions overlap");

    ComplexMatrix joint = moi_apply(spec, sym, Region::union_of({b, c}), xs);
    ComplexMatrix split = moi_apply(spec, sym, b, xs) + moi_apply(spec, sym, c, xs);
    return numlin::operator_norm(joint - split);
}

double adjoint_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym,
                              const Region& region, std::span<const ComplexMatrix> xs) {
    ComplexMatrix lhs = moi_apply(spec, sym, region, xs).adjoint();
    std::vector<ComplexMatrix> rev;
    rev.reserve(xs.size());
    for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        rev.push_back(it->adjoint());
    ComplexMatrix rhs = moi_apply(spec, sym.bar(), region.bar(), rev);
    return numlin::operator_norm(lhs - rhs);
}

double duality_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym,
                              const Region& region, const ComplexMatrix& x0,
                              std::span<const ComplexMatrix> xs) {
    const Complex lhs = (x0 * moi_apply(spec, sym, region, xs)).trace();
    std::vector<ComplexMatrix> shifted;
    shifted.reserve(xs.size());
    shifted.push_back(x0);
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        shifted.push_back(xs[i]);
    const Complex rhs = (moi_apply(spec, sym.star(), region.star(), shifted) * xs.back()).trace();
    return std::abs(lhs - rhs);
}

double product_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym1, const Region& b1,
                              const MoiSymbol& sym2, const Region& b2,
                              std::span<const ComplexMatrix> xs) {
    const int k = sym1.arity() - 1;
    const int n = static_cast<int>(xs.size());
    if (k < 1 || k >= n || sym2.arity() != n - k + 1)
        throw std::invalid_argument("product_identity_check: arity mismatch");
    ComplexMatrix lhs = moi_apply(spec, MoiSymbol::join_product(sym1, sym2),
                                  Region::join_product(b1, b2), xs);
    ComplexMatrix rhs = moi_apply(spec, sym1, b1, xs.subspan(0, k)) *
                        moi_apply(spec, sym2, b2, xs.subspan(k));
    return numlin::operator_norm(lhs - rhs);
}

double composition_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym1,
                                  const Region& b1, const MoiSymbol& sym2, const Region& b2,
                                  std::span<const ComplexMatrix> xs) {
    const int k = sym1.arity() - 1;
    const int n = static_cast<int>(xs.size());
    if (k < 1 || k > n || sym2.arity() != n - k + 2)
        throw std::invalid_argument("composition_identity_check: arity mismatch");
    ComplexMatrix lhs = moi_apply(spec, MoiSymbol::join_compose(sym1, sym2),
                                  Region::join_compose(b1, b2), xs);
    std::vector<ComplexMatrix> inner_args;
    inner_args.push_back(moi_apply(spec, sym1, b1, xs.subspan(0, k)));
    for (int i = k; i < n; ++i)
        inner_args.push_back(xs[i]);
    ComplexMatrix rhs = moi_apply(spec, sym2, b2, inner_args);
    return numlin::operator_norm(lhs - rhs);
}

// ---- block transforms ----------------------------------------------------------

ComplexMatrix triangular_truncation(const SpectralUnitary& spec, const ComplexMatrix& x,
                                    TruncationMode mode) {
    if (x.dim() != spec.dim())
        throw std::invalid_argument("triangular_truncation: dimension mismatch");
    if (!spec.arg_sorted())
        throw std::invalid_argument("triangular_truncation: spectral data is not arg-ordered");
    ComplexMatrix xt = spec.to_basis(x);
    const auto& groups = spec.groups();
    const int g = spec.group_count();
    ComplexMatrix out(x.dim());
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) {
            const bool keep = mode == TruncationMode::strict_upper   ? a < b
                              : mode == TruncationMode::strict_lower ? a > b
                                                                     : a == b;
            if (!keep)
                continue;
            for (int r = 0; r < groups[a].rank; ++r)
                for (int c = 0; c < groups[b].rank; ++c)
                    out(groups[a].offset + r, groups[b].offset + c) =
                        xt(groups[a].offset + r, groups[b].offset + c);
        }
    return spec.from_basis(out);
}

ComplexMatrix upsilon_gamma_transform(const SpectralUnitary& spec, const ComplexMatrix& x,
                                      BlockWeightKind kind, double param,
                                      std::span<const int> row_set, std::span<const int> col_set) {
    if (x.dim() != spec.dim())
        throw std::invalid_argument("upsilon_gamma_transform: dimension mismatch");
    const int g = spec.group_count();
    auto check_set = [&](std::span<const int> s) {
        std::set<int> seen;
        for (int i : s) {
            if (i < 0 || i >= g)
                throw std::invalid_argument("upsilon_gamma_transform: group index out of range");
            if (!seen.insert(i).second)
                throw std::invalid_argument("upsilon_gamma_transform: duplicate group index");
        }
    };
    check_set(row_set);
    check_set(col_set);
    int m = 0;
    if (kind != BlockWeightKind::gamma) {
        m = static_cast<int>(std::llround(param));
        if (m < 0)
            throw std::invalid_argument("upsilon_gamma_transform: power must be >= 0");
    }

    ComplexMatrix xt = spec.to_basis(x);
    const auto& groups = spec.groups();
    ComplexMatrix out(x.dim());
    for (int i : row_set)
        for (int j : col_set) {
            const Complex diff = spec.eigenvalue(i) - spec.eigenvalue(j);
            const double ad = std::abs(diff);
            Complex w;
            if (ad <= kCoincident) {
                w = 0.0; // 0/|0| convention
            } else if (kind == BlockWeightKind::upsilon_plus) {
                w = std::pow(diff / ad, m);
            } else if (kind == BlockWeightKind::upsilon_minus) {
                w = std::pow(ad / diff, m);
            } else {
                w = std::polar(1.0, param * std::log(ad));
            }
            if (w == Complex(0.0))
                continue;
            for (int r = 0; r < groups[i].rank; ++r)
                for (int c = 0; c < groups[j].rank; ++c)
                    out(groups[i].offset + r, groups[j].offset + c) =
                        w * xt(groups[i].offset + r, groups[j].offset + c);
        }
    return spec.from_basis(out);
}

ComplexMatrix diagonal_moi(const SpectralUnitary& spec, const MoiSymbol& sym,
                           std::span<const ComplexMatrix> xs) {
    const int n = static_cast<int>(xs.size());
    if (n < 1)
        throw std::invalid_argument("diagonal_moi: need at least one matrix argument");
    if (sym.arity() != n + 1)
        throw std::invalid_argument("diagonal_moi: symbol arity mismatch");
    const int d = spec.dim();
    for (const ComplexMatrix& x : xs)
        if (x.dim() != d)
            throw std::invalid_argument("diagonal_moi: matrix dimension mismatch");

    std::vector<ComplexMatrix> xt;
    xt.reserve(n);
    for (const ComplexMatrix& x : xs)
        xt.push_back(spec.to_basis(x));

    const auto& groups = spec.groups();
    ComplexMatrix acc(d);
    std::vector<Complex> ztuple(n + 1);
    for (const auto& grp : groups) {
        std::fill(ztuple.begin(), ztuple.end(), grp.eigenvalue);
        const Complex c = sym.eval(ztuple);
        if (c == Complex(0.0))
            continue;
        Block b;
        b.rows = grp.rank;
        b.cols = grp.rank;
        b.a.resize(static_cast<size_t>(grp.rank) * grp.rank);
        for (int r = 0; r < grp.rank; ++r)
            for (int cc = 0; cc < grp.rank; ++cc)
                b.at(r, cc) = xt[0](grp.offset + r, grp.offset + cc);
        Block tmp;
        for (int i = 1; i < n; ++i) {
            mult_into(b, xt[i], grp, grp, tmp);
            std::swap(b, tmp);
        }
        for (int r = 0; r < grp.rank; ++r)
            for (int cc = 0; cc < grp.rank; ++cc)
                acc(grp.offset + r, grp.offset + cc) += c * b.at(r, cc);
    }
    return spec.from_basis(acc);
}

// ---- name grammar ---------------------------------------------------------------

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

// Coefficient sources: "1,0,2" (real CSV), "[[re,im],...]" (inline JSON), or
// "@file.json" (JSON coefficient array on disk).
poly::Polynomial parse_poly_spec(const std::string& s) {
    if (!s.empty() && s.front() == '@') {
        std::ifstream in(s.substr(1));
        if (!in)
            throw std::invalid_argument("cannot read polynomial file '" + s.substr(1) + "'");
        nlohmann::json j;
        in >> j;
        return io::poly_from_json(j);
    }
    if (!s.empty() && s.front() == '[')
        return io::poly_from_json(nlohmann::json::parse(s));
    std::vector<Complex> coeffs;
    for (const std::string& tok : split_on(s, ',')) {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument("cannot parse coefficient '" + tok + "'");
        coeffs.emplace_back(v, 0.0);
    }
    return poly::Polynomial(std::move(coeffs));
}

} // namespace

Region region_from_name(int arity, const std::string& name) {
    if (name == "full")
        return Region::full(arity);
    if (name == "diagonal")
        return Region::diagonal(arity);
    if (name.rfind("order:", 0) == 0)
        return Region::order(arity, name.substr(6));
    if (name.rfind("arcs:", 0) == 0) {
        std::string body = name.substr(5);
        int count = arity + 1;
        if (const size_t at = body.find('@'); at != std::string::npos) {
            count = std::stoi(body.substr(at + 1));
            body = body.substr(0, at);
        }
        std::vector<int> arcs;
        for (const std::string& tok : split_on(body, ','))
            arcs.push_back(std::stoi(tok));
        return Region::arcs(arity, count, std::move(arcs));
    }
    throw std::invalid_argument("unknown region name '" + name + "'");
}

MoiSymbol symbol_from_name(int arity, const std::string& name) {
    std::vector<MoiSymbol> factors;
    for (const std::string& part : split_on(name, '*')) {
        if (part.rfind("const:", 0) == 0) {
            factors.push_back(MoiSymbol::constant(arity, Complex(std::stod(part.substr(6)), 0.0)));
        } else if (part.rfind("divdiff:", 0) == 0) {
            factors.push_back(
                MoiSymbol::divided_difference(parse_poly_spec(part.substr(8)), arity - 1));
        } else if (part.rfind("phi:", 0) == 0) {
            const std::string body = part.substr(4);
            const size_t colon = body.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("phi symbol needs 'phi:n,m,k:coeffs'");
            const auto params = split_on(body.substr(0, colon), ',');
            if (params.size() != 3)
                throw std::invalid_argument("phi symbol needs three parameters n,m,k");
            const int order = std::stoi(params[0]);
            if (order + 1 != arity)
                throw std::invalid_argument("phi order does not match the requested arity");
            factors.push_back(MoiSymbol::phi({order, parse_poly_spec(body.substr(colon + 1)),
                                              std::stoi(params[1]), std::stoi(params[2])}));
        } else if (part.rfind("psi:", 0) == 0) {
            factors.push_back(MoiSymbol::phase_power(arity, std::stoi(part.substr(4))));
        } else if (part.rfind("gamma:", 0) == 0) {
            factors.push_back(MoiSymbol::modulus_power(arity, std::stod(part.substr(6))));
        } else {
            throw std::invalid_argument("unknown symbol name '" + part + "'");
        }
    }
    if (factors.size() == 1)
        return std::move(factors.front());
    return MoiSymbol::product(std::move(factors));
}

// ---- norm estimation ------------------------------------------------------------

namespace {

ComplexMatrix normalized_schatten(ComplexMatrix x, double p) {
    const double nrm = numlin::schatten_norm(x, p);
    if (nrm <= 0.0)
        throw std::runtime_error("estimate_multilinear_norm: degenerate sample");
    x *= Complex(1.0 / nrm);
    return x;
}

// Exact S^2 -> S^2 operator norm of a linear matrix map via the explicit
// dim^2 x dim^2 matrix and power iteration on M^H M.
double linear_frobenius_norm(const std::function<ComplexMatrix(std::span<const ComplexMatrix>)>& t,
                             int dim, numlin::SplitRng& rng, ComplexMatrix* witness) {
    const int d2 = dim * dim;
    std::vector<std::vector<Complex>> cols(d2);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            ComplexMatrix unit(dim);
            unit(r, c) = 1.0;
            const ComplexMatrix img = t(std::span<const ComplexMatrix>(&unit, 1));
            auto& col = cols[r * dim + c];
            col.assign(img.data().begin(), img.data().end());
        }

    std::vector<Complex> v(d2), mv(d2), mhmv(d2);
    for (auto& x : v)
        x = rng.gaussian();
    double sigma = 0.0;
    for (int it = 0; it < 80; ++it) {
        std::fill(mv.begin(), mv.end(), Complex(0.0));
        for (int c = 0; c < d2; ++c)
            if (v[c] != Complex(0.0))
                for (int r = 0; r < d2; ++r)
                    mv[r] += cols[c][r] * v[c];
        std::fill(mhmv.begin(), mhmv.end(), Complex(0.0));
        for (int c = 0; c < d2; ++c) {
            Complex s = 0.0;
            for (int r = 0; r < d2; ++r)
                s += std::conj(cols[c][r]) * mv[r];
            mhmv[c] = s;
        }
        double nv = 0.0, nmv = 0.0;
        for (int i = 0; i < d2; ++i) {
            nv += std::norm(v[i]);
            nmv += std::norm(mv[i]);
        }
        sigma = std::sqrt(nmv / nv);
        double nmhmv = 0.0;
        for (const auto& x : mhmv)
            nmhmv += std::norm(x);
        nmhmv = std::sqrt(nmhmv);
        if (nmhmv <= 0.0)
            break;
        for (int i = 0; i < d2; ++i)
            v[i] = mhmv[i] / nmhmv;
    }
    if (witness) {
        *witness = ComplexMatrix(dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                (*witness)(r, c) = v[r * dim + c];
    }
    return sigma;
}

} // namespace

MultilinearNormEstimate estimate_multilinear_norm(
    const std::function<ComplexMatrix(std::span<const ComplexMatrix>)>& transform,
    std::span<const double> alphas, int dim, int trials, std::uint64_t seed) {
    const int n = static_cast<int>(alphas.size());
    if (n < 1)
        throw std::invalid_argument("estimate_multilinear_norm: need at least one exponent");
    if (trials < 1)
        throw std::invalid_argument("estimate_multilinear_norm: trials must be >= 1");
    double inv = 0.0;
    for (double a : alphas) {
        if (!(a >= 1.0))
            throw std::invalid_argument("estimate_multilinear_norm: exponents must be >= 1");
        if (!std::isinf(a))
            inv += 1.0 / a;
    }
    const double alpha = inv == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv;
    if (alpha < 1.0)
        throw std::invalid_argument(
            "estimate_multilinear_norm: inconsistent exponents (output exponent below 1)");

    numlin::SplitRng root(seed, "multilinear_norm");
    MultilinearNormEstimate best;

    // Linear Frobenius case admits an exact answer at small sizes.
    if (n == 1 && alpha == 2.0 && alphas[0] == 2.0 && dim <= 16) {
        numlin::SplitRng prng = root.split("power");
        ComplexMatrix w;
        const double sigma = linear_frobenius_norm(transform, dim, prng, &w);
        best.value = sigma;
        best.witness = {w};
    }

    for (int t = 0; t < trials; ++t) {
        numlin::SplitRng rng = root.split("trial", static_cast<std::uint64_t>(t));
        std::vector<ComplexMatrix> xs;
        xs.reserve(n);
        for (int i = 0; i < n; ++i)
            xs.push_back(normalized_schatten(random_gaussian_matrix(dim, rng), alphas[i]));
        double val = numlin::schatten_norm(transform(xs), alpha);
        if (val > best.value) {
            best.value = val;
            best.witness = xs;
        }
        // Greedy polish: coordinate ascent, three rounds.
        for (int round = 0; round < 3; ++round)
            for (int i = 0; i < n; ++i)
                for (int prop = 0; prop < 8; ++prop) {
                    ComplexMatrix cand = xs[i] + random_gaussian_matrix(dim, rng) * Complex(0.5);
                    cand = normalized_schatten(std::move(cand), alphas[i]);
                    std::swap(xs[i], cand);
                    const double v2 = numlin::schatten_norm(transform(xs), alpha);
                    if (v2 > val) {
                        val = v2;
                        if (v2 > best.value) {
                            best.value = v2;
                            best.witness = xs;
                        }
                    } else {
                        std::swap(xs[i], cand); // revert
                    }
                }
    }
    return best;
}

} // namespace opshift::moi
