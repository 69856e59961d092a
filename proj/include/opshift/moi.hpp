#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "opshift/polynomial.hpp"
#include "opshift/spectral.hpp"
#include "opshift/symbols.hpp"

namespace opshift::moi {

using numlin::Complex;
using numlin::ComplexMatrix;
using numlin::SpectralUnitary;

/// Worst-case ratio 2/sqrt(3) of chord lengths between points of two
/// adjacent sixth-circle arcs; the region splits keep chord ratios under
/// this threshold. Recorded for reference, not consumed by any transform.
inline constexpr double kArcSeparationDelta = 1.1547005383792515;

/// Index region over tuples (j_0,...,j_n) of spectral-group indices.
/// Membership is deterministic and total; structured kinds cover the region
/// families used by the estimates (diagonal, order constraints, arc
/// products), `custom` covers everything else.
class Region {
public:
    struct OrderRel {
        int lhs = 0;
        bool strict = false;
        int rhs = 0;
    };
    using Predicate = std::function<bool(std::span<const int>, const SpectralUnitary&)>;

    static Region full(int arity);
    static Region diagonal(int arity);
    /// Chain grammar: "j0<=j2<j1" with '&' between independent chains.
    static Region order(int arity, const std::string& constraints);
    /// Tuple belongs iff eigenvalue of slot i lies in arc arc_index[i] of the
    /// circle split into arc_count equal arcs starting at angle 0.
    static Region arcs(int arity, int arc_count, std::vector<int> arc_index);
    static Region union_of(std::vector<Region> parts);
    static Region custom(int arity, Predicate pred);
    /// Combined regions of the product/composition identities.
    static Region join_product(Region b1, Region b2);
    static Region join_compose(Region b1, Region b2);

    /// Reversed-tuple partner (adjoint identity).
    Region bar() const;
    /// Cyclic partner (trace-duality identity).
    Region star() const;

    int arity() const { return arity_; }
    bool contains(std::span<const int> idx, const SpectralUnitary& spec) const;
    bool is_full() const { return kind_ == Kind::Full; }

private:
    enum class Kind { Full, Diagonal, Order, Arcs, Union, JoinProduct, JoinCompose, Reverse, Rotate, Custom };
    Region(Kind kind, int arity) : kind_(kind), arity_(arity) {}

    Kind kind_;
    int arity_;
    std::vector<OrderRel> rels_;
    int arc_count_ = 0;
    std::vector<int> arc_index_;
    std::vector<Region> children_;
    Predicate pred_;
};

/// Bounded symbol on (n+1)-tuples of circle points. Structured variants keep
/// a certified sup bound; the 0/|0| convention maps coincident points to 0
/// in the phase and modulus factors.
class MoiSymbol {
public:
    static MoiSymbol constant(int arity, Complex c);
    /// f^[n]; arity = order + 1.
    static MoiSymbol divided_difference(poly::Polynomial f, int order);
    static MoiSymbol phi(poly::SymbolPhi sym);
    /// ((z_a - z_b)/|z_a - z_b|)^m, any integer m.
    static MoiSymbol phase_power(int arity, int m, int slot_a = 0, int slot_b = 1);
    /// |z_a - z_b|^{i s}.
    static MoiSymbol modulus_power(int arity, double s, int slot_a = 0, int slot_b = 1);
    static MoiSymbol product(std::vector<MoiSymbol> factors);
    static MoiSymbol sum(std::vector<MoiSymbol> terms);
    static MoiSymbol join_product(MoiSymbol f1, MoiSymbol f2);
    static MoiSymbol join_compose(MoiSymbol f1, MoiSymbol f2);

    MoiSymbol bar() const;
    MoiSymbol star() const;

    int arity() const { return arity_; }
    Complex eval(std::span<const Complex> z) const;
    /// Certified sup bound over the torus.
    double bound() const;

private:
    enum class Kind {
        Constant, DividedDifference, Phi, PhasePower, ModulusPower,
        Product, Sum, JoinProduct, JoinCompose, Reverse, Rotate
    };
    MoiSymbol(Kind kind, int arity) : kind_(kind), arity_(arity) {}

    Kind kind_;
    int arity_;
    Complex c_ = 0.0;
    poly::Polynomial f_;
    int order_ = 0;
    poly::SymbolPhi phi_{};
    int int_param_ = 0;
    double real_param_ = 0.0;
    int slot_a_ = 0, slot_b_ = 1;
    std::vector<MoiSymbol> children_;
};

/// The multiple operator integral over the discrete spectral measure:
/// sum over tuples in the region of phi(z_{j_0},...,z_{j_n})
/// E_{j_0} x_1 E_{j_1} ... x_n E_{j_n}. Everything happens in the eigenbasis
/// of `spec`, so each term is a (block) multiply-accumulate; cost is
/// O(G^{n+1}) scalar terms for G rank-1 groups. Group budgets: G <= 64 for
/// n <= 3 and G <= 32 for n = 4; beyond that a budget error is thrown.
ComplexMatrix moi_apply(const SpectralUnitary& spec, const MoiSymbol& sym, const Region& region,
                        std::span<const ComplexMatrix> xs);

/// ||T^{B u C} - T^B - T^C||_inf on the given inputs; B and C must be
/// disjoint (checked by enumeration).
double region_additivity_check(const SpectralUnitary& spec, const MoiSymbol& sym,
                               const Region& b, const Region& c,
                               std::span<const ComplexMatrix> xs);

/// ||(T_phi^B(x_1..x_n))^H - T_{phi-bar}^{B-bar}(x_n^H..x_1^H)||_inf.
double adjoint_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym,
                              const Region& region, std::span<const ComplexMatrix> xs);

/// |tr(x_0 T_phi^B(x_1..x_n)) - tr(T_{phi*}^{B*}(x_0..x_{n-1}) x_n)|.
double duality_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym,
                              const Region& region, const ComplexMatrix& x0,
                              std::span<const ComplexMatrix> xs);

/// ||T_psi^{B~}(x_1..x_n) - T_{phi1}^{B1}(x_1..x_k) T_{phi2}^{B2}(x_{k+1}..x_n)||_inf.
double product_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym1, const Region& b1,
                              const MoiSymbol& sym2, const Region& b2,
                              std::span<const ComplexMatrix> xs);

/// ||T_psi^{B~}(x_1..x_n) - T_{phi2}^{B2}(T_{phi1}^{B1}(x_1..x_k), x_{k+1},..,x_n)||_inf.
double composition_identity_check(const SpectralUnitary& spec, const MoiSymbol& sym1,
                                  const Region& b1, const MoiSymbol& sym2, const Region& b2,
                                  std::span<const ComplexMatrix> xs);

enum class TruncationMode { strict_upper, strict_lower, diagonal };

/// Triangular truncation with respect to the arg-ordered spectral groups;
/// the three modes partition x. Unordered spectral data is rejected.
ComplexMatrix triangular_truncation(const SpectralUnitary& spec, const ComplexMatrix& x,
                                    TruncationMode mode);

enum class BlockWeightKind { upsilon_plus, upsilon_minus, gamma };

/// The phase-power / modulus-power block transforms: sum over i in rows,
/// j in cols of w(z_i, z_j) E_i x E_j with w one of ((z_i-z_j)/|z_i-z_j|)^m,
/// its reciprocal power, or |z_i-z_j|^{is}. Coincident points give 0.
ComplexMatrix upsilon_gamma_transform(const SpectralUnitary& spec, const ComplexMatrix& x,
                                      BlockWeightKind kind, double param,
                                      std::span<const int> row_set, std::span<const int> col_set);

/// Diagonal operator: sum_j phi(z_j,...,z_j) E_j x_1 E_j ... x_n E_j.
ComplexMatrix diagonal_moi(const SpectralUnitary& spec, const MoiSymbol& sym,
                           std::span<const ComplexMatrix> xs);

/// Stable name grammar for regions:
///   full | diagonal | order:j0<=j2<j1[&...] | arcs:k0,k1,...@count
/// (the arc count defaults to arity + 1 when "@count" is omitted).
Region region_from_name(int arity, const std::string& name);

/// Stable name grammar for symbols, '*'-joinable into pointwise products:
///   const:c | divdiff:c0,c1,... | phi:n,m,k:c0,c1,... | psi:m | gamma:s
/// divdiff coefficients describe f (order = arity - 1); psi/gamma act on the
/// first two slots.
MoiSymbol symbol_from_name(int arity, const std::string& name);

struct MultilinearNormEstimate {
    double value = 0.0;
    std::vector<ComplexMatrix> witness;
};

/// Empirical lower bound for the multilinear S^{alpha_1} x ... x S^{alpha_n}
/// -> S^alpha norm (1/alpha = sum 1/alpha_i): max over seeded random inputs
/// of unit mixed norm, plus three rounds of coordinate ascent. Monotone
/// nondecreasing in `trials` for a fixed seed.
MultilinearNormEstimate estimate_multilinear_norm(
    const std::function<ComplexMatrix(std::span<const ComplexMatrix>)>& transform,
    std::span<const double> alphas, int dim, int trials, std::uint64_t seed);

} // namespace opshift::moi
