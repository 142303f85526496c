#ifndef ZCRIT_NUMRING_HPP
#define ZCRIT_NUMRING_HPP

// Finite-basis model of the even cohomology ring of a compact Kähler
// manifold: structure constants, an integration functional on the top
// degree and truncated power series of nilpotent classes.

#include "rational.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zcrit {

/// A basis element; `degree` is the real degree 2j.
struct Generator {
    std::string name;
    int degree = 0;
};

class NumericalRing;

/// Element of the ring, stored sparsely by complex degree j (real degree 2j).
/// Each populated degree holds coordinates in that degree's basis.
class GradedClass {
public:
    GradedClass() = default;

    [[nodiscard]] std::uint64_t ring_id() const { return ring_id_; }
    [[nodiscard]] const std::map<int, std::vector<Rational>>& components() const { return parts_; }

    /// Coordinates in complex degree j (empty when unpopulated).
    [[nodiscard]] std::vector<Rational> part(int j) const
    {
        auto it = parts_.find(j);
        return it == parts_.end() ? std::vector<Rational>{} : it->second;
    }

    /// Coefficient of the i-th basis element in complex degree j.
    [[nodiscard]] Rational coeff(int j, std::size_t i) const
    {
        auto it = parts_.find(j);
        if (it == parts_.end() || i >= it->second.size())
            return Rational(0);
        return it->second[i];
    }

    [[nodiscard]] bool is_zero() const { return parts_.empty(); }

    /// Degree-0 coefficient (the unit has a one-dimensional degree-0 part).
    [[nodiscard]] Rational scalar_part() const { return coeff(0, 0); }

    /// Copy with the degree-0 part removed.
    [[nodiscard]] GradedClass nilpotent_part() const
    {
        GradedClass r = *this;
        r.parts_.erase(0);
        return r;
    }

    /// Copy keeping only complex degree j.
    [[nodiscard]] GradedClass degree_part(int j) const
    {
        GradedClass r;
        r.ring_id_ = ring_id_;
        if (auto it = parts_.find(j); it != parts_.end())
            r.parts_.insert(*it);
        return r;
    }

    GradedClass& operator+=(const GradedClass& o);
    GradedClass& operator-=(const GradedClass& o);
    GradedClass& operator*=(const Rational& s);

    friend GradedClass operator+(GradedClass a, const GradedClass& b) { return a += b; }
    friend GradedClass operator-(GradedClass a, const GradedClass& b) { return a -= b; }
    friend GradedClass operator-(GradedClass a) { return a *= Rational(-1); }
    friend GradedClass operator*(GradedClass a, const Rational& s) { return a *= s; }
    friend GradedClass operator*(const Rational& s, GradedClass a) { return a *= s; }
    friend bool operator==(const GradedClass& a, const GradedClass& b)
    {
        return a.ring_id_ == b.ring_id_ && a.parts_ == b.parts_;
    }
    friend bool operator!=(const GradedClass& a, const GradedClass& b) { return !(a == b); }

private:
    friend class NumericalRing;

    void check_same_ring(const GradedClass& o) const
    {
        if (ring_id_ != o.ring_id_ && !is_zero() && !o.is_zero())
            throw Error("graded classes belong to different rings");
    }
    void adopt_ring(const GradedClass& o)
    {
        if (is_zero())
            ring_id_ = o.ring_id_;
    }
    void prune();

    std::uint64_t ring_id_ = 0;
    std::map<int, std::vector<Rational>> parts_;
};

inline void GradedClass::prune()
{
    for (auto it = parts_.begin(); it != parts_.end();) {
        bool zero = true;
        for (const auto& x : it->second)
            if (sgn(x) != 0) {
                zero = false;
                break;
            }
        it = zero ? parts_.erase(it) : std::next(it);
    }
}

inline GradedClass& GradedClass::operator+=(const GradedClass& o)
{
    check_same_ring(o);
    adopt_ring(o);
    for (const auto& [j, v] : o.parts_) {
        auto& mine = parts_[j];
        if (mine.size() < v.size())
            mine.resize(v.size(), Rational(0));
        for (std::size_t i = 0; i < v.size(); ++i)
            mine[i] += v[i];
    }
    prune();
    return *this;
}

inline GradedClass& GradedClass::operator-=(const GradedClass& o)
{
    return *this += o * Rational(-1);
}

inline GradedClass& GradedClass::operator*=(const Rational& s)
{
    for (auto& [j, v] : parts_)
        for (auto& x : v)
            x *= s;
    prune();
    return *this;
}

enum class Series { exp, sqrt, inverse };

/// Even-degree numerical cohomology ring of a complex n-fold.
class NumericalRing {
public:
    /// `products[a][b]` holds coordinates of basis_a * basis_b in the basis of
    /// degree deg_a + deg_b; entries above the top degree are ignored.
    /// `integration` lists the values of the integral on the top-degree basis.
    NumericalRing(std::string name, int dimension, std::vector<Generator> basis,
        std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>> products,
        std::vector<Rational> integration);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] int dimension() const { return n_; }
    [[nodiscard]] std::uint64_t id() const { return id_; }
    [[nodiscard]] const std::vector<Generator>& basis() const { return basis_; }

    /// Basis indices (into basis()) spanning complex degree j.
    [[nodiscard]] const std::vector<std::size_t>& degree_basis(int j) const { return by_degree_.at(j); }
    [[nodiscard]] std::size_t degree_rank(int j) const
    {
        return (j < 0 || j > n_) ? 0 : by_degree_[static_cast<std::size_t>(j)].size();
    }

    [[nodiscard]] std::optional<std::size_t> find(const std::string& gen) const
    {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].name == gen)
                return i;
        return std::nullopt;
    }

    [[nodiscard]] GradedClass zero() const
    {
        GradedClass c;
        c.ring_id_ = id_;
        return c;
    }
    [[nodiscard]] GradedClass one() const { return basis_class(unit_index_); }

    /// The class of a single basis element.
    [[nodiscard]] GradedClass basis_class(std::size_t index, Rational coeff = Rational(1)) const;
    [[nodiscard]] GradedClass generator(const std::string& gen, Rational coeff = Rational(1)) const
    {
        auto idx = find(gen);
        if (!idx)
            throw Error("unknown generator '" + gen + "' in ring " + name_);
        return basis_class(*idx, std::move(coeff));
    }

    /// Builds a class from full-basis coordinates (ordered as basis()).
    [[nodiscard]] GradedClass from_coordinates(const std::vector<Rational>& coords) const;
    /// Coordinates over the full basis (ordered as basis()).
    [[nodiscard]] std::vector<Rational> coordinates(const GradedClass& a) const;

    [[nodiscard]] GradedClass product(const GradedClass& a, const GradedClass& b) const;
    [[nodiscard]] GradedClass power(const GradedClass& a, int k) const;
    [[nodiscard]] Rational integrate(const GradedClass& a) const;
    [[nodiscard]] GradedClass power_series_apply(Series s, const GradedClass& a) const;

    /// Throws unless every class is from this ring.
    void check(const GradedClass& a) const
    {
        if (a.ring_id_ != id_ && !a.is_zero())
            throw Error("class does not belong to ring " + name_);
    }

    /// Exhaustive check of commutativity and associativity on basis triples.
    [[nodiscard]] bool is_commutative_associative() const;

    [[nodiscard]] const std::optional<GradedClass>& todd_class() const { return todd_; }
    void set_todd_class(GradedClass td)
    {
        check(td);
        if (td.scalar_part() != 1)
            throw Error("Todd class must have degree-0 part 1");
        todd_ = std::move(td);
    }

private:
    static std::uint64_t next_id()
    {
        static std::atomic<std::uint64_t> counter{1};
        return counter++;
    }

    std::string name_;
    int n_;
    std::uint64_t id_;
    std::vector<Generator> basis_;
    std::vector<std::vector<std::size_t>> by_degree_;
    std::vector<std::size_t> position_; // index within its degree block
    std::size_t unit_index_ = 0;
    // table_[a][b]: coordinates of basis_a * basis_b within degree block
    std::vector<std::vector<std::vector<Rational>>> table_;
    std::vector<Rational> integration_;
    std::optional<GradedClass> todd_;
};

inline NumericalRing::NumericalRing(std::string name, int dimension, std::vector<Generator> basis,
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>> products,
    std::vector<Rational> integration)
    : name_(std::move(name)), n_(dimension), id_(next_id()), basis_(std::move(basis)),
      integration_(std::move(integration))
{
    if (n_ < 1)
        throw Error("ring dimension must be at least 1");
    by_degree_.assign(static_cast<std::size_t>(n_) + 1, {});
    position_.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        int d = basis_[i].degree;
        if (d < 0 || d % 2 != 0 || d > 2 * n_)
            throw Error("generator '" + basis_[i].name + "' has invalid degree " + std::to_string(d));
        auto& block = by_degree_[static_cast<std::size_t>(d / 2)];
        position_[i] = block.size();
        block.push_back(i);
    }
    if (by_degree_[0].size() != 1)
        throw Error("ring must have exactly one degree-0 generator (the unit)");
    unit_index_ = by_degree_[0][0];
    if (integration_.size() != by_degree_[static_cast<std::size_t>(n_)].size())
        throw Error("integration vector must match the top-degree basis size");

    std::size_t m = basis_.size();
    table_.assign(m, std::vector<std::vector<Rational>>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            int j = basis_[a].degree / 2 + basis_[b].degree / 2;
            if (j > n_)
                continue;
            std::size_t width = by_degree_[static_cast<std::size_t>(j)].size();
            std::vector<Rational> coords(width, Rational(0));
            if (a == unit_index_) {
                coords[position_[b]] = 1;
            } else if (b == unit_index_) {
                coords[position_[a]] = 1;
            } else {
                auto it = products.find({a, b});
                if (it == products.end())
                    it = products.find({b, a});
                if (it != products.end()) {
                    if (it->second.size() != width)
                        throw Error("product " + basis_[a].name + "*" + basis_[b].name
                            + " has wrong coordinate count");
                    coords = it->second;
                }
            }
            table_[a][b] = std::move(coords);
        }
}

inline GradedClass NumericalRing::basis_class(std::size_t index, Rational coeff) const
{
    if (index >= basis_.size())
        throw Error("basis index out of range");
    GradedClass c = zero();
    int j = basis_[index].degree / 2;
    std::vector<Rational> v(by_degree_[static_cast<std::size_t>(j)].size(), Rational(0));
    v[position_[index]] = std::move(coeff);
    c.parts_[j] = std::move(v);
    c.prune();
    return c;
}

inline GradedClass NumericalRing::from_coordinates(const std::vector<Rational>& coords) const
{
    if (coords.size() != basis_.size())
        throw Error("expected " + std::to_string(basis_.size()) + " coordinates for ring " + name_);
    GradedClass c = zero();
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (sgn(coords[i]) != 0)
            c += basis_class(i, coords[i]);
    return c;
}

inline std::vector<Rational> NumericalRing::coordinates(const GradedClass& a) const
{
    check(a);
    std::vector<Rational> out(basis_.size(), Rational(0));
    for (const auto& [j, v] : a.parts_)
        for (std::size_t p = 0; p < v.size(); ++p)
            out[by_degree_[static_cast<std::size_t>(j)][p]] = v[p];
    return out;
}

inline GradedClass NumericalRing::product(const GradedClass& a, const GradedClass& b) const
{
    check(a);
    check(b);
    GradedClass r = zero();
    for (const auto& [ja, va] : a.parts_)
        for (const auto& [jb, vb] : b.parts_) {
            int j = ja + jb;
            if (j > n_)
                continue;
            auto& out = r.parts_[j];
            out.resize(by_degree_[static_cast<std::size_t>(j)].size(), Rational(0));
            const auto& ba = by_degree_[static_cast<std::size_t>(ja)];
            const auto& bb = by_degree_[static_cast<std::size_t>(jb)];
            for (std::size_t p = 0; p < va.size(); ++p) {
                if (sgn(va[p]) == 0)
                    continue;
                for (std::size_t q = 0; q < vb.size(); ++q) {
                    if (sgn(vb[q]) == 0)
                        continue;
                    const auto& coords = table_[ba[p]][bb[q]];
                    Rational s = va[p] * vb[q];
                    for (std::size_t t = 0; t < coords.size(); ++t)
                        out[t] += s * coords[t];
                }
            }
        }
    r.prune();
    return r;
}

inline GradedClass NumericalRing::power(const GradedClass& a, int k) const
{
    if (k < 0)
        throw Error("negative power");
    GradedClass r = one();
    for (int i = 0; i < k; ++i)
        r = product(r, a);
    return r;
}

inline Rational NumericalRing::integrate(const GradedClass& a) const
{
    check(a);
    auto it = a.parts_.find(n_);
    if (it == a.parts_.end())
        return Rational(0);
    Rational s(0);
    for (std::size_t p = 0; p < it->second.size(); ++p)
        s += it->second[p] * integration_[p];
    return s;
}

inline GradedClass NumericalRing::power_series_apply(Series s, const GradedClass& a) const
{
    check(a);
    Rational a0 = a.scalar_part();
    GradedClass nil = a.nilpotent_part();
    if (s == Series::exp && sgn(a0) != 0)
        throw Error("exp requires a class with vanishing degree-0 part");
    if ((s == Series::sqrt || s == Series::inverse) && a0 != 1)
        throw Error("sqrt/inverse require a class with degree-0 part equal to 1");

    // Coefficients c_k of the series in the nilpotent variable; N^{n+1} = 0.
    std::vector<Rational> c(static_cast<std::size_t>(n_) + 1);
    c[0] = 1;
    for (int k = 1; k <= n_; ++k) {
        auto ku = static_cast<std::size_t>(k);
        switch (s) {
        case Series::exp:
            c[ku] = c[ku - 1] / k;
            break;
        case Series::sqrt: // binom(1/2, k) recursion
            c[ku] = c[ku - 1] * (Rational(1, 2) - (k - 1)) / k;
            break;
        case Series::inverse:
            c[ku] = -c[ku - 1];
            break;
        }
    }
    GradedClass r = zero();
    GradedClass term = one();
    for (int k = 0; k <= n_; ++k) {
        r += term * c[static_cast<std::size_t>(k)];
        term = product(term, nil);
        if (term.is_zero())
            break;
    }
    return r;
}

inline bool NumericalRing::is_commutative_associative() const
{
    std::size_t m = basis_.size();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            auto ea = basis_class(a), eb = basis_class(b);
            auto ab = product(ea, eb);
            if (ab != product(eb, ea))
                return false;
            for (std::size_t c = 0; c < m; ++c) {
                auto ec = basis_class(c);
                if (product(ab, ec) != product(ea, product(eb, ec)))
                    return false;
            }
        }
    return true;
}

/// Q[h]/h^{n+1} with the integral of h^n equal to 1. Stores the Todd class
/// (h / (1 - e^{-h}))^{n+1} from the Euler sequence.
inline NumericalRing projective_space(int n)
{
    if (n < 1)
        throw Error("projective_space requires n >= 1");
    std::vector<Generator> basis;
    for (int j = 0; j <= n; ++j)
        basis.push_back({j == 0 ? "1" : (j == 1 ? "h" : "h^" + std::to_string(j)), 2 * j});
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>> products;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; a + b <= n; ++b)
            products[{static_cast<std::size_t>(a), static_cast<std::size_t>(b)}] = {Rational(1)};
    NumericalRing ring("P" + std::to_string(n), n, std::move(basis), std::move(products), {Rational(1)});

    // (1 - e^{-h})/h = sum (-1)^k h^k / (k+1)!
    GradedClass ratio = ring.zero();
    Rational fact(1);
    for (int k = 0; k <= n; ++k) {
        fact *= (k + 1);
        Rational c = Rational(k % 2 == 0 ? 1 : -1) / fact;
        ratio += ring.power(ring.generator("h"), k) * c;
    }
    GradedClass td = ring.power(ring.power_series_apply(Series::inverse, ratio), n + 1);
    ring.set_todd_class(std::move(td));
    return ring;
}

/// Rank-one slice of a complex surface generated by the polarisation w,
/// with the integral of w^2 equal to `vol`.
inline NumericalRing torus_line(const Rational& vol)
{
    if (sgn(vol) <= 0)
        throw Error("torus_line requires a positive volume");
    std::vector<Generator> basis{{"1", 0}, {"w", 2}, {"w^2", 4}};
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>> products;
    products[{1, 1}] = {Rational(1)};
    NumericalRing ring("torus", 2, std::move(basis), std::move(products), {vol});
    ring.set_todd_class(ring.one()); // flat: Td = 1
    return ring;
}

} // namespace zcrit

#endif // ZCRIT_NUMRING_HPP
