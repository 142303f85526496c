#ifndef ZCRIT_LP_HPP
#define ZCRIT_LP_HPP

// Exact two-phase simplex over the rationals (Bland's rule, so it terminates).
// Standard form: minimise c.x subject to A x = b, x >= 0.

#include "rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace zcrit {

using RationalMatrix = std::vector<std::vector<Rational>>;

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> x;
    Rational objective;
};

class SimplexTableau {
public:
    SimplexTableau(const RationalMatrix& a, const std::vector<Rational>& b, std::size_t ncols)
        : m_(a.size()), n_(ncols)
    {
        // Columns: n original, then m artificials; last column is the rhs.
        t_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (a[i].size() != n_)
                throw std::invalid_argument("lp: ragged constraint matrix");
            int s = sgn(b[i]) < 0 ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j)
                t_[i][j] = s * a[i][j];
            t_[i][n_ + i] = 1;
            t_[i][rhs()] = s * b[i];
            basis_[i] = n_ + i;
        }
    }

    /// Runs both phases; `c` has one entry per original column.
    LpResult solve(const std::vector<Rational>& c)
    {
        LpResult res;
        std::vector<Rational> phase1(n_ + m_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            phase1[n_ + i] = 1;
        if (!optimise(phase1, n_ + m_))
            throw std::logic_error("lp: phase one unbounded");
        Rational infeas(0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_)
                infeas += t_[i][rhs()];
        if (sgn(infeas) > 0) {
            res.status = LpStatus::infeasible;
            return res;
        }
        drive_out_artificials();

        std::vector<Rational> cost(c);
        cost.resize(n_ + m_, Rational(0));
        if (!optimise(cost, n_)) {
            res.status = LpStatus::unbounded;
            return res;
        }
        res.status = LpStatus::optimal;
        res.x.assign(n_, Rational(0));
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] < n_)
                res.x[basis_[i]] = t_[i][rhs()];
        res.objective = 0;
        for (std::size_t j = 0; j < n_; ++j)
            res.objective += c[j] * res.x[j];
        return res;
    }

private:
    [[nodiscard]] std::size_t rhs() const { return n_ + m_; }

    void pivot(std::size_t row, std::size_t col)
    {
        Rational p = t_[row][col];
        for (auto& v : t_[row])
            v /= p;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i == row || sgn(t_[i][col]) == 0)
                continue;
            Rational f = t_[i][col];
            for (std::size_t j = 0; j <= rhs(); ++j)
                if (sgn(t_[row][j]) != 0)
                    t_[i][j] -= f * t_[row][j];
        }
        basis_[row] = col;
    }

    /// Minimises cost over columns [0, allowed); false if unbounded.
    bool optimise(const std::vector<Rational>& cost, std::size_t allowed)
    {
        for (;;) {
            // Reduced costs r_j = c_j - c_B B^{-1} A_j, read from the tableau.
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < allowed && !enter; ++j) {
                Rational r = cost[j];
                for (std::size_t i = 0; i < t_.size(); ++i)
                    if (sgn(t_[i][j]) != 0)
                        r -= cost[basis_[i]] * t_[i][j];
                if (sgn(r) < 0)
                    enter = j;
            }
            if (!enter)
                return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < t_.size(); ++i) {
                if (sgn(t_[i][*enter]) <= 0)
                    continue;
                Rational ratio = t_[i][rhs()] / t_[i][*enter];
                if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave)
                return false;
            pivot(*leave, *enter);
        }
    }

    void drive_out_artificials()
    {
        for (std::size_t i = 0; i < t_.size();) {
            if (basis_[i] < n_) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < n_ && !col; ++j)
                if (sgn(t_[i][j]) != 0)
                    col = j;
            if (col) {
                pivot(i, *col);
                ++i;
            } else {
                // Redundant equation.
                t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    std::size_t m_;
    std::size_t n_;
    RationalMatrix t_;
    std::vector<std::size_t> basis_;
};

/// minimise c.x  s.t.  A x = b, x >= 0.
inline LpResult solve_lp(const RationalMatrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c)
{
    if (a.size() != b.size())
        throw std::invalid_argument("lp: rhs size mismatch");
    std::size_t n = c.size();
    if (a.empty()) {
        LpResult r;
        r.x.assign(n, Rational(0));
        for (const auto& cj : c)
            if (sgn(cj) < 0) {
                r.status = LpStatus::unbounded;
                return r;
            }
        r.status = LpStatus::optimal;
        r.objective = 0;
        return r;
    }
    SimplexTableau tab(a, b, n);
    return tab.solve(c);
}

} // namespace zcrit

#endif // ZCRIT_LP_HPP
