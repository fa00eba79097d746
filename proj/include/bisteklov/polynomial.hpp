#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bisteklov {

using Exponent = std::vector<std::uint16_t>;

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent multi-index; zero coefficients
/// are never stored, so the zero polynomial has an empty term map.
class Polynomial {
public:
    explicit Polynomial(int nvars) : nvars_(nvars) {
        if (nvars < 1) throw std::invalid_argument("Polynomial: nvars must be >= 1");
    }

    static Polynomial constant(int nvars, const mpq_class& c) {
        Polynomial p(nvars);
        p.add_term(Exponent(nvars, 0), c);
        return p;
    }

    static Polynomial monomial(Exponent alpha, const mpq_class& c = 1) {
        Polynomial p(static_cast<int>(alpha.size()));
        p.add_term(alpha, c);
        return p;
    }

    /// x_i (zero-based index).
    static Polynomial variable(int nvars, int i) {
        Exponent e(nvars, 0);
        e.at(i) = 1;
        return monomial(std::move(e));
    }

    /// |x|² = Σ x_i².
    static Polynomial norm_squared(int nvars) {
        Polynomial p(nvars);
        for (int i = 0; i < nvars; ++i) {
            Exponent e(nvars, 0);
            e[i] = 2;
            p.add_term(e, 1);
        }
        return p;
    }

    int nvars() const { return nvars_; }
    const std::map<Exponent, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    mpq_class coefficient(const Exponent& alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? mpq_class(0) : it->second;
    }

    void add_term(const Exponent& alpha, const mpq_class& c) {
        if (static_cast<int>(alpha.size()) != nvars_)
            throw std::invalid_argument("Polynomial: exponent length mismatch");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(alpha, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [alpha, c] : terms_) d = std::max(d, total_degree(alpha));
        return d;
    }

    /// True iff every term has total degree m (the zero polynomial qualifies).
    bool is_homogeneous(int m) const {
        for (const auto& [alpha, c] : terms_)
            if (total_degree(alpha) != m) return false;
        return true;
    }

    Polynomial derivative(int i) const {
        Polynomial out(nvars_);
        for (const auto& [alpha, c] : terms_) {
            if (alpha[i] == 0) continue;
            Exponent beta = alpha;
            --beta[i];
            out.add_term(beta, c * alpha[i]);
        }
        return out;
    }

    Polynomial laplacian() const {
        Polynomial out(nvars_);
        for (const auto& [alpha, c] : terms_) {
            for (int i = 0; i < nvars_; ++i) {
                if (alpha[i] < 2) continue;
                Exponent beta = alpha;
                beta[i] -= 2;
                out.add_term(beta, c * (alpha[i] * (alpha[i] - 1)));
            }
        }
        return out;
    }

    /// Euler operator Σ x_i ∂_i (radial derivative on the unit sphere).
    Polynomial euler() const {
        Polynomial out(nvars_);
        for (const auto& [alpha, c] : terms_) out.add_term(alpha, c * total_degree(alpha));
        return out;
    }

    /// Normal form modulo the ideal (|x|² - 1).
    ///
    /// {x_1² + ... + x_n² - 1} is a Gröbner basis for lex order with x_1 leading,
    /// so repeatedly rewriting x_1² -> 1 - x_2² - ... - x_n² yields a polynomial
    /// of x_1-degree at most one that is zero exactly when the input vanishes on
    /// the unit sphere. Each step lowers the x_1-degree, so the loop terminates.
    Polynomial reduce_mod_unit_sphere() const {
        Polynomial out(nvars_);
        std::map<Exponent, mpq_class> pending = terms_;
        while (!pending.empty()) {
            // Largest x_1-degree first, so rewrites of one monomial merge before they are reduced.
            auto node = pending.extract(std::prev(pending.end()));
            const Exponent& alpha = node.key();
            const mpq_class& c = node.mapped();
            if (alpha[0] < 2) {
                out.add_term(alpha, c);
                continue;
            }
            Exponent beta = alpha;
            beta[0] -= 2;
            accumulate(pending, beta, c);
            for (int i = 1; i < nvars_; ++i) {
                Exponent gamma = beta;
                gamma[i] += 2;
                accumulate(pending, gamma, -c);
            }
        }
        return out;
    }

    double evaluate(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != nvars_)
            throw std::invalid_argument("Polynomial::evaluate: dimension mismatch");
        double sum = 0.0;
        for (const auto& [alpha, c] : terms_) {
            double term = c.get_d();
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < alpha[i]; ++k) term *= x[i];
            sum += term;
        }
        return sum;
    }

    Polynomial& operator+=(const Polynomial& other) {
        check_same(other);
        for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& other) {
        check_same(other);
        for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
        return *this;
    }

    Polynomial& operator*=(const mpq_class& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [alpha, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const mpq_class& s) { return a *= s; }
    friend Polynomial operator*(const mpq_class& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same(b);
        Polynomial out(a.nvars_);
        Exponent gamma(a.nvars_);
        for (const auto& [alpha, ca] : a.terms_) {
            for (const auto& [beta, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) gamma[i] = alpha[i] + beta[i];
                out.add_term(gamma, ca * cb);
            }
        }
        return out;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [alpha, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.get_str() << ")";
            for (int i = 0; i < nvars_; ++i) {
                if (alpha[i] == 0) continue;
                os << "*x" << (i + 1);
                if (alpha[i] > 1) os << "^" << alpha[i];
            }
        }
        return os.str();
    }

    static int total_degree(const Exponent& alpha) {
        int d = 0;
        for (auto a : alpha) d += a;
        return d;
    }

private:
    static void accumulate(std::map<Exponent, mpq_class>& m, const Exponent& e,
                           const mpq_class& c) {
        auto [it, inserted] = m.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) m.erase(it);
        }
    }

    void check_same(const Polynomial& other) const {
        if (other.nvars_ != nvars_)
            throw std::invalid_argument("Polynomial: variable count mismatch");
    }

    int nvars_;
    std::map<Exponent, mpq_class> terms_;
};

/// Solid spherical harmonics are stored as ordinary exact polynomials.
using HarmonicPoly = Polynomial;

inline bool is_harmonic(const Polynomial& p) { return p.laplacian().is_zero(); }

/// All exponent multi-indices of total degree m in n variables, in lexicographic
/// order (first variable varies slowest).
inline std::vector<Exponent> monomials_of_degree(int n, int m) {
    std::vector<Exponent> out;
    Exponent e(n, 0);
    auto fill = [&](auto&& self, int i, int remaining) -> void {
        if (i == n - 1) {
            e[i] = static_cast<std::uint16_t>(remaining);
            out.push_back(e);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            e[i] = static_cast<std::uint16_t>(k);
            self(self, i + 1, remaining - k);
        }
    };
    if (n >= 1 && m >= 0) fill(fill, 0, m);
    return out;
}

}  // namespace bisteklov
