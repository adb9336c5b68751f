#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dirac/degree.hpp"
#include "dirac/domain.hpp"
#include "dirac/generators.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

// Shared data of a truncated multivariate series ring: the coefficient ring, a
// list of series variables of positive degree, and the truncation order. Terms
// are kept while their variable-weighted degree stays <= order; coefficient
// generators never count toward truncation.
struct SeriesContext {
    CoefficientDomain domain;
    TablePtr coeff_table;
    std::vector<Generator> vars;
    std::int64_t order = 0;
    TablePtr combined;  // coefficient generators first, then variables

    static std::shared_ptr<const SeriesContext> make(CoefficientDomain domain, TablePtr coeff_table,
                                                     std::vector<Generator> vars,
                                                     std::int64_t order) {
        if (!coeff_table)
            coeff_table = make_table({});
        if (order < 0)
            throw DomainError("SeriesContext: negative truncation order");
        std::vector<Generator> all = coeff_table->entries();
        for (const Generator& v : vars) {
            if (v.degree.value <= 0)
                throw DomainError("SeriesContext: variable '" + v.name +
                                  "' must have positive degree");
            all.push_back(v);
        }
        TablePtr combined = make_table(std::move(all));  // rejects name clashes
        return std::shared_ptr<const SeriesContext>(
            new SeriesContext{std::move(domain), std::move(coeff_table), std::move(vars), order,
                              std::move(combined)});
    }

    std::size_t n_coeff() const { return coeff_table->size(); }
    std::size_t n_vars() const { return vars.size(); }
    Degree var_degree(std::size_t j) const { return vars[j].degree; }

    std::int64_t var_weighted_degree(const Exponents& e) const {
        std::int64_t d = 0;
        for (std::size_t i = n_coeff(); i < e.size(); ++i)
            d += static_cast<std::int64_t>(e[i]) * combined->degree(i).value;
        return d;
    }

    friend bool operator==(const SeriesContext& a, const SeriesContext& b) {
        return a.domain == b.domain && *a.coeff_table == *b.coeff_table && a.vars == b.vars &&
               a.order == b.order;
    }
};

using ContextPtr = std::shared_ptr<const SeriesContext>;

inline bool same_context(const ContextPtr& a, const ContextPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

class TruncatedSeries {
  public:
    explicit TruncatedSeries(ContextPtr ctx)
        : ctx_(std::move(ctx)), body_(ctx_->domain, ctx_->combined) {}

    static TruncatedSeries zero(ContextPtr ctx) { return TruncatedSeries(std::move(ctx)); }

    static TruncatedSeries variable(ContextPtr ctx, std::size_t j) {
        TruncatedSeries s(ctx);
        if (j >= ctx->n_vars())
            throw DomainError("TruncatedSeries::variable: index out of range");
        if (ctx->var_degree(j).value > ctx->order)
            return s;  // variable itself already truncated away
        s.body_ = GradedPolynomial::generator(ctx->domain, ctx->combined, ctx->n_coeff() + j);
        return s;
    }

    // Embeds an element of the coefficient ring as a variable-free series.
    static TruncatedSeries from_coefficient(ContextPtr ctx, const GradedPolynomial& c) {
        TruncatedSeries s(ctx);
        s.add_term(Exponents(s.ctx_->n_vars(), 0), c);
        return s;
    }

    const ContextPtr& context() const { return ctx_; }
    const GradedPolynomial& body() const { return body_; }
    bool is_zero() const { return body_.is_zero(); }
    std::int64_t order() const { return ctx_->order; }

    // Adds c * v^var_exponents, truncating as needed.
    void add_term(const Exponents& var_exponents, const GradedPolynomial& c) {
        if (var_exponents.size() != ctx_->n_vars())
            throw DomainError("TruncatedSeries::add_term: wrong variable exponent count");
        if (c.domain() != ctx_->domain || !same_table(c.table_ptr(), ctx_->coeff_table))
            throw DomainError("TruncatedSeries::add_term: coefficient from the wrong ring");
        Exponents full(ctx_->combined->size(), 0);
        for (std::size_t j = 0; j < var_exponents.size(); ++j)
            full[ctx_->n_coeff() + j] = var_exponents[j];
        if (ctx_->var_weighted_degree(full) > ctx_->order)
            return;
        for (const auto& [e, v] : c.terms()) {
            Exponents key = full;
            for (std::size_t i = 0; i < ctx_->n_coeff(); ++i)
                key[i] += e[i];
            body_.add_term(std::move(key), v);
        }
    }

    // Coefficient of v^var_exponents as an element of the coefficient ring.
    GradedPolynomial coefficient(const Exponents& var_exponents) const {
        if (var_exponents.size() != ctx_->n_vars())
            throw DomainError("TruncatedSeries::coefficient: wrong variable exponent count");
        GradedPolynomial c(ctx_->domain, ctx_->coeff_table);
        for (const auto& [e, v] : body_.terms()) {
            bool match = true;
            for (std::size_t j = 0; j < ctx_->n_vars(); ++j)
                if (e[ctx_->n_coeff() + j] != var_exponents[j]) {
                    match = false;
                    break;
                }
            if (match)
                c.add_term(Exponents(e.begin(), e.begin() + ctx_->n_coeff()), v);
        }
        return c;
    }

    GradedPolynomial constant_term() const { return coefficient(Exponents(ctx_->n_vars(), 0)); }

    // Series grouped by variable monomial, in lexicographic variable order.
    std::map<Exponents, GradedPolynomial> coefficients() const {
        std::map<Exponents, GradedPolynomial> out;
        for (const auto& [e, v] : body_.terms()) {
            Exponents ve(e.begin() + ctx_->n_coeff(), e.end());
            auto it = out.find(ve);
            if (it == out.end())
                it = out.emplace(std::move(ve), GradedPolynomial(ctx_->domain, ctx_->coeff_table))
                         .first;
            it->second.add_term(Exponents(e.begin(), e.begin() + ctx_->n_coeff()), v);
        }
        return out;
    }

    // Every term's variable part has weighted degree >= v, i.e. the series lies
    // in the v-th filtration step.
    bool in_filtration(std::int64_t v) const {
        for (const auto& [e, c] : body_.terms())
            if (ctx_->var_weighted_degree(e) < v)
                return false;
        return true;
    }

    std::optional<Degree> homogeneous_degree() const { return body_.homogeneous_degree(); }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        check_compatible(o);
        body_ += o.body_;
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        check_compatible(o);
        body_ -= o.body_;
        return *this;
    }
    TruncatedSeries operator-() const {
        TruncatedSeries r(ctx_);
        r.body_ = -body_;
        return r;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
        a += b;
        return a;
    }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
        a -= b;
        return a;
    }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries r(a.ctx_);
        r.body_ = a.body_ * b.body_;
        r.truncate();
        return r;
    }
    friend TruncatedSeries operator*(const Integer& s, TruncatedSeries a) {
        a.body_ *= s;
        return a;
    }

    TruncatedSeries pow(std::uint64_t n) const {
        TruncatedSeries r = from_coefficient(ctx_, GradedPolynomial::one(ctx_->domain, ctx_->coeff_table));
        TruncatedSeries base = *this;
        while (n > 0) {
            if (n & 1)
                r = r * base;
            n >>= 1;
            if (n)
                base = base * base;
        }
        return r;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return same_context(a.ctx_, b.ctx_) && a.body_ == b.body_;
    }
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

    std::string to_string() const { return body_.to_string(); }

    void truncate() {
        bool dirty = false;
        for (const auto& [e, c] : body_.terms())
            if (ctx_->var_weighted_degree(e) > ctx_->order) {
                dirty = true;
                break;
            }
        if (!dirty)
            return;
        GradedPolynomial kept(ctx_->domain, ctx_->combined);
        for (const auto& [e, c] : body_.terms())
            if (ctx_->var_weighted_degree(e) <= ctx_->order)
                kept.add_term(e, c);
        body_ = std::move(kept);
    }

    // Used by substitution to install an already-computed body.
    static TruncatedSeries from_body(ContextPtr ctx, GradedPolynomial body) {
        TruncatedSeries s(std::move(ctx));
        if (!same_table(body.table_ptr(), s.ctx_->combined) || body.domain() != s.ctx_->domain)
            throw InternalError("TruncatedSeries::from_body: body from the wrong ring");
        s.body_ = std::move(body);
        s.truncate();
        return s;
    }

  private:
    void check_compatible(const TruncatedSeries& o) const {
        if (!same_context(ctx_, o.ctx_))
            throw DomainError("TruncatedSeries: operands from different series rings");
    }

    ContextPtr ctx_;
    GradedPolynomial body_;
};

// A tuple of series in one shared context; used for multi-component laws,
// substitution targets, and coordinate changes.
class SeriesFamily {
  public:
    explicit SeriesFamily(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    SeriesFamily(ContextPtr ctx, std::vector<TruncatedSeries> components)
        : ctx_(std::move(ctx)), components_(std::move(components)) {
        for (const TruncatedSeries& c : components_)
            if (!same_context(c.context(), ctx_))
                throw DomainError("SeriesFamily: component from a different series ring");
    }

    static SeriesFamily identity(const ContextPtr& ctx) {
        SeriesFamily f(ctx);
        for (std::size_t j = 0; j < ctx->n_vars(); ++j)
            f.components_.push_back(TruncatedSeries::variable(ctx, j));
        return f;
    }

    static SeriesFamily zero(const ContextPtr& ctx, std::size_t n) {
        SeriesFamily f(ctx);
        for (std::size_t j = 0; j < n; ++j)
            f.components_.push_back(TruncatedSeries::zero(ctx));
        return f;
    }

    const ContextPtr& context() const { return ctx_; }
    std::size_t size() const { return components_.size(); }
    const TruncatedSeries& operator[](std::size_t i) const { return components_[i]; }
    TruncatedSeries& operator[](std::size_t i) { return components_[i]; }
    const std::vector<TruncatedSeries>& components() const { return components_; }
    void push_back(TruncatedSeries s) {
        if (!same_context(s.context(), ctx_))
            throw DomainError("SeriesFamily: component from a different series ring");
        components_.push_back(std::move(s));
    }

    bool is_zero() const {
        for (const TruncatedSeries& c : components_)
            if (!c.is_zero())
                return false;
        return true;
    }

    friend SeriesFamily operator-(SeriesFamily a, const SeriesFamily& b) {
        if (a.size() != b.size())
            throw DomainError("SeriesFamily: size mismatch in '-'");
        for (std::size_t i = 0; i < a.size(); ++i)
            a.components_[i] -= b.components_[i];
        return a;
    }
    friend SeriesFamily operator+(SeriesFamily a, const SeriesFamily& b) {
        if (a.size() != b.size())
            throw DomainError("SeriesFamily: size mismatch in '+'");
        for (std::size_t i = 0; i < a.size(); ++i)
            a.components_[i] += b.components_[i];
        return a;
    }

    friend bool operator==(const SeriesFamily& a, const SeriesFamily& b) {
        return same_context(a.ctx_, b.ctx_) && a.components_ == b.components_;
    }

  private:
    ContextPtr ctx_;
    std::vector<TruncatedSeries> components_;
};

// Substitutes args[j] for the j-th variable of every component of f. Each
// argument must vanish at zero, have the parity of the variable it replaces,
// and lie in filtration >= that variable's degree; under those conditions the
// result is exact up to order min(f.order, args.order).
inline SeriesFamily substitute(const SeriesFamily& f, const SeriesFamily& args) {
    const ContextPtr& src = f.context();
    const ContextPtr& tgt = args.context();
    if (args.size() != src->n_vars())
        throw DomainError("substitute: need one argument per variable (" +
                          std::to_string(src->n_vars()) + " expected, " +
                          std::to_string(args.size()) + " given)");
    if (src->domain != tgt->domain || !(*src->coeff_table == *tgt->coeff_table))
        throw DomainError("substitute: coefficient rings differ");
    for (std::size_t j = 0; j < args.size(); ++j) {
        if (!args[j].constant_term().is_zero())
            throw DomainError("substitute: argument for '" + src->vars[j].name +
                              "' has a constant term");
        if (!args[j].in_filtration(src->var_degree(j).value))
            throw DomainError("substitute: argument for '" + src->vars[j].name +
                              "' lies below filtration " + std::to_string(src->var_degree(j).value));
    }

    for (std::size_t j = 0; j < args.size(); ++j) {
        std::optional<bool> par = args[j].body().parity();
        if (!par)
            throw DomainError("substitute: argument for '" + src->vars[j].name +
                              "' mixes parities");
        if (!args[j].is_zero() && *par != src->var_degree(j).odd())
            throw DomainError("substitute: argument for '" + src->vars[j].name +
                              "' has the wrong parity");
    }

    // Terms whose variable weight already exceeds the order can never feed a
    // surviving term, because every argument lies in positive filtration.
    // Dropping them after each product keeps the intermediates small.
    auto truncated = [&](const GradedPolynomial& poly) {
        GradedPolynomial out(tgt->domain, tgt->combined);
        for (const auto& [e, v] : poly.terms())
            if (tgt->var_weighted_degree(e) <= tgt->order)
                out.add_term(e, v);
        return out;
    };

    // Power ladders of the argument bodies, built on demand and shared by
    // every term of every component.
    std::vector<std::vector<GradedPolynomial>> powers(args.size());
    auto arg_power = [&](std::size_t j, std::uint32_t k) -> const GradedPolynomial& {
        std::vector<GradedPolynomial>& ladder = powers[j];
        if (ladder.empty())
            ladder.push_back(GradedPolynomial::constant(tgt->domain, tgt->combined, Integer(1)));
        while (ladder.size() <= k)
            ladder.push_back(truncated(ladder.back() * args[j].body()));
        return ladder[k];
    };

    SeriesFamily out(tgt);
    for (std::size_t s = 0; s < f.size(); ++s) {
        GradedPolynomial acc(tgt->domain, tgt->combined);
        for (const auto& [e, c] : f[s].body().terms()) {
            // Coefficient generators map to themselves, so their part of the
            // monomial carries over index for index.
            Exponents coeff_part(tgt->combined->size(), 0);
            for (std::size_t i = 0; i < src->n_coeff(); ++i)
                coeff_part[i] = e[i];
            GradedPolynomial term(tgt->domain, tgt->combined);
            term.add_term(std::move(coeff_part), c);
            for (std::size_t j = 0; j < src->n_vars() && !term.is_zero(); ++j)
                if (std::uint32_t k = e[src->n_coeff() + j]; k != 0)
                    term = truncated(term * arg_power(j, k));
            acc += term;
        }
        out.push_back(TruncatedSeries::from_body(tgt, std::move(acc)));
    }
    return out;
}

inline TruncatedSeries substitute(const TruncatedSeries& f, const SeriesFamily& args) {
    SeriesFamily wrapped(f.context(), {f});
    return substitute(wrapped, args)[0];
}

// Solves F(x, i(x)) = 0 for i, where F is a family of d series in 2d variables
// (x_1..x_d, z_1..z_d) with F_s = x_s + z_s + (terms mixing both blocks).
// Returns i as a family in the x-variables alone. The shape conditions
// F(x, 0) = x and F(0, z) = z are checked first and make the fixed-point
// iteration contract one filtration step per round.
inline SeriesFamily solve_recursively(const SeriesFamily& f) {
    const ContextPtr& ctx = f.context();
    const std::size_t d = f.size();
    if (ctx->n_vars() != 2 * d)
        throw DomainError("solve_recursively: family of size d needs exactly 2d variables");
    for (std::size_t s = 0; s < d; ++s) {
        if (ctx->var_degree(s) != ctx->var_degree(d + s))
            throw DomainError("solve_recursively: variable degrees of the two blocks differ at " +
                              std::to_string(s));
    }

    // Shape check: substituting zero for either block must give the other block's
    // variable. Report the first offending coefficient by name.
    ContextPtr xctx = SeriesContext::make(
        ctx->domain, ctx->coeff_table,
        std::vector<Generator>(ctx->vars.begin(), ctx->vars.begin() + static_cast<std::ptrdiff_t>(d)),
        ctx->order);
    SeriesFamily x_id = SeriesFamily::identity(xctx);
    for (int side = 0; side < 2; ++side) {
        SeriesFamily probe(xctx);
        for (std::size_t j = 0; j < 2 * d; ++j) {
            bool live = (side == 0) ? (j < d) : (j >= d);
            probe.push_back(live ? x_id[j % d] : TruncatedSeries::zero(xctx));
        }
        SeriesFamily value = substitute(f, probe);
        for (std::size_t s = 0; s < d; ++s) {
            TruncatedSeries diff = value[s] - x_id[s];
            if (!diff.is_zero()) {
                const std::map<Exponents, GradedPolynomial> off = diff.coefficients();
                auto bad = off.begin();
                throw DomainError(std::string("solve_recursively: component ") +
                                  std::to_string(s) + " is not x + z + (mixed): offending " +
                                  "coefficient at variable exponents " +
                                  [&] {
                                      std::string t = "(";
                                      for (std::size_t j = 0; j < bad->first.size(); ++j)
                                          t += (j ? "," : "") + std::to_string(bad->first[j]);
                                      return t + ")";
                                  }() +
                                  " equals " + bad->second.to_string());
            }
        }
    }

    // Fixed-point iteration i <- i - F(x, i).
    SeriesFamily inv(xctx);
    for (std::size_t s = 0; s < d; ++s)
        inv.push_back(-x_id[s]);
    const std::int64_t max_rounds = ctx->order + 2;
    for (std::int64_t round = 0; round < max_rounds; ++round) {
        SeriesFamily probe(xctx);
        for (std::size_t s = 0; s < d; ++s)
            probe.push_back(x_id[s]);
        for (std::size_t s = 0; s < d; ++s)
            probe.push_back(inv[s]);
        SeriesFamily residual = substitute(f, probe);
        if (residual.is_zero())
            return inv;
        inv = inv - residual;
    }
    throw InternalError("solve_recursively: fixed-point iteration failed to converge");
}

}  // namespace dirac
