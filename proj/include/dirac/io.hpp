#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dirac/cobar.hpp"
#include "dirac/cochain.hpp"
#include "dirac/degree.hpp"
#include "dirac/domain.hpp"
#include "dirac/errors.hpp"
#include "dirac/fgl.hpp"
#include "dirac/finite_algebra.hpp"
#include "dirac/flatness.hpp"
#include "dirac/generators.hpp"
#include "dirac/lazard.hpp"
#include "dirac/polynomial.hpp"
#include "dirac/series.hpp"
#include "dirac/steenrod.hpp"

// JSON and CSV codecs for everything the command-line driver reads or writes.
// Parsers throw ParseError with enough context to locate the offending field;
// all emitters are deterministic (json object keys are sorted, rows are sorted
// before printing, no timestamps).

namespace dirac::io {

using nlohmann::json;

// ---------------------------------------------------------------- helpers --

inline const json& field(const json& j, const std::string& key) {
    if (!j.is_object())
        throw ParseError("expected an object carrying field '" + key + "'");
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError("missing field '" + key + "'");
    return *it;
}

inline const json* opt_field(const json& j, const std::string& key) {
    if (!j.is_object())
        return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline std::int64_t int_field(const json& j, const std::string& key) {
    const json& v = field(j, key);
    if (!v.is_number_integer())
        throw ParseError("field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

inline std::int64_t opt_int_field(const json& j, const std::string& key, std::int64_t fallback) {
    return opt_field(j, key) ? int_field(j, key) : fallback;
}

inline std::string str_field(const json& j, const std::string& key) {
    const json& v = field(j, key);
    if (!v.is_string())
        throw ParseError("field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline std::string opt_str_field(const json& j, const std::string& key, std::string fallback) {
    return opt_field(j, key) ? str_field(j, key) : fallback;
}

inline const json& array_field(const json& j, const std::string& key) {
    const json& v = field(j, key);
    if (!v.is_array())
        throw ParseError("field '" + key + "' must be an array");
    return v;
}

inline json integer_to_json(const Integer& v) {
    if (v.fits_slong_p())
        return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

inline Integer integer_from_json(const json& j, const std::string& what) {
    if (j.is_number_integer())
        return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw ParseError(what + ": '" + j.get<std::string>() + "' is not a decimal integer");
        }
    }
    throw ParseError(what + " must be an integer or a decimal string");
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ParseError(origin + ": not valid JSON");
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw ParseError("write to '" + path + "' failed");
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------- domains and generators --

inline json domain_to_json(const CoefficientDomain& d) {
    json j;
    j["kind"] = d.is_integers() ? "integers" : "prime_field";
    if (d.is_field())
        j["p"] = d.characteristic();
    return j;
}

inline CoefficientDomain domain_from_json(const json& j) {
    std::string kind = str_field(j, "kind");
    if (kind == "integers")
        return CoefficientDomain::integers();
    if (kind == "prime_field")
        return CoefficientDomain::prime_field(int_field(j, "p"));
    throw ParseError("unknown coefficient domain kind '" + kind + "'");
}

inline json table_to_json(const GeneratorTable& t) {
    json arr = json::array();
    for (const Generator& g : t.entries()) {
        json e;
        e["name"] = g.name;
        e["degree"] = g.degree.value;
        arr.push_back(std::move(e));
    }
    return arr;
}

inline TablePtr table_from_json(const json& j) {
    if (!j.is_array())
        throw ParseError("generator list must be an array");
    std::vector<Generator> gens;
    for (const json& e : j)
        gens.push_back({str_field(e, "name"), Degree{int_field(e, "degree")}});
    return make_table(std::move(gens));
}

// ------------------------------------------------------------ polynomials --

inline json polynomial_terms_to_json(const GradedPolynomial& q) {
    json terms = json::array();
    for (const auto& [e, c] : q.terms()) {
        json exps = json::object();
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0)
                exps[q.table().name(i)] = e[i];
        json t;
        t["exponents"] = std::move(exps);
        t["coefficient"] = integer_to_json(c);
        terms.push_back(std::move(t));
    }
    return terms;
}

inline json polynomial_to_json(const GradedPolynomial& q) {
    json j;
    j["domain"] = domain_to_json(q.domain());
    j["generators"] = table_to_json(q.table());
    j["terms"] = polynomial_terms_to_json(q);
    return j;
}

inline GradedPolynomial polynomial_terms_from_json(const json& terms,
                                                   const CoefficientDomain& domain,
                                                   const TablePtr& table) {
    if (!terms.is_array())
        throw ParseError("polynomial terms must be an array");
    GradedPolynomial q(domain, table);
    for (const json& t : terms) {
        const json& exps = field(t, "exponents");
        if (!exps.is_object())
            throw ParseError("term exponents must be an object keyed by generator name");
        Exponents e(table->size(), 0);
        for (auto it = exps.begin(); it != exps.end(); ++it) {
            if (!table->contains(it.key()))
                throw ParseError("unknown generator '" + it.key() + "' in a polynomial term");
            if (!it.value().is_number_integer())
                throw ParseError("exponent of '" + it.key() + "' must be an integer");
            std::int64_t v = it.value().get<std::int64_t>();
            if (v < 0 || v > 0xffffffffLL)
                throw ParseError("exponent of '" + it.key() + "' is out of range");
            e[table->index(it.key())] = static_cast<std::uint32_t>(v);
        }
        q.add_term(std::move(e), integer_from_json(field(t, "coefficient"), "term coefficient"));
    }
    return q;
}

// Accepts the full object form, an object with just "terms", or a bare terms
// array; declared domain or generator lists must match the enclosing file.
inline GradedPolynomial polynomial_from_json(const json& j, const CoefficientDomain& domain,
                                             const TablePtr& table) {
    if (j.is_array())
        return polynomial_terms_from_json(j, domain, table);
    if (const json* d = opt_field(j, "domain"))
        if (!(domain_from_json(*d) == domain))
            throw ParseError("polynomial domain disagrees with the enclosing file");
    if (const json* g = opt_field(j, "generators")) {
        TablePtr declared = table_from_json(*g);
        if (!(*declared == *table))
            throw ParseError("polynomial generator list disagrees with the enclosing file");
    }
    return polynomial_terms_from_json(field(j, "terms"), domain, table);
}

// ------------------------------------------------- series families, laws --

namespace detail {

inline std::vector<Degree> degrees_from_json(const json& arr) {
    if (!arr.is_array() || arr.empty())
        throw ParseError("'coordinate_degrees' must be a nonempty array of integers");
    std::vector<Degree> out;
    for (const json& v : arr) {
        if (!v.is_number_integer())
            throw ParseError("'coordinate_degrees' must contain integers");
        out.push_back(Degree{v.get<std::int64_t>()});
    }
    return out;
}

inline Exponents exponents_from_json(const json& arr, std::size_t expect) {
    if (!arr.is_array() || arr.size() != expect)
        throw ParseError("variable exponent vector must be an array of length " +
                         std::to_string(expect));
    Exponents e;
    for (const json& v : arr) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
            v.get<std::int64_t>() > 0xffffffffLL)
            throw ParseError("variable exponents must be small nonnegative integers");
        e.push_back(static_cast<std::uint32_t>(v.get<std::int64_t>()));
    }
    return e;
}

inline SeriesFamily components_from_json(const json& comps, const ContextPtr& ctx,
                                         std::size_t expect) {
    if (!comps.is_array() || comps.size() != expect)
        throw ParseError("'components' must be an array of " + std::to_string(expect) +
                         " term lists");
    SeriesFamily fam(ctx);
    for (const json& comp : comps) {
        if (!comp.is_array())
            throw ParseError("each series component must be an array of terms");
        TruncatedSeries s(ctx);
        for (const json& term : comp) {
            Exponents e = exponents_from_json(field(term, "exponents"), ctx->n_vars());
            GradedPolynomial c =
                polynomial_from_json(field(term, "value"), ctx->domain, ctx->coeff_table);
            s.add_term(e, c);
        }
        fam.push_back(std::move(s));
    }
    return fam;
}

inline json components_to_json(const SeriesFamily& fam) {
    json comps = json::array();
    for (const TruncatedSeries& s : fam.components()) {
        json terms = json::array();
        for (const auto& [e, c] : s.coefficients()) {
            json term;
            term["exponents"] = json(e);
            term["value"] = polynomial_terms_to_json(c);
            terms.push_back(std::move(term));
        }
        comps.push_back(std::move(terms));
    }
    return comps;
}

struct SeriesHeader {
    CoefficientDomain domain;
    TablePtr coeff_table;
    std::vector<Degree> degrees;
    std::int64_t order = 0;
};

inline SeriesHeader series_header_from_json(const json& j) {
    return SeriesHeader{domain_from_json(field(j, "domain")),
                        table_from_json(field(j, "coefficient_generators")),
                        degrees_from_json(field(j, "coordinate_degrees")),
                        int_field(j, "order")};
}

inline json series_header_to_json(const CoefficientDomain& domain, const GeneratorTable& table,
                                  const std::vector<Degree>& degrees, std::int64_t order) {
    json j;
    j["domain"] = domain_to_json(domain);
    j["coefficient_generators"] = table_to_json(table);
    json deg = json::array();
    for (Degree d : degrees)
        deg.push_back(d.value);
    j["coordinate_degrees"] = std::move(deg);
    j["order"] = order;
    return j;
}

}  // namespace detail

// Law file: header plus d components in the doubled variable block y1..yd,
// z1..zd, each component a list of {exponents, value} terms.
inline FormalGroupLaw fgl_from_json(const json& j) {
    detail::SeriesHeader h = detail::series_header_from_json(j);
    ContextPtr ctx =
        FormalGroupLaw::two_block_context(h.domain, h.coeff_table, h.degrees, h.order);
    SeriesFamily law =
        detail::components_from_json(field(j, "components"), ctx, h.degrees.size());
    return FormalGroupLaw(std::move(law), h.degrees);
}

inline json fgl_to_json(const FormalGroupLaw& f) {
    json j = detail::series_header_to_json(f.context()->domain, *f.context()->coeff_table,
                                           f.coordinate_degrees(), f.order());
    j["components"] = detail::components_to_json(f.law());
    return j;
}

// Coordinate change file: same header, components in the single variable
// block t1..td.
inline CoordinateChange change_from_json(const json& j) {
    detail::SeriesHeader h = detail::series_header_from_json(j);
    ContextPtr ctx = CoordinateChange::context_for(h.domain, h.coeff_table, h.degrees, h.order);
    SeriesFamily g = detail::components_from_json(field(j, "components"), ctx, h.degrees.size());
    return CoordinateChange(std::move(g), h.degrees);
}

inline json change_to_json(const CoordinateChange& g) {
    const ContextPtr& ctx = g.series().context();
    json j = detail::series_header_to_json(ctx->domain, *ctx->coeff_table,
                                           g.coordinate_degrees(), ctx->order);
    j["components"] = detail::components_to_json(g.series());
    return j;
}

// Plain series family sharing a law's shape, e.g. an inverse series. The
// variable names are recorded for the reader but implied by the block count.
inline json family_to_json(const SeriesFamily& fam, const std::vector<Degree>& degrees) {
    const ContextPtr& ctx = fam.context();
    json j = detail::series_header_to_json(ctx->domain, *ctx->coeff_table, degrees, ctx->order);
    json vars = json::array();
    for (const Generator& v : ctx->vars)
        vars.push_back(v.name);
    j["variables"] = std::move(vars);
    j["components"] = detail::components_to_json(fam);
    return j;
}

inline json fgl_report_to_json(const FGLReport& r) {
    json j;
    j["unit_ok"] = r.unit_ok;
    j["assoc_ok"] = r.assoc_ok;
    j["comm_ok"] = r.comm_ok;
    j["all_ok"] = r.all_ok();
    if (r.first_failure) {
        json f;
        f["axiom"] = r.first_failure->axiom;
        f["component"] = r.first_failure->component;
        f["exponents"] = json(r.first_failure->var_exponents);
        f["difference"] = polynomial_terms_to_json(r.first_failure->difference);
        f["description"] = r.first_failure->describe();
        j["first_failure"] = std::move(f);
    } else {
        j["first_failure"] = nullptr;
    }
    return j;
}

// ------------------------------------------------------- Steenrod objects --

inline json milnor_to_json(const MilnorBasisElement& m) {
    json tau = json::array();
    for (std::uint32_t i : m.tau)
        tau.push_back(i);
    json xi = json::object();
    for (const auto& [idx, exp] : m.xi)
        xi[std::to_string(idx)] = exp;
    json j;
    j["tau"] = std::move(tau);
    j["xi"] = std::move(xi);
    return j;
}

inline MilnorBasisElement milnor_from_json(const json& j) {
    MilnorBasisElement m;
    if (const json* tau = opt_field(j, "tau")) {
        if (!tau->is_array())
            throw ParseError("'tau' must be an array of indices");
        for (const json& v : *tau) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                throw ParseError("'tau' indices must be nonnegative integers");
            m.tau.push_back(static_cast<std::uint32_t>(v.get<std::int64_t>()));
        }
    }
    if (const json* xi = opt_field(j, "xi")) {
        if (!xi->is_object())
            throw ParseError("'xi' must map index strings to exponents");
        for (auto it = xi->begin(); it != xi->end(); ++it) {
            std::size_t pos = 0;
            unsigned long idx = 0;
            try {
                idx = std::stoul(it.key(), &pos);
            } catch (const std::exception&) {
                throw ParseError("'xi' key '" + it.key() + "' is not an index");
            }
            if (pos != it.key().size() || idx == 0)
                throw ParseError("'xi' key '" + it.key() + "' is not a positive index");
            if (!it.value().is_number_integer() || it.value().get<std::int64_t>() <= 0)
                throw ParseError("'xi' exponents must be positive integers");
            m.xi.emplace_back(static_cast<std::uint32_t>(idx),
                              static_cast<std::uint32_t>(it.value().get<std::int64_t>()));
        }
    }
    std::sort(m.tau.begin(), m.tau.end());
    std::sort(m.xi.begin(), m.xi.end());
    m.validate();
    return m;
}

inline json steenrod_to_json(const SteenrodElement& x) {
    json terms = json::array();
    for (const auto& [m, c] : x.terms()) {
        json t;
        t["basis"] = milnor_to_json(m);
        t["coefficient"] = c;
        terms.push_back(std::move(t));
    }
    json j;
    j["p"] = x.p();
    j["terms"] = std::move(terms);
    return j;
}

inline SteenrodElement steenrod_from_json(const json& j) {
    SteenrodElement x = SteenrodElement::zero(int_field(j, "p"));
    for (const json& t : array_field(j, "terms"))
        x.add_term(milnor_from_json(field(t, "basis")), int_field(t, "coefficient"));
    return x;
}

inline json tensor_to_json(const TensorElement& x) {
    json terms = json::array();
    for (const auto& [k, c] : x.terms()) {
        json t;
        t["left"] = milnor_to_json(k.first);
        t["right"] = milnor_to_json(k.second);
        t["coefficient"] = c;
        terms.push_back(std::move(t));
    }
    json j;
    j["p"] = x.p();
    j["terms"] = std::move(terms);
    return j;
}

inline json hopf_report_to_json(const HopfReport& r) {
    json j;
    j["p"] = r.p;
    j["max_degree"] = r.max_degree;
    j["elements_checked"] = r.elements_checked;
    j["pairs_checked"] = r.pairs_checked;
    j["violations"] = json(r.violations);
    j["ok"] = r.ok();
    return j;
}

inline std::string hopf_report_to_csv(const HopfReport& r) {
    std::string out = "p,max_degree,elements_checked,pairs_checked,violations,ok\n";
    out += std::to_string(r.p) + "," + std::to_string(r.max_degree) + "," +
           std::to_string(r.elements_checked) + "," + std::to_string(r.pairs_checked) + "," +
           std::to_string(r.violations.size()) + "," + (r.ok() ? "true" : "false") + "\n";
    return out;
}

inline std::string orientation_name(DualityOrientation o) {
    return o == DualityOrientation::RightOfPair ? "right" : "left";
}

inline DualityOrientation orientation_from_name(const std::string& s) {
    if (s == "right")
        return DualityOrientation::RightOfPair;
    if (s == "left")
        return DualityOrientation::LeftOfPair;
    throw ParseError("duality orientation must be 'right' or 'left', got '" + s + "'");
}

inline json duality_report_to_json(const DualityReport& r) {
    json lines = json::array();
    for (const DualityLine& l : r.lines) {
        json e;
        e["generator"] = l.generator;
        e["matched"] = l.matched;
        e["computed"] = l.computed;
        e["expected"] = l.expected;
        lines.push_back(std::move(e));
    }
    json j;
    j["p"] = r.p;
    j["jet_order"] = r.jet_order;
    j["orientation"] = orientation_name(r.orientation);
    j["lines"] = std::move(lines);
    j["ok"] = r.ok();
    return j;
}

inline std::string duality_report_to_csv(const DualityReport& r) {
    std::string out = "generator,matched\n";
    for (const DualityLine& l : r.lines)
        out += l.generator + "," + (l.matched ? "true" : "false") + "\n";
    return out;
}

inline std::string poincare_to_csv(const std::vector<PoincareRow>& rows) {
    std::string out = "degree,dimension\n";
    for (const PoincareRow& r : rows)
        out += std::to_string(r.degree) + "," + std::to_string(r.dimension) + "\n";
    return out;
}

inline json poincare_to_json(const std::vector<PoincareRow>& rows) {
    json arr = json::array();
    for (const PoincareRow& r : rows) {
        json e;
        e["degree"] = r.degree;
        e["dimension"] = r.dimension;
        arr.push_back(std::move(e));
    }
    json j;
    j["rows"] = std::move(arr);
    return j;
}

// ------------------------------------------------------- finite algebras --

inline GradedVectorSpace space_from_json(const json& j) {
    if (!j.is_array())
        throw ParseError("'basis' must be an array of {name, degree} entries");
    std::vector<BasisElement> basis;
    for (const json& e : j)
        basis.push_back({str_field(e, "name"), Degree{int_field(e, "degree")}});
    return GradedVectorSpace(std::move(basis));
}

inline json space_to_json(const GradedVectorSpace& s) {
    json arr = json::array();
    for (const BasisElement& b : s.basis()) {
        json e;
        e["name"] = b.name;
        e["degree"] = b.degree.value;
        arr.push_back(std::move(e));
    }
    return arr;
}

inline FpVec fpvec_from_json(const json& j, std::size_t dim, const std::string& what) {
    if (!j.is_array() || j.size() != dim)
        throw ParseError(what + " must be a coordinate array of length " + std::to_string(dim));
    FpVec v(static_cast<EIndex>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        if (!j[i].is_number_integer())
            throw ParseError(what + " entries must be integers");
        v(static_cast<EIndex>(i)) = j[i].get<std::int64_t>();
    }
    return v;
}

inline json fpvec_to_json(const FpVec& v) {
    json arr = json::array();
    for (EIndex i = 0; i < v.size(); ++i)
        arr.push_back(v(i));
    return arr;
}

// Constructions: field, split_product, truncated_polynomial, tensor, or an
// explicit structure-constant table tables[j][r][c] = coefficient of basis r
// in b_c * b_j.
inline FiniteGradedAlgebra finite_algebra_from_json(const json& j) {
    std::string kind = str_field(j, "construct");
    if (kind == "field")
        return FiniteGradedAlgebra::field(int_field(j, "p"));
    if (kind == "split_product")
        return FiniteGradedAlgebra::split_product(int_field(j, "p"), int_field(j, "factors"));
    if (kind == "truncated_polynomial")
        return FiniteGradedAlgebra::truncated_polynomial(int_field(j, "p"), str_field(j, "name"),
                                                         Degree{int_field(j, "degree")},
                                                         int_field(j, "power"));
    if (kind == "tensor")
        return FiniteGradedAlgebra::tensor(finite_algebra_from_json(field(j, "left")),
                                           finite_algebra_from_json(field(j, "right")));
    if (kind == "explicit") {
        std::int64_t p = int_field(j, "p");
        GradedVectorSpace space = space_from_json(field(j, "basis"));
        const std::size_t n = space.dim();
        FpVec unit = fpvec_from_json(field(j, "unit"), n, "'unit'");
        const json& tables = array_field(j, "tables");
        if (tables.size() != n)
            throw ParseError("'tables' must hold one matrix per basis vector");
        std::vector<FpMat> mats;
        for (const json& tj : tables) {
            if (!tj.is_array() || tj.size() != n)
                throw ParseError("each multiplication table must have one row per basis vector");
            FpMat m(static_cast<EIndex>(n), static_cast<EIndex>(n));
            for (std::size_t r = 0; r < n; ++r) {
                FpVec row = fpvec_from_json(tj[r], n, "table row");
                for (std::size_t c = 0; c < n; ++c)
                    m(static_cast<EIndex>(r), static_cast<EIndex>(c)) =
                        row(static_cast<EIndex>(c));
            }
            mats.push_back(std::move(m));
        }
        return FiniteGradedAlgebra(p, std::move(space), std::move(unit), std::move(mats));
    }
    throw ParseError("unknown finite algebra construction '" + kind + "'");
}

inline json finite_algebra_to_json(const FiniteGradedAlgebra& e) {
    const std::size_t n = e.dim();
    json tables = json::array();
    for (std::size_t jj = 0; jj < n; ++jj) {
        json mat = json::array();
        for (std::size_t r = 0; r < n; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < n; ++c)
                row.push_back(e.basis_product(static_cast<EIndex>(c),
                                              static_cast<EIndex>(jj))(static_cast<EIndex>(r)));
            mat.push_back(std::move(row));
        }
        tables.push_back(std::move(mat));
    }
    json j;
    j["construct"] = "explicit";
    j["p"] = e.p();
    j["basis"] = space_to_json(e.space());
    j["unit"] = fpvec_to_json(e.unit());
    j["tables"] = std::move(tables);
    return j;
}

inline FiniteSystem finite_system_from_json(const json& j) {
    FiniteGradedAlgebra e = finite_algebra_from_json(field(j, "algebra"));
    const std::size_t n = e.dim();
    std::vector<std::vector<FpVec>> coeffs;
    for (const json& row : array_field(j, "coeffs")) {
        if (!row.is_array())
            throw ParseError("'coeffs' rows must be arrays");
        std::vector<FpVec> out;
        for (const json& entry : row)
            out.push_back(fpvec_from_json(entry, n, "coefficient"));
        coeffs.push_back(std::move(out));
    }
    std::vector<FpVec> rhs;
    for (const json& entry : array_field(j, "rhs"))
        rhs.push_back(fpvec_from_json(entry, n, "right-hand side"));
    std::vector<FpVec> base;
    if (const json* b = opt_field(j, "base"))
        for (const json& entry : *b)
            base.push_back(fpvec_from_json(entry, n, "base vector"));
    return FiniteSystem(std::move(e), std::move(coeffs), std::move(rhs), std::move(base));
}

// ------------------------------------------------------ flatness witness --

struct PolyWitnessFile {
    PolySystem system;
    FlatnessWitness witness;
};

// {domain, generators, unknowns?, coeffs, rhs, y, b, z}; polynomial values may
// use the compact terms form.
inline PolyWitnessFile poly_witness_from_json(const json& j) {
    CoefficientDomain domain = domain_from_json(field(j, "domain"));
    TablePtr table = table_from_json(field(j, "generators"));
    auto poly = [&](const json& v) { return polynomial_from_json(v, domain, table); };
    auto poly_row = [&](const json& row, const char* what) {
        if (!row.is_array())
            throw ParseError(std::string(what) + " must be an array");
        std::vector<GradedPolynomial> out;
        for (const json& v : row)
            out.push_back(poly(v));
        return out;
    };
    std::vector<std::vector<GradedPolynomial>> coeffs;
    for (const json& row : array_field(j, "coeffs"))
        coeffs.push_back(poly_row(row, "'coeffs' row"));
    std::vector<GradedPolynomial> rhs = poly_row(array_field(j, "rhs"), "'rhs'");
    std::optional<std::size_t> unknowns;
    if (opt_field(j, "unknowns")) {
        std::int64_t u = int_field(j, "unknowns");
        if (u < 0)
            throw ParseError("'unknowns' must be nonnegative");
        unknowns = static_cast<std::size_t>(u);
    }
    PolySystem sys(domain, table, std::move(coeffs), std::move(rhs), unknowns);
    FlatnessWitness w;
    w.y = poly_row(array_field(j, "y"), "'y'");
    w.b = poly_row(array_field(j, "b"), "'b'");
    for (const json& row : array_field(j, "z"))
        w.z.push_back(poly_row(row, "'z' row"));
    return PolyWitnessFile{std::move(sys), std::move(w)};
}

inline json flatness_report_to_json(const FlatnessReport& r) {
    json j;
    j["ok"] = r.ok;
    j["failed_condition"] = r.failed_condition;
    j["detail"] = r.detail;
    return j;
}

// ------------------------------------------------------------- comodules --

// {p, basis, coaction}; coaction[j] lists {op, coefficient, target} with the
// target named or indexed.
inline HopfComoduleSpec comodule_from_json(const json& j) {
    std::int64_t p = int_field(j, "p");
    GradedVectorSpace space = space_from_json(field(j, "basis"));
    std::map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < space.dim(); ++i) {
        if (!by_name.emplace(space[i].name, i).second)
            throw ParseError("duplicate comodule basis name '" + space[i].name + "'");
    }
    const json& rows = array_field(j, "coaction");
    if (rows.size() != space.dim())
        throw ParseError("'coaction' must hold one row per basis vector");
    std::vector<std::vector<HopfComoduleSpec::CoactionTerm>> coaction;
    for (const json& row : rows) {
        if (!row.is_array())
            throw ParseError("'coaction' rows must be arrays");
        std::vector<HopfComoduleSpec::CoactionTerm> terms;
        for (const json& t : row) {
            HopfComoduleSpec::CoactionTerm term;
            term.op = milnor_from_json(field(t, "op"));
            term.coeff = int_field(t, "coefficient");
            const json& target = field(t, "target");
            if (target.is_string()) {
                auto it = by_name.find(target.get<std::string>());
                if (it == by_name.end())
                    throw ParseError("unknown coaction target '" + target.get<std::string>() +
                                     "'");
                term.target = it->second;
            } else if (target.is_number_integer() && target.get<std::int64_t>() >= 0) {
                term.target = static_cast<std::size_t>(target.get<std::int64_t>());
            } else {
                throw ParseError("coaction target must be a basis name or index");
            }
            terms.push_back(std::move(term));
        }
        coaction.push_back(std::move(terms));
    }
    return HopfComoduleSpec(p, std::move(space), std::move(coaction));
}

// -------------------------------------------------------- tables, charts --

inline std::string e2_to_csv(const E2Page& page) {
    E2Page copy = page;
    copy.sort();
    std::string out = "s,t,stem,dimension\n";
    for (const E2Entry& e : copy.entries())
        out += std::to_string(e.s) + "," + std::to_string(e.t) + "," + std::to_string(e.stem()) +
               "," + std::to_string(e.dim) + "\n";
    return out;
}

inline json e2_to_json(const E2Page& page) {
    E2Page copy = page;
    copy.sort();
    json entries = json::array();
    for (const E2Entry& e : copy.entries()) {
        json row;
        row["s"] = e.s;
        row["t"] = e.t;
        row["stem"] = e.stem();
        row["dimension"] = e.dim;
        json tor = json::array();
        for (const Integer& v : e.torsion)
            tor.push_back(integer_to_json(v));
        row["torsion"] = std::move(tor);
        entries.push_back(std::move(row));
    }
    json meta = json::object();
    for (const auto& [k, v] : page.metadata)
        meta[k] = v;
    json j;
    j["metadata"] = std::move(meta);
    j["entries"] = std::move(entries);
    return j;
}

namespace detail {

inline std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace detail

// Aligned chart, stem along the bottom, filtration up the side.
inline std::string e2_to_text(const E2Page& page) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> dims;
    std::int64_t max_stem = 0, max_s = 0;
    for (const E2Entry& e : page.entries()) {
        if (e.dim == 0 || e.stem() < 0)
            continue;
        dims[{e.s, e.stem()}] += e.dim;
        max_stem = std::max(max_stem, e.stem());
        max_s = std::max(max_s, e.s);
    }
    if (dims.empty())
        return "(no classes)\n";
    std::size_t cell = std::to_string(max_stem).size();
    for (const auto& [k, v] : dims)
        cell = std::max(cell, std::to_string(v).size());
    const std::size_t label = std::to_string(max_s).size();
    std::string out;
    for (std::int64_t s = max_s; s >= 0; --s) {
        out += detail::pad_left(std::to_string(s), label) + " |";
        for (std::int64_t n = 0; n <= max_stem; ++n) {
            auto it = dims.find({s, n});
            out += " " + detail::pad_left(it == dims.end() ? "." : std::to_string(it->second),
                                          cell);
        }
        out += "\n";
    }
    out += std::string(label, ' ') + " +" +
           std::string((cell + 1) * static_cast<std::size_t>(max_stem + 1), '-') + "\n";
    out += std::string(label, ' ') + "  ";
    for (std::int64_t n = 0; n <= max_stem; ++n)
        out += " " + detail::pad_left(std::to_string(n), cell);
    return out + "\n";
}

inline std::string lazard_to_csv(const std::vector<LazardRankRow>& rows) {
    std::string out = "degree,rank,torsion\n";
    for (const LazardRankRow& r : rows) {
        std::string tor;
        for (std::size_t i = 0; i < r.torsion.size(); ++i)
            tor += (i ? ";" : "") + r.torsion[i].get_str();
        out += std::to_string(r.degree) + "," + std::to_string(r.rank) + "," + tor + "\n";
    }
    return out;
}

inline json lazard_to_json(const std::vector<LazardRankRow>& rows) {
    json arr = json::array();
    for (const LazardRankRow& r : rows) {
        json e;
        e["degree"] = r.degree;
        e["rank"] = r.rank;
        json tor = json::array();
        for (const Integer& v : r.torsion)
            tor.push_back(integer_to_json(v));
        e["torsion"] = std::move(tor);
        arr.push_back(std::move(e));
    }
    json j;
    j["rows"] = std::move(arr);
    return j;
}

// --------------------------------------------------------- jobs, config --

struct JobSpec {
    std::string command;
    json params = json::object();
    std::map<std::string, std::string> input_paths;
    std::string output_path;
};

inline const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds = {
        "fgl-check",       "fgl-invert",       "fgl-act",          "lazard-ranks",
        "steenrod-psi",    "steenrod-poincare", "steenrod-verify", "steenrod-duality",
        "amitsur-e2",      "adams-e2",         "flatness-witness"};
    return cmds;
}

inline JobSpec job_from_json(const json& j) {
    JobSpec job;
    job.command = str_field(j, "command");
    const auto& cmds = known_commands();
    if (std::find(cmds.begin(), cmds.end(), job.command) == cmds.end()) {
        std::string list;
        for (const std::string& c : cmds)
            list += (list.empty() ? "" : ", ") + c;
        throw ParseError("unknown command '" + job.command + "' (expected one of: " + list + ")");
    }
    if (const json* p = opt_field(j, "params")) {
        if (!p->is_object())
            throw ParseError("'params' must be an object");
        job.params = *p;
    }
    if (const json* ip = opt_field(j, "input_paths")) {
        if (!ip->is_object())
            throw ParseError("'input_paths' must map roles to paths");
        for (auto it = ip->begin(); it != ip->end(); ++it) {
            if (!it.value().is_string())
                throw ParseError("input path for role '" + it.key() + "' must be a string");
            job.input_paths[it.key()] = it.value().get<std::string>();
        }
    }
    if (const json* op = opt_field(j, "output_path")) {
        if (!op->is_string())
            throw ParseError("'output_path' must be a string");
        job.output_path = op->get<std::string>();
    }
    return job;
}

struct Config {
    std::int64_t lazard_degree_bound = 16;
    std::size_t cobar_basis_cap = 500000;
    std::size_t amitsur_dim_cap = 200000;
    std::string duality_orientation = "right";
    unsigned threads = 0;  // 0 picks the hardware width
};

inline Config config_from_json(const json& j) {
    if (!j.is_object())
        throw ParseError("config must be a JSON object");
    Config c;
    auto positive = [](std::int64_t v, const char* key) {
        if (v <= 0)
            throw ParseError(std::string("config key '") + key + "' must be positive");
        return v;
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "lazard_degree_bound")
            c.lazard_degree_bound = positive(int_field(j, k), "lazard_degree_bound");
        else if (k == "cobar_basis_cap")
            c.cobar_basis_cap = static_cast<std::size_t>(positive(int_field(j, k), "cobar_basis_cap"));
        else if (k == "amitsur_dim_cap")
            c.amitsur_dim_cap = static_cast<std::size_t>(positive(int_field(j, k), "amitsur_dim_cap"));
        else if (k == "duality_orientation")
            c.duality_orientation = orientation_name(orientation_from_name(str_field(j, k)));
        else if (k == "threads") {
            std::int64_t v = int_field(j, k);
            if (v < 0)
                throw ParseError("config key 'threads' must be nonnegative");
            c.threads = static_cast<unsigned>(v);
        } else {
            throw ParseError("unknown config key '" + k + "'");
        }
    }
    return c;
}

// Report envelope printed to stdout; the only place timing appears.
inline json make_report(const std::string& command, const std::string& status, json payload,
                        double seconds) {
    json j;
    j["command"] = command;
    j["status"] = status;
    j["payload"] = std::move(payload);
    j["timing_seconds"] = seconds;
    return j;
}

}  // namespace dirac::io
