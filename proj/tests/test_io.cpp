#include "doctest.h"

#include <filesystem>
#include <string>

#include "dirac/io.hpp"

using namespace dirac;
using dirac::io::json;
using doctest::Contains;

TEST_CASE("integers survive the json round trip including beyond 64 bits") {
    CHECK(io::integer_to_json(Integer(7)) == json(7));
    CHECK(io::integer_to_json(Integer(-3)) == json(-3));

    Integer big("1208925819614629174706176");  // 2^80
    json jb = io::integer_to_json(big);
    REQUIRE(jb.is_string());
    CHECK(jb.get<std::string>() == "1208925819614629174706176");
    CHECK(io::integer_from_json(jb, "value") == big);

    CHECK(io::integer_from_json(json(-42), "value") == Integer(-42));
    CHECK(io::integer_from_json(json("-17"), "value") == Integer(-17));
    CHECK_THROWS_WITH_AS(io::integer_from_json(json("12zb"), "value"),
                         Contains("not a decimal integer"), ParseError);
    CHECK_THROWS_WITH_AS(io::integer_from_json(json(1.5), "value"),
                         Contains("integer or a decimal string"), ParseError);
}

TEST_CASE("polynomials round trip with named exponents") {
    CoefficientDomain Z = CoefficientDomain::integers();
    TablePtr tab = make_table({{"x", Degree{2}}, {"y", Degree{3}}});
    GradedPolynomial q(Z, tab);
    q.add_term({0, 0}, Integer(5));
    q.add_term({2, 1}, Integer(-3));
    q.add_term({1, 0}, Integer("1208925819614629174706176"));

    json j = io::polynomial_to_json(q);
    CHECK(io::polynomial_from_json(j, Z, tab) == q);
    CHECK(io::polynomial_from_json(j["terms"], Z, tab) == q);

    bool saw_mixed = false;
    for (const json& t : j["terms"])
        if (t["coefficient"] == json(-3)) {
            CHECK(t["exponents"] == json({{"x", 2}, {"y", 1}}));
            saw_mixed = true;
        }
    CHECK(saw_mixed);

    json wrong_domain = j;
    wrong_domain["domain"] = io::domain_to_json(CoefficientDomain::prime_field(3));
    CHECK_THROWS_WITH_AS(io::polynomial_from_json(wrong_domain, Z, tab), Contains("disagrees"),
                         ParseError);

    json alien = json::parse(R"([{"exponents": {"w": 1}, "coefficient": 1}])");
    CHECK_THROWS_WITH_AS(io::polynomial_from_json(alien, Z, tab),
                         Contains("unknown generator 'w'"), ParseError);

    json negative = json::parse(R"([{"exponents": {"x": -1}, "coefficient": 1}])");
    CHECK_THROWS_WITH_AS(io::polynomial_from_json(negative, Z, tab), Contains("out of range"),
                         ParseError);

    json no_coeff = json::parse(R"([{"exponents": {"x": 1}}])");
    CHECK_THROWS_WITH_AS(io::polynomial_from_json(no_coeff, Z, tab),
                         Contains("missing field 'coefficient'"), ParseError);
}

TEST_CASE("milnor basis elements parse in any key order and validate") {
    MilnorBasisElement m;
    m.tau = {0, 2};
    m.xi = {{1, 3}, {4, 2}};
    json j = io::milnor_to_json(m);
    CHECK(j["tau"] == json::array({0, 2}));
    CHECK(j["xi"]["1"] == 3);
    CHECK(j["xi"]["4"] == 2);
    CHECK(io::milnor_from_json(j) == m);

    CHECK(io::milnor_from_json(json::parse(R"({"tau": [2, 0], "xi": {"4": 2, "1": 3}})")) == m);
    CHECK(io::milnor_from_json(json::object()) == MilnorBasisElement{});

    CHECK_THROWS_AS(io::milnor_from_json(json::parse(R"({"tau": [1, 1]})")), DomainError);
    CHECK_THROWS_WITH_AS(io::milnor_from_json(json::parse(R"({"tau": [-1]})")),
                         Contains("nonnegative"), ParseError);
    CHECK_THROWS_WITH_AS(io::milnor_from_json(json::parse(R"({"xi": {"zero": 1}})")),
                         Contains("not an index"), ParseError);
    CHECK_THROWS_WITH_AS(io::milnor_from_json(json::parse(R"({"xi": {"0": 1}})")),
                         Contains("not a positive index"), ParseError);
    CHECK_THROWS_WITH_AS(io::milnor_from_json(json::parse(R"({"xi": {"1": 0}})")),
                         Contains("must be positive"), ParseError);
}

TEST_CASE("steenrod elements and tensors serialize termwise") {
    MilnorBasisElement t0;
    t0.tau = {0};
    MilnorBasisElement x1;
    x1.xi = {{1, 1}};

    SteenrodElement x = SteenrodElement::zero(3);
    x.add_term(t0, 1);
    x.add_term(x1, 2);
    json j = io::steenrod_to_json(x);
    CHECK(j["p"] == 3);
    CHECK(j["terms"].size() == 2);
    CHECK(io::steenrod_from_json(j) == x);

    json tj = io::tensor_to_json(psi(3, t0));
    CHECK(tj["p"] == 3);
    CHECK(tj["terms"].size() == 2);
}

TEST_CASE("formal group laws and coordinate changes round trip as files") {
    CoefficientDomain Z = CoefficientDomain::integers();
    TablePtr coeffs = make_table({{"u", Degree{-2}}});
    GradedPolynomial u = GradedPolynomial::generator(Z, coeffs, 0);
    ContextPtr ctx = FormalGroupLaw::two_block_context(Z, coeffs, {Degree{2}}, 8);
    TruncatedSeries f = TruncatedSeries::variable(ctx, 0) + TruncatedSeries::variable(ctx, 1);
    f.add_term({1, 1}, u);
    FormalGroupLaw mult(SeriesFamily(ctx, {f}), {Degree{2}});

    json j = io::fgl_to_json(mult);
    CHECK(j["order"] == 8);
    CHECK(j["coordinate_degrees"] == json::array({2}));
    CHECK(io::fgl_to_json(io::fgl_from_json(j)) == j);

    CoefficientDomain F3 = CoefficientDomain::prime_field(3);
    TablePtr none = make_table({});
    ContextPtr tctx = CoordinateChange::context_for(F3, none, {Degree{2}}, 8);
    TruncatedSeries g(tctx);
    g.add_term({1}, GradedPolynomial::one(F3, none));
    g.add_term({2}, GradedPolynomial::constant(F3, none, Integer(2)));
    CoordinateChange ch(SeriesFamily(tctx, {g}), {Degree{2}});
    json cj = io::change_to_json(ch);
    CHECK(io::change_to_json(io::change_from_json(cj)) == cj);

    json fam = io::family_to_json(mult.law(), mult.coordinate_degrees());
    CHECK(fam["variables"] == json::array({"y1", "z1"}));

    json headless = j;
    headless.erase("coordinate_degrees");
    CHECK_THROWS_WITH_AS(io::fgl_from_json(headless),
                         Contains("missing field 'coordinate_degrees'"), ParseError);

    json short_components = j;
    short_components["components"] = json::array();
    CHECK_THROWS_WITH_AS(io::fgl_from_json(short_components),
                         Contains("'components' must be an array of 1"), ParseError);
}

TEST_CASE("axiom reports serialize their witness") {
    CoefficientDomain Z = CoefficientDomain::integers();
    FormalGroupLaw add = FormalGroupLaw::additive(Z, nullptr, {Degree{2}}, 8);
    json ok = io::fgl_report_to_json(check_axioms(add));
    CHECK(ok["all_ok"] == true);
    CHECK(ok["first_failure"].is_null());

    TablePtr none = make_table({});
    ContextPtr ctx = FormalGroupLaw::two_block_context(Z, none, {Degree{2}}, 8);
    TruncatedSeries f = TruncatedSeries::variable(ctx, 0) + TruncatedSeries::variable(ctx, 1);
    f.add_term({1, 2}, GradedPolynomial::one(Z, none));
    FormalGroupLaw broken(SeriesFamily(ctx, {f}), {Degree{2}});
    json bad = io::fgl_report_to_json(check_axioms(broken));
    CHECK(bad["all_ok"] == false);
    REQUIRE(bad["first_failure"].is_object());
    CHECK(bad["first_failure"]["axiom"].is_string());
    CHECK(bad["first_failure"]["description"].is_string());
    CHECK(bad["first_failure"]["difference"].is_array());
}

TEST_CASE("chart emitters print sorted deterministic tables") {
    E2Page page;
    page.add({2, 9, 1, {}});
    page.add({0, 0, 1, {}});
    CHECK(io::e2_to_csv(page) == "s,t,stem,dimension\n0,0,0,1\n2,9,7,1\n");
    CHECK(io::e2_to_csv(E2Page{}) == "s,t,stem,dimension\n");

    page.metadata["p"] = "3";
    json ej = io::e2_to_json(page);
    CHECK(ej["metadata"]["p"] == "3");
    REQUIRE(ej["entries"].size() == 2);
    CHECK(ej["entries"][0]["s"] == 0);
    CHECK(ej["entries"][1]["stem"] == 7);
    CHECK(ej["entries"][1]["torsion"] == json::array());

    E2Page chart;
    chart.add({0, 0, 1, {}});
    chart.add({1, 1, 1, {}});
    chart.add({1, 4, 2, {}});
    chart.add({2, 9, 1, {}});
    chart.add({3, 1, 1, {}});  // negative stem, stays off the picture
    chart.add({0, 2, 0, {}});  // zero-dimensional, likewise
    std::string expected =
        "2 | . . . . . . . 1\n"
        "1 | 1 . . 2 . . . .\n"
        "0 | 1 . . . . . . .\n"
        "  +----------------\n"
        "    0 1 2 3 4 5 6 7\n";
    CHECK(io::e2_to_text(chart) == expected);
    CHECK(io::e2_to_text(E2Page{}) == "(no classes)\n");
}

TEST_CASE("table emitters for ranks and verification reports") {
    std::vector<LazardRankRow> rows = {{2, 1, {}}, {4, 2, {Integer(2), Integer(4)}}};
    CHECK(io::lazard_to_csv(rows) == "degree,rank,torsion\n2,1,\n4,2,2;4\n");
    json lj = io::lazard_to_json(rows);
    REQUIRE(lj["rows"].size() == 2);
    CHECK(lj["rows"][1]["torsion"] == json::array({2, 4}));

    HopfReport hr{3, 10, 5, 7, {}};
    CHECK(io::hopf_report_to_csv(hr) ==
          "p,max_degree,elements_checked,pairs_checked,violations,ok\n3,10,5,7,0,true\n");
    hr.violations.push_back("example");
    CHECK(io::hopf_report_to_csv(hr) ==
          "p,max_degree,elements_checked,pairs_checked,violations,ok\n3,10,5,7,1,false\n");
    CHECK(io::hopf_report_to_json(hr)["ok"] == false);

    CHECK(io::poincare_to_csv({{0, 1}, {5, 2}}) == "degree,dimension\n0,1\n5,2\n");

    DualityReport dr{3, 1, DualityOrientation::RightOfPair,
                     {{"tau0", true, "a", "a"}, {"xi1", false, "u", "v"}}};
    CHECK(io::duality_report_to_csv(dr) == "generator,matched\ntau0,true\nxi1,false\n");
    json dj = io::duality_report_to_json(dr);
    CHECK(dj["orientation"] == "right");
    CHECK(dj["ok"] == false);
    CHECK(dj["lines"][1]["computed"] == "u");
}

TEST_CASE("orientation names map both ways") {
    CHECK(io::orientation_from_name("right") == DualityOrientation::RightOfPair);
    CHECK(io::orientation_from_name("left") == DualityOrientation::LeftOfPair);
    CHECK(io::orientation_name(io::orientation_from_name("left")) == "left");
    CHECK(io::orientation_name(io::orientation_from_name("right")) == "right");
    CHECK_THROWS_WITH_AS(io::orientation_from_name("up"), Contains("must be 'right' or 'left'"),
                         ParseError);
}

TEST_CASE("config parsing applies defaults and rejects junk") {
    io::Config def = io::config_from_json(json::object());
    CHECK(def.lazard_degree_bound == 16);
    CHECK(def.cobar_basis_cap == 500000);
    CHECK(def.amitsur_dim_cap == 200000);
    CHECK(def.duality_orientation == "right");
    CHECK(def.threads == 0);

    io::Config c = io::config_from_json(json::parse(
        R"({"lazard_degree_bound": 20, "cobar_basis_cap": 10,
            "amitsur_dim_cap": 5, "duality_orientation": "left", "threads": 4})"));
    CHECK(c.lazard_degree_bound == 20);
    CHECK(c.cobar_basis_cap == 10);
    CHECK(c.amitsur_dim_cap == 5);
    CHECK(c.duality_orientation == "left");
    CHECK(c.threads == 4);

    CHECK_THROWS_WITH_AS(io::config_from_json(json::parse(R"({"max_stems": 3})")),
                         Contains("unknown config key 'max_stems'"), ParseError);
    CHECK_THROWS_WITH_AS(io::config_from_json(json::parse(R"({"cobar_basis_cap": 0})")),
                         Contains("must be positive"), ParseError);
    CHECK_THROWS_WITH_AS(io::config_from_json(json::parse(R"({"threads": -1})")),
                         Contains("nonnegative"), ParseError);
    CHECK_THROWS_WITH_AS(io::config_from_json(json::parse(R"({"duality_orientation": "up"})")),
                         Contains("'right' or 'left'"), ParseError);
    CHECK_THROWS_WITH_AS(io::config_from_json(json::array()),
                         Contains("config must be a JSON object"), ParseError);
}

TEST_CASE("job files name a known command") {
    json good = json::parse(R"({"command": "adams-e2", "params": {"p": 3},
                                "input_paths": {"comodule": "m.json"},
                                "output_path": "out.json"})");
    io::JobSpec job = io::job_from_json(good);
    CHECK(job.command == "adams-e2");
    CHECK(job.params["p"] == 3);
    CHECK(job.input_paths.at("comodule") == "m.json");
    CHECK(job.output_path == "out.json");

    io::JobSpec bare = io::job_from_json(json::parse(R"({"command": "lazard-ranks"})"));
    CHECK(bare.params == json::object());
    CHECK(bare.input_paths.empty());
    CHECK(bare.output_path.empty());

    CHECK(io::known_commands().size() == 11);
    try {
        io::job_from_json(json::parse(R"({"command": "frobnicate"})"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("unknown command 'frobnicate'") != std::string::npos);
        for (const std::string& cmd : io::known_commands())
            CHECK(msg.find(cmd) != std::string::npos);
    }

    CHECK_THROWS_WITH_AS(io::job_from_json(json::parse(R"({"command": "fgl-check", "params": []})")),
                         Contains("'params' must be an object"), ParseError);
    CHECK_THROWS_WITH_AS(
        io::job_from_json(json::parse(R"({"command": "fgl-check", "input_paths": {"law": 3}})")),
        Contains("must be a string"), ParseError);
    CHECK_THROWS_WITH_AS(io::job_from_json(json::object()), Contains("missing field 'command'"),
                         ParseError);
}

TEST_CASE("report envelopes and dump are deterministic") {
    json payload = json::parse(R"({"rows": []})");
    json rep = io::make_report("lazard-ranks", "ok", payload, 0.25);
    CHECK(rep["command"] == "lazard-ranks");
    CHECK(rep["status"] == "ok");
    CHECK(rep["payload"] == payload);
    CHECK(rep["timing_seconds"] == 0.25);

    json j = json::parse(R"({"beta": 1, "alpha": [1, 2]})");
    CHECK(io::dump(j) == "{\n  \"alpha\": [\n    1,\n    2\n  ],\n  \"beta\": 1\n}\n");
    CHECK(io::dump(j) == io::dump(j));
}

TEST_CASE("text files round trip through the loader") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "dirac_io_roundtrip.json";
    io::write_text_file(tmp.string(), io::dump(json{{"k", 1}}));
    json back = io::load_json_file(tmp.string());
    CHECK(back["k"] == 1);
    fs::remove(tmp);

    CHECK_THROWS_WITH_AS(io::load_json_file("/nonexistent/definitely/missing.json"),
                         Contains("cannot open"), ParseError);
    CHECK_THROWS_WITH_AS(io::parse_json_text("{oops", "inline"),
                         Contains("inline: not valid JSON"), ParseError);
}

TEST_CASE("comodule files validate structure before construction") {
    json good = json::parse(R"({
      "p": 3,
      "basis": [{"name": "x", "degree": 0}, {"name": "y", "degree": 1}],
      "coaction": [
        [{"op": {"tau": [], "xi": {}}, "coefficient": 1, "target": "x"}],
        [{"op": {"tau": [], "xi": {}}, "coefficient": 1, "target": "y"},
         {"op": {"tau": [0], "xi": {}}, "coefficient": 1, "target": 0}]
      ]
    })");
    HopfComoduleSpec spec = io::comodule_from_json(good);
    CHECK(spec.p() == 3);
    CHECK(spec.space().dim() == 2);

    json dup = good;
    dup["basis"][1]["name"] = "x";
    CHECK_THROWS_WITH_AS(io::comodule_from_json(dup), Contains("duplicate comodule basis name"),
                         ParseError);

    json rows = good;
    rows["coaction"].erase(1);
    CHECK_THROWS_WITH_AS(io::comodule_from_json(rows), Contains("one row per basis vector"),
                         ParseError);

    json target = good;
    target["coaction"][1][0]["target"] = "w";
    CHECK_THROWS_WITH_AS(io::comodule_from_json(target), Contains("unknown coaction target 'w'"),
                         ParseError);

    json index = good;
    index["coaction"][1][1]["target"] = -1;
    CHECK_THROWS_WITH_AS(io::comodule_from_json(index), Contains("basis name or index"),
                         ParseError);
}

TEST_CASE("finite algebras parse from construction recipes") {
    CHECK(io::finite_algebra_from_json(json::parse(R"({"construct": "field", "p": 3})")).dim() ==
          1);
    CHECK(io::finite_algebra_from_json(
              json::parse(R"({"construct": "split_product", "p": 3, "factors": 2})"))
              .dim() == 2);
    FiniteGradedAlgebra tp = io::finite_algebra_from_json(json::parse(
        R"({"construct": "truncated_polynomial", "p": 3, "name": "x", "degree": 2, "power": 3})"));
    CHECK(tp.dim() == 3);
    CHECK(io::finite_algebra_from_json(json::parse(
                  R"({"construct": "tensor",
                      "left": {"construct": "field", "p": 3},
                      "right": {"construct": "truncated_polynomial",
                                "p": 3, "name": "x", "degree": 2, "power": 2}})"))
              .dim() == 2);

    json ex = io::finite_algebra_to_json(tp);
    CHECK(ex["construct"] == "explicit");
    FiniteGradedAlgebra back = io::finite_algebra_from_json(ex);
    CHECK(io::finite_algebra_to_json(back) == ex);

    CHECK_THROWS_WITH_AS(io::finite_algebra_from_json(json::parse(R"({"construct": "mystery"})")),
                         Contains("unknown finite algebra construction"), ParseError);

    json sys = json::parse(R"({"algebra": {"construct": "field", "p": 3},
                               "coeffs": [[[1]]], "rhs": [[1]], "base": [[1]]})");
    CHECK_NOTHROW(io::finite_system_from_json(sys));
    json ragged = json::parse(R"({"algebra": {"construct": "field", "p": 3},
                                  "coeffs": [[[1, 2]]], "rhs": [[1]]})");
    CHECK_THROWS_WITH_AS(io::finite_system_from_json(ragged), Contains("length 1"), ParseError);
}

TEST_CASE("witness files carry the system and the candidate together") {
    json wj = json::parse(R"({
      "domain": {"kind": "integers"},
      "generators": [{"name": "e", "degree": 1}],
      "coeffs": [[[{"exponents": {"e": 1}, "coefficient": 1}]]],
      "rhs": [[]],
      "y": [[{"exponents": {"e": 1}, "coefficient": 2}]],
      "b": [[{"exponents": {}, "coefficient": 1}]],
      "z": [[[{"exponents": {"e": 1}, "coefficient": 2}]]]
    })");
    io::PolyWitnessFile file = io::poly_witness_from_json(wj);
    CHECK(file.system.equations() == 1);
    CHECK(file.system.unknowns() == 1);
    CHECK(check_flatness_witness(file.system, file.witness).ok);

    // An empty system needs its unknown count spelled out.
    json empty = json::parse(R"({
      "domain": {"kind": "integers"},
      "generators": [{"name": "e", "degree": 1}],
      "coeffs": [], "rhs": [], "unknowns": 1,
      "y": [[]], "b": [], "z": []
    })");
    io::PolyWitnessFile trivial = io::poly_witness_from_json(empty);
    CHECK(trivial.system.equations() == 0);
    CHECK(trivial.system.unknowns() == 1);
    CHECK(check_flatness_witness(trivial.system, trivial.witness).ok);

    json negative = wj;
    negative["unknowns"] = -1;
    CHECK_THROWS_WITH_AS(io::poly_witness_from_json(negative), Contains("nonnegative"),
                         ParseError);

    json bad_rhs = wj;
    bad_rhs["rhs"] = 3;
    CHECK_THROWS_WITH_AS(io::poly_witness_from_json(bad_rhs),
                         Contains("field 'rhs' must be an array"), ParseError);
}

TEST_CASE("graded spaces round trip") {
    GradedVectorSpace sp(std::vector<BasisElement>{{"a", Degree{0}}, {"b", Degree{5}}});
    json sj = io::space_to_json(sp);
    REQUIRE(sj.size() == 2);
    GradedVectorSpace back = io::space_from_json(sj);
    CHECK(back.dim() == 2);
    CHECK(back[1].name == "b");
    CHECK(back[1].degree.value == 5);
    CHECK_THROWS_WITH_AS(io::space_from_json(json::object()), Contains("'basis' must be an array"),
                         ParseError);
}
