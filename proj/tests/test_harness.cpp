#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "kbt/harness.hpp"

using namespace kbt;

namespace {

ExperimentConfig config_from(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string csv_of(const std::vector<ExperimentRecord>& recs) {
    std::ostringstream os;
    write_csv(os, recs);
    return os.str();
}

}  // namespace

TEST_CASE("splitmix64 known stream") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);
    SplitMix64 rng2(1234567);
    CHECK(rng2.next() == 0x599ED017FB08FC85ULL);
}

TEST_CASE("expression evaluator") {
    CHECK(ExprParser::eval("p", 101, "n_rule") == 101.0);
    CHECK(ExprParser::eval("floor(p^0.9409*ln(p))", 47, "n_rule") ==
          Catch::Approx(144.0).margin(1e-9));
    CHECK(ExprParser::eval("3*p/4", 100, "m_rule") == 75.0);
    CHECK(ExprParser::eval("p-1", 47, "z_rule") == 46.0);
    CHECK(ExprParser::eval("sqrt(p) + 2^3", 49, "m_rule") == 15.0);
    CHECK(ExprParser::eval("ceil(p/2)", 7, "m_rule") == 4.0);
}

TEST_CASE("expression evaluator errors") {
    CHECK_THROWS_AS(ExprParser::eval("p +", 3, "n_rule"), ConfigError);
    CHECK_THROWS_AS(ExprParser::eval("banana(p)", 3, "n_rule"), ConfigError);
    CHECK_THROWS_AS(ExprParser::eval("q", 3, "n_rule"), ConfigError);
    try {
        ExprParser::eval("q", 3, "n_rule");
    } catch (const ConfigError& e) {
        CHECK(e.field_path == "n_rule");
    }
}

TEST_CASE("config parsing and validation") {
    auto cfg = config_from(
        "kind = thm2_ratio\n"
        "primes = 101,103\n"
        "slope = sqrt:2\n"
        "shift = 0\n"
        "n_rule = p\n"
        "xy_rule = random:3\n"
        "seed = 42\n");
    CHECK(cfg.kind == ExperimentKind::thm2_ratio);
    CHECK(cfg.primes == std::vector<u64>{101, 103});
    CHECK(cfg.seed == 42);

    CHECK_THROWS_AS(config_from("primes = 3\n"), ConfigError);  // no kind
    CHECK_THROWS_AS(config_from("kind = bogus\nprimes = 3\n"), ConfigError);
    CHECK_THROWS_AS(
        config_from("kind = thm2_ratio\nprimes = 4\nxy_rule = fixed:0,1\n"),
        ConfigError);  // 4 not prime
    CHECK_THROWS_AS(
        config_from("kind = thm2_ratio\nprimes = 3\nxy_rule = random:2\n"),
        ConfigError);  // randomized rule without seed
    CHECK_THROWS_AS(config_from("kind = thm2_ratio\nprimes = 3\nwat = 1\n"),
                    ConfigError);  // unknown key

    try {
        config_from("kind = thm2_ratio\nprimes = 3\nxy_rule = random:2\n");
    } catch (const ConfigError& e) {
        CHECK(e.field_path == "seed");
    }

    auto range = config_from("kind = moment_identity\nprimes = 3..13\n");
    CHECK(range.primes == std::vector<u64>{3, 5, 7, 11, 13});
}

TEST_CASE("empty prime list gives an empty grid") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::moment_identity;
    CHECK(run_grid(cfg).empty());
}

TEST_CASE("moment identity grid pins p = 3") {
    auto cfg = config_from("kind = moment_identity\nprimes = 3,5,7\n");
    auto recs = run_grid(cfg);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].number("sigma") == Catch::Approx(18.0).margin(1e-9));
    for (const auto& r : recs) {
        CHECK(r.number("rel_error") <= 1e-9);
        CHECK(r.number("bound_ok") == 1.0);
    }
}

TEST_CASE("thm2 grid cell composes the parts consistently") {
    auto cfg = config_from(
        "kind = thm2_ratio\n"
        "primes = 101\n"
        "slope = sqrt:2\n"
        "shift = 0\n"
        "n_rule = p\n"
        "xy_rule = fixed:0,1\n");
    auto recs = run_grid(cfg);
    REQUIRE(recs.size() == 1);
    const auto& r = recs[0];

    PrimeModulus p(101);
    auto K = beatty_kloosterman(p, Real::sqrt(2), Real::integer(0), 101, 0, 1);
    double D = beatty_discrepancy(Real::sqrt(2), Real::integer(0), 101).value;
    double bound = std::pow(101.0, 297.0 / 512.0) *
                       std::pow(101.0, 43.0 / 128.0) +
                   101.0 * D;
    CHECK(r.number("K_abs") == Catch::Approx(K.abs()).margin(1e-12));
    CHECK(r.number("D_alpha") == Catch::Approx(D).margin(1e-12));
    CHECK(r.number("bound") == Catch::Approx(bound).margin(1e-9));
    CHECK(r.number("ratio") ==
          Catch::Approx(K.abs() / bound).margin(1e-12));
    CHECK(r.number("hypothesis_ok") == 1.0);
}

TEST_CASE("grid output is deterministic and sorted") {
    const std::string text =
        "kind = thm2_ratio\n"
        "primes = 101..140\n"
        "slope = sqrt:2\n"
        "shift = 0\n"
        "n_rule = p\n"
        "xy_rule = random:2\n"
        "seed = 7\n";
    auto a = csv_of(run_grid(config_from(text)));
    auto b = csv_of(run_grid(config_from(text)));
    CHECK(a == b);

    auto recs = run_grid(config_from(text));
    long long prev_p = 0;
    for (const auto& r : recs) {
        long long pv = static_cast<long long>(r.number("p"));
        CHECK(pv >= prev_p);
        prev_p = pv;
    }

    auto other = csv_of(run_grid(config_from(
        "kind = thm2_ratio\nprimes = 101..140\nslope = sqrt:2\nshift = 0\n"
        "n_rule = p\nxy_rule = random:2\nseed = 8\n")));
    CHECK(a != other);
}

TEST_CASE("prop1 grid verifies the hoelder chain per record") {
    auto cfg = config_from(
        "kind = prop1_ratio\n"
        "primes = 11,13\n"
        "xy_rule = random:4\n"
        "w_rule = random:5\n"
        "seed = 99\n");
    auto recs = run_grid(cfg);
    REQUIRE(recs.size() == 8);
    for (const auto& r : recs) {
        CHECK(r.number("hoelder_ok") == 1.0);
        CHECK(std::isfinite(r.number("ratio")));
    }
}

TEST_CASE("figure1 emission pinned to the 47-point figure") {
    std::ostringstream os;
    std::size_t rows = emit_figure1(PrimeModulus(47), 46, Real::pi(),
                                    Real::e(), os);
    CHECK(rows == 46);
    std::string csv = os.str();
    CHECK(csv.rfind("m,m_tilde,in_beatty\r\n", 0) == 0);
    CHECK(csv.find("1,46,false\r\n") != std::string::npos);
    CHECK(csv.find("2,23,false\r\n") != std::string::npos);
    CHECK(csv.find("3,31,false\r\n") != std::string::npos);
    CHECK(csv.find("5,28,true\r\n") != std::string::npos);

    std::size_t filled = 0, pos = 0;
    while ((pos = csv.find(",true", pos)) != std::string::npos) {
        ++filled;
        pos += 5;
    }
    CHECK(filled == 14);

    std::ostringstream os5;
    CHECK(emit_figure1(PrimeModulus(5), 2, Real::sqrt(2), Real::integer(0),
                       os5) == 4);
    std::string csv5 = os5.str();
    CHECK(csv5.find("1,2,true") != std::string::npos);
    CHECK(csv5.find("2,1,true") != std::string::npos);
    CHECK(csv5.find("3,4,false") != std::string::npos);
    CHECK(csv5.find("4,3,true") != std::string::npos);

    CHECK_THROWS_AS(
        emit_figure1(PrimeModulus(5), 5, Real::sqrt(2), Real::integer(0), os5),
        ZeroResidue);
}

TEST_CASE("fit_exponent pinned cases") {
    std::vector<ExperimentRecord> recs(2);
    recs[0].put("x", 10.0);
    recs[0].put("y", 100.0);
    recs[1].put("x", 100.0);
    recs[1].put("y", 10000.0);
    auto fit = fit_exponent(recs, "x", "y");
    CHECK(fit.slope == Catch::Approx(2.0).margin(1e-12));
    CHECK(fit.residual == Catch::Approx(0.0).margin(1e-12));

    std::vector<ExperimentRecord> flat(3);
    for (int i = 0; i < 3; ++i) {
        flat[i].put("x", std::pow(10.0, i + 1));
        flat[i].put("y", 5.0);
    }
    CHECK(fit_exponent(flat, "x", "y").slope ==
          Catch::Approx(0.0).margin(1e-12));

    std::vector<ExperimentRecord> one(1);
    one[0].put("x", 1.0);
    one[0].put("y", 1.0);
    CHECK_THROWS_AS(fit_exponent(one, "x", "y"), DegenerateFit);

    std::vector<ExperimentRecord> same(2);
    for (int i = 0; i < 2; ++i) {
        same[i].put("x", 7.0);
        same[i].put("y", static_cast<double>(i + 1));
    }
    CHECK_THROWS_AS(fit_exponent(same, "x", "y"), DegenerateFit);

    std::vector<ExperimentRecord> neg(2);
    neg[0].put("x", -1.0);
    neg[0].put("y", 1.0);
    neg[1].put("x", 2.0);
    neg[1].put("y", 2.0);
    CHECK_THROWS_AS(fit_exponent(neg, "x", "y"), DegenerateFit);
}

TEST_CASE("csv quoting is RFC 4180") {
    std::vector<ExperimentRecord> recs(1);
    recs[0].put("plain", 3LL);
    recs[0].put("quoted", "cf:1,2");
    recs[0].put("tricky", "say \"hi\"");
    std::string csv = csv_of(recs);
    CHECK(csv ==
          "plain,quoted,tricky\r\n3,\"cf:1,2\",\"say \"\"hi\"\"\"\r\n");
}

TEST_CASE("floats round trip at 17 significant digits") {
    std::vector<ExperimentRecord> recs(1);
    double v = 0.1234567890123456789;
    recs[0].put("v", v);
    std::string csv = csv_of(recs);
    auto pos = csv.find("\r\n") + 2;
    double parsed = std::stod(csv.substr(pos));
    CHECK(parsed == v);
}

TEST_CASE("json emission carries the same fields") {
    std::vector<ExperimentRecord> recs(1);
    recs[0].put("p", 47LL);
    recs[0].put("value", 1.5);
    recs[0].put_bool("flag", true);
    std::ostringstream os;
    write_json(os, recs);
    auto j = nlohmann::json::parse(os.str());
    CHECK(j[0]["p"] == 47);
    CHECK(j[0]["value"] == 1.5);
    CHECK(j[0]["flag"] == true);
}

TEST_CASE("f_growth summary reports a sublinear exponent") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::f_growth;
    cfg.slope = "none";
    for (u64 n = 50; n <= 400; ++n)
        if (is_prime(n)) cfg.primes.push_back(n);
    auto recs = run_grid(cfg);
    auto fit = fit_exponent(recs, "p", "F_max");
    INFO("unrestricted F_max exponent " << fit.slope);
    CHECK(fit.slope < 1.0);
    CHECK(fit.slope > 0.2);
    auto j = summarize(cfg, recs);
    CHECK(j.contains("f_max_exponent"));
}
