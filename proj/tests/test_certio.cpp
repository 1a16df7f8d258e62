#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "shaforge/certio.hpp"

using namespace shaforge;
using namespace shaforge::certio;

namespace {

arith::KummerPair kp(long a, long b) {
    return {arith::SquareClass::of(a), arith::SquareClass::of(b)};
}

curve::Fixture fixture01() {
    return curve::load_fixture(SHAFORGE_FIXTURES, "r0-a");
}

// the full forged-group pipeline once; tamper matrices reuse the document
struct Produced {
    curve::Fixture fx;
    obstruction::ObstructionConstants k;
    construct::ForgedGroup group;
    json doc;
};

const Produced& produced() {
    static Produced p = [] {
        curve::Fixture fx = fixture01();
        obstruction::ObstructionConstants k = obstruction::fit_constants(
            fx.curve, fx.basis, fx.curve.discriminant_support());
        construct::ForgedGroup g = construct::forge_group(fx.curve, fx.basis, k, 1);
        json doc = forged_group_to_json(fx, k, g, RunStamp{});
        return Produced{std::move(fx), std::move(k), std::move(g), std::move(doc)};
    }();
    return p;
}

// a mutation must be rejected by some library error, never accepted
void expect_reject(json doc, const char* what) {
    curve::Fixture fx = fixture01();
    CAPTURE(what);
    CHECK_THROWS_AS(verify_certificate(doc, fx), Error);
}

}  // namespace

TEST_CASE("bounds round trip") {
    construct::Bounds b;
    b.prime_search = 123;
    b.d_search = 456;
    b.local_samples = 789;
    b.factor.trial_limit = 11;
    b.factor.rho_iters = 22;
    construct::Bounds r = bounds_from_json(bounds_to_json(b));
    CHECK(r.prime_search == 123);
    CHECK(r.d_search == 456);
    CHECK(r.local_samples == 789);
    CHECK(r.factor.trial_limit == 11);
    CHECK(r.factor.rho_iters == 22);
}

TEST_CASE("pairs round trip, including large entries") {
    for (auto p : {kp(1, 1), kp(-1, -2), kp(3927, 5)}) CHECK(pair_from_json(pair_to_json(p)) == p);
    arith::KummerPair big{arith::SquareClass::from_parts(-1, {mpz_class("1000000007")}),
                          arith::SquareClass::of(2)};
    CHECK(pair_from_json(pair_to_json(big)) == big);
    CHECK_THROWS_AS(pair_from_json(json::parse("[\"x\",\"2\"]")), ParseError);
    CHECK_THROWS_AS(pair_from_json(json::parse("[\"1\"]")), ParseError);
}

TEST_CASE("witnesses round trip and still verify") {
    localfield::DescentModel m =
        localfield::DescentModel::make(kp(-1, -1), 0, 1, -1);
    for (const auto& v : {localfield::Place::finite(2), localfield::Place::finite(3),
                          localfield::Place::infinity()}) {
        localfield::LocalWitness w;
        REQUIRE(localfield::local_points_exist(m, v, std::nullopt, &w));
        localfield::LocalWitness r = witness_from_json(witness_to_json(w));
        CHECK(r.v == w.v);
        CHECK(r.kind == w.kind);
        CHECK(localfield::verify_local_witness(m, r));
    }
}

TEST_CASE("documents dump deterministically with a trailing newline") {
    const Produced& p = produced();
    std::string text = dump(p.doc);
    REQUIRE(!text.empty());
    CHECK(text.back() == '\n');
    CHECK(parse_document(text) == p.doc);
    CHECK(dump(parse_document(text)) == text);
}

TEST_CASE("parse rejects malformed documents") {
    CHECK_THROWS_AS(parse_document("{]"), ParseError);
    CHECK_THROWS_AS(parse_document(""), ParseError);
    CHECK_THROWS_AS(parse_document("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse_document("42"), ParseError);
}

TEST_CASE("a fresh forged-group document verifies") {
    const Produced& p = produced();
    curve::Fixture fx = fixture01();
    verify_certificate(p.doc, fx);  // throws on failure
    CHECK(p.doc.at("kind") == "forged-group");
    CHECK(p.doc.at("schema_version") == 1);
}

TEST_CASE("single-field tampering of a forged-group document is rejected") {
    json doc = produced().doc;

    {
        json t = doc;
        t["schema_version"] = 2;
        expect_reject(t, "schema version");
    }
    {
        json t = doc;
        t["fixture_id"] = "r0-b";
        expect_reject(t, "fixture id");
    }
    {
        json t = doc;
        t["curve"]["e2"] = "3";
        expect_reject(t, "curve root");
    }
    {
        json t = doc;
        t["constants"]["c1"] = "1";
        expect_reject(t, "primary constant");
    }
    {
        json t = doc;
        t["constants"]["survivors"].erase(0);
        expect_reject(t, "survivor dropped");
    }
    {
        json t = doc;
        std::string g = t["generators"][0][0].get<std::string>();
        t["generators"][0][0] = g + "1";
        expect_reject(t, "generator digit");
    }
    {
        json t = doc;
        t["span"][0]["certificate"]["verdict"] = "index-2";
        expect_reject(t, "verdict");
    }
    {
        json t = doc;
        t["span"][0]["certificate"]["consistent"] = false;
        expect_reject(t, "consistency flag");
    }
    {
        json t = doc;
        auto& support = t["span"][0]["certificate"]["lifts"][0]["support"];
        REQUIRE(!support.empty());
        support.erase(0);  // odd cardinality: reciprocity violation
        expect_reject(t, "lift support parity");
    }
    {
        json t = doc;
        t["span"][0]["element"][0] = "15";
        expect_reject(t, "span element");
    }
}

TEST_CASE("a fresh growth document verifies and resists tampering") {
    curve::Fixture fx = fixture01();
    obstruction::ObstructionConstants k =
        obstruction::fit_constants(fx.curve, fx.basis, fx.curve.discriminant_support());
    construct::ShaCertificateData data = construct::grow_sha(fx.curve, fx.basis, k, 1);
    json doc = sha_to_json(fx, k, data, RunStamp{});
    verify_certificate(doc, fixture01());
    CHECK(doc.at("kind") == "sha-growth");
    CHECK(doc.at("d") == "19635");

    {
        json t = doc;
        t["d"] = "19637";
        expect_reject(t, "extension d");
    }
    {
        json t = doc;
        t["classes"][0]["sigma"].erase(0);
        expect_reject(t, "sigma place dropped");
    }
    {
        json t = doc;
        t["classes"][0]["pair"][0] = "3926";
        expect_reject(t, "class pair");
    }
    {
        json t = doc;
        json& root = t["classes"][0]["witnesses"][1]["cert_f"]["root"];
        if (root.is_array() && root.size() == 2) {
            mpz_class bent = mpz_class(root[0].get<std::string>()) + 1;
            root[0] = bent.get_str();
        }
        expect_reject(t, "witness root");
    }
    {
        json t = doc;
        t["r"] = 2;
        expect_reject(t, "rank field");
    }
    {
        json t = doc;
        t["classes"][0]["witnesses"][0]["ext"] = "19633";
        expect_reject(t, "witness extension");
    }
}
