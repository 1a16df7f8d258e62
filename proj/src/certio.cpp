#include "shaforge/certio.hpp"

#include <algorithm>

namespace shaforge::certio {

namespace {

using arith::KummerPair;
using arith::SquareClass;
using brauer::BrauerClass2;
using localfield::EltData;
using localfield::LocalWitness;
using localfield::Place;
using localfield::SqrtCert;

constexpr int kSchemaVersion = 1;

mpz_class to_mpz(const json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + ": expected a decimal string");
    try {
        return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument&) {
        throw ParseError(std::string(what) + ": bad integer '" + j.get<std::string>() + "'");
    }
}

SquareClass to_sqclass(const json& j, const char* what) {
    return SquareClass::of(to_mpz(j, what));
}

json elt_to_json(const EltData& e) { return json::array({e.a.get_str(), e.b.get_str()}); }

EltData elt_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("field element: expected [a, b]");
    return EltData{to_mpz(j[0], "elt.a"), to_mpz(j[1], "elt.b")};
}

json place_to_json(const Place& v) { return v.str(); }

Place place_from_json(const json& j) {
    if (!j.is_string()) throw ParseError("place: expected a string");
    return localfield::parse_place(j.get<std::string>());
}

json places_to_json(const std::vector<Place>& ps) {
    json out = json::array();
    for (const Place& v : ps) out.push_back(place_to_json(v));
    return out;
}

std::vector<Place> places_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of places");
    std::vector<Place> out;
    for (const json& e : j) out.push_back(place_from_json(e));
    return out;
}

const char* witness_kind_str(LocalWitness::Kind k) {
    switch (k) {
        case LocalWitness::Kind::RealInfinity:
            return "real-infinity";
        case LocalWitness::Kind::RealT0:
            return "real-t0";
        case LocalWitness::Kind::RealRootF:
            return "real-root-f";
        case LocalWitness::Kind::RealRootG:
            return "real-root-g";
        case LocalWitness::Kind::Complex:
            return "complex";
        case LocalWitness::Kind::RootF:
            return "root-f";
        case LocalWitness::Kind::RootG:
            return "root-g";
        case LocalWitness::Kind::Branch:
            return "branch";
    }
    return "?";
}

LocalWitness::Kind witness_kind_from(const std::string& s) {
    for (auto k : {LocalWitness::Kind::RealInfinity, LocalWitness::Kind::RealT0,
                   LocalWitness::Kind::RealRootF, LocalWitness::Kind::RealRootG,
                   LocalWitness::Kind::Complex, LocalWitness::Kind::RootF,
                   LocalWitness::Kind::RootG, LocalWitness::Kind::Branch})
        if (s == witness_kind_str(k)) return k;
    throw ParseError("unknown witness kind '" + s + "'");
}

bool witness_has_certs(LocalWitness::Kind k) {
    return k == LocalWitness::Kind::RootF || k == LocalWitness::Kind::RootG ||
           k == LocalWitness::Kind::Branch;
}

json sqrtcert_to_json(const SqrtCert& c) {
    json out;
    out["value"] = elt_to_json(c.value);
    out["root"] = elt_to_json(c.root);
    out["scale"] = c.scale.get_str();
    out["prec"] = c.prec;
    return out;
}

SqrtCert sqrtcert_from_json(const json& j) {
    SqrtCert c;
    c.value = elt_from_json(j.at("value"));
    c.root = elt_from_json(j.at("root"));
    c.scale = to_mpz(j.at("scale"), "cert.scale");
    if (!j.at("prec").is_number_integer()) throw ParseError("cert.prec: expected an integer");
    c.prec = j.at("prec").get<long>();
    return c;
}

json support_to_json(const BrauerClass2& b) { return places_to_json(b.places()); }

}  // namespace

json bounds_to_json(const construct::Bounds& b) {
    json out;
    out["prime-search"] = b.prime_search;
    out["d-search"] = b.d_search;
    out["local-samples"] = b.local_samples;
    out["trial-limit"] = b.factor.trial_limit;
    out["rho-iters"] = b.factor.rho_iters;
    return out;
}

construct::Bounds bounds_from_json(const json& j) {
    construct::Bounds b;
    b.prime_search = j.at("prime-search").get<unsigned long>();
    b.d_search = j.at("d-search").get<unsigned long>();
    b.local_samples = j.at("local-samples").get<unsigned long>();
    b.factor.trial_limit = j.at("trial-limit").get<unsigned long>();
    b.factor.rho_iters = j.at("rho-iters").get<unsigned long>();
    return b;
}

json pair_to_json(const KummerPair& p) {
    return json::array({p.first.value().get_str(), p.second.value().get_str()});
}

KummerPair pair_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("pair: expected [a, b]");
    return KummerPair{to_sqclass(j[0], "pair.first"), to_sqclass(j[1], "pair.second")};
}

json witness_to_json(const LocalWitness& w) {
    json out;
    out["place"] = place_to_json(w.v);
    out["ext"] = w.ext ? json(w.ext->get_str()) : json(nullptr);
    out["kind"] = witness_kind_str(w.kind);
    if (w.kind == LocalWitness::Kind::Branch) {
        out["chart"] = w.chart;
        out["center"] = elt_to_json(w.center);
        out["depth"] = w.depth;
    }
    if (witness_has_certs(w.kind)) {
        out["cert_f"] = sqrtcert_to_json(w.cert_f);
        out["cert_g"] = sqrtcert_to_json(w.cert_g);
    }
    return out;
}

LocalWitness witness_from_json(const json& j) {
    LocalWitness w;
    w.v = place_from_json(j.at("place"));
    const json& ext = j.at("ext");
    if (!ext.is_null()) w.ext = to_mpz(ext, "witness.ext");
    w.kind = witness_kind_from(j.at("kind").get<std::string>());
    if (w.kind == LocalWitness::Kind::Branch) {
        w.chart = j.at("chart").get<int>();
        w.center = elt_from_json(j.at("center"));
        w.depth = j.at("depth").get<long>();
    }
    if (witness_has_certs(w.kind)) {
        w.cert_f = sqrtcert_from_json(j.at("cert_f"));
        w.cert_g = sqrtcert_from_json(j.at("cert_g"));
    }
    return w;
}

json certificate_to_json(const obstruction::IndexCertificate& c) {
    json out;
    out["representative"] = pair_to_json(c.representative);
    out["c1"] = c.c1.value().get_str();
    out["c2"] = c.c2.value().get_str();
    out["verdict"] = obstruction::verdict_str(c.verdict);
    out["consistent"] = c.cross_candidate_consistent;
    json lifts = json::array();
    for (const auto& [pair, support] : c.lifts) {
        json entry;
        entry["pair"] = pair_to_json(pair);
        entry["support"] = support_to_json(support);
        lifts.push_back(std::move(entry));
    }
    out["lifts"] = std::move(lifts);
    return out;
}

namespace {

json envelope(const char* kind, const curve::Fixture& fx,
              const obstruction::ObstructionConstants& k, const RunStamp& stamp) {
    json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"] = kind;
    out["fixture_id"] = fx.id;
    json cj;
    cj["e1"] = fx.curve.e1().get_str();
    cj["e2"] = fx.curve.e2().get_str();
    cj["e3"] = fx.curve.e3().get_str();
    out["curve"] = std::move(cj);
    out["seed"] = stamp.seed;
    out["bounds"] = bounds_to_json(stamp.bounds);
    json kj;
    kj["c1"] = k.c1.value().get_str();
    kj["c2"] = k.c2.value().get_str();
    kj["fitted_support"] = places_to_json(k.fitted_support);
    json sv = json::array();
    for (const KummerPair& s : k.surviving) sv.push_back(pair_to_json(s));
    kj["survivors"] = std::move(sv);
    out["constants"] = std::move(kj);
    return out;
}

}  // namespace

json forged_group_to_json(const curve::Fixture& fx, const obstruction::ObstructionConstants& k,
                          const construct::ForgedGroup& g, const RunStamp& stamp) {
    json out = envelope("forged-group", fx, k, stamp);
    json gens = json::array();
    for (const KummerPair& p : g.generators) gens.push_back(pair_to_json(p));
    out["generators"] = std::move(gens);
    json span = json::array();
    for (size_t i = 0; i < g.span_nonzero.size(); ++i) {
        json entry;
        entry["element"] = pair_to_json(g.span_nonzero[i]);
        entry["certificate"] = certificate_to_json(g.certificates[i]);
        span.push_back(std::move(entry));
    }
    out["span"] = std::move(span);
    return out;
}

json sha_to_json(const curve::Fixture& fx, const obstruction::ObstructionConstants& k,
                 const construct::ShaCertificateData& data, const RunStamp& stamp) {
    json out = envelope("sha-growth", fx, k, stamp);
    out["r"] = data.r;
    out["d"] = data.d.get_str();
    json classes = json::array();
    for (size_t i = 0; i < data.classes.size(); ++i) {
        json entry;
        entry["pair"] = pair_to_json(data.classes[i].cls);
        entry["sigma"] = places_to_json(data.classes[i].sigma);
        json wits = json::array();
        for (const auto& rec : data.witnesses)
            if (rec.class_index == i) wits.push_back(witness_to_json(rec.wit));
        entry["witnesses"] = std::move(wits);
        classes.push_back(std::move(entry));
    }
    out["classes"] = std::move(classes);
    json span = json::array();
    for (size_t i = 0; i < data.span_nonzero.size(); ++i) {
        json entry;
        entry["element"] = pair_to_json(data.span_nonzero[i]);
        entry["certificate"] = certificate_to_json(data.span_certificates[i]);
        span.push_back(std::move(entry));
    }
    out["span"] = std::move(span);
    return out;
}

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("document is not valid JSON");
    if (!doc.is_object()) throw ParseError("document root must be an object");
    return doc;
}

namespace {

// wraps json access errors into ParseError so the CLI can map them to the
// usage exit code
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

void check(bool ok, const std::string& why) {
    if (!ok) throw VerificationFailure(why);
}

void verify_index_certificate_json(const json& jc, const KummerPair& expected_rep,
                                   const curve::DescentImage& image,
                                   const obstruction::ObstructionConstants& k,
                                   bool require_index4) {
    KummerPair rep = pair_from_json(jc.at("representative"));
    check(rep == expected_rep, "certificate representative mismatch");
    check(to_sqclass(jc.at("c1"), "cert.c1") == k.c1 &&
              to_sqclass(jc.at("c2"), "cert.c2") == k.c2,
          "certificate constants differ from the fitted constants");
    check(jc.at("consistent").is_boolean() && jc.at("consistent").get<bool>(),
          "certificate not marked cross-candidate consistent");

    obstruction::LiftCoset coset{rep, &image};
    obstruction::IndexCertificate fresh = obstruction::certify_index(coset, k);
    check(obstruction::verdict_str(fresh.verdict) == jc.at("verdict").get<std::string>(),
          "recorded verdict does not match recomputation for " + rep.str());
    if (require_index4)
        check(fresh.verdict == obstruction::IndexVerdict::Index4,
              "span element " + rep.str() + " is not index-4");

    const json& lifts = jc.at("lifts");
    check(lifts.is_array() && lifts.size() == fresh.lifts.size(),
          "lift table size mismatch for " + rep.str());
    for (size_t i = 0; i < fresh.lifts.size(); ++i) {
        const json& entry = lifts[i];
        check(pair_from_json(entry.at("pair")) == fresh.lifts[i].first,
              "lift " + std::to_string(i) + " pair mismatch for " + rep.str());
        std::vector<Place> recorded = places_from_json(entry.at("support"), "lift.support");
        std::sort(recorded.begin(), recorded.end());
        BrauerClass2 rec = BrauerClass2::from_places(recorded);  // parity enforced here
        check(rec == fresh.lifts[i].second,
              "lift " + std::to_string(i) + " Brauer support mismatch for " + rep.str());
    }
}

}  // namespace

void verify_certificate(const json& doc, const curve::Fixture& fx) {
    guarded("certificate", [&] {
        check(doc.at("schema_version").get<int>() == kSchemaVersion,
              "unsupported schema version");
        std::string kind = doc.at("kind").get<std::string>();
        check(kind == "forged-group" || kind == "sha-growth",
              "unknown certificate kind '" + kind + "'");
        check(doc.at("fixture_id").get<std::string>() == fx.id,
              "certificate was produced from fixture '" +
                  doc.at("fixture_id").get<std::string>() + "', not '" + fx.id + "'");
        const json& cj = doc.at("curve");
        check(to_mpz(cj.at("e1"), "curve.e1") == fx.curve.e1() &&
                  to_mpz(cj.at("e2"), "curve.e2") == fx.curve.e2() &&
                  to_mpz(cj.at("e3"), "curve.e3") == fx.curve.e3(),
              "certificate curve does not match the fixture");

        construct::Bounds bounds = bounds_from_json(doc.at("bounds"));

        // constants: re-fit from scratch and demand identical survivors
        curve::DescentImage image = curve::global_image(fx.curve, fx.basis);
        std::vector<Place> support = fx.curve.discriminant_support(bounds.factor);
        const json& kj = doc.at("constants");
        std::vector<Place> recorded_support =
            places_from_json(kj.at("fitted_support"), "constants.fitted_support");
        check(recorded_support == support, "fitted support does not match the curve");
        obstruction::ObstructionConstants k =
            obstruction::fit_constants(fx.curve, fx.basis, support, &image, nullptr);
        check(to_sqclass(kj.at("c1"), "constants.c1") == k.c1 &&
                  to_sqclass(kj.at("c2"), "constants.c2") == k.c2,
              "recorded constants do not match the re-fit");
        const json& sv = kj.at("survivors");
        check(sv.is_array() && sv.size() == k.surviving.size(),
              "survivor list does not match the re-fit");
        for (size_t i = 0; i < k.surviving.size(); ++i)
            check(pair_from_json(sv[i]) == k.surviving[i],
                  "survivor " + std::to_string(i) + " does not match the re-fit");

        if (kind == "forged-group") {
            const json& gens_json = doc.at("generators");
            std::vector<KummerPair> gens;
            for (const json& g : gens_json) gens.push_back(pair_from_json(g));
            std::vector<KummerPair> span = arith::span(gens);
            const json& span_json = doc.at("span");
            check(span_json.size() + 1 == span.size(),
                  "span table size is not 2^r - 1 for independent generators");
            size_t idx = 0;
            for (const KummerPair& s : span) {
                if (s.is_one()) continue;
                const json& entry = span_json[idx++];
                check(pair_from_json(entry.at("element")) == s, "span element order mismatch");
                check(!image.contains(s), "span element lies in the descent image");
                verify_index_certificate_json(entry.at("certificate"), s, image, k, true);
            }
            return;
        }

        // sha-growth
        unsigned r = doc.at("r").get<unsigned>();
        mpz_class d = to_mpz(doc.at("d"), "d");
        check(d != 0 && d != 1, "d must be a nontrivial squarefree integer");
        arith::Factorization df = arith::factor(d, bounds.factor);
        for (const auto& [p, e] : df.primes) check(e == 1, "d is not squarefree");

        const json& classes = doc.at("classes");
        check(classes.is_array() && classes.size() == r, "class count does not match r");
        std::vector<construct::ClassWithSupport> parsed;
        std::vector<Place> seen;
        for (const json& entry : classes) {
            construct::ClassWithSupport cw;
            cw.cls = pair_from_json(entry.at("pair"));
            cw.sigma = places_from_json(entry.at("sigma"), "class.sigma");
            std::vector<Place> fresh =
                construct::nontrivial_places(fx.curve, cw.cls, bounds.factor);
            check(cw.sigma == fresh, "recorded Sigma does not match recomputation for " +
                                         cw.cls.str());
            check(!cw.sigma.empty(), "class has empty local-nontriviality set");
            for (const Place& v : cw.sigma) {
                check(std::find(seen.begin(), seen.end(), v) == seen.end(),
                      "Sigma sets are not pairwise disjoint at " + v.str());
                seen.push_back(v);
            }
            auto model =
                localfield::DescentModel::make(cw.cls, fx.curve.e1(), fx.curve.e2(),
                                               fx.curve.e3());
            const json& wits = entry.at("witnesses");
            check(wits.is_array() && wits.size() == cw.sigma.size(),
                  "witness count does not cover Sigma for " + cw.cls.str());
            for (size_t i = 0; i < cw.sigma.size(); ++i) {
                localfield::LocalWitness w = witness_from_json(wits[i]);
                check(w.v == cw.sigma[i], "witness place order mismatch");
                check(w.ext && *w.ext == d, "witness extension is not the certificate's d");
                check(localfield::verify_local_witness(model, w),
                      "witness fails re-verification at " + w.v.str() + " for " +
                          cw.cls.str());
            }
            parsed.push_back(std::move(cw));
        }

        std::vector<KummerPair> gens;
        for (const auto& cw : parsed) gens.push_back(cw.cls);
        std::vector<KummerPair> span = arith::span(gens);
        const json& span_json = doc.at("span");
        check(span_json.size() + 1 == span.size() && span.size() == (size_t{1} << r),
              "span table size is not 2^r - 1 for independent generators");
        size_t idx = 0;
        for (const KummerPair& s : span) {
            if (s.is_one()) continue;
            const json& entry = span_json[idx++];
            check(pair_from_json(entry.at("element")) == s, "span element order mismatch");
            check(!image.contains(s), "span element lies in the descent image");
            verify_index_certificate_json(entry.at("certificate"), s, image, k, true);
        }
    });
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace shaforge::certio
