#pragma once

#include <string>

#include "nlohmann/json.hpp"
#include "shaforge/construct.hpp"

namespace shaforge::certio {

using json = nlohmann::ordered_json;

// run parameters recorded in every document; re-running with the same record
// must reproduce the bytes
struct RunStamp {
    unsigned long seed = 1;
    construct::Bounds bounds;
};

json bounds_to_json(const construct::Bounds& b);
construct::Bounds bounds_from_json(const json& j);

json pair_to_json(const arith::KummerPair& p);
arith::KummerPair pair_from_json(const json& j);

json witness_to_json(const localfield::LocalWitness& w);
localfield::LocalWitness witness_from_json(const json& j);

json certificate_to_json(const obstruction::IndexCertificate& c);

json forged_group_to_json(const curve::Fixture& fx, const obstruction::ObstructionConstants& k,
                          const construct::ForgedGroup& g, const RunStamp& stamp);

json sha_to_json(const curve::Fixture& fx, const obstruction::ObstructionConstants& k,
                 const construct::ShaCertificateData& data, const RunStamp& stamp);

// strict parse: ParseError on malformed or wrong-schema input
json parse_document(const std::string& text);

// Full independent re-verification of a document against its fixture:
// re-derives the descent image, re-fits the constants, re-enumerates every
// lift table with fresh symbol computations, re-computes each Sigma set, and
// re-checks every Hensel witness. Throws VerificationFailure (or
// ParityViolation et al.) on any mismatch.
void verify_certificate(const json& doc, const curve::Fixture& fx);

std::string dump(const json& doc);

}  // namespace shaforge::certio
