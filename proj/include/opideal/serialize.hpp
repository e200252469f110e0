// JSON forms used by the command line tools and tests.  Big integers are
// decimal strings so downstream consumers never round them; sequences use
// {"runs":[{"mantissa":…,"exponent":…,"length":…},…]} and matrices are
// arrays of [re, im] pairs in row order.

#pragma once

#include <string>

#include "json.hpp"
#include "opideal/block_sequence.hpp"
#include "opideal/hornmat.hpp"

namespace opideal::serialize {

using Json = nlohmann::ordered_json;

Json to_json(const BlockSequence& s);
BlockSequence block_sequence_from_json(const Json& j);

Json to_json(const hornmat::Matrix& m);
hornmat::Matrix matrix_from_json(const Json& j);

std::string dyadic_string(const Dyadic& d);    // "m*2^e" or "0"
Dyadic dyadic_from_string(const std::string&);

}  // namespace opideal::serialize
