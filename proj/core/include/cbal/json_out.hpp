#pragma once

#include <string>

#include <json.hpp>

namespace cbal {

// Canonical serialization: insertion-order keys, every floating-point
// number printed with 17 significant digits so that parse + re-emit is
// byte-identical.
std::string dump_canonical(const nlohmann::ordered_json& j);

}  // namespace cbal
