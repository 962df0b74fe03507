#include "cbal/json_out.hpp"

#include <cmath>
#include <cstdio>

namespace cbal {

namespace {

void emit(const nlohmann::ordered_json& j, std::string& out) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (j.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::ordered_json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      break;
    }
    case value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string dump_canonical(const nlohmann::ordered_json& j) {
  std::string out;
  emit(j, out);
  return out;
}

}  // namespace cbal
