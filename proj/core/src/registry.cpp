#include "hw/registry.hpp"

#include <json.hpp>

#include "hw/error.hpp"

namespace hw {

namespace {
#include "frozen_constants.inc"

FrozenConstants load() {
  FrozenConstants fc;
  fc.json = kFrozenConstantsJson;
  try {
    const auto j = nlohmann::json::parse(fc.json);
    fc.version = j.at("version").get<int>();
    const auto& v = j.at("vdc_envelope");
    fc.vdc_envelope.log_term = v.at("log_term").get<double>();
    fc.vdc_envelope.length_term = v.at("length_term").get<double>();
    fc.vdc_envelope.endpoint_term = v.at("endpoint_term").get<double>();
    fc.gap_count_c = j.at("gap_count").at("c").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("frozen constants registry: ") + e.what());
  }
  return fc;
}
}  // namespace

const FrozenConstants& frozen_constants() {
  static const FrozenConstants fc = load();
  return fc;
}

}  // namespace hw
