#include "lfmhop/version.hpp"

#include <nlohmann/json.hpp>

namespace lfmhop {

std::string version_json() {
  nlohmann::json j;
  j["lfmhop"] = kVersion;
  j["modules"] = {
      {"core", kVersion},      {"binarity", kVersion},
      {"sampler", kVersion},   {"hopper", kVersion},
      {"enumeration", kVersion}, {"pdc", kVersion},
      {"synthgen", kVersion},  {"baseline", kVersion},
  };
  return j.dump();
}

}  // namespace lfmhop
