#include "blochid/types.hpp"

#include <algorithm>
#include <cctype>

namespace blochid {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::M1z: return "m1z";
    case ModelKind::M1x: return "m1x";
    case ModelKind::M1y: return "m1y";
    case ModelKind::M2:  return "m2";
    case ModelKind::M3:  return "m3";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "m1z") return ModelKind::M1z;
  if (s == "m1x") return ModelKind::M1x;
  if (s == "m1y") return ModelKind::M1y;
  if (s == "m2")  return ModelKind::M2;
  if (s == "m3")  return ModelKind::M3;
  throw ValidationError("unknown model kind '" + name +
                        "' (expected one of m1z, m1x, m1y, m2, m3)");
}

}  // namespace blochid
