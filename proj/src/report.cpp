#include "crtube/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace crtube {

Json jsonRational(const Rational& r) { return r.strPQ(); }

Json jsonScalar(const Scalar& s) {
  Json out = Json::object();
  out["1"] = jsonRational(s.one());
  out["i"] = jsonRational(s.iPart());
  out["sqrt2"] = jsonRational(s.sqrt2Part());
  out["isqrt2"] = jsonRational(s.iSqrt2Part());
  return out;
}

Json jsonField(const HoloVectorField& f) {
  Json out = Json::object();
  std::vector<std::string> names = f.coordNames();
  for (int k = 0; k < f.ncoords; ++k) {
    if (f.comps[k].isZero()) continue;
    Json comp = Json::object();
    for (const auto& [e, c] : f.comps[k].terms()) {
      std::string key = "1";
      bool first = true;
      for (int j = 0; j < f.ncoords; ++j) {
        if (e[j] == 0) continue;
        std::string part = names[j];
        if (e[j] > 1) part += "^" + std::to_string(e[j]);
        key = first ? part : key + "*" + part;
        first = false;
      }
      comp[key] = jsonScalar(c);
    }
    out["D" + names[k]] = comp;
  }
  return out;
}

Json jsonSeries(const TruncatedSeries& s) {
  Json out = Json::object();
  for (const auto& [e, c] : s.terms()) out[monomialStr(s.vars(), e)] = jsonScalar(c);
  return out;
}

Json jsonKilling(const KillingData& k) {
  Json out = Json::object();
  Json rows = Json::array();
  for (const auto& row : k.matrix) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(jsonRational(x));
    rows.push_back(r);
  }
  out["matrix"] = rows;
  out["rank"] = k.rank;
  out["signature"] = Json::array({k.positives, k.negatives});
  return out;
}

Json reportSkeleton(const std::string& command, const Json& params) {
  Json out = Json::object();
  out["command"] = command;
  out["params"] = params;
  out["toolchain"] = Json::object({{"name", "crtube"}, {"version", kVersion}});
  return out;
}

std::string dumpReport(const Json& report) { return report.dump(2) + "\n"; }

void emitReport(const Json& report, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << dumpReport(report);
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace crtube
