#include <nlohmann/json.hpp>

#include "confluence/system.hpp"

namespace confluence {

namespace {

using nlohmann::json;

cplx parse_pair(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CSeries parse_entry(const json& j, int order) {
  if (!j.is_array()) throw ParseError("matrix entry must be a list of [re, im] pairs");
  std::vector<cplx> coeffs;
  coeffs.reserve(j.size());
  for (const auto& c : j) coeffs.push_back(parse_pair(c));
  if (static_cast<int>(coeffs.size()) > order) {
    throw ParseError("matrix entry has more coefficients than the order");
  }
  return CSeries(std::move(coeffs), order);
}

json dump_series(const CSeries& s) {
  json out = json::array();
  for (const cplx& c : s.coeffs()) out.push_back({c.real(), c.imag()});
  return out;
}

}  // namespace

ParametricSystem system_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    const int order = doc.at("order").get<int>();
    if (order < 2 || order > 256) throw ParseError("order must lie in [2, 256]");
    const auto& h = doc.at("h");
    if (!h.is_array() || h.size() != 4) throw ParseError("h must be [h0re, h0im, h1re, h1im]");
    const MonicQuadratic quad{{h[0].get<double>(), h[1].get<double>()},
                              {h[2].get<double>(), h[3].get<double>()}};
    const auto& a = doc.at("A");
    if (!a.is_array() || a.size() != 2 || !a[0].is_array() || a[0].size() != 2 ||
        !a[1].is_array() || a[1].size() != 2) {
      throw ParseError("A must be a 2x2 array");
    }
    CSeriesMat2 mat(parse_entry(a[0][0], order), parse_entry(a[0][1], order),
                    parse_entry(a[1][0], order), parse_entry(a[1][1], order));
    return {quad, std::move(mat)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed system descriptor: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed system descriptor: ") + e.what());
  }
}

std::string system_to_json(const ParametricSystem& system) {
  const auto& h = system.h();
  const auto& a = system.a();
  json doc;
  doc["order"] = system.order();
  doc["h"] = {h.h0.real(), h.h0.imag(), h.h1.real(), h.h1.imag()};
  doc["A"] = {{dump_series(a(0, 0)), dump_series(a(0, 1))},
              {dump_series(a(1, 0)), dump_series(a(1, 1))}};
  return doc.dump(2);
}

}  // namespace confluence
