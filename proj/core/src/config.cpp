// SPDX-License-Identifier: Apache-2.0
#include "friedrichs/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace friedrichs {

namespace {

using nlohmann::json;

Complex parseComplex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(field + ": complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string fnv1aHex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

LoadedConfig parseConfigText(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }

  std::vector<std::string> warnings;
  try {
    if (!root.contains("n")) throw ParseError("missing field n");
    int n = root["n"].get<int>();
    if (!root.contains("a") || !root["a"].is_array())
      throw ParseError("missing array a");
    RealVector a(root["a"].size());
    for (size_t i = 0; i < root["a"].size(); ++i) a[i] = root["a"][i].get<double>();

    double epsilon = 1.0;
    if (root.contains("epsilon")) {
      epsilon = root["epsilon"].get<double>();
    } else {
      warnings.push_back("epsilon missing; defaulting to 1.0");
    }

    if (!root.contains("M") || !root["M"].contains("terms"))
      throw ParseError("missing M.terms");
    std::vector<RationalTerm> terms;
    for (const auto& jt : root["M"]["terms"]) {
      RationalTerm t;
      t.pole = parseComplex(jt.at("pole"), "M.terms[].pole");
      t.order = jt.at("order").get<int>();
      const auto& jc = jt.at("coeff");
      if (!jc.is_array() || static_cast<int>(jc.size()) != n * n)
        throw ParseError("M.terms[].coeff must be a row-major array of n*n [re, im] pairs");
      Matrix coeff(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          coeff(r, c) = parseComplex(jc[r * n + c], "M.terms[].coeff");
      t.coeff = std::move(coeff);
      terms.push_back(std::move(t));
    }

    RationalMatrixFunction M(n, n, std::move(terms));
    ModelSpec spec = ModelSpec::make(std::move(a), std::move(M), epsilon);

    RunParams params;
    if (root.contains("search")) {
      const auto& js = root["search"];
      params.search.re_min = js.value("re_min", params.search.re_min);
      params.search.re_max = js.value("re_max", params.search.re_max);
      params.search.im_min = js.value("im_min", params.search.im_min);
      params.search.im_max = js.value("im_max", params.search.im_max);
      params.search.max_depth = js.value("max_depth", params.search.max_depth);
      params.search.newton_tol = js.value("newton_tol", params.search.newton_tol);
      params.search.boundary_samples_per_edge =
          js.value("boundary_samples_per_edge", params.search.boundary_samples_per_edge);
      params.have_search = true;
    }
    if (root.contains("grid")) {
      const auto& jg = root["grid"];
      params.grid.lambda_max = jg.value("lambda_max", params.grid.lambda_max);
      params.grid.points = jg.value("points", params.grid.points);
      params.grid.tail_exponent = jg.value("tail_exponent", params.grid.tail_exponent);
      if (jg.value("spacing", std::string("uniform")) == std::string("log"))
        params.grid.spacing = GridParams::Spacing::LogGraded;
      params.grid.inner = jg.value("inner", params.grid.inner);
    }
    if (root.contains("tolerances")) {
      params.tol = root["tolerances"].value("verify", params.tol);
    }
    if (root.contains("project")) {
      const auto& jp = root["project"];
      ProjectParams pp;
      pp.w = parseComplex(jp.at("w"), "project.w");
      pp.z = parseComplex(jp.at("z"), "project.z");
      const auto& jk = jp.at("k");
      Vector k(jk.size());
      for (size_t i = 0; i < jk.size(); ++i)
        k[i] = parseComplex(jk[i], "project.k");
      pp.k = std::move(k);
      params.project = std::move(pp);
    }

    LoadedConfig out{std::move(spec), std::move(params), fnv1aHex(text),
                     ValidationReport{}, std::move(warnings)};
    out.validation = validateModel(out.spec);
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field error: ") + e.what());
  }
}

LoadedConfig loadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfigText(ss.str());
}

}  // namespace friedrichs
