#include "msts/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace msts {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  raise(errc::config_error, "config error at " + path + ": " + why);
}

double need_num(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) bad(path + "." + key, "expected a number");
  return j[key].get<double>();
}

Eigen::MatrixXcd matrix_from(const json& j, const std::string& path) {
  if (!j.contains("re")) bad(path + ".re", "missing");
  const auto& re = j["re"];
  const int n = static_cast<int>(re.size());
  Eigen::MatrixXcd out(n, n);
  const bool has_im = j.contains("im");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[i].size()) != n) bad(path + ".re", "matrix must be square");
    for (int k = 0; k < n; ++k) {
      const double im = has_im ? j["im"][i][k].get<double>() : 0.0;
      out(i, k) = complexd(re[i][k].get<double>(), im);
    }
  }
  return out;
}

json matrix_to(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rrow.push_back(m(i, k).real());
      irow.push_back(m(i, k).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return json{{"re", re}, {"im", im}};
}

}  // namespace

QuasimodeSet SimConfig::structure() const {
  if (crow_params) return crow::build_crow(*crow_params);
  return modes;
}

CouplingSpec SimConfig::resolved_coupling() const {
  if (coupling_from_crow) {
    if (!crow_params) raise(errc::config_error, "coupling.from_crow needs structure.crow");
    CouplingSpec cs = crow::crow_coupling(*crow_params);
    if (coupling.scale > 0.0 && coupling.scale != 1.0) cs.scale = coupling.scale;
    return cs;
  }
  return coupling;
}

double SimConfig::t_end_seconds() const {
  return integration.time_in_tc ? integration.t_end * integration.t_c : integration.t_end;
}

double SimConfig::stride_seconds() const {
  return integration.time_in_tc ? integration.output_stride * integration.t_c
                                : integration.output_stride;
}

SimConfig config_from_json(const json& j) {
  SimConfig cfg;
  if (!j.contains("structure")) bad("structure", "missing");
  const auto& st = j["structure"];
  if (st.contains("crow")) {
    const auto& c = st["crow"];
    crow::CrowParams p;
    p.cavities = c.value("cavities", 4);
    p.d = need_num(c, "structure.crow", "d");
    p.omega0 = complexd(need_num(c, "structure.crow", "omega0_re"),
                        c.value("omega0_im", 0.0));
    p.beta1 = complexd(c.value("beta1_re", 0.0), c.value("beta1_im", 0.0));
    if (c.contains("kp_d")) {
      p.k_p = c["kp_d"].get<double>() / p.period();
    } else {
      p.k_p = need_num(c, "structure.crow", "k_p");
    }
    p.g0 = c.value("g0", 0.0);
    cfg.crow_params = p;
  } else if (st.contains("modes")) {
    const auto& ms = st["modes"];
    const int n = static_cast<int>(ms.size());
    if (n == 0) bad("structure.modes", "empty");
    cfg.modes.omega.resize(n);
    cfg.modes.gamma.resize(n);
    for (int i = 0; i < n; ++i) {
      cfg.modes.omega(i) = need_num(ms[i], "structure.modes[i]", "omega");
      cfg.modes.gamma(i) = ms[i].value("gamma", 0.0);
      cfg.modes.labels.push_back(ms[i].value("label", ""));
    }
  } else {
    bad("structure", "needs either modes or crow");
  }

  if (!j.contains("coupling")) bad("coupling", "missing");
  const auto& cp = j["coupling"];
  int sources = 0;
  if (cp.contains("matrix")) ++sources;
  if (cp.contains("schmidt")) ++sources;
  if (cp.value("from_crow", false)) ++sources;
  if (sources != 1) bad("coupling", "exactly one of matrix/schmidt/from_crow required");
  cfg.coupling.scale = cp.value("scale", 1.0);
  if (cp.contains("matrix")) {
    cfg.coupling.matrix = matrix_from(cp["matrix"], "coupling.matrix");
  } else if (cp.contains("schmidt")) {
    CouplingSpec::Schmidt s;
    s.u = matrix_from(cp["schmidt"]["u"], "coupling.schmidt.u");
    const auto& labs = cp["schmidt"]["lambda_abs"];
    const auto& lth = cp["schmidt"]["theta"];
    const int n = static_cast<int>(labs.size());
    s.lambda.resize(n);
    for (int i = 0; i < n; ++i)
      s.lambda(i) = std::polar(labs[i].get<double>(),
                               i < static_cast<int>(lth.size()) ? lth[i].get<double>() : 0.0);
    cfg.coupling.schmidt = std::move(s);
  } else {
    cfg.coupling_from_crow = true;
  }

  if (!j.contains("pump")) bad("pump", "missing");
  const auto& pu = j["pump"];
  const std::string kind = pu.value("kind", "cw");
  if (kind == "cw") {
    cfg.pump.kind = PumpModel::Kind::cw;
    cfg.pump.alpha_sq = need_num(pu, "pump", "alpha_sq");
  } else if (kind == "decaying") {
    cfg.pump.kind = PumpModel::Kind::decaying;
    cfg.pump.alpha_sq = need_num(pu, "pump", "alpha_sq0");
    cfg.pump.gamma_p = need_num(pu, "pump", "gamma_p");
  } else if (kind == "envelope") {
    cfg.pump.kind = PumpModel::Kind::envelope;
    if (!pu.contains("samples")) bad("pump.samples", "missing");
    for (const auto& s : pu["samples"])
      cfg.pump.samples.emplace_back(s[0].get<double>(), s[1].get<double>());
  } else {
    bad("pump.kind", "unknown kind '" + kind + "'");
  }
  cfg.pump.omega_p = need_num(pu, "pump", "omega_p");
  if (cfg.pump.alpha_sq < 0.0) bad("pump.alpha_sq", "must be >= 0");
  for (const auto& [ts, vs] : cfg.pump.samples)
    if (vs < 0.0) bad("pump.samples", "|alpha|^2 must be >= 0");
  const std::string proc = pu.value("process", "sfwm");
  if (proc == "sfwm")
    cfg.pump.process = PumpProcess::sfwm;
  else if (proc == "spdc")
    cfg.pump.process = PumpProcess::spdc;
  else
    bad("pump.process", "must be sfwm or spdc");

  if (!j.contains("integration")) bad("integration", "missing");
  const auto& in = j["integration"];
  cfg.integration.t_end = need_num(in, "integration", "t_end");
  if (cfg.integration.t_end <= 0.0) bad("integration.t_end", "must be > 0");
  cfg.integration.rtol = in.value("rtol", 1e-9);
  cfg.integration.atol = in.value("atol", 1e-12);
  if (cfg.integration.rtol <= 0.0 || cfg.integration.atol <= 0.0)
    bad("integration", "tolerances must be positive");
  cfg.integration.output_stride = in.value("output_stride", 0.0);
  const std::string tu = in.value("time_unit", "s");
  if (tu == "t_c") {
    cfg.integration.time_in_tc = true;
    cfg.integration.t_c = need_num(in, "integration", "t_c");
    if (cfg.integration.t_c <= 0.0) bad("integration.t_c", "must be > 0");
  } else if (tu != "s") {
    bad("integration.time_unit", "must be s or t_c");
  }

  if (j.contains("observables")) {
    const auto& ob = j["observables"];
    for (const auto& p : ob.value("pairs", json::array()))
      cfg.observables.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    const std::string strat = ob.value("angle_strategy", "optimal");
    cfg.observables.optimal_angles = (strat == "optimal");
    if (!cfg.observables.optimal_angles) {
      for (const auto& a : ob.value("angles", json::array()))
        cfg.observables.fixed_angles.emplace_back(a[0].get<double>(), a[1].get<double>());
      if (cfg.observables.fixed_angles.size() != cfg.observables.pairs.size())
        bad("observables.angles", "one angle pair required per mode pair");
    }
    const std::string sg = ob.value("sign", "+");
    if (sg == "+")
      cfg.observables.sign = +1;
    else if (sg == "-")
      cfg.observables.sign = -1;
    else if (sg == "both")
      cfg.observables.both_signs = true;
    else
      bad("observables.sign", "must be +, - or both");
  }
  cfg.seed = j.value("seeds", 0L);
  return cfg;
}

json config_to_json(const SimConfig& cfg) {
  json j;
  if (cfg.crow_params) {
    const auto& p = *cfg.crow_params;
    j["structure"]["crow"] = {
        {"cavities", p.cavities},    {"d", p.d},
        {"omega0_re", p.omega0.real()}, {"omega0_im", p.omega0.imag()},
        {"beta1_re", p.beta1.real()},   {"beta1_im", p.beta1.imag()},
        {"k_p", p.k_p},              {"g0", p.g0}};
  } else {
    json ms = json::array();
    for (int i = 0; i < cfg.modes.size(); ++i) {
      json mj{{"omega", cfg.modes.omega(i)}, {"gamma", cfg.modes.gamma(i)}};
      if (!cfg.modes.labels.empty() && !cfg.modes.labels[i].empty())
        mj["label"] = cfg.modes.labels[i];
      ms.push_back(mj);
    }
    j["structure"]["modes"] = ms;
  }

  if (cfg.coupling_from_crow) {
    j["coupling"]["from_crow"] = true;
  } else if (cfg.coupling.matrix) {
    j["coupling"]["matrix"] = matrix_to(*cfg.coupling.matrix);
  } else if (cfg.coupling.schmidt) {
    const auto& s = *cfg.coupling.schmidt;
    json labs = json::array(), lth = json::array();
    for (Eigen::Index i = 0; i < s.lambda.size(); ++i) {
      labs.push_back(std::abs(s.lambda(i)));
      lth.push_back(std::arg(s.lambda(i)));
    }
    j["coupling"]["schmidt"] = {{"u", matrix_to(s.u)}, {"lambda_abs", labs}, {"theta", lth}};
  }
  j["coupling"]["scale"] = cfg.coupling.scale;

  json pu;
  switch (cfg.pump.kind) {
    case PumpModel::Kind::cw:
      pu["kind"] = "cw";
      pu["alpha_sq"] = cfg.pump.alpha_sq;
      break;
    case PumpModel::Kind::decaying:
      pu["kind"] = "decaying";
      pu["alpha_sq0"] = cfg.pump.alpha_sq;
      pu["gamma_p"] = cfg.pump.gamma_p;
      break;
    case PumpModel::Kind::envelope: {
      pu["kind"] = "envelope";
      json ss = json::array();
      for (const auto& [t, v] : cfg.pump.samples) ss.push_back(json::array({t, v}));
      pu["samples"] = ss;
      break;
    }
  }
  pu["omega_p"] = cfg.pump.omega_p;
  pu["process"] = cfg.pump.process == PumpProcess::sfwm ? "sfwm" : "spdc";
  j["pump"] = pu;

  j["integration"] = {{"t_end", cfg.integration.t_end},
                      {"rtol", cfg.integration.rtol},
                      {"atol", cfg.integration.atol},
                      {"output_stride", cfg.integration.output_stride}};
  if (cfg.integration.time_in_tc) {
    j["integration"]["time_unit"] = "t_c";
    j["integration"]["t_c"] = cfg.integration.t_c;
  } else {
    j["integration"]["time_unit"] = "s";
  }

  json pairs = json::array();
  for (const auto& [a, b] : cfg.observables.pairs) pairs.push_back(json::array({a, b}));
  j["observables"]["pairs"] = pairs;
  j["observables"]["angle_strategy"] = cfg.observables.optimal_angles ? "optimal" : "fixed";
  if (!cfg.observables.optimal_angles) {
    json angs = json::array();
    for (const auto& [a, b] : cfg.observables.fixed_angles) angs.push_back(json::array({a, b}));
    j["observables"]["angles"] = angs;
  }
  j["observables"]["sign"] =
      cfg.observables.both_signs ? "both" : (cfg.observables.sign >= 0 ? "+" : "-");
  j["seeds"] = cfg.seed;
  return j;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::config_error, "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    raise(errc::config_error, std::string("config parse failure: ") + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const SimConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  unsigned long long h = 14695981039346656037ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return std::string(buf);
}

}  // namespace msts
