#include "chaosvar/measure_json.hpp"

#include "chaosvar/error.hpp"

namespace chaosvar {

using nlohmann::json;

namespace {

constexpr int kMeasureVersion = 1;

json vec_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const char* lift_name(SphereLift::Kind k) {
  switch (k) {
    case SphereLift::Kind::None: return "none";
    case SphereLift::Kind::Jet: return "jet";
    case SphereLift::Kind::HessianJet: return "hessian_jet";
  }
  return "none";
}

}  // namespace

json tensor_to_json(const SymTensor& t) {
  json entries = json::array();
  for (const auto& [idx, v] : t.entries()) entries.push_back(json::array({idx, v}));
  return {{"order", t.order()}, {"dim", t.dim()}, {"entries", entries}};
}

SymTensor tensor_from_json(const json& j) {
  SymTensor t(j.at("order").get<int>(), j.at("dim").get<int>());
  for (const auto& e : j.at("entries")) t.set(e.at(0).get<std::vector<int>>(), e.at(1).get<double>());
  return t;
}

json form_to_json(const HermitianForm& f) {
  const int n = f.dim();
  json re = json::array(), im = json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<double> r(n), c(n);
    for (int k = 0; k < n; ++k) {
      r[k] = f(i, k).real();
      c[k] = f(i, k).imag();
    }
    re.push_back(r);
    im.push_back(c);
  }
  json out = {{"re", re}};
  if (!f.is_real(0.0)) out["im"] = im;
  return out;
}

HermitianForm form_from_json(const json& j) {
  if (j.is_number()) return HermitianForm::scalar(j.get<double>());
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  const int n = static_cast<int>(re.size());
  Eigen::MatrixXcd m(n, n);
  std::vector<std::vector<double>> im(n, std::vector<double>(n, 0.0));
  if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n)
      throw ConfigError("form: matrix must be square");
    for (int k = 0; k < n; ++k) m(i, k) = cdouble(re[i][k], im[i][k]);
  }
  return HermitianForm(m);
}

json measure_to_json(const SpectralMeasure& mu) {
  json j = {{"version", kMeasureVersion}, {"dim_freq", dim_freq(mu)}, {"dim_target", dim_target(mu)}};
  if (const auto* a = std::get_if<AtomicMeasure>(&mu)) {
    j["kind"] = "atomic";
    j["atoms"] = json::array();
    for (const Atom& at : a->atoms) j["atoms"].push_back({{"freq", vec_to_json(at.freq)}, {"form", form_to_json(at.form)}});
  } else if (const auto* s = std::get_if<SphereDensity>(&mu)) {
    j["kind"] = "sphere";
    j["radius"] = s->radius;
    j["directions"] = json::array();
    for (const auto& d : s->directions) j["directions"].push_back(vec_to_json(d));
    j["profile"] = json::array();
    for (const auto& f : s->profile) j["profile"].push_back(form_to_json(f));
    j["lift"] = {{"kind", lift_name(s->lift.kind)}, {"beta", s->lift.beta}, {"gamma", s->lift.gamma}};
    j["quad_nodes"] = s->quad_nodes;
  } else {
    const auto& l = std::get<LebesgueDensity>(mu);
    j["kind"] = "lebesgue";
    j["grid"] = {{"lower", vec_to_json(l.grid.lower)},
                 {"spacing", vec_to_json(l.grid.spacing)},
                 {"counts", l.grid.counts}};
    j["values"] = json::array();
    for (const auto& f : l.values) j["values"].push_back(form_to_json(f));
  }
  return j;
}

SpectralMeasure measure_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("version") && j.at("version").get<int>() != kMeasureVersion)
      throw ConfigError("measure: unsupported version");
    if (kind == "random_wave") return random_wave(j.at("dim_freq").get<int>());
    if (kind == "gaussian_covariance")
      return gaussian_covariance_density(j.at("dim_freq").get<int>(), j.value("scale", 1.0),
                                         j.value("per_axis", 256), j.value("cutoff_sd", 8.0));
    if (kind == "uniform_interval") {
      const double a = j.at("half_width").get<double>();
      const double c = j.at("density").get<double>();
      return lebesgue_from_function(Lattice::symmetric_box(1, a, j.value("per_axis", 512)), 1,
                                    [c](const Eigen::VectorXd&) { return HermitianForm::scalar(c); });
    }
    if (kind == "atomic") {
      AtomicMeasure m;
      m.dim_freq = j.at("dim_freq").get<int>();
      m.dim_target = j.at("dim_target").get<int>();
      for (const auto& a : j.at("atoms")) {
        Atom at{vec_from_json(a.at("freq")), form_from_json(a.at("form"))};
        if (at.freq.size() != m.dim_freq || at.form.dim() != m.dim_target)
          throw ConfigError("atomic measure: atom shape mismatch");
        m.atoms.push_back(std::move(at));
      }
      return m;
    }
    if (kind == "sphere") {
      SphereDensity s;
      s.dim_freq = j.at("dim_freq").get<int>();
      s.radius = j.at("radius").get<double>();
      for (const auto& d : j.at("directions")) s.directions.push_back(vec_from_json(d));
      for (const auto& f : j.at("profile")) s.profile.push_back(form_from_json(f));
      if (s.directions.size() != s.profile.size() || s.profile.empty())
        throw ConfigError("sphere measure: directions and profile must match and be non-empty");
      if (j.contains("lift")) {
        const std::string lk = j["lift"].value("kind", "none");
        if (lk == "jet") s.lift.kind = SphereLift::Kind::Jet;
        else if (lk == "hessian_jet") s.lift = {SphereLift::Kind::HessianJet, j["lift"].at("beta"), j["lift"].at("gamma")};
        else if (lk != "none") throw ConfigError("sphere measure: unknown lift " + lk);
      }
      s.quad_nodes = j.value("quad_nodes", 0);
      return s;
    }
    if (kind == "lebesgue") {
      LebesgueDensity l;
      l.dim_target = j.at("dim_target").get<int>();
      l.grid.lower = vec_from_json(j.at("grid").at("lower"));
      l.grid.spacing = vec_from_json(j.at("grid").at("spacing"));
      l.grid.counts = j.at("grid").at("counts").get<std::vector<int>>();
      for (const auto& f : j.at("values")) l.values.push_back(form_from_json(f));
      if (l.values.size() != l.grid.size()) throw ConfigError("lebesgue measure: value count mismatch");
      return l;
    }
    throw ConfigError("measure: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
}

}  // namespace chaosvar
