#include "chaosvar/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "chaosvar/berry.hpp"
#include "chaosvar/chaos_coeffs.hpp"
#include "chaosvar/error.hpp"
#include "chaosvar/field.hpp"
#include "chaosvar/gauss_hermite.hpp"
#include "chaosvar/measure_estimates.hpp"
#include "chaosvar/measure_json.hpp"
#include "chaosvar/nodal.hpp"
#include "chaosvar/quadrature.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"
#include "chaosvar/test_function.hpp"
#include "chaosvar/variance.hpp"

namespace chaosvar {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::vector<double> column(const std::vector<Observation>& obs, std::size_t c) {
  std::vector<double> out(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) out[i] = obs[i].at(c);
  return out;
}

AtomicMeasure to_atomic(const SpectralMeasure& m, int n_atoms) {
  DiscretizationSpec spec;
  if (std::holds_alternative<SphereDensity>(m)) {
    spec.strategy = DiscretizationSpec::Strategy::SphereEquiangular;
    spec.n_atoms = n_atoms;
  } else if (std::holds_alternative<LebesgueDensity>(m)) {
    spec.strategy = DiscretizationSpec::Strategy::GridQuadrature;
    spec.n_atoms = n_atoms;
  }
  return discretize(m, spec);
}

// A lattice discretization makes the field periodic with period 1 / spacing
// along the first axis; a window longer than that sees repeated data.
void check_period(const SpectralMeasure& m, const AtomicMeasure& atoms, double window_length,
                  const std::string& who) {
  if (!std::holds_alternative<LebesgueDensity>(m) || atoms.atoms.size() < 2) return;
  std::vector<double> f;
  for (const auto& a : atoms.atoms) f.push_back(a.freq(0));
  std::sort(f.begin(), f.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < f.size(); ++i)
    if (f[i] - f[i - 1] > 1e-12) gap = std::min(gap, f[i] - f[i - 1]);
  if (!std::isfinite(gap)) return;
  if (window_length > 1.0 / gap)
    throw ConfigError(who + ": window length " + std::to_string(window_length) + " exceeds the field period " +
                      std::to_string(1.0 / gap) + " of the lattice discretization; refine the measure grid");
}

// Var Y and Var d_1 Y of a scalar atomic measure.
std::pair<double, double> scalar_moments(const AtomicMeasure& mu) {
  std::vector<double> m0, m2;
  for (const auto& a : mu.atoms) {
    const double w = a.form(0, 0).real();
    m0.push_back(w);
    m2.push_back(4.0 * kPi * kPi * w * a.freq(0) * a.freq(0));
  }
  return {pairwise_sum(m0), pairwise_sum(m2)};
}

ResultRecord failure(const std::string& series, const std::string& msg) {
  ResultRecord r = make_record(series, 0.0, CheckKind::Abs, std::nan(""), 0.0, std::nan(""), 0.0, msg);
  r.pass = false;
  return r;
}

// ---------------------------------------------------------------- cosine-cancellation

// |r|_2^2 for r(t) = sin(t) / t by composite quadrature plus the 1/(2T) tail.
double sinc_l2_squared() {
  const double T = 1000.0 * kPi;
  const double body = integrate_composite(
      [](double t) {
        if (t < 1e-8) return 1.0;
        const double s = std::sin(t) / t;
        return s * s;
      },
      0.0, T, 4000, 16);
  return 2.0 * (body + 0.5 / T);
}

json cosine_defaults(int) {
  return {{"measure",
           {{"kind", "uniform_interval"}, {"half_width", 0.5 / kPi}, {"density", kPi}, {"per_axis", 512}}},
          {"lambdas", {50.0, 100.0, 200.0}},
          {"replicates", 2000},
          {"resolution", {{"grid_step", 0.25}, {"n_atoms", 0}}},
          {"tolerances", {{"ratio", 0.15}, {"limit_relative", 0.20}, {"z", 3.0}}},
          {"params", {{"test_function", "ball"}, {"shift", kPi}}}};
}

ExperimentPlan cosine_plan(const ExperimentConfig& cfg) {
  if (cfg.d != 1) throw ConfigError("cosine-cancellation: d must be 1");
  const double h = cfg.resolution.at("grid_step").get<double>();
  const int n_atoms = cfg.resolution.value("n_atoms", 0);
  const double shift = cfg.params.value("shift", kPi);
  const double z = cfg.tolerances.value("z", 3.0);
  const double ratio_bound = cfg.tolerances.value("ratio", 0.15);
  const double limit_rel = cfg.tolerances.value("limit_relative", 0.20);
  const std::string phi_name = cfg.params.value("test_function", std::string("ball"));
  const double lambda_max = cfg.lambdas.back();

  // X(t) = (Y(t), Y(t + shift)): atom forms w b b^H with b = (1, e^{2 i pi xi shift}).
  auto shared = std::make_shared<std::pair<AtomicMeasure, std::shared_ptr<const FieldModel>>>();
  auto build = [cfg, n_atoms, shift, shared]() {
    if (shared->second) return;
    const SpectralMeasure src = measure_from_json(cfg.measure);
    const AtomicMeasure base = to_atomic(src, n_atoms);
    if (base.dim_target != 1) throw ConfigError("cosine-cancellation: scalar measure required");
    const double reach = TestFunction::from_name(cfg.params.value("test_function", std::string("ball")), 1).support_radius();
    check_period(src, base, 2.0 * reach * cfg.lambdas.back() + std::abs(shift), "cosine-cancellation");
    AtomicMeasure pair;
    pair.dim_freq = 1;
    pair.dim_target = 2;
    for (const auto& a : base.atoms) {
      Eigen::VectorXcd b(2);
      b << 1.0, std::polar(1.0, 2.0 * kPi * a.freq(0) * shift);
      pair.atoms.push_back({a.freq, HermitianForm::rank_one(b, a.form(0, 0).real())});
    }
    shared->first = pair;
    shared->second = std::make_shared<const FieldModel>(pair, "cosine-pair");
  };

  const JetFunction f = [](const JetView& j) { return (j.value[0] * j.value[0] - 1) - (j.value[1] * j.value[1] - 1); };
  const JetFunction g = [](const JetView& j) { return (j.value[0] * j.value[0] - 1) + (j.value[1] * j.value[1] - 1); };

  ExperimentPlan plan;
  for (double lambda : cfg.lambdas) {
    plan.points.push_back({"lambda=" + std::to_string(lambda), [=]() {
      build();
      const auto model = shared->second;
      const TestFunction phi = TestFunction::from_name(phi_name, 1);
      auto quad = std::make_shared<WindowQuadrature>(*model, phi, lambda, h, 0);
      PreparedPoint p;
      p.replicates = cfg.replicates;
      p.replicate = [=](std::size_t, std::uint64_t seed) {
        FieldRealization real(model, seed);
        return Observation{quad->apply(real, f, "f").value, quad->apply(real, g, "g").value};
      };
      p.finish = [=](const std::vector<Observation>& obs) {
        const auto sf = summarize(column(obs, 0));
        const auto sg = summarize(column(obs, 1));
        const ProjectionScheme scheme;
        auto as_fn = [](const JetFunction& fn) {
          return ScalarFunction([fn](std::span<const double> x) { return fn(JetView{x, {}}); });
        };
        const SymTensor f2 = chaos_project(as_fn(f), 2, 2, scheme);
        const SymTensor g2 = chaos_project(as_fn(g), 2, 2, scheme);
        const double pf = chaotic_variance_atomic(2, shared->first, f2, phi, lambda).value;
        const double pg = chaotic_variance_atomic(2, shared->first, g2, phi, lambda).value;
        std::vector<ResultRecord> recs;
        recs.push_back(make_record("var_f", lambda, CheckKind::Abs, pf, z * sf.se_variance + 1e-3 * pg,
                                   sf.variance, sf.se_variance, "exact finite-lambda chaos-2 sum"));
        recs.push_back(make_record("var_g", lambda, CheckKind::Abs, pg, z * sg.se_variance + 1e-3 * pg,
                                   sg.variance, sg.se_variance, "exact finite-lambda chaos-2 sum"));
        const double ratio = sf.variance / sg.variance;
        const bool last = lambda == lambda_max;
        recs.push_back(make_record("ratio_f_g", lambda, last ? CheckKind::Le : CheckKind::Info, ratio_bound, 0.0,
                                   ratio, 0.0, "Var(f) / Var(g)"));
        if (last) {
          const double r2 = sinc_l2_squared();
          recs.push_back(make_record("var_g_limit_4r2", lambda, CheckKind::Abs, 4.0 * r2, limit_rel * 4.0 * r2,
                                     sg.variance, sg.se_variance, "limit as stated: 4 |r|_2^2"));
          recs.push_back(make_record("var_g_limit_8r2", lambda, CheckKind::Abs, 8.0 * r2, limit_rel * 8.0 * r2,
                                     sg.variance, sg.se_variance,
                                     "limit from the covariance sum 2 int (2r^2 + r(t+s)^2 + r(t-s)^2)"));
        }
        return recs;
      };
      return p;
    }});
  }
  plan.finalize = [z](const std::vector<ResultRecord>& recs) {
    std::vector<const ResultRecord*> vf;
    for (const auto& r : recs)
      if (r.series == "var_f") vf.push_back(&r);
    std::vector<ResultRecord> out;
    if (vf.size() >= 2) {
      const double diff = vf.back()->simulated - vf.front()->simulated;
      const double se = std::hypot(vf.back()->se, vf.front()->se);
      out.push_back(make_record("var_f_trend", vf.back()->x, CheckKind::Le, 0.0, z * se, diff, se,
                                "Var(f) at largest minus smallest lambda"));
    }
    return out;
  };
  return plan;
}

// ---------------------------------------------------------------- rice-means

json rice_defaults(int d) {
  if (d == 2)
    return {{"measure", {{"kind", "random_wave"}, {"dim_freq", 2}}},
            {"lambdas", {20.0}},
            {"replicates", 400},
            {"resolution", {{"grid_step", 0.2}, {"n_atoms", 512}}},
            {"tolerances", {{"relative", 0.02}}},
            {"params", {{"levels", {0.0}}}}};
  return {{"measure", {{"kind", "gaussian_covariance"}, {"dim_freq", 1}, {"scale", 1.0}, {"per_axis", 256}}},
          {"lambdas", {32.0}},
          {"replicates", 10000},
          {"resolution", {{"grid_step", 0.05}, {"n_atoms", 0}}},
          {"tolerances", {{"relative", 0.02}}},
          {"params", {{"levels", {0.0, 1.0}}}}};
}

ExperimentPlan rice_plan(const ExperimentConfig& cfg) {
  const int d = cfg.d;
  if (d != 1 && d != 2) throw ConfigError("rice-means: d must be 1 or 2");
  const double h = cfg.resolution.at("grid_step").get<double>();
  const int n_atoms = cfg.resolution.value("n_atoms", 0);
  const double rel = cfg.tolerances.value("relative", 0.02);
  const auto levels = cfg.params.at("levels").get<std::vector<double>>();
  ExperimentPlan plan;
  for (double L : cfg.lambdas) {
    plan.points.push_back({"window=" + std::to_string(L), [=]() {
      const SpectralMeasure src = measure_from_json(cfg.measure);
      const AtomicMeasure mu = to_atomic(src, n_atoms);
      if (mu.dim_freq != d || mu.dim_target != 1) throw ConfigError("rice-means: scalar d-dim measure required");
      check_period(src, mu, L, "rice-means");
      const auto model = std::make_shared<const FieldModel>(mu, "rice");
      const auto [m0, m2] = scalar_moments(mu);
      const int n = static_cast<int>(std::lround(L / h)) + 1;
      const double step = L / (n - 1);
      PreparedPoint p;
      p.replicates = cfg.replicates;
      if (d == 1) {
        auto grid = std::make_shared<GridPhases1D>(*model, 0.0, step, n);
        p.replicate = [=](std::size_t, std::uint64_t seed) {
          FieldRealization real(model, seed);
          Observation o;
          for (double u : levels) o.push_back(count_zeros_1d(real, *grid, u).count / L);
          return o;
        };
      } else {
        auto grid = std::make_shared<GridPhases2D>(*model, 0.0, 0.0, step, n, n);
        p.replicate = [=](std::size_t, std::uint64_t seed) {
          FieldRealization real(model, seed);
          const Eigen::MatrixXd vals = grid->evaluate(real);
          Observation o;
          for (double u : levels) {
            NodalLengthOptions opt;
            opt.u = u;
            opt.center_value = [&real](double x, double y) {
              Eigen::VectorXd v(2);
              v << x, y;
              return real.value(v)(0);
            };
            o.push_back(nodal_length_2d(vals, step, opt).length / (L * L));
          }
          return o;
        };
      }
      p.finish = [=](const std::vector<Observation>& obs) {
        std::vector<ResultRecord> recs;
        for (std::size_t i = 0; i < levels.size(); ++i) {
          const auto s = summarize(column(obs, i));
          Eigen::VectorXd u(1);
          u << levels[i] / std::sqrt(m0);
          const double pred = alpha_constant(d, 1, u).alpha * std::sqrt(m2 / m0);
          recs.push_back(make_record(d == 1 ? "crossings_per_length" : "length_per_area", levels[i], CheckKind::Abs,
                                     pred, rel * pred, s.mean, s.se_mean, "Kac-Rice mean"));
        }
        return recs;
      };
      return p;
    }});
  }
  return plan;
}

// ---------------------------------------------------------------- chaos2-cancellation-sweep

json sweep_defaults(int) {
  return {{"replicates", 2},
          {"resolution", {{"gaussian_per_axis", 48}}},
          {"params",
           {{"radius_factors", {0.5, 0.75, 1.0, 1.25, 1.5}}, {"randomized", 20}, {"h3_mc_samples", 100000}}}};
}

SphereDensity scaled_sphere(int d, double factor, int k) {
  return isotropic_sphere(d, factor * random_wave_radius(d), HermitianForm::identity(k));
}

AtomicMeasure sphere_atoms(int d, double radius, int n, const HermitianForm& form, double mass) {
  AtomicMeasure m;
  m.dim_freq = d;
  m.dim_target = form.dim();
  const SphereRule rule = sphere_rule(d, n);
  for (std::size_t i = 0; i < rule.directions.size(); ++i)
    m.atoms.push_back({radius * rule.directions[i], (mass * rule.weights[i]) * form});
  return m;
}

ExperimentPlan sweep_plan(const ExperimentConfig& cfg) {
  const int d = cfg.d;
  const int k = cfg.k;
  if (d < 2) throw ConfigError("chaos2-cancellation-sweep: d must be 2 or 3");
  const auto factors = cfg.params.at("radius_factors").get<std::vector<double>>();
  const int randomized = cfg.params.value("randomized", 20);
  const std::size_t h3_samples = cfg.params.value("h3_mc_samples", std::size_t{1000000});
  const int gauss_n = cfg.resolution.value("gaussian_per_axis", 48);
  const double rw = random_wave_radius(d);

  auto verdict_records = [](const std::string& name, const SpectralMeasure& psi, const NodalChaosCoeffs& c,
                            bool expected) {
    const CancellationVerdict v = cancellation_verdict(psi, c);
    std::vector<ResultRecord> recs;
    recs.push_back(make_record("verdict:" + name, 0.0, CheckKind::Abs, expected ? 1.0 : 0.0, 0.0,
                               v.cancels ? 1.0 : 0.0, 0.0, "1 = second chaos cancels"));
    recs.push_back(make_record("cone_agreement:" + name, 0.0, CheckKind::Abs, 1.0, 0.0, v.agrees ? 1.0 : 0.0, 0.0,
                               "integrand verdict equals image-in-cone verdict"));
    recs.push_back(make_record("integrand_sup:" + name, 0.0, CheckKind::Info, 0.0, 0.0, v.sup, 0.0,
                               "scale " + std::to_string(v.scale)));
    return recs;
  };
  auto prediction_only = [](std::function<std::vector<ResultRecord>()> fn) {
    PreparedPoint p;
    p.finish = [fn](const std::vector<Observation>&) { return fn(); };
    return p;
  };

  ExperimentPlan plan;
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(k);
  for (double f : factors) {
    plan.points.push_back({"sphere", [=]() {
      return prediction_only([=]() {
        const NodalChaosCoeffs c = chaos_coeffs(Hypothesis::H1, d, k, u0);
        auto recs = verdict_records("sphere_" + std::to_string(f), scaled_sphere(d, f, k), c, f == 1.0);
        for (auto& r : recs) r.x = f;
        return recs;
      });
    }});
  }
  plan.points.push_back({"two_radius", [=]() {
    return prediction_only([=]() {
      const NodalChaosCoeffs c = chaos_coeffs(Hypothesis::H1, d, k, u0);
      AtomicMeasure m = sphere_atoms(d, rw, 64, HermitianForm::identity(k), 0.5);
      const AtomicMeasure outer = sphere_atoms(d, 2.0 * rw, 64, HermitianForm::identity(k), 0.5);
      m.atoms.insert(m.atoms.end(), outer.atoms.begin(), outer.atoms.end());
      return verdict_records("two_radius", m, c, false);
    });
  }});
  plan.points.push_back({"gaussian", [=]() {
    return prediction_only([=]() {
      if (k != 1) return std::vector<ResultRecord>{};
      const NodalChaosCoeffs c = chaos_coeffs(Hypothesis::H1, d, 1, u0);
      const LebesgueDensity g = gaussian_covariance_density(d, 1.0, gauss_n, 6.0);
      auto recs = verdict_records("gaussian", g, c, false);
      const Chaos2Limit lim = limit_variance_chaos2(jet_lift(SpectralMeasure(g)), c.f2);
      recs.push_back(make_record("chaos2_limit:gaussian", 0.0, CheckKind::Gt, 0.0, 0.0, lim.value, 0.0,
                                 lim.diverged ? "diverged" : "finite"));
      return recs;
    });
  }});
  plan.points.push_back({"h3", [=]() {
    return prediction_only([=]() {
      McSpec mc;
      mc.samples = h3_samples;
      mc.seed = derive_seed(cfg.master_seed, cfg.experiment, 1000, 0);
      std::vector<ResultRecord> recs;
      const SpectralMeasure wave = random_wave(d);
      const auto hc = hessian_constants(d, wave);
      ChaosExtras ex;
      ex.beta = hc.beta;
      ex.gamma = hc.gamma;
      ex.mc = mc;
      auto a = verdict_records("h3_random_wave", wave, chaos_coeffs(Hypothesis::H3, d, d, {}, ex), true);
      recs.insert(recs.end(), a.begin(), a.end());
      const LebesgueDensity g = gaussian_covariance_density(d, 1.0, gauss_n, 6.0);
      const auto hg = hessian_constants(d, g);
      ex.beta = hg.beta;
      ex.gamma = hg.gamma;
      auto b = verdict_records("h3_gaussian", g, chaos_coeffs(Hypothesis::H3, d, d, {}, ex), false);
      recs.insert(recs.end(), b.begin(), b.end());
      return recs;
    });
  }});
  for (int i = 0; i < randomized; ++i) {
    plan.points.push_back({"random", [=]() {
      return prediction_only([=]() {
        Rng rng(derive_seed(cfg.master_seed, cfg.experiment, 2000 + i, 0));
        const bool on_root = i % 2 == 0;
        AtomicMeasure m;
        m.dim_freq = d;
        m.dim_target = k;
        const int pairs = 3 + static_cast<int>(uniform01(rng) * 6);
        std::vector<double> dir(d);
        for (int p = 0; p < pairs; ++p) {
          uniform_on_sphere(rng, 1.0, dir);
          double radius = rw;
          if (!on_root && p == 0) radius *= uniform01(rng) < 0.5 ? 0.5 + 0.4 * uniform01(rng) : 1.1 + 0.5 * uniform01(rng);
          Eigen::VectorXd xi = Eigen::Map<Eigen::VectorXd>(dir.data(), d) * radius;
          Eigen::MatrixXcd a(k, k);
          for (int r = 0; r < k; ++r)
            for (int c2 = 0; c2 < k; ++c2) a(r, c2) = cdouble(standard_normal(rng), standard_normal(rng));
          const HermitianForm form(a * a.adjoint());
          m.atoms.push_back({xi, form});
          m.atoms.push_back({Eigen::VectorXd(-xi), form.conj()});
        }
        const NodalChaosCoeffs c = chaos_coeffs(Hypothesis::H1, d, k, u0);
        auto recs = verdict_records("random_" + std::to_string(i), m, c, on_root);
        for (auto& r : recs) r.x = i;
        return recs;
      });
    }});
  }
  return plan;
}

// ---------------------------------------------------------------- berry-scaling

json berry_defaults(int) {
  return {{"measure", {{"kind", "random_wave"}, {"dim_freq", 2}}},
          {"lambdas", {16.0, 32.0, 64.0}},
          {"replicates", 2000},
          {"resolution", {{"grid_step", 0.25}, {"n_atoms", 1024}}},
          {"tolerances", {{"spread", 0.30}}},
          {"params", {{"test_function", "ball"}, {"berry_samples", 1000000}}}};
}

ExperimentPlan berry_plan(const ExperimentConfig& cfg) {
  if (cfg.d != 2) throw ConfigError("berry-scaling: d must be 2");
  const double h = cfg.resolution.at("grid_step").get<double>();
  const int n_atoms = cfg.resolution.value("n_atoms", 1024);
  const double spread = cfg.tolerances.value("spread", 0.30);
  const std::string phi_name = cfg.params.value("test_function", std::string("ball"));
  const std::size_t berry_samples = cfg.params.value("berry_samples", std::size_t{1000000});

  auto model_cache = std::make_shared<std::shared_ptr<const FieldModel>>();
  auto get_model = [cfg, n_atoms, model_cache]() {
    if (!*model_cache) {
      const AtomicMeasure mu = to_atomic(measure_from_json(cfg.measure), n_atoms);
      if (mu.dim_freq != 2 || mu.dim_target != 1) throw ConfigError("berry-scaling: scalar planar measure required");
      *model_cache = std::make_shared<const FieldModel>(mu, "berry");
    }
    return *model_cache;
  };

  ExperimentPlan plan;
  for (double lambda : cfg.lambdas) {
    plan.points.push_back({"lambda=" + std::to_string(lambda), [=]() {
      const auto model = get_model();
      const TestFunction phi = TestFunction::from_name(phi_name, 2);
      auto window = std::make_shared<NodalWindow>(*model, phi, lambda, Observable::Length2D, h);
      PreparedPoint p;
      p.replicates = cfg.replicates;
      p.replicate = [=](std::size_t, std::uint64_t seed) {
        FieldRealization real(model, seed);
        return Observation{window->evaluate(real, 0.0).value};
      };
      p.finish = [=](const std::vector<Observation>& obs) {
        const auto s = summarize(column(obs, 0));
        const double lg = std::log(lambda);
        return std::vector<ResultRecord>{
            make_record("variance", lg, CheckKind::Info, 0.0, 0.0, s.variance, s.se_variance, "x = log lambda"),
            make_record("var_over_log", lg, CheckKind::Info, 0.0, 0.0, s.variance / lg, s.se_variance / lg,
                        "x = log lambda"),
            make_record("mean", lg, CheckKind::Info, 0.0, 0.0, s.mean, s.se_mean, "x = log lambda")};
      };
      return p;
    }});
  }
  plan.points.push_back({"certificate", [=]() {
    PreparedPoint p;
    p.finish = [=](const std::vector<Observation>&) {
      const SphereDensity wave = random_wave(2);
      const NodalChaosCoeffs c = chaos_coeffs(Hypothesis::H1, 2, 1, Eigen::VectorXd::Zero(1));
      BerrySpec spec;
      spec.samples = berry_samples;
      spec.seed = derive_seed(cfg.master_seed, cfg.experiment, 999, 0);
      const BerryRate br = berry_fourth_chaos_rate(2, wave, c, spec);
      return std::vector<ResultRecord>{
          make_record("certificate_min", 0.0, CheckKind::Gt, 0.0, 0.0, br.certificate_min, 0.0,
                      "min over theta of the restricted fourth-chaos integrand"),
          make_record("restricted_rate", 0.0, CheckKind::Info, 0.0, 0.0, br.rate, br.se,
                      "restricted fourth-chaos lower bound for Var / log lambda")};
    };
    return p;
  }});
  plan.finalize = [spread](const std::vector<ResultRecord>& recs) {
    std::vector<double> v;
    double x = 0.0;
    for (const auto& r : recs)
      if (r.series == "var_over_log" && std::isfinite(r.simulated)) {
        v.push_back(r.simulated);
        x = r.x;
      }
    if (v.size() < 2) return std::vector<ResultRecord>{failure("var_over_log_spread", "fewer than two scales")};
    return std::vector<ResultRecord>{make_record("var_over_log_spread", x, CheckKind::Le, spread, 0.0,
                                                 relative_spread(v), 0.0, "max |v - mean| / mean")};
  };
  return plan;
}

// ---------------------------------------------------------------- level-u-chaos1

json level_defaults(int) {
  return {{"measure", {{"kind", "gaussian_covariance"}, {"dim_freq", 1}, {"scale", 1.0}, {"per_axis", 2048}}},
          {"lambdas", {50.0, 200.0}},
          {"replicates", 1000},
          {"resolution", {{"grid_step", 0.05}, {"n_atoms", 0}}},
          {"tolerances", {{"relative", 0.15}, {"z", 3.0}}},
          {"params", {{"level", 1.0}, {"test_function", "ball"}}}};
}

ExperimentPlan level_plan(const ExperimentConfig& cfg) {
  if (cfg.d != 1) throw ConfigError("level-u-chaos1: d must be 1");
  const double h = cfg.resolution.at("grid_step").get<double>();
  const int n_atoms = cfg.resolution.value("n_atoms", 0);
  const double rel = cfg.tolerances.value("relative", 0.15);
  const double z = cfg.tolerances.value("z", 3.0);
  const double level = cfg.params.value("level", 1.0);
  const std::string phi_name = cfg.params.value("test_function", std::string("ball"));

  auto cache = std::make_shared<std::pair<SpectralMeasure, std::shared_ptr<const FieldModel>>>();
  auto get_model = [cfg, n_atoms, cache]() {
    if (!cache->second) {
      cache->first = measure_from_json(cfg.measure);
      const AtomicMeasure mu = to_atomic(cache->first, n_atoms);
      if (mu.dim_freq != 1 || mu.dim_target != 1) throw ConfigError("level-u-chaos1: scalar 1-d measure required");
      const double reach = TestFunction::from_name(cfg.params.value("test_function", std::string("ball")), 1).support_radius();
      check_period(cache->first, mu, 2.0 * reach * cfg.lambdas.back(), "level-u-chaos1");
      cache->second = std::make_shared<const FieldModel>(mu, "level-u");
    }
    return cache->second;
  };

  ExperimentPlan plan;
  for (double lambda : cfg.lambdas) {
    plan.points.push_back({"lambda=" + std::to_string(lambda), [=]() {
      const auto model = get_model();
      const TestFunction phi = TestFunction::from_name(phi_name, 1);
      auto window = std::make_shared<NodalWindow>(*model, phi, lambda, Observable::Zeros1D, h);
      auto quad = std::make_shared<WindowQuadrature>(*model, phi, lambda, h, 0);
      const JetFunction identity = [](const JetView& j) { return j.value[0]; };
      PreparedPoint p;
      p.replicates = cfg.replicates;
      p.replicate = [=](std::size_t, std::uint64_t seed) {
        FieldRealization real(model, seed);
        return Observation{window->evaluate(real, level).value, quad->apply(real, identity).value};
      };
      p.finish = [=](const std::vector<Observation>& obs) {
        const auto zs = column(obs, 0), ws = column(obs, 1);
        const auto sz = summarize(zs), sw = summarize(ws);
        const double cov = sample_covariance(zs, ws);
        const double slope = cov / sw.variance;
        std::vector<double> resid(zs.size());
        for (std::size_t i = 0; i < zs.size(); ++i) resid[i] = (zs[i] - sz.mean) - slope * (ws[i] - sw.mean);
        const double se_slope = std::sqrt(summarize(resid).variance / (zs.size() * sw.variance));

        const SpectralMeasure& mu = cache->first;
        const AtomicMeasure atoms = to_atomic(mu, n_atoms);
        const auto [m0, m2] = scalar_moments(atoms);
        Eigen::VectorXd u(1);
        u << level / std::sqrt(m0);
        const double alpha = alpha_constant(1, 1, u).alpha * std::sqrt(m2 / m0);
        double sigma0 = 0.0;
        if (const auto* leb = std::get_if<LebesgueDensity>(&mu)) {
          std::size_t best = 0;
          for (std::size_t i = 1; i < leb->values.size(); ++i)
            if (leb->grid.node(i).norm() < leb->grid.node(best).norm()) best = i;
          sigma0 = leb->values[best](0, 0).real();
        }
        // level in units of the standard deviation: f_1 = alpha_u u / sqrt(m0) per unit of Y
        const double pred_slope = alpha * u(0) / std::sqrt(m0);
        const double pred_var = limit_variance_chaos1(HermitianForm::scalar(sigma0), u, alpha) / m0;
        const double sim_var = slope * slope * sw.variance;
        const double se_var = 2.0 * std::abs(slope) * se_slope * sw.variance;
        return std::vector<ResultRecord>{
            make_record("slope", lambda, CheckKind::Abs, pred_slope, z * se_slope, slope, se_slope,
                        "regression of Z on the smoothed field"),
            make_record("chaos1_variance", lambda, CheckKind::Abs, pred_var, rel * pred_var, sim_var, se_var,
                        "alpha_u^2 Sigma(0)(u, u)"),
            make_record("total_variance", lambda, CheckKind::Info, 0.0, 0.0, sz.variance, sz.se_variance, ""),
            make_record("smoothed_field_variance", lambda, CheckKind::Info, sigma0, 0.0, sw.variance, sw.se_variance,
                        "tends to Sigma(0)")};
      };
      return p;
    }});
  }
  return plan;
}

// ---------------------------------------------------------------- hessian-constants

json hessian_defaults(int) {
  return {{"replicates", 2},
          {"resolution", {{"gaussian_per_axis", 64}}},
          {"tolerances", {{"beta_relative", 0.02}, {"constraint", 1e-10}, {"z", 3.0}}},
          {"params", {{"dims", {2, 3}}, {"mc_samples", 200000}}}};
}

ExperimentPlan hessian_plan(const ExperimentConfig& cfg) {
  const auto dims = cfg.params.at("dims").get<std::vector<int>>();
  const std::size_t samples = cfg.params.value("mc_samples", std::size_t{200000});
  const double beta_rel = cfg.tolerances.value("beta_relative", 0.02);
  const double ctol = cfg.tolerances.value("constraint", 1e-10);
  const double z = cfg.tolerances.value("z", 3.0);
  const int gauss_n = cfg.resolution.value("gaussian_per_axis", 64);
  ExperimentPlan plan;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int d = dims[i];
    plan.points.push_back({"d=" + std::to_string(d), [=]() {
      PreparedPoint p;
      p.finish = [=](const std::vector<Observation>&) {
        McSpec mc;
        mc.samples = samples;
        mc.seed = derive_seed(cfg.master_seed, cfg.experiment, i, 0);
        const auto hc = hessian_constants(d, random_wave(d), -1, mc);
        std::vector<ResultRecord> recs;
        recs.push_back(make_record("beta_quadrature", d, CheckKind::Abs, hc.beta0, 1e-9, hc.beta, 0.0,
                                   "random wave: beta = d / (d + 2)"));
        recs.push_back(make_record("beta_mc", d, CheckKind::Abs, hc.beta0, beta_rel * hc.beta0, hc.beta_mc,
                                   hc.beta_se, "field-synthesis estimate"));
        mc.seed = child_seed(mc.seed, 1);
        for (int sign : {-1, 1}) {
          const double gamma = gamma_constant(d, sign);
          const std::string tag = sign < 0 ? "minus" : "plus";
          recs.push_back(make_record("gamma_quadratic_" + tag, d, CheckKind::Le, 0.0, 1e-12,
                                     std::abs(gamma_quadratic_residual(d, gamma)), 0.0, ""));
          ChaosExtras ex;
          ex.beta = hc.beta;
          ex.gamma = gamma;
          ex.mc = mc;
          const NodalChaosCoeffs c = chaos_coeffs(Hypothesis::H3, d, d, {}, ex);
          recs.push_back(make_record("constraint_" + tag, d, CheckKind::Le, 0.0, ctol,
                                     std::abs(h3_constraint_residual(d, c.A, c.B, gamma, c.alpha_u)), 0.0,
                                     "A(1 - 2g/d + g^2/d) + B(1 - g)^2 - 2 beta0 alpha / d"));
          const H3Constants h3 = h3_constants_mc(d, hc.beta, gamma, mc);
          recs.push_back(make_record("B_crosscheck_" + tag, d, CheckKind::Abs, h3.B,
                                     z * h3.B_gap_se, h3.B_mc,
                                     h3.B_se, "B from the constraint vs direct MC"));
        }
        return recs;
      };
      return p;
    }});
  }
  plan.points.push_back({"gaussian", [=]() {
    PreparedPoint p;
    p.finish = [=](const std::vector<Observation>&) {
      McSpec mc;
      mc.samples = samples;
      mc.seed = derive_seed(cfg.master_seed, cfg.experiment, 100, 0);
      const auto hc = hessian_constants(2, gaussian_covariance_density(2, 1.0, gauss_n, 6.0), -1, mc);
      return std::vector<ResultRecord>{
          make_record("beta_gaussian_quadrature", 2, CheckKind::Gt, hc.beta0, 0.0, hc.beta, 0.0, "beta > beta0"),
          make_record("beta_gaussian_mc", 2, CheckKind::Abs, hc.beta, z * hc.beta_se, hc.beta_mc, hc.beta_se,
                      "MC vs quadrature")};
    };
    return p;
  }});
  return plan;
}

// ---------------------------------------------------------------- conv-densities

json conv_defaults(int) {
  return {{"replicates", 2},
          {"tolerances", {{"histogram_relative", 0.03}, {"log_spread", 0.10}, {"l2_relative", 0.05}}},
          {"params",
           {{"pairs", 1000000},
            {"shells", 16},
            {"radii_d2", {0.1, 0.03, 0.01}},
            {"radii_d3", {0.1, 0.05, 0.025}},
            {"conv4_samples", 4000000}}}};
}

ExperimentPlan conv_plan(const ExperimentConfig& cfg) {
  const std::size_t pairs = cfg.params.value("pairs", std::size_t{1000000});
  const int shells = cfg.params.value("shells", 16);
  const auto radii2 = cfg.params.at("radii_d2").get<std::vector<double>>();
  const auto radii3 = cfg.params.at("radii_d3").get<std::vector<double>>();
  const std::size_t c4 = cfg.params.value("conv4_samples", std::size_t{4000000});
  const double hist_rel = cfg.tolerances.value("histogram_relative", 0.03);
  const double log_spread = cfg.tolerances.value("log_spread", 0.10);
  const double l2_rel = cfg.tolerances.value("l2_relative", 0.05);
  ExperimentPlan plan;
  for (int d : {3, 2}) {
    plan.points.push_back({"histogram d=" + std::to_string(d), [=]() {
      PreparedPoint p;
      p.finish = [=](const std::vector<Observation>&) {
        const double lo = 0.2, hi = d == 3 ? 1.8 : 1.7;
        std::vector<double> edges(shells + 1);
        for (int i = 0; i <= shells; ++i) edges[i] = lo + (hi - lo) * i / shells;
        const auto hist =
            sphere_pair_histogram(d, 1.0, edges, pairs, derive_seed(cfg.master_seed, cfg.experiment, d, 0));
        std::vector<ResultRecord> recs;
        for (int i = 0; i < shells; ++i) {
          const double pred = sphere_conv_shell_average(d, 1.0, edges[i], edges[i + 1]);
          recs.push_back(make_record("pair_density_d" + std::to_string(d), 0.5 * (edges[i] + edges[i + 1]),
                                     CheckKind::Abs, pred, hist_rel * pred, hist.density[i], hist.se[i],
                                     "shell average of the closed-form density"));
        }
        return recs;
      };
      return p;
    }});
  }
  plan.points.push_back({"four-fold d=2", [=]() {
    PreparedPoint p;
    p.finish = [=](const std::vector<Observation>&) {
      const auto est = conv4_near_zero(2, radii2, c4, derive_seed(cfg.master_seed, cfg.experiment, 20, 0));
      std::vector<ResultRecord> recs;
      std::vector<double> v;
      for (std::size_t i = 0; i < radii2.size(); ++i) {
        const double lg = std::abs(std::log(radii2[i]));
        v.push_back(est.ball_ratios[i] / lg);
        recs.push_back(make_record("conv4_ratio_over_log_d2", radii2[i], CheckKind::Info, 0.0, 0.0, v.back(),
                                   est.mc_error[i] / lg, "ball ratio / |log R|"));
      }
      recs.push_back(make_record("conv4_log_spread_d2", radii2.back(), CheckKind::Le, log_spread, 0.0,
                                 relative_spread(v), 0.0, "max |v - mean| / mean"));
      // d(ratio) / d log(1/R) tends to 1/(2 pi^3) (small |y|) + 1/(4 pi^3) (the |y| = 2 shell)
      for (std::size_t i = 1; i < radii2.size(); ++i) {
        const double dl = std::log(radii2[i - 1] / radii2[i]);
        const double slope = (est.ball_ratios[i] - est.ball_ratios[i - 1]) / dl;
        const double se = std::hypot(est.mc_error[i], est.mc_error[i - 1]) / dl;
        recs.push_back(make_record("conv4_log_slope_d2", radii2[i], CheckKind::Info, 3.0 / (4.0 * std::pow(kPi, 3)),
                                   0.0, slope, se, "increment per unit log(1/R)"));
      }
      return recs;
    };
    return p;
  }});
  plan.points.push_back({"four-fold d=3", [=]() {
    PreparedPoint p;
    p.finish = [=](const std::vector<Observation>&) {
      const auto est = conv4_near_zero(3, radii3, c4, derive_seed(cfg.master_seed, cfg.experiment, 30, 0));
      const double pred = sphere_conv_l2_squared(3, 1.0);
      std::vector<ResultRecord> recs;
      for (std::size_t i = 0; i < radii3.size(); ++i)
        recs.push_back(make_record("conv4_ratio_d3", radii3[i], CheckKind::Abs, pred, l2_rel * pred,
                                   est.ball_ratios[i], est.mc_error[i], "vs |sigma * sigma|_2^2"));
      return recs;
    };
    return p;
  }});
  return plan;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> reg = {
      {"cosine-cancellation", "Var of (1/sqrt(lambda)) int f(X) for the pair process (Y(t), Y(t+pi))", 1,
       cosine_defaults, cosine_plan},
      {"rice-means", "Mean crossings (d = 1) or nodal length (d = 2) per unit volume", 1, rice_defaults, rice_plan},
      {"chaos2-cancellation-sweep", "Second-chaos cancellation verdicts over a family of spectral measures", 2,
       sweep_defaults, sweep_plan},
      {"berry-scaling", "Nodal-length variance over growing discs of a planar random wave", 2, berry_defaults,
       berry_plan},
      {"level-u-chaos1", "First-chaos share of the level-u crossing variance", 1, level_defaults, level_plan},
      {"hessian-constants", "Hessian constants beta, gamma and the critical-point chaos constraint", 2,
       hessian_defaults, hessian_plan},
      {"conv-densities", "Sphere convolution densities and four-fold densities near zero", 3, conv_defaults,
       conv_plan},
  };
  return reg;
}

const ExperimentInfo& find_experiment(const std::string& id) {
  for (const auto& e : experiment_registry())
    if (e.id == id) return e;
  throw ConfigError("unknown experiment '" + id + "'");
}

}  // namespace chaosvar
