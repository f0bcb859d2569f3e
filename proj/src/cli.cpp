#include "chaos_bounds/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "chaos_bounds/deviations.hpp"
#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/gaussian_bounds.hpp"
#include "chaos_bounds/json_io.hpp"
#include "chaos_bounds/progeny.hpp"
#include "chaos_bounds/simulate.hpp"
#include "format_util.hpp"

namespace chaos_bounds {

namespace {

struct Outcome {
  std::string text;
  int code = kExitOk;
};

using Action = std::function<Outcome()>;

Outcome emit(const Json& j) { return {j.dump(2) + "\n", kExitOk}; }

Outcome emit_verification(const VerificationReport& r) {
  return {report_json(r).dump(2) + "\n", r.pass ? kExitOk : kExitVerification};
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  const auto value = std::stoull(text, &used, 0);
  if (used != text.size()) throw std::invalid_argument("trailing characters in seed");
  return value;
}

std::string config_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return detail::format_double(v.get<double>());
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) {
      if (!joined.empty()) joined += ',';
      joined += config_value(e);
    }
    return joined;
  }
  throw CLI::ValidationError("config", "unsupported value " + v.dump());
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends the entries of a JSON config file as flags; flags already on the
// command line win. A "command" entry supplies the subcommand path.
std::vector<std::string> merge_config(std::vector<std::string> args,
                                      const std::vector<std::string>& top_level) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  Json config;
  try {
    config = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!config.is_object()) throw CLI::ValidationError("--config", "config must be a JSON object");

  for (const auto& [key, value] : config.items()) {
    if (key == "command") {
      const bool has_command = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return std::find(top_level.begin(), top_level.end(), a) != top_level.end();
      });
      if (!has_command) {
        std::istringstream words(value.get<std::string>());
        std::vector<std::string> prefix{std::istream_iterator<std::string>(words), {}};
        args.insert(args.begin(), prefix.begin(), prefix.end());
      }
      continue;
    }
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(config_value(value));
  }
  return args;
}

/// Flags describing a cluster (compound Poisson / Hawkes) window.
struct ClusterArgs {
  double lambda = 1.0;
  std::optional<double> T;
  std::optional<double> lambda_leb;
  std::optional<double> h;
  std::string offspring;
  double beta = 1.0;
  std::string mark = "const:1";
  std::int64_t cap = kDefaultProgenyCap;

  void attach(CLI::App* app) {
    app->add_option("--lambda", lambda, "immigrant intensity")->capture_default_str();
    app->add_option("--T", T, "window length (0, T]");
    app->add_option("--lambda-leb", lambda_leb, "lambda * T, alternative to --T");
    app->add_option("--h", h, "Poisson offspring mean (Hawkes branching ratio)");
    app->add_option("--offspring", offspring, "offspring law: poisson:h | binomial:h,p | none");
    app->add_option("--beta", beta, "exponential delay rate")->capture_default_str();
    app->add_option("--mark", mark, "mark law")->capture_default_str();
    app->add_option("--progeny-cap", cap, "cluster size cap")->capture_default_str();
  }

  OffspringLaw offspring_law() const {
    if (h && !offspring.empty()) throw DomainError("give either --h or --offspring, not both");
    if (h) return *h == 0.0 ? no_offspring() : OffspringLaw{PoissonOffspring{*h}};
    if (!offspring.empty()) return parse_offspring(offspring);
    return no_offspring();
  }

  ClusterModel model(bool barren) const {
    ClusterModel m;
    m.lambda = lambda;
    if (T && lambda_leb) throw DomainError("give either --T or --lambda-leb, not both");
    if (T) {
      m.T = *T;
    } else if (lambda_leb) {
      if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
      m.T = *lambda_leb / lambda;
    } else {
      throw DomainError("window length needs --T or --lambda-leb");
    }
    m.offspring = barren ? no_offspring() : offspring_law();
    m.delay.beta = beta;
    m.mark = parse_mark(mark);
    m.progeny_cap = cap;
    return m;
  }
};

struct InterferenceArgs {
  double lambda = 1.0;
  double R = 1.0;
  double alpha = 4.0;
  std::string power = "exp:1";
  std::optional<double> tail_eps;

  void attach(CLI::App* app, bool with_lambda = true) {
    if (with_lambda) app->add_option("--lambda", lambda, "node intensity")->capture_default_str();
    app->add_option("--R", R, "near-field radius")->capture_default_str();
    app->add_option("--alpha", alpha, "path-loss exponent")->capture_default_str();
    app->add_option("--power", power, "signal power law")->capture_default_str();
    app->add_option("--tail-eps", tail_eps, "far-field mean budget (default 1% of the mean)");
  }

  InterferenceModel model() const {
    InterferenceModel m;
    m.lambda = lambda;
    m.R = R;
    m.alpha = alpha;
    m.power = parse_mark(power);
    m.tail_eps = tail_eps;
    return m;
  }
};

DeltaResult default_delta(const OffspringLaw& law, double lambda_leb) {
  if (const auto* p = std::get_if<PoissonOffspring>(&law)) return delta_poisson(p->mean, lambda_leb);
  if (const auto* b = std::get_if<BinomialOffspring>(&law)) {
    return delta_binomial(b->trials, b->p, lambda_leb);
  }
  throw DomainError("no closed-form Delta for this offspring law; pass --delta");
}

ProgenyLaw progeny_law(double h, std::optional<double> p) {
  if (!p) return BorelLaw{h};
  if (h != std::floor(h) || h < 1.0) throw DomainError("Consul law needs an integer h >= 1");
  return ConsulLaw{static_cast<int>(h), *p};
}

void add_bounds(CLI::App& app, Action& action) {
  auto* bounds = app.add_subcommand("bounds", "Gaussian approximation bounds");
  bounds->require_subcommand(1);

  auto* fc = bounds->add_subcommand("first-chaos", "first chaos with a normalised kernel");
  auto m3 = std::make_shared<double>();
  auto m4 = std::make_shared<double>();
  fc->add_option("--m3", *m3, "∫|f|³")->required();
  fc->add_option("--m4", *m4, "∫f⁴")->required();
  fc->callback([=, &action] { action = [=] { return emit(report_json(first_chaos_bounds(*m3, *m4))); }; });

  auto* sn = bounds->add_subcommand("shotnoise", "Poisson shot noise");
  auto km = std::make_shared<KernelMoments>();
  sn->add_option("--i2", km->i2, "∫λ E H²")->required();
  sn->add_option("--i3", km->i3_abs, "∫λ E|H|³")->required();
  sn->add_option("--i4", km->i4, "∫λ E H⁴")->required();
  sn->callback([=, &action] { action = [=] { return emit(report_json(shotnoise_bounds(*km))); }; });

  struct RegionArgs {
    double lambda = 0.0;
    double leb = 0.0;
    std::string mark = "const:1";
  };
  auto attach_region = [](CLI::App* sub, RegionArgs& r) {
    sub->add_option("--lambda", r.lambda, "intensity")->required();
    sub->add_option("--leb", r.leb, "Leb(B ∩ C)")->required();
    sub->add_option("--mark", r.mark, "mark law")->capture_default_str();
  };

  auto* cp = bounds->add_subcommand("compound", "compound cluster process");
  auto cr = std::make_shared<RegionArgs>();
  auto cp_offspring = std::make_shared<std::string>("none");
  auto ez3 = std::make_shared<std::optional<double>>();
  auto ez4 = std::make_shared<std::optional<double>>();
  attach_region(cp, *cr);
  cp->add_option("--offspring", *cp_offspring, "offspring law for the cluster size")
      ->capture_default_str();
  cp->add_option("--ez3", *ez3, "E Z³ (overrides --offspring)");
  cp->add_option("--ez4", *ez4, "E Z⁴ (overrides --offspring)");
  cp->callback([=, &action] {
    action = [=] {
      const Region region{cr->lambda, cr->leb};
      const auto mark = parse_mark(cr->mark);
      if (ez3->has_value() != ez4->has_value()) throw DomainError("--ez3 and --ez4 go together");
      if (*ez3) return emit(report_json(compound_cluster_bounds(region, mark, **ez3, **ez4)));
      return emit(report_json(hawkes_bounds(region, parse_offspring(*cp_offspring), mark)));
    };
  });

  auto* hp = bounds->add_subcommand("hawkes-poisson", "Hawkes process, Poisson offspring");
  auto hpr = std::make_shared<RegionArgs>();
  auto hp_h = std::make_shared<double>();
  attach_region(hp, *hpr);
  hp->add_option("--h", *hp_h, "offspring mean")->required();
  hp->callback([=, &action] {
    action = [=] {
      return emit(report_json(
          hawkes_poisson_bounds({hpr->lambda, hpr->leb}, *hp_h, parse_mark(hpr->mark))));
    };
  });

  auto* hb = bounds->add_subcommand("hawkes-binomial", "Hawkes process, binomial offspring");
  auto hbr = std::make_shared<RegionArgs>();
  auto hb_h = std::make_shared<int>();
  auto hb_p = std::make_shared<double>();
  attach_region(hb, *hbr);
  hb->add_option("--h", *hb_h, "binomial trials")->required();
  hb->add_option("--p", *hb_p, "success probability")->required();
  hb->callback([=, &action] {
    action = [=] {
      return emit(report_json(
          hawkes_binomial_bounds({hbr->lambda, hbr->leb}, *hb_h, *hb_p, parse_mark(hbr->mark))));
    };
  });

  auto* in = bounds->add_subcommand("interference", "planar interference, Hertzian attenuation");
  auto ia = std::make_shared<InterferenceArgs>();
  ia->attach(in);
  in->callback([=, &action] {
    action = [=] {
      return emit(report_json(
          hertzian_interference_bounds(ia->lambda, ia->R, ia->alpha, parse_mark(ia->power))));
    };
  });
}

void add_delta(CLI::App& app, Action& action) {
  auto* delta = app.add_subcommand("delta", "concentration parameter Delta and mark gamma");
  delta->require_subcommand(1);

  auto* po = delta->add_subcommand("poisson", "Delta for Poisson offspring");
  auto po_h = std::make_shared<double>();
  auto po_ll = std::make_shared<double>();
  po->add_option("--h", *po_h, "offspring mean")->required();
  po->add_option("--lambda-leb", *po_ll, "lambda * Leb(B ∩ C)")->required();
  po->callback([=, &action] {
    action = [=] { return emit(report_json(delta_poisson(*po_h, *po_ll))); };
  });

  auto* bi = delta->add_subcommand("binomial", "Delta for binomial offspring");
  auto bi_h = std::make_shared<int>();
  auto bi_p = std::make_shared<double>();
  auto bi_ll = std::make_shared<double>();
  bi->add_option("--h", *bi_h, "binomial trials")->required();
  bi->add_option("--p", *bi_p, "success probability")->required();
  bi->add_option("--lambda-leb", *bi_ll, "lambda * Leb(B ∩ C)")->required();
  bi->callback([=, &action] {
    action = [=] { return emit(report_json(delta_binomial(*bi_h, *bi_p, *bi_ll))); };
  });

  auto* mg = delta->add_subcommand("mark-gamma", "moment growth exponent of a mark law");
  auto mg_mark = std::make_shared<std::string>();
  auto mg_gamma = std::make_shared<std::optional<double>>();
  auto mg_mmax = std::make_shared<int>(12);
  mg->add_option("--mark", *mg_mark, "mark law")->required();
  mg->add_option("--gamma", *mg_gamma, "gamma to verify (required for custom laws)");
  mg->add_option("--m-max", *mg_mmax, "highest order checked")->capture_default_str();
  mg->callback([=, &action] {
    action = [=] {
      const auto mark = parse_mark(*mg_mark);
      Json j;
      j["mark"] = describe(mark);
      if (*mg_gamma) {
        j["gamma"] = **mg_gamma;
      } else {
        j["gamma"] = mark_gamma(mark);
      }
      const auto moments = std::holds_alternative<CustomMark>(mark)
                               ? std::get<CustomMark>(mark).abs_moments
                               : abs_moments(mark, *mg_mmax);
      j["check"] = report_json(verify_mark_gamma(moments, j["gamma"].get<double>(), *mg_mmax));
      j["m_max"] = *mg_mmax;
      return emit(j);
    };
  });
}

void add_tail(CLI::App& app, Action& action) {
  auto* tail = app.add_subcommand("tail", "concentration, deviation and insurance tail bounds");
  tail->require_subcommand(1);

  auto* bci = tail->add_subcommand("bci", "Bernstein-type concentration bound");
  auto b_gamma = std::make_shared<double>();
  auto b_delta = std::make_shared<double>();
  auto b_x = std::make_shared<std::vector<double>>();
  bci->add_option("--gamma", *b_gamma, "gamma")->required();
  bci->add_option("--delta", *b_delta, "Delta")->required();
  bci->add_option("--x", *b_x, "threshold(s), comma separated")->required()->delimiter(',');
  bci->callback([=, &action] {
    action = [=] {
      Json j;
      j["gamma"] = *b_gamma;
      j["delta"] = *b_delta;
      Json rows = Json::array();
      for (double x : *b_x) {
        const auto b = bci_bound(*b_gamma, *b_delta, x);
        rows.push_back({{"x", x}, {"bound", b.value}, {"vacuous", b.vacuous}});
      }
      j["bounds"] = std::move(rows);
      return emit(j);
    };
  });

  struct InsuranceArgs {
    double lambda = 0.0;
    double h = 0.0;
    double mu = 0.0;
    double T = 0.0;
    bool strict = false;
  };
  auto attach_insurance = [](CLI::App* sub, InsuranceArgs& a) {
    sub->add_option("--lambda", a.lambda, "claim arrival intensity")->required();
    sub->add_option("--h", a.h, "branching ratio")->required();
    sub->add_option("--mu", a.mu, "mean claim size")->required();
    sub->add_option("--T", a.T, "horizon")->required();
    sub->add_flag("--strict", a.strict, "reject h outside the proven regime");
  };

  auto* ins = tail->add_subcommand("insurance", "tail of the total loss");
  auto ia = std::make_shared<InsuranceArgs>();
  auto ins_k = std::make_shared<double>();
  attach_insurance(ins, *ia);
  ins->add_option("--k", *ins_k, "excess factor (k > 1)")->required();
  ins->callback([=, &action] {
    action = [=] {
      return emit(report_json(
          insurance_tail_report(ia->lambda, ia->h, ia->mu, ia->T, *ins_k, {ia->strict})));
    };
  });

  auto* iv = tail->add_subcommand("interval", "confidence interval for the total loss");
  auto va = std::make_shared<InsuranceArgs>();
  auto iv_x = std::make_shared<double>();
  attach_insurance(iv, *va);
  iv->add_option("--x", *iv_x, "half-width in standard deviations")->required();
  iv->callback([=, &action] {
    action = [=] {
      return emit(report_json(
          total_loss_interval(va->lambda, va->h, va->mu, va->T, *iv_x, {va->strict})));
    };
  });

  auto* na = tail->add_subcommand("nacc", "window of the Cramér-corrected normal approximation");
  auto n_gamma = std::make_shared<double>();
  auto n_delta = std::make_shared<double>();
  auto n_c0 = std::make_shared<double>(1.0);
  na->add_option("--gamma", *n_gamma, "gamma")->required();
  na->add_option("--delta", *n_delta, "Delta")->required();
  na->add_option("--c0", *n_c0, "constant c0")->capture_default_str();
  na->callback([=, &action] {
    action = [=] { return emit(report_json(nacc_window(*n_gamma, *n_delta, *n_c0))); };
  });

  auto* md = tail->add_subcommand("mdp-rate", "inf of x²/2 over [a, b]");
  auto a = std::make_shared<double>();
  auto b = std::make_shared<double>();
  md->add_option("--a", *a, "left endpoint")->required();
  md->add_option("--b", *b, "right endpoint")->required();
  md->callback([=, &action] {
    action = [=] { return emit(Json{{"a", *a}, {"b", *b}, {"rate_inf", mdp_rate_inf(*a, *b)}}); };
  });

  auto* cu = tail->add_subcommand("cumulant", "cumulant growth condition, order by order");
  auto c_off = std::make_shared<std::string>();
  auto c_mark = std::make_shared<std::string>("const:1");
  auto c_ll = std::make_shared<double>();
  auto c_gamma = std::make_shared<std::optional<double>>();
  auto c_delta = std::make_shared<std::optional<double>>();
  auto c_mmax = std::make_shared<int>(12);
  cu->add_option("--offspring", *c_off, "offspring law")->required();
  cu->add_option("--mark", *c_mark, "mark law")->capture_default_str();
  cu->add_option("--lambda-leb", *c_ll, "lambda * Leb(B ∩ C)")->required();
  cu->add_option("--gamma", *c_gamma, "gamma (default: tabulated for the mark family)");
  cu->add_option("--delta", *c_delta, "Delta (default: closed form for the offspring law)");
  cu->add_option("--m-max", *c_mmax, "highest order checked")->capture_default_str();
  cu->callback([=, &action] {
    action = [=] {
      const auto law = parse_offspring(*c_off);
      const auto mark = parse_mark(*c_mark);
      const double gamma = c_gamma->has_value() ? **c_gamma : mark_gamma(mark);
      const double delta = c_delta->has_value() ? **c_delta : default_delta(law, *c_ll).delta;
      const auto mark_moments = std::holds_alternative<CustomMark>(mark)
                                    ? std::get<CustomMark>(mark).abs_moments
                                    : abs_moments(mark, *c_mmax);
      if (*c_mmax > kMaxProgenyOrder) {
        throw DomainError("m-max must be <= " + std::to_string(kMaxProgenyOrder));
      }
      const auto progeny = progeny_moments(law, *c_mmax);
      Json j;
      j["offspring"] = describe(law);
      j["mark"] = describe(mark);
      j["lambda_leb"] = *c_ll;
      j["gamma"] = gamma;
      j["delta"] = delta;
      j["condition"] = report_json(
          check_cumulant_condition(mark_moments, progeny.moments, *c_ll, gamma, delta, *c_mmax));
      return emit(j);
    };
  });
}

void add_moments(CLI::App& app, Action& action) {
  auto* mom = app.add_subcommand("moments", "Galton-Watson progeny moments");
  mom->require_subcommand(1);

  auto* gw = mom->add_subcommand("gw", "E Z^n, n = 1..N, by the exact recursion");
  auto g_off = std::make_shared<std::string>();
  auto g_n = std::make_shared<int>(4);
  gw->add_option("--offspring", *g_off, "offspring law")->required();
  gw->add_option("--n", *g_n, "highest order")->capture_default_str();
  gw->callback([=, &action] {
    action = [=] {
      const auto law = parse_offspring(*g_off);
      Json j;
      j["offspring"] = describe(law);
      j["moments"] = progeny_moments(law, *g_n).moments;
      return emit(j);
    };
  });

  auto* fa = mom->add_subcommand("factorial", "factorial moments of the offspring law");
  auto f_off = std::make_shared<std::string>();
  auto f_n = std::make_shared<int>(4);
  fa->add_option("--offspring", *f_off, "offspring law")->required();
  fa->add_option("--n", *f_n, "highest order")->capture_default_str();
  fa->callback([=, &action] {
    action = [=] {
      const auto law = parse_offspring(*f_off);
      Json j;
      j["offspring"] = describe(law);
      j["factorial_moments"] = factorial_moments(law, *f_n);
      return emit(j);
    };
  });

  auto* pm = mom->add_subcommand("pmf", "P(Z = k): Borel, or Consul when --p is given");
  auto p_h = std::make_shared<double>();
  auto p_p = std::make_shared<std::optional<double>>();
  auto p_k = std::make_shared<long>();
  pm->add_option("--h", *p_h, "offspring mean (Borel) or trials (Consul)")->required();
  pm->add_option("--p", *p_p, "binomial success probability");
  pm->add_option("--k", *p_k, "total progeny value")->required();
  pm->callback([=, &action] {
    action = [=] {
      const auto law = progeny_law(*p_h, *p_p);
      const double value = std::holds_alternative<BorelLaw>(law)
                               ? borel_pmf(*p_h, *p_k)
                               : consul_pmf(std::get<ConsulLaw>(law).h, **p_p, *p_k);
      return emit(Json{{"law", std::holds_alternative<BorelLaw>(law) ? "borel" : "consul"},
                       {"k", *p_k},
                       {"pmf", value}});
    };
  });

  auto* se = mom->add_subcommand("series", "sum of k^m P(Z = k) with a certified tail");
  auto s_h = std::make_shared<double>();
  auto s_p = std::make_shared<std::optional<double>>();
  auto s_m = std::make_shared<int>();
  auto s_tol = std::make_shared<double>(1e-12);
  se->add_option("--h", *s_h, "offspring mean (Borel) or trials (Consul)")->required();
  se->add_option("--p", *s_p, "binomial success probability");
  se->add_option("--m", *s_m, "moment order")->required();
  se->add_option("--rel-tol", *s_tol, "relative tolerance")->capture_default_str();
  se->callback([=, &action] {
    action = [=] {
      return emit(report_json(progeny_series_detail(progeny_law(*s_h, *s_p), *s_m, *s_tol)));
    };
  });

  auto* ap = mom->add_subcommand("abel-plana", "enclosure of sum e^{-nu k} k^{m-1}");
  auto a_nu = std::make_shared<double>();
  auto a_m = std::make_shared<int>();
  ap->add_option("--nu", *a_nu, "decay rate")->required();
  ap->add_option("--m", *a_m, "order (>= 2)")->required();
  ap->callback([=, &action] {
    action = [=] { return emit(report_json(abel_plana_bound(*a_nu, *a_m))); };
  });
}

struct RunOptions {
  std::size_t reps = 1000;
  unsigned workers = 0;
  std::uint64_t seed = kDefaultSeed;
};

void add_verify(CLI::App& app, Action& action, const RunOptions& run) {
  auto* ver = app.add_subcommand("verify", "Monte Carlo verification of the bounds");
  ver->require_subcommand(1);

  auto* ga = ver->add_subcommand("gauss", "empirical d_K / d_W against the Gaussian bounds");
  auto g_scn = std::make_shared<std::string>("hawkes");
  auto g_cl = std::make_shared<ClusterArgs>();
  auto g_in = std::make_shared<InterferenceArgs>();
  ga->add_option("--scenario", *g_scn, "compound-poisson | hawkes | interference")
      ->check(CLI::IsMember({"compound-poisson", "hawkes", "interference"}))
      ->capture_default_str();
  g_cl->attach(ga);
  g_in->attach(ga, false);
  ga->callback([=, &action, &run] {
    action = [=, &run] {
      Scenario scenario;
      if (*g_scn == "interference") {
        auto m = g_in->model();
        m.lambda = g_cl->lambda;
        scenario = m;
      } else {
        scenario = g_cl->model(*g_scn == "compound-poisson");
      }
      return emit_verification(verify_gaussian_bound(scenario, run.reps, run.seed, run.workers));
    };
  });

  auto* bc = ver->add_subcommand("bci", "empirical tails against the concentration bound");
  auto b_cl = std::make_shared<ClusterArgs>();
  auto b_gamma = std::make_shared<std::optional<double>>();
  auto b_delta = std::make_shared<std::optional<double>>();
  auto b_scale = std::make_shared<double>(1.0);
  auto b_grid = std::make_shared<std::vector<double>>(
      std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0});
  b_cl->attach(bc);
  bc->add_option("--gamma", *b_gamma, "gamma (default: tabulated for the mark family)");
  bc->add_option("--delta", *b_delta, "Delta (default: closed form for the offspring law)");
  bc->add_option("--delta-scale", *b_scale, "multiplier applied to Delta")->capture_default_str();
  bc->add_option("--x-grid", *b_grid, "thresholds, comma separated")->delimiter(',');
  bc->callback([=, &action, &run] {
    action = [=, &run] {
      const auto model = b_cl->model(false);
      const double gamma = b_gamma->has_value() ? **b_gamma : mark_gamma(model.mark);
      const double base =
          b_delta->has_value() ? **b_delta : default_delta(model.offspring, model.lambda * model.T).delta;
      if (!(*b_scale > 0.0)) throw DomainError("delta-scale must be > 0");
      auto report =
          verify_bci(model, gamma, base * *b_scale, *b_grid, run.reps, run.seed, run.workers);
      report.bounds["delta_scale"] = *b_scale;
      return emit_verification(report);
    };
  });

  auto* mo = ver->add_subcommand("moments", "empirical progeny moments against the recursion");
  auto m_off = std::make_shared<std::string>();
  mo->add_option("--offspring", *m_off, "offspring law")->required();
  mo->callback([=, &action, &run] {
    action = [=, &run] {
      return emit_verification(
          verify_moments(parse_offspring(*m_off), run.reps, run.seed, run.workers));
    };
  });
}

void add_sample(CLI::App& app, Action& action, const RunOptions& run) {
  auto* smp = app.add_subcommand("sample", "raw Monte Carlo samples as CSV");
  smp->require_subcommand(1);

  auto csv = [](const std::vector<double>& values) {
    std::ostringstream os;
    write_samples_csv(os, values);
    return Outcome{os.str(), kExitOk};
  };

  auto* pr = smp->add_subcommand("progeny", "total progeny draws");
  auto p_off = std::make_shared<std::string>();
  auto p_cap = std::make_shared<std::int64_t>(kDefaultProgenyCap);
  pr->add_option("--offspring", *p_off, "offspring law")->required();
  pr->add_option("--progeny-cap", *p_cap, "cap")->capture_default_str();
  pr->callback([=, &action, &run] {
    action = [=, &run] {
      const auto law = parse_offspring(*p_off);
      validate(law);
      const std::int64_t cap = *p_cap;
      return csv(replicate(run.reps, run.seed, 0, run.workers, [&law, cap](Rng& rng) {
        return static_cast<double>(sample_progeny(law, rng, cap));
      }));
    };
  });

  auto* cl = smp->add_subcommand("cluster", "V((0, T]) of a compound cluster process");
  auto c_cl = std::make_shared<ClusterArgs>();
  c_cl->attach(cl);
  cl->callback([=, &action, &run] {
    action = [=, &run] {
      const auto model = c_cl->model(false);
      validate(model);
      return csv(replicate(run.reps, run.seed, 0, run.workers,
                           [&model](Rng& rng) { return sample_cluster_window(model, rng); }));
    };
  });

  auto* it = smp->add_subcommand("interference", "interference at the origin");
  auto i_in = std::make_shared<InterferenceArgs>();
  i_in->attach(it);
  it->callback([=, &action, &run] {
    action = [=, &run] {
      const auto model = i_in->model();
      validate(model);
      return csv(replicate(run.reps, run.seed, 0, run.workers,
                           [&model](Rng& rng) { return sample_interference(model, rng); }));
    };
  });
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian approximation and concentration bounds for Poisson cluster functionals",
               "chaos-bounds"};
  app.set_help_flag("--help", "Print this help message and exit");  // --h is a model flag
  app.fallthrough();
  app.require_subcommand(1);

  RunOptions run;
  std::string seed_text;
  std::string output;
  std::string config_path;
  app.add_option("--seed", seed_text, "master seed (decimal or 0x hex; env CHAOS_BOUNDS_SEED)");
  app.add_option("--workers", run.workers, "worker threads (0 = all cores)");
  app.add_option("--reps", run.reps, "replications / draws")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "write the report to this file instead of stdout");
  app.add_option("--config", config_path, "JSON file of flag values; command-line flags win");

  Action action;
  add_bounds(app, action);
  add_delta(app, action);
  add_tail(app, action);
  add_moments(app, action);
  add_verify(app, action, run);
  add_sample(app, action, run);

  try {
    std::vector<std::string> top;
    for (const auto* sub : app.get_subcommands({})) top.push_back(sub->get_name());
    args = merge_config(std::move(args), top);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (!seed_text.empty()) {
      run.seed = parse_seed(seed_text);
    } else if (const char* env = std::getenv("CHAOS_BOUNDS_SEED"); env && *env) {
      run.seed = parse_seed(env);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument&) {
    err << "error: --seed must be an unsigned 64-bit integer\n";
    return kExitUsage;
  } catch (const std::out_of_range&) {
    err << "error: --seed must be an unsigned 64-bit integer\n";
    return kExitUsage;
  }

  Outcome outcome;
  try {
    outcome = action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  if (output.empty()) {
    out << outcome.text;
  } else {
    std::ofstream file(output);
    if (!file) {
      err << "error: cannot write " << output << '\n';
      return kExitUsage;
    }
    file << outcome.text;
  }
  return outcome.code;
}

}  // namespace chaos_bounds
