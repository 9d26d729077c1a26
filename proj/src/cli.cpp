#include "mlebound/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mlebound/bounds.hpp"
#include "mlebound/error.hpp"
#include "mlebound/moments.hpp"
#include "mlebound/montecarlo.hpp"
#include "mlebound/report.hpp"
#include "mlebound/test_function.hpp"

namespace mlebound::cli {

namespace {

struct Options {
  std::string model = "exp-noncanonical";
  std::string formula;
  double theta0 = 2.0;
  long n = 10;
  std::optional<double> d, p, alpha, sigma, mu;
  double epsilon_frac = 0.5;
  long trials = 10000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string h = "paper";
  std::optional<double> h_sup, h_prime_sup;
  std::string format = "human";
  std::string out_path;
  bool bounds_only = false;

  // Raw inputs for --formula theorem, overrides for expfam.
  std::optional<double> fisher, q_prime, third_moment, mse, epsilon, sup_q_second;
  bool q_identity = false;
};

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw DomainError("model parameter " + key + " is not a number: '" + text + "'");
  }
  return v;
}

ModelSpec model_spec(const Options& o) {
  ModelSpec base;
  if (o.d) base.d = *o.d;
  if (o.p) base.p = *o.p;
  if (o.alpha) base.alpha = *o.alpha;
  if (o.sigma) base.sigma = *o.sigma;
  if (o.mu) base.mu = *o.mu;
  return parse_model_spec(o.model, base);
}

TestFunction test_function(const Options& o) {
  if (o.h == "norms") {
    if (!o.h_sup || !o.h_prime_sup) {
      throw DomainError("--h norms requires --h-sup and --h-prime-sup");
    }
    return norms_only_test_function(*o.h_sup, *o.h_prime_sup);
  }
  if (o.h_sup || o.h_prime_sup) {
    throw DomainError("--h-sup/--h-prime-sup are only valid with --h norms");
  }
  return test_function_by_name(o.h);
}

double epsilon_from(const Options& o) {
  if (o.epsilon) return *o.epsilon;
  if (!(o.epsilon_frac > 0.0)) throw DomainError("--epsilon-frac must be positive");
  const double scale = std::fabs(o.theta0);
  return scale > 0.0 ? o.epsilon_frac * scale : o.epsilon_frac;
}

BoundBreakdown compute_bound(const Options& o) {
  const TestFunction h = test_function(o);
  const std::string& f = o.formula;
  if (f == "exp-noncanonical") return exp_noncanonical_bound(o.n, h);
  if (f == "exp-canonical") {
    if (o.n < 3) throw DomainError("n must be >= 3 for --formula exp-canonical");
    return exp_canonical_bound(o.n, h);
  }
  if (f == "ar-exp-noncanonical") return ar_bound_exp_noncanonical_breakdown(o.n, h);
  if (f == "gg") {
    const ModelSpec spec = model_spec(o);
    return gg_bound(o.n, {o.theta0, spec.d, spec.p}, h);
  }
  if (f == "theorem") {
    BoundInputs in;
    in.n = o.n;
    in.theta0 = o.theta0;
    in.q_is_identity = o.q_identity;
    if (!o.fisher || !o.q_prime || !o.third_moment) {
      throw DomainError("--formula theorem requires --fisher, --q-prime and --third-moment");
    }
    in.fisher = *o.fisher;
    in.q_prime_abs = std::fabs(*o.q_prime);
    in.third_moment = *o.third_moment;
    if (!o.q_identity) {
      if (!o.mse || !o.sup_q_second) {
        throw DomainError(
            "--formula theorem requires --mse and --sup-q-second unless --q-identity");
      }
      in.mse = *o.mse;
      in.sup_q_second = *o.sup_q_second;
      in.epsilon = epsilon_from(o);
    }
    in.h = h;
    return theorem_bound(in);
  }
  if (f == "expfam" || f == "ar-canonical") {
    const ExpFamilyModel m = make_model(model_spec(o));
    if (!m.param_space.contains(o.theta0)) {
      throw DomainError("theta0 outside the parameter space of " + m.name);
    }
    const double eps = epsilon_from(o);
    double mse = 0.0;
    if (o.mse) {
      mse = *o.mse;
    } else if (const auto exact = mse_exact(m, o.theta0, o.n)) {
      mse = *exact;
    } else {
      throw DomainError("no closed-form MSE for " + m.name + " at this n; pass --mse");
    }
    if (f == "ar-canonical") {
      if (o.third_moment) throw DomainError("--third-moment is not accepted by ar-canonical");
      return ar_bound_canonical_expfam(m, o.theta0, o.n, eps, h, mse);
    }
    return expfam_bound(m, o.theta0, o.n, eps, h, mse, o.third_moment);
  }
  throw DomainError("unknown formula '" + f + "'");
}

SimulationConfig simulation_config(const Options& o) {
  SimulationConfig cfg;
  cfg.model = model_spec(o);
  cfg.theta0 = o.theta0;
  cfg.n = o.n;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  if (o.h == "norms") throw DomainError("simulate needs an evaluable h (paper, tanh)");
  cfg.h = test_function(o);
  cfg.epsilon_frac = o.epsilon_frac;
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "human, csv or json")
      ->check(CLI::IsMember({"human", "csv", "json"}));
  app->add_option("--out", o.out_path, "Write the report to this file");
}

void add_model(CLI::App* app, Options& o) {
  app->add_option("--model", o.model,
                  "Model id, optionally id:key=value,... (keys d, p, alpha, sigma, mu)");
  app->add_option("--theta0", o.theta0, "True parameter");
  app->add_option("--n", o.n, "Sample size");
  app->add_option("--d", o.d, "Generalized gamma shape d");
  app->add_option("--p", o.p, "Generalized gamma power p");
  app->add_option("--alpha", o.alpha, "Weibull shape");
  app->add_option("--sigma", o.sigma, "Known normal standard deviation");
  app->add_option("--mu", o.mu, "Known normal mean");
  app->add_option("--epsilon-frac", o.epsilon_frac, "epsilon = fraction * |theta0|");
  app->add_option("--h", o.h, "Test function: paper, tanh, or norms");
}

int emit(const Options& o, const std::string& text, std::ostream& out,
         std::ostream& err) {
  if (o.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  file << text;
  file.close();
  if (!file) {
    err << "error: cannot write " << o.out_path << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text, ModelSpec base) {
  const auto colon = text.find(':');
  base.id = text.substr(0, colon);
  if (base.id.empty()) throw DomainError("empty model id");
  if (colon == std::string::npos) return base;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw DomainError("model parameter '" + item + "' is not key=value");
    }
    const std::string key = item.substr(0, eq);
    const double value = parse_number(key, item.substr(eq + 1));
    if (key == "d") {
      base.d = value;
    } else if (key == "p") {
      base.p = value;
    } else if (key == "alpha") {
      base.alpha = value;
    } else if (key == "sigma") {
      base.sigma = value;
    } else if (key == "mu") {
      base.mu = value;
    } else {
      throw DomainError("unknown model parameter '" + key + "'");
    }
  }
  return base;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Explicit normal-approximation bounds for maximum likelihood estimators",
               "mlebound"};
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);

  auto* bound = app.add_subcommand("bound", "Compute a bound and its three terms");
  add_model(bound, o);
  add_common(bound, o);
  bound
      ->add_option("--formula", o.formula,
                   "theorem, expfam, gg, exp-canonical, exp-noncanonical, "
                   "ar-exp-noncanonical, ar-canonical")
      ->required()
      ->check(CLI::IsMember({"theorem", "expfam", "gg", "exp-canonical",
                             "exp-noncanonical", "ar-exp-noncanonical", "ar-canonical"}));
  bound->add_option("--h-sup", o.h_sup, "sup |h| for --h norms");
  bound->add_option("--h-prime-sup", o.h_prime_sup, "sup |h'| for --h norms");
  bound->add_option("--fisher", o.fisher, "Fisher information i(theta0)");
  bound->add_option("--q-prime", o.q_prime, "q'(theta0)");
  bound->add_option("--third-moment", o.third_moment, "E|g(X) - q(theta0)|^3");
  bound->add_option("--mse", o.mse, "E(theta_hat - theta0)^2");
  bound->add_option("--epsilon", o.epsilon, "Radius of the ball around theta0");
  bound->add_option("--sup-q-second", o.sup_q_second, "sup |q''| over the ball");
  bound->add_flag("--q-identity", o.q_identity, "q is the identity map");

  auto* simulate = app.add_subcommand("simulate", "Estimate the distance by Monte Carlo");
  add_model(simulate, o);
  add_common(simulate, o);
  simulate->add_option("--trials", o.trials, "Number of trials");
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* table = app.add_subcommand("table1", "Exponential table, n = 10 .. 1e5");
  add_common(table, o);
  table->add_option("--trials", o.trials, "Trials per row");
  table->add_option("--seed", o.seed, "Random seed");
  table->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  table->add_flag("--bounds-only", o.bounds_only, "Skip the simulation");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const auto format = report::parse_format(o.format);
    std::string text;
    if (bound->parsed()) {
      text = report::render_bound(compute_bound(o), o.n, format);
    } else if (simulate->parsed()) {
      const SimulationConfig cfg = simulation_config(o);
      text = report::render_simulations({run_simulation(cfg)}, format);
    } else if (o.bounds_only) {
      text = report::render_table1_bounds(table1_bounds(), format);
    } else {
      if (o.trials < 1000) throw DomainError("table1 requires at least 1000 trials");
      text = report::render_simulations(table1(o.trials, o.seed, o.threads), format);
    }
    return emit(o, text, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace mlebound::cli
