// dlp: command-line front end for the exact Delsarte LP toolkit.
//
// Every run prints one report: the command, its effective configuration,
// a status word, the exit code and the command-specific result. Exit codes:
// 0 definitive, 1 usage or input error, 2 inconclusive, 3 verified
// preserver violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlp/dlp.hpp"

namespace {

using Json = nlohmann::ordered_json;
using dlp::Rational;
using dlp::RationalVector;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitViolation = 3;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string status;
  int exit_code = kExitOk;
  Json result = Json::object();
  std::optional<Table> table;
};

Json rat(const Rational& r) { return r.str(); }

Json rats(const RationalVector& v) { return dlp::io::to_json(v); }

Json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json certificate_json(const dlp::delsarte::DelsarteCertificate& c) {
  Json j;
  j["n"] = c.n;
  j["angles"] = rats(c.angles.values());
  j["degree_cap"] = c.degree_cap;
  j["even_only"] = c.even_only;
  j["gbar"] = rat(c.gbar);
  j["coeffs"] = rats(c.coeffs);
  j["residuals"] = rats(c.residuals);
  j["bound_raw"] = c.bound_raw ? rat(*c.bound_raw) : Json(nullptr);
  j["bound_floor"] = c.bound_floor ? integer(*c.bound_floor) : Json(nullptr);
  Json sched = Json::array();
  for (const auto& s : c.cap_schedule) sched.push_back({{"cap", s.cap}, {"gbar", s.gbar ? rat(*s.gbar) : Json(nullptr)}});
  j["cap_schedule"] = sched;
  j["stabilized"] = c.stabilized;
  j["budget_exceeded"] = c.budget_exceeded;
  if (c.interval) {
    j["cos_theta"] = rat(c.cos_theta);
    j["certified"] = c.certified;
    j["shift"] = rat(c.shift);
    j["grid_size"] = c.grid_size;
  }
  return j;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string approx(const Json& v) {
  if (!v.is_string()) return scalar_text(v);
  const std::string s = v.get<std::string>();
  if (s.find('/') == std::string::npos) return s;
  try {
    std::ostringstream o;
    o.precision(12);
    o << s << " (≈ " << Rational::parse(s).to_double() << ")";
    return o.str();
  } catch (const dlp::Error&) {
    return s;
  }
}

void emit(std::ostream& out, const std::string& format, const std::string& command, const Json& config,
          const Report& r) {
  if (format == "json") {
    Json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["status"] = r.status;
    doc["exit_code"] = r.exit_code;
    doc["result"] = r.result;
    out << doc.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    out << "# command," << csv_cell(command) << "\n";
    out << "# config," << csv_cell(config.dump()) << "\n";
    out << "# status," << r.status << "\n";
    out << "# exit_code," << r.exit_code << "\n";
    if (r.table) {
      for (std::size_t i = 0; i < r.table->header.size(); ++i) out << (i ? "," : "") << csv_cell(r.table->header[i]);
      out << "\n";
      for (const auto& row : r.table->rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << "\n";
      }
    } else {
      out << "key,value\n";
      for (const auto& [k, v] : r.result.items()) out << csv_cell(k) << "," << csv_cell(scalar_text(v)) << "\n";
    }
    return;
  }
  out << command << ": " << r.status << " (exit " << r.exit_code << ")\n";
  for (const auto& [k, v] : config.items()) out << "  config." << k << " = " << scalar_text(v) << "\n";
  for (const auto& [k, v] : r.result.items()) {
    if (v.is_array() || v.is_object()) out << "  " << k << " = " << v.dump() << "\n";
    else out << "  " << k << " = " << approx(v) << "\n";
  }
  if (r.table) {
    for (std::size_t i = 0; i < r.table->header.size(); ++i) out << (i ? "\t" : "  ") << r.table->header[i];
    out << "\n";
    for (const auto& row : r.table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "  ") << row[i];
      out << "\n";
    }
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dlp::InvalidArgument("cannot open " + path);
  return Json::parse(in);
}

/// Values of P^_k (Gegenbauer of S^{dim-1}) on the points, or an explicit list.
RationalVector function_values(const std::string& spec, const RationalVector& points, int dim) {
  if (spec.rfind("auto:", 0) == 0) {
    unsigned k = static_cast<unsigned>(std::stoul(spec.substr(5)));
    return dlp::preservers::gegenbauer_restriction(points, dim, k).values;
  }
  return dlp::parse_rational_list(spec);
}

/// Registry of a subcommand's options, used to echo the effective config.
class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& desc)
      : app_(parent.add_subcommand(name, desc)), name_(name) {}

  template <typename T>
  CLI::Option* opt(const std::string& flag, T& var, const std::string& desc) {
    auto* o = app_->add_option(flag, var, desc)->capture_default_str();
    echo_.push_back({key(flag), [&var] { return Json(var); }});
    return o;
  }
  CLI::Option* flag(const std::string& flag, bool& var, const std::string& desc) {
    auto* o = app_->add_flag(flag, var, desc);
    echo_.push_back({key(flag), [&var] { return Json(var); }});
    return o;
  }

  Json config() const {
    Json j = Json::object();
    for (const auto& [k, f] : echo_) j[k] = f();
    return j;
  }
  CLI::App* app() const { return app_; }
  const std::string& name() const { return name_; }

  std::function<Report()> run;

 private:
  static std::string key(const std::string& flag) {
    std::string k = flag.substr(flag.find_first_not_of('-'));
    for (auto& ch : k)
      if (ch == '-') ch = '_';
    return k;
  }

  CLI::App* app_;
  std::string name_;
  std::vector<std::pair<std::string, std::function<Json()>>> echo_;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("DLP_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw dlp::InvalidArgument("DLP_BUDGET is not a nonnegative integer");
    }
  }
  return dlp::codes::kDefaultBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Delsarte LP bounds, code search and PSD completion"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string format = "json";
  std::uint64_t seed = 0;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "Random seed (fuzz)")->capture_default_str();

  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& desc) -> Command& {
    commands.push_back(std::make_unique<Command>(app, name, desc));
    return *commands.back();
  };

  // bound
  int b_dim = 0;
  std::string b_angles;
  unsigned b_degree = 0, b_start = 0, b_step = 4, b_window = 2, b_hard = 120;
  bool b_stab = false, b_even = false;
  {
    auto& c = add("bound", "Delsarte bound for a finite angle set");
    c.opt("--dim", b_dim, "Ambient dimension n (sphere S^{n-1})")->required();
    c.opt("--angles", b_angles, "Comma-separated cosines, e.g. \"-1,-1/2,1/2\"")->required();
    auto* deg = c.opt("--degree", b_degree, "Fixed degree cap N");
    auto* st = c.flag("--stabilize", b_stab, "Raise the cap until the optimum is stable (default without --degree)");
    deg->excludes(st);
    c.opt("--start", b_start, "First cap when stabilizing (0 = 2(|X|+1))");
    c.opt("--step", b_step, "Cap increment");
    c.opt("--window", b_window, "Consecutive equal optima required");
    c.opt("--hard-cap", b_hard, "Largest cap tried");
    c.flag("--even-only", b_even, "Restrict to even degrees");
    c.run = [&]() {
      Report r;
      auto x = dlp::delsarte::AngleSet::parse(b_angles);
      if (x.empty()) throw dlp::InvalidArgument("angle set is empty");
      dlp::delsarte::DelsarteCertificate cert;
      if (b_degree > 0) {
        try {
          cert = dlp::delsarte::delsarte_constant(b_dim, x, b_degree, b_even);
        } catch (const dlp::LPInfeasible& e) {
          r.status = "NoBoundAtCap";
          r.exit_code = kExitInconclusive;
          r.result["reason"] = e.what();
          return r;
        }
      } else {
        dlp::delsarte::StabilizeOptions o{b_start, b_step, b_window, b_hard, b_even};
        cert = dlp::delsarte::delsarte_bound(b_dim, x, o);
      }
      r.result = certificate_json(cert);
      if (cert.budget_exceeded) {
        r.status = "BudgetExceeded";
        r.exit_code = kExitInconclusive;
      } else {
        r.status = cert.bound_raw ? "Optimal" : "Unbounded";
      }
      return r;
    };
  }

  // interval-bound
  int i_dim = 0;
  std::string i_cos;
  unsigned i_degree = 8, i_grid = 32, i_retries = 3;
  {
    auto& c = add("interval-bound", "Delsarte bound for cosines in [-1, cos theta]");
    c.opt("--dim", i_dim, "Ambient dimension n")->required();
    c.opt("--cos-theta", i_cos, "Largest allowed cosine, rational in (-1, 1)")->required();
    c.opt("--degree", i_degree, "Degree cap N");
    c.opt("--grid", i_grid, "Initial Chebyshev grid size");
    c.opt("--retries", i_retries, "Grid doublings before the shift fallback");
    c.run = [&]() {
      Report r;
      if (i_degree < 1) throw dlp::InvalidArgument("--degree must be >= 1");
      auto cert = dlp::delsarte::interval_delsarte(i_dim, Rational::parse(i_cos), i_degree, {i_grid, i_retries});
      r.result = certificate_json(cert);
      r.status = cert.certified ? "Certified" : "Uncertified";
      r.exit_code = cert.certified ? kExitOk : kExitInconclusive;
      return r;
    };
  }

  // theta
  int t_dim = 0;
  std::string t_t;
  unsigned t_kmax = 50;
  {
    auto& c = add("theta", "Minimum normalized zonal value and the theta ratio");
    c.opt("--dim", t_dim, "Ambient dimension n >= 3")->required();
    c.opt("--t", t_t, "Inner product t in (-1, 1)")->required();
    c.opt("--kmax", t_kmax, "Largest degree scanned");
    c.run = [&]() {
      Report r;
      auto th = dlp::delsarte::theta_min(t_dim, Rational::parse(t_t), t_kmax);
      r.result["m"] = rat(th.m);
      r.result["k_argmin"] = th.k_argmin;
      r.result["theta_ratio"] = th.theta_ratio ? rat(*th.theta_ratio) : Json(nullptr);
      r.result["theta"] = th.theta_ratio ? Json("omega_n * " + th.theta_ratio->str()) : Json(nullptr);
      r.result["conclusive"] = th.conclusive;
      r.result["tail_envelope"] = rat(th.tail_envelope);
      r.result["tail_below_min"] = th.tail_below_min;
      r.result["heuristic_cutoff"] = th.heuristic_cutoff;
      r.status = th.conclusive ? "Minimum" : "Inconclusive";
      r.exit_code = th.conclusive ? kExitOk : kExitInconclusive;
      return r;
    };
  }

  // probe
  int p_dim = 0;
  std::string p_angles;
  std::uint64_t p_budget = 0;
  unsigned p_start = 0, p_step = 4, p_window = 2, p_hard = 120;
  {
    auto& c = add("probe", "Stabilized bound plus a search for a code of that size");
    c.opt("--dim", p_dim, "Ambient dimension n")->required();
    c.opt("--angles", p_angles, "Comma-separated cosines")->required();
    c.opt("--budget", p_budget, "Search-node budget (0 = DLP_BUDGET or 10000000)");
    c.opt("--start", p_start, "First cap (0 = 2(|X|+1))");
    c.opt("--step", p_step, "Cap increment");
    c.opt("--window", p_window, "Consecutive equal optima required");
    c.opt("--hard-cap", p_hard, "Largest cap tried");
    c.run = [&]() {
      Report r;
      if (p_budget == 0) p_budget = default_budget();
      auto x = dlp::delsarte::AngleSet::parse(p_angles);
      if (x.empty()) throw dlp::InvalidArgument("angle set is empty");
      auto v = dlp::codes::hallucination_probe(p_dim, x, {p_start, p_step, p_window, p_hard, false}, p_budget);
      r.result["bound_floor"] = v.bound_floor ? integer(*v.bound_floor) : Json(nullptr);
      r.result["outcome"] = dlp::codes::to_string(v.outcome);
      r.result["search"] = v.search ? Json(dlp::codes::to_string(*v.search)) : Json(nullptr);
      r.result["nodes"] = v.nodes;
      r.result["budget"] = v.budget;
      r.result["reason"] = v.reason;
      r.result["witness"] = v.witness ? dlp::io::to_json(v.witness->gram) : Json(nullptr);
      r.result["certificate"] = certificate_json(v.certificate);
      r.status = dlp::codes::to_string(v.outcome);
      r.exit_code = v.outcome == dlp::codes::ProbeOutcome::Inconclusive ? kExitInconclusive : kExitOk;
      return r;
    };
  }

  // verify-code
  int v_dim = 0;
  std::string v_gram, v_angles;
  bool v_sharp = false;
  {
    auto& c = add("verify-code", "Check that a Gram matrix is a code on S^{n-1}");
    c.opt("--dim", v_dim, "Ambient dimension n")->required();
    c.opt("--gram", v_gram, "Gram matrix JSON file")->required();
    c.opt("--angles", v_angles, "Allowed cosines (default: those in the matrix)");
    c.flag("--sharpness", v_sharp, "Also compare the size with the stabilized Delsarte bound");
    c.run = [&]() {
      Report r;
      auto g = dlp::io::matrix_from_json(read_json_file(v_gram));
      auto cand = dlp::codes::GramCandidate::from_gram(g);
      if (!v_angles.empty()) cand.angles = dlp::delsarte::AngleSet::parse(v_angles);
      cand.validate();
      bool psd = dlp::is_psd_exact(g);
      r.result["size"] = g.dim();
      r.result["angles"] = rats(cand.angles.values());
      r.result["psd"] = psd;
      r.result["rank"] = psd ? Json(dlp::psd_rank(g)) : Json(nullptr);
      bool ok = psd && dlp::codes::realizable(cand, v_dim);
      r.result["realizable"] = ok;
      r.status = ok ? "Realizable" : "NotRealizable";
      if (v_sharp && ok) {
        auto cert = dlp::delsarte::delsarte_bound(v_dim, cand.angles);
        r.result["bound_floor"] = cert.bound_floor ? integer(*cert.bound_floor) : Json(nullptr);
        auto verdict = dlp::codes::sharpness_verdict(cert, cand);
        r.result["sharpness"] = dlp::codes::to_string(verdict);
        if (cert.budget_exceeded) r.exit_code = kExitInconclusive;
      }
      return r;
    };
  }

  // complete
  std::string c_matrix, c_apply;
  std::size_t c_iters = 20000;
  {
    auto& c = add("complete", "PSD completion of a partially specified matrix");
    c.opt("--matrix", c_matrix, "Partial matrix JSON file")->required();
    c.opt("--apply", c_apply, "Polynomial coefficients c0,c1,... applied entrywise first");
    c.opt("--max-iter", c_iters, "Projection iterations for non-chordal patterns");
    c.run = [&]() {
      Report r;
      auto p = dlp::io::partial_matrix_from_json(read_json_file(c_matrix));
      if (!c_apply.empty()) {
        p = dlp::psdcomp::apply_entrywise(p, dlp::DensePoly(dlp::parse_rational_list(c_apply)));
        r.result["image"] = dlp::io::to_json(p);
      }
      dlp::psdcomp::ProjectionOptions o;
      o.max_iterations = c_iters;
      auto res = dlp::psdcomp::complete_psd(p, o);
      r.result["status"] = dlp::psdcomp::to_string(res.status);
      r.result["method"] = dlp::psdcomp::to_string(res.method);
      r.result["chordal"] = dlp::psdcomp::is_chordal(p);
      r.result["filled_diagonal"] = res.filled_diagonal;
      r.result["witness"] =
          res.status == dlp::psdcomp::CompletionStatus::Completable ? dlp::io::to_json(res.witness) : Json(nullptr);
      r.result["certificate_rows"] = res.certificate_rows;
      r.result["certificate"] =
          res.status == dlp::psdcomp::CompletionStatus::Infeasible ? dlp::io::to_json(res.certificate) : Json(nullptr);
      r.status = dlp::psdcomp::to_string(res.status);
      r.exit_code = res.status == dlp::psdcomp::CompletionStatus::Unknown ? kExitInconclusive : kExitOk;
      return r;
    };
  }

  // cube-pd
  unsigned h_n = 0;
  std::string h_values, h_poly;
  {
    auto& c = add("cube-pd", "Positive definiteness of a function on the Hamming cube");
    c.opt("--n", h_n, "Cube dimension")->required();
    auto* vals = c.opt("--values", h_values, "f(1 - 2d/n) for d = 0..n");
    auto* poly = c.opt("--poly", h_poly, "Coefficients c0,c1,... of f as a polynomial in the inner product");
    vals->excludes(poly);
    c.run = [&]() {
      Report r;
      if (h_values.empty() == h_poly.empty()) throw dlp::InvalidArgument("give exactly one of --values and --poly");
      dlp::hamming::CubeFunction f;
      if (!h_values.empty()) f = dlp::hamming::CubeFunction(h_n, dlp::parse_rational_list(h_values));
      else {
        dlp::DensePoly q(dlp::parse_rational_list(h_poly));
        f = dlp::hamming::CubeFunction::from_inner_product(h_n, [&](const Rational& u) { return q(u); });
      }
      auto pd = dlp::hamming::is_pd_on_cube(f);
      r.result["n"] = h_n;
      r.result["values"] = rats(f.values);
      r.result["krawtchouk_coeffs"] = rats(pd.expansion.coeffs);
      r.result["positive_definite"] = pd.positive_definite;
      r.status = pd.positive_definite ? "PositiveDefinite" : "NotPositiveDefinite";
      return r;
    };
  }

  // kraw-limit
  unsigned k_j = 0, k_n = 0, k_from = 100, k_to = 3200, k_stepn = 100;
  std::string k_u;
  bool k_sweep = false;
  {
    auto& c = add("kraw-limit", "Convergence of j!/n^j K_j(d_n) to u^j");
    c.opt("--j", k_j, "Degree j")->required();
    c.opt("--u", k_u, "Limit inner product u in [-1, 1]")->required();
    c.opt("--n", k_n, "Single cube dimension (omit for a sweep)");
    c.flag("--sweep", k_sweep, "Tabulate n = from, from+step, ..., to");
    c.opt("--from", k_from, "Sweep start");
    c.opt("--to", k_to, "Sweep end");
    c.opt("--step", k_stepn, "Sweep step");
    c.run = [&]() {
      Report r;
      Rational u = Rational::parse(k_u);
      std::vector<unsigned> ns;
      if (k_n > 0 && !k_sweep) ns.push_back(k_n);
      else {
        if (k_stepn == 0 || k_from == 0 || k_from > k_to) throw dlp::InvalidArgument("bad sweep range");
        for (unsigned n = k_from; n <= k_to; n += k_stepn) ns.push_back(n);
      }
      Table t{{"n", "d", "scaled", "error", "n_times_error"}, {}};
      Json samples = Json::array();
      Rational worst(0);
      for (unsigned n : ns) {
        auto s = dlp::hamming::limit_probe(k_j, u, n);
        Rational ne = s.error * Rational(static_cast<long>(n));
        worst = std::max(worst, ne);
        samples.push_back({{"n", n}, {"d", s.d}, {"scaled", rat(s.scaled)}, {"error", rat(s.error)},
                           {"n_times_error", rat(ne)}});
        t.rows.push_back({std::to_string(n), std::to_string(s.d), s.scaled.str(), s.error.str(), ne.str()});
      }
      r.result["j"] = k_j;
      r.result["u"] = rat(u);
      r.result["max_n_times_error"] = rat(worst);
      r.result["samples"] = samples;
      r.table = std::move(t);
      r.status = "Computed";
      return r;
    };
  }

  // cone
  std::string o_points, o_target, o_gens;
  int o_dim = 3;
  bool o_hull = false;
  unsigned o_find = 0;
  {
    auto& c = add("cone", "Cone or convex-hull membership of functions on a finite set");
    c.opt("--points", o_points, "Sorted points in [-1, 1] including 1")->required();
    c.opt("--dim", o_dim, "Dimension n for auto: Gegenbauer functions");
    c.opt("--target", o_target, "Target values, or auto:K for P^_K");
    c.opt("--gens", o_gens, "auto:N for P^_0..P^_N, or value lists separated by ';'");
    c.flag("--hull", o_hull, "Convex hull instead of cone");
    c.opt("--find-cap", o_find, "Search N <= this value with P^_{N+1}, P^_{N+2} in the hull of P^_0..P^_N");
    c.run = [&]() {
      Report r;
      RationalVector pts = dlp::parse_rational_list(o_points);
      if (o_find > 0) {
        dlp::preservers::FiniteFunction check(pts, RationalVector(pts.size()));
        auto cap = dlp::preservers::hull_cap(pts, o_dim, o_find);
        r.result["hull_cap"] = cap ? Json(*cap) : Json(nullptr);
        r.status = cap ? "Found" : "NotFound";
        r.exit_code = cap ? kExitOk : kExitInconclusive;
        return r;
      }
      if (o_target.empty() || o_gens.empty()) throw dlp::InvalidArgument("--target and --gens are required");
      dlp::preservers::FiniteFunction target(pts, function_values(o_target, pts, o_dim));
      std::vector<dlp::preservers::FiniteFunction> gens;
      if (o_gens.rfind("auto:", 0) == 0) {
        unsigned n = static_cast<unsigned>(std::stoul(o_gens.substr(5)));
        for (unsigned k = 0; k <= n; ++k) gens.push_back(dlp::preservers::gegenbauer_restriction(pts, o_dim, k));
      } else {
        std::stringstream ss(o_gens);
        std::string part;
        while (std::getline(ss, part, ';')) gens.emplace_back(pts, dlp::parse_rational_list(part));
      }
      auto res = dlp::preservers::cone_membership(target, gens, o_hull);
      r.result["member"] = res.member;
      r.result["lambda"] = res.member ? rats(res.lambda) : Json(nullptr);
      r.result["farkas"] = res.member ? Json(nullptr) : rats(res.farkas);
      r.result["offset"] = res.member ? Json(nullptr) : rat(res.offset);
      r.result["verified"] = dlp::preservers::verify_cone_result(res, target, gens, o_hull);
      r.status = res.member ? "Member" : "NotMember";
      return r;
    };
  }

  // fit-preserver
  std::string f_points, f_values;
  unsigned f_degree = 4;
  {
    auto& c = add("fit-preserver", "Fit a*chi + b*x*chi + sum c_i x^i with nonnegative coefficients");
    c.opt("--points", f_points, "Sorted points in [-1, 1] including 1")->required();
    c.opt("--values", f_values, "Function values at the points")->required();
    c.opt("--degree", f_degree, "Truncation degree D");
    c.run = [&]() {
      Report r;
      dlp::preservers::FiniteFunction f(dlp::parse_rational_list(f_points), dlp::parse_rational_list(f_values));
      auto fit = dlp::preservers::fit_preserver_form(f, f_degree);
      r.result["member"] = fit.member;
      if (fit.member) {
        r.result["a"] = rat(fit.form.a);
        r.result["b"] = rat(fit.form.b);
        r.result["c"] = rats(fit.form.c);
        r.result["farkas"] = nullptr;
      } else {
        r.result["a"] = nullptr;
        r.result["b"] = nullptr;
        r.result["c"] = nullptr;
        r.result["farkas"] = rats(fit.farkas);
      }
      r.status = fit.member ? "Member" : "NotMember";
      return r;
    };
  }

  // fuzz
  std::string z_coeffs;
  std::size_t z_trials = 500, z_size = 3;
  bool z_control = false;
  {
    auto& c = add("fuzz", "Random check that a polynomial keeps partial PSD matrices completable");
    c.opt("--coeffs", z_coeffs, "Coefficients c0,c1,... of the polynomial part")->required();
    c.opt("--trials", z_trials, "Number of random matrices");
    c.opt("--size", z_size, "Matrix size m");
    c.flag("--negative-control", z_control, "Allow negative coefficients; a violation is the expected outcome");
    c.run = [&]() {
      Report r;
      RationalVector coeffs = dlp::parse_rational_list(z_coeffs);
      dlp::preservers::FuzzReport rep;
      if (z_control) rep = dlp::preservers::preserver_fuzz(coeffs, z_trials, z_size, seed);
      else rep = dlp::preservers::preserver_fuzz(dlp::preservers::PreserverForm{0, 0, coeffs}, z_trials, z_size, seed);
      r.result["seed"] = rep.seed;
      r.result["trials"] = rep.trials;
      r.result["size"] = rep.size;
      r.result["completable"] = rep.completable;
      r.result["unknown"] = rep.unknown;
      r.result["violations"] = rep.violations;
      if (rep.first_violation_input) {
        r.result["first_violation"] = {{"input", dlp::io::to_json(*rep.first_violation_input)},
                                       {"image", dlp::io::to_json(*rep.first_violation_image)},
                                       {"certificate_rows", rep.first_violation_certificate}};
      } else {
        r.result["first_violation"] = nullptr;
      }
      if (z_control) {
        r.status = rep.violations ? "ControlDetected" : "ControlMissed";
        r.exit_code = rep.violations ? kExitOk : kExitInconclusive;
      } else {
        r.status = rep.violations ? "Violation" : "NoViolation";
        r.exit_code = rep.violations ? kExitViolation : kExitOk;
      }
      return r;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (const auto& cmd : commands) {
    if (!cmd->app()->parsed()) continue;
    Json config = cmd->config();
    config["format"] = format;
    config["seed"] = seed;
    try {
      Report r = cmd->run();
      config = cmd->config();
      config["format"] = format;
      config["seed"] = seed;
      emit(std::cout, format, cmd->name(), config, r);
      return r.exit_code;
    } catch (const dlp::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: bad JSON input: " << e.what() << "\n";
    } catch (const std::logic_error& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kExitUsage;
  }
  return kExitUsage;
}
