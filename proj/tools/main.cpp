#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyaprod/montecarlo.hpp"
#include "polyaprod/validation.hpp"

namespace pp = polyaprod;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(2);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) usage_error("empty numeric list");
  return out;
}

struct Grid {
  double lo = 0, hi = 1;
  int points = 100;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.points) != 3 || g.points < 2 || g.hi <= g.lo)
    usage_error("grid must be lo:hi:points with hi > lo and points >= 2");
  return g;
}

void check_known_fields(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      usage_error("unknown field '" + it.key() + "' in " + where);
  }
}

pp::PolyaWeight parse_weight(const json& j, int default_n) {
  if (!j.contains("kind")) usage_error("weight: missing 'kind'");
  const auto kind = pp::weight_kind_from_string(j.at("kind").get<std::string>());
  pp::WeightParams params;
  params.n = default_n;
  switch (kind) {
    case pp::WeightKind::ginibre:
      check_known_fields(j, {"kind", "nu"}, "weight");
      params.nu = j.value("nu", 0.0);
      break;
    case pp::WeightKind::jacobi:
    case pp::WeightKind::cauchy_lorentz:
      check_known_fields(j, {"kind", "nu", "mu", "n"}, "weight");
      params.nu = j.value("nu", 0.0);
      params.mu = j.value("mu", 1.0);
      params.n = j.value("n", default_n);
      break;
    case pp::WeightKind::muttalib_borodin:
      check_known_fields(j, {"kind", "nu", "theta"}, "weight");
      params.nu = j.value("nu", 0.0);
      params.theta = j.value("theta", 1.0);
      break;
    case pp::WeightKind::lognormal:
      check_known_fields(j, {"kind", "nu"}, "weight");
      params.nu = j.value("nu", 0.0);
      break;
    case pp::WeightKind::projection:
      check_known_fields(j, {"kind", "M", "m", "l", "n"}, "weight");
      if (!j.contains("M") || !j.contains("m") || !j.contains("l"))
        usage_error("projection weight needs fields M, m, l");
      params.M = j.at("M").get<int>();
      params.m = j.at("m").get<int>();
      params.l = j.at("l").get<int>();
      params.n = j.value("n", default_n);
      break;
    case pp::WeightKind::dirac_unit:
      check_known_fields(j, {"kind"}, "weight");
      break;
  }
  try {
    return pp::PolyaWeight::make(kind, params);
  } catch (const std::exception& e) {
    usage_error(std::string("weight: ") + e.what());
  }
}

pp::ProductSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("cannot open spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    usage_error(std::string("spec JSON parse failure: ") + e.what());
  }
  check_known_fields(j, {"version", "l", "m", "n1", "n2", "weight", "x"}, "spec");
  if (j.value("version", 1) != 1) usage_error("unsupported spec version");
  for (const char* field : {"l", "m", "n1", "n2", "weight", "x"})
    if (!j.contains(field)) usage_error(std::string("spec: missing field '") + field + "'");

  pp::ProductSpec spec;
  spec.l = j.at("l").get<int>();
  spec.m = j.at("m").get<int>();
  spec.n1 = j.at("n1").get<int>();
  spec.n2 = j.at("n2").get<int>();
  spec.omega = parse_weight(j.at("weight"), spec.n1);

  const json& jx = j.at("x");
  const std::string type = jx.value("type", "");
  if (type == "fixed") {
    check_known_fields(jx, {"type", "a"}, "x");
    auto vals = jx.at("a").get<std::vector<double>>();
    Eigen::Map<pp::VectorXd> v(vals.data(), static_cast<long>(vals.size()));
    spec.x = pp::FixedSpectrum{pp::SignedSpectrum(v)};
  } else if (type == "gue") {
    check_known_fields(jx, {"type"}, "x");
    spec.x = pp::make_gue_ensemble(spec.m);
  } else if (type == "wishart") {
    check_known_fields(jx, {"type", "sign"}, "x");
    spec.x = pp::make_wishart_ensemble(spec.m, spec.n2, jx.value("sign", 1));
  } else {
    usage_error("x.type must be one of fixed|gue|wishart");
  }
  try {
    spec.validate();
  } catch (const std::exception& e) {
    usage_error(std::string("spec: ") + e.what());
  }
  return spec;
}

void write_header(std::ostream& os, std::uint64_t seed, const std::string& spec_echo) {
  os << "# polyaprod " << kVersion << "\n";
  os << "# seed=" << seed << "\n";
  if (!spec_echo.empty()) os << "# spec=" << spec_echo << "\n";
}

std::string spec_echo_of(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  return j.dump();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) usage_error("cannot open output file: " + path);
  return out;
}

int cmd_spherical(const std::string& mode, const std::string& s_list, const std::string& L_list,
                  const std::string& a_list, int l_dim, int n_dim, bool verify_fact,
                  const std::string& spec_path, std::uint64_t seed, int samples,
                  const std::string& out_path) {
  if (verify_fact) {
    // MC comparison of the Haar factorization for the spec's profile.
    pp::ProductSpec spec = load_spec(spec_path);
    pp::RngStream rng(seed);
    const int r = spec.rank();
    pp::VectorXcd s(r);
    pp::VectorXi L(r);
    for (int j = 0; j < r; ++j) {
      s[j] = pp::Complex(0.4 + 1.3 * (r - j), 0.1);
      L[j] = j % 2;
    }
    const pp::VectorXd& ax = spec.fixed().a.values;
    pp::VectorXd ag(spec.n1);
    for (int i = 0; i < spec.n1; ++i) ag[i] = 0.5 + i;
    pp::MatrixXcd g = pp::embed_singular_values(ag, spec.l, spec.m);
    pp::MatrixXcd x = pp::embed_spectrum(ax, spec.m);

    pp::Complex sum = 0.0;
    double sum_abs2 = 0.0;
    for (int i = 0; i < samples; ++i) {
      pp::MatrixXcd k = pp::haar_unitary(spec.m, rng);
      pp::MatrixXcd w = g * k * x * k.adjoint() * g.adjoint();
      pp::VectorXd ev = pp::hermitian_eigenvalues(0.5 * (w + w.adjoint()));
      std::vector<double> kept(ev.data(), ev.data() + ev.size());
      std::sort(kept.begin(), kept.end(), [](double p, double q) { return std::abs(p) > std::abs(q); });
      kept.resize(r);
      pp::Complex v = pp::phi(pp::Frequency(s, L), pp::SignedSpectrum(Eigen::Map<pp::VectorXd>(kept.data(), r)));
      sum += v;
      sum_abs2 += std::norm(v);
    }
    const pp::Complex lhs = sum / static_cast<double>(samples);
    const double stderr_est =
        std::sqrt(std::max(0.0, sum_abs2 / samples - std::norm(lhs)) / samples);
    const pp::Complex rhs = pp::factorization_rhs(s, L, spec.l, spec.m, spec.n1, spec.n2,
                                                  pp::PositiveSpectrum(ag), spec.fixed().a);
    const double sigmas = std::abs(lhs - rhs) / std::max(stderr_est, 1e-300);
    json report = {{"version", kVersion},  {"seed", seed},
                   {"lhs", {{"re", lhs.real()}, {"im", lhs.imag()}}},
                   {"rhs", {{"re", rhs.real()}, {"im", rhs.imag()}}},
                   {"stderr", stderr_est}, {"sigmas", sigmas},
                   {"pass", sigmas <= 3.0}};
    if (!out_path.empty()) {
      auto out = open_out(out_path);
      out << report.dump(2) << "\n";
    }
    std::cout << report.dump(2) << "\n";
    return sigmas <= 3.0 ? 0 : 1;
  }

  auto svals = parse_list(s_list);
  pp::VectorXcd s(svals.size());
  for (size_t i = 0; i < svals.size(); ++i) s[i] = svals[i];
  if (mode == "C") {
    if (l_dim < 1 || n_dim < 1) usage_error("spherical --C needs --l and --n");
    std::cout << fmt17(pp::normalization_C(l_dim, n_dim, s).real()) << "\n";
    return 0;
  }
  auto avals = parse_list(a_list);
  Eigen::Map<pp::VectorXd> a(avals.data(), static_cast<long>(avals.size()));
  pp::Complex value;
  if (mode == "phi") {
    auto Lvals = parse_list(L_list);
    pp::VectorXi L(Lvals.size());
    for (size_t i = 0; i < Lvals.size(); ++i) L[i] = static_cast<int>(Lvals[i]);
    value = pp::phi(pp::Frequency(s, L), pp::SignedSpectrum(a));
  } else {
    value = pp::psi(s, pp::PositiveSpectrum(a));
  }
  if (std::abs(value.imag()) < 1e-12 * std::max(1.0, std::abs(value.real())))
    std::cout << fmt17(value.real()) << "\n";
  else
    std::cout << fmt17(value.real()) << (value.imag() < 0 ? "" : "+") << fmt17(value.imag()) << "i\n";
  return 0;
}

int cmd_transform(const std::string& weight_json, double s_re, double s_im, int L, bool numeric,
                  bool inverse_check, double x_point) {
  json wj;
  try {
    wj = json::parse(weight_json);
  } catch (const std::exception& e) {
    usage_error(std::string("weight JSON: ") + e.what());
  }
  pp::PolyaWeight w = parse_weight(wj, wj.value("n", 1));
  const pp::Complex s(s_re, s_im);
  pp::QuadratureConfig cfg;

  if (inverse_check) {
    // Round trip: regularized inversion of the closed-form transform at x.
    auto Mf = [&](pp::Complex sfreq, int) { return w.mellin(sfreq); };
    auto inv = pp::inverse_mellin(Mf, x_point, pp::kDefaultEpsSchedule, cfg);
    const double direct = w(x_point);
    std::cout << "inverse=" << fmt17(inv.value) << " direct=" << fmt17(direct)
              << " err=" << fmt17(std::abs(inv.value - direct)) << "\n";
    return std::abs(inv.value - direct) <= 1e-4 * std::max(1.0, std::abs(direct)) ? 0 : 1;
  }

  pp::Complex value;
  if (numeric) {
    value = pp::mellin_half_line([&](double t) { return w(t); }, s, cfg);
    if (L == 1) value = 0.0;  // catalog weights live on the positive axis
  } else {
    value = w.mellin(s);
  }
  std::cout << fmt17(value.real());
  if (std::abs(value.imag()) > 1e-15) std::cout << (value.imag() < 0 ? "" : "+") << fmt17(value.imag()) << "i";
  std::cout << "\n";
  return 0;
}

int cmd_jpdf(const std::string& spec_path, const std::string& grid_text, const std::string& branch_name,
             std::uint64_t seed, const std::string& out_path) {
  pp::ProductSpec spec = load_spec(spec_path);
  const Grid grid = parse_grid(grid_text);
  const pp::RankBranch branch = branch_name == "less" ? pp::RankBranch::less : pp::RankBranch::geq;
  pp::QuadratureConfig cfg;
  const int r = spec.rank();
  if (r > 2) usage_error("jpdf grids support rank <= 2");
  const bool fixed = std::holds_alternative<pp::FixedSpectrum>(spec.x);

  auto density = [&](const pp::VectorXd& at) -> double {
    for (int i = 0; i < at.size(); ++i)
      if (at[i] == 0.0) return 0.0;
    pp::VectorXd sorted = at;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    for (int i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1]) return 0.0;
    const pp::SignedSpectrum ss(sorted);
    return fixed ? pp::jpdf_fixed(spec, ss, branch, cfg) : pp::jpdf_random(spec, ss, branch, cfg);
  };

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  write_header(*os, seed, spec_echo_of(spec_path));
  if (r == 1) {
    *os << "a,density\n";
    for (int i = 0; i < grid.points; ++i) {
      const double a = grid.lo + (grid.hi - grid.lo) * i / (grid.points - 1);
      pp::VectorXd at(1);
      at << a;
      *os << fmt17(a) << "," << fmt17(density(at)) << "\n";
    }
  } else {
    *os << "a1,a2,density\n";
    for (int i = 0; i < grid.points; ++i)
      for (int j = 0; j < grid.points; ++j) {
        pp::VectorXd at(2);
        at << grid.lo + (grid.hi - grid.lo) * i / (grid.points - 1),
            grid.lo + (grid.hi - grid.lo) * j / (grid.points - 1);
        *os << fmt17(at[0]) << "," << fmt17(at[1]) << "," << fmt17(density(at)) << "\n";
      }
  }
  return 0;
}

int cmd_kernel(const std::string& spec_path, const std::string& grid_text, const std::string& branch_name,
               std::uint64_t seed, const std::string& out_path) {
  pp::ProductSpec spec = load_spec(spec_path);
  const Grid grid = parse_grid(grid_text);
  const pp::RankBranch branch = branch_name == "less" ? pp::RankBranch::less : pp::RankBranch::geq;
  pp::QuadratureConfig cfg;

  pp::Kernel kernel = std::holds_alternative<pp::FixedSpectrum>(spec.x)
                          ? pp::kernel_fixed(spec, branch, cfg)
                          : pp::kernel_from_biorth(pp::transform_biorth(
                                spec, pp::biorth_from_ensemble(spec.ensemble()), branch, cfg));

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  write_header(*os, seed, spec_echo_of(spec_path));
  *os << "a1,a2,K\n";
  for (int i = 0; i < grid.points; ++i)
    for (int j = 0; j < grid.points; ++j) {
      const double a1 = grid.lo + (grid.hi - grid.lo) * i / (grid.points - 1);
      const double a2 = grid.lo + (grid.hi - grid.lo) * j / (grid.points - 1);
      const double v = (a1 == 0.0 || a2 == 0.0) ? 0.0 : kernel(a1, a2);
      *os << fmt17(a1) << "," << fmt17(a2) << "," << fmt17(v) << "\n";
    }
  return 0;
}

int cmd_sample(const std::string& spec_path, int count, std::uint64_t seed, const std::string& out_path) {
  pp::ProductSpec spec = load_spec(spec_path);
  pp::RngStream rng(seed);
  pp::SampleBatch batch = pp::sample_product_eigs(spec, count, rng);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  write_header(*os, seed, spec_echo_of(spec_path));
  *os << "sample";
  for (int i = 0; i < batch.r; ++i) *os << ",eig" << i + 1;
  *os << "\n";
  for (int i = 0; i < batch.count; ++i) {
    *os << i;
    for (int j = 0; j < batch.r; ++j) *os << "," << fmt17(batch.eigs[i][j]);
    *os << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
  if (suite != "core" && suite != "acceptance" && suite != "full")
    usage_error("verify --suite must be core|acceptance|full");
  auto results = pp::run_acceptance_suite(seed, &std::cerr);
  json checks = json::object();
  bool all = true;
  for (const auto& r : results) {
    checks[r.name] = {{"pass", r.pass}, {"metric", r.metric}, {"detail", r.detail}};
    all = all && r.pass;
  }
  json report = {{"version", kVersion}, {"suite", suite}, {"seed", seed}, {"pass", all}, {"checks", checks}};
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    out << report.dump(2) << "\n";
  }
  std::cout << report.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic analysis for products of complex rectangular and Hermitian random matrices"};
  app.require_subcommand(1);

  // spherical
  auto* sph = app.add_subcommand("spherical", "evaluate spherical functions / normalization constants");
  bool use_phi = false, use_psi = false, use_C = false, verify_fact = false;
  std::string s_list, L_list, a_list, spec_path, out_path;
  int l_dim = 0, n_dim = 0, samples = 100000;
  std::uint64_t seed = 1;
  sph->add_flag("--phi", use_phi, "evaluate Phi(s, L; a)");
  sph->add_flag("--psi", use_psi, "evaluate Psi(s; a)");
  sph->add_flag("--C", use_C, "evaluate C_{l,n}(s)");
  sph->add_flag("--verify-factorization", verify_fact, "MC comparison of the Haar factorization");
  sph->add_option("--s", s_list, "comma-separated frequencies (real parts)");
  sph->add_option("--L", L_list, "comma-separated parities (0/1)");
  sph->add_option("--a", a_list, "comma-separated spectrum");
  sph->add_option("--l", l_dim, "ambient dimension for C");
  sph->add_option("--n", n_dim, "rank for C");
  sph->add_option("--spec", spec_path, "ProductSpec JSON (for --verify-factorization)");
  sph->add_option("--seed", seed, "RNG seed");
  sph->add_option("--samples", samples, "MC sample count");
  sph->add_option("--out", out_path, "output file");

  // transform
  auto* tr = app.add_subcommand("transform", "Mellin transforms of catalog weights");
  std::string weight_json = R"({"kind":"ginibre","nu":0})";
  double s_re = 1.0, s_im = 0.0, x_point = 1.0;
  int L_chan = 0;
  bool numeric = false, inverse_check = false;
  tr->add_option("--weight", weight_json, "weight JSON, e.g. {\"kind\":\"ginibre\",\"nu\":0}");
  tr->add_option("--s-re", s_re, "Re s");
  tr->add_option("--s-im", s_im, "Im s");
  tr->add_option("--L", L_chan, "parity channel");
  tr->add_flag("--numeric", numeric, "quadrature instead of the closed form");
  tr->add_flag("--inverse-check", inverse_check, "regularized-inversion round trip at --x");
  tr->add_option("--x", x_point, "evaluation point for --inverse-check");

  // jpdf / kernel / sample
  auto* jp = app.add_subcommand("jpdf", "joint eigenvalue density on a grid (CSV)");
  auto* kn = app.add_subcommand("kernel", "determinantal kernel on a grid (CSV)");
  auto* sm = app.add_subcommand("sample", "Monte Carlo eigenvalue samples (CSV)");
  std::string jp_spec, jp_grid = "-5:5:200", jp_branch = "geq", jp_out;
  std::string kn_spec, kn_grid = "-5:5:100", kn_branch = "geq", kn_out;
  std::string sm_spec, sm_out;
  int sm_count = 10000;
  std::uint64_t jp_seed = 1, kn_seed = 1, sm_seed = 1;
  jp->add_option("--spec", jp_spec, "ProductSpec JSON")->required();
  jp->add_option("--grid", jp_grid, "lo:hi:points");
  jp->add_option("--branch", jp_branch, "geq|less");
  jp->add_option("--seed", jp_seed, "seed echoed in the header");
  jp->add_option("--out", jp_out, "output CSV (stdout if omitted)");
  kn->add_option("--spec", kn_spec, "ProductSpec JSON")->required();
  kn->add_option("--grid", kn_grid, "lo:hi:points");
  kn->add_option("--branch", kn_branch, "geq|less");
  kn->add_option("--seed", kn_seed, "seed echoed in the header");
  kn->add_option("--out", kn_out, "output CSV (stdout if omitted)");
  sm->add_option("--spec", sm_spec, "ProductSpec JSON")->required();
  sm->add_option("--count", sm_count, "number of samples");
  sm->add_option("--seed", sm_seed, "RNG seed");
  sm->add_option("--out", sm_out, "output CSV (stdout if omitted)");

  // verify
  auto* vf = app.add_subcommand("verify", "run the validation suite, emit a JSON report");
  std::string vf_suite = "core", vf_out;
  std::uint64_t vf_seed = 42;
  vf->add_option("--suite", vf_suite, "core|acceptance|full");
  vf->add_option("--seed", vf_seed, "RNG seed");
  vf->add_option("--out", vf_out, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sph->parsed()) {
      const int modes = int(use_phi) + int(use_psi) + int(use_C);
      if (!verify_fact && modes != 1) usage_error("spherical: pick exactly one of --phi/--psi/--C");
      const std::string mode = use_phi ? "phi" : use_psi ? "psi" : "C";
      return cmd_spherical(mode, s_list, L_list, a_list, l_dim, n_dim, verify_fact, spec_path, seed,
                           samples, out_path);
    }
    if (tr->parsed()) return cmd_transform(weight_json, s_re, s_im, L_chan, numeric, inverse_check, x_point);
    if (jp->parsed()) return cmd_jpdf(jp_spec, jp_grid, jp_branch, jp_seed, jp_out);
    if (kn->parsed()) return cmd_kernel(kn_spec, kn_grid, kn_branch, kn_seed, kn_out);
    if (sm->parsed()) return cmd_sample(sm_spec, sm_count, sm_seed, sm_out);
    if (vf->parsed()) return cmd_verify(vf_suite, vf_seed, vf_out);
  } catch (const std::invalid_argument& e) {
    usage_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
