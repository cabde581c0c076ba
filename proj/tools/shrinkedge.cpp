// Command-line front end for the shrinking-edge spectral library.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "shrinkedge/acceptance.hpp"
#include "shrinkedge/counting.hpp"
#include "shrinkedge/eigenmodes.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/fd_oracle.hpp"
#include "shrinkedge/resolvent.hpp"
#include "shrinkedge/secular.hpp"
#include "shrinkedge/sweep.hpp"

using namespace shrinkedge;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "shrinkedge/1";

// Input problems detected by the front end itself.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    std::ostringstream os;
    os << origin << ": JSON parse error at line " << line << ", column " << col;
    throw InputError(os.str());
  }
}

VertexCondition load_vc(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  const bool inline_json = first != std::string::npos && arg[first] == '{';
  const json j = inline_json ? parse_json_text(arg, "--vc") : parse_json_text(read_file(arg), arg);
  return vertex_condition_from_json(j);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

cplx parse_complex(const std::string& s) {
  std::stringstream ss(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(ss >> re)) throw InputError("cannot parse complex value '" + s + "' (expected re,im)");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw InputError("cannot parse complex value '" + s + "' (expected re,im)");
  }
  return {re, im};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

json point_json(const SpectralPoint& p) {
  json j{{"epsilon", p.epsilon}, {"kappa", p.kappa}, {"lambda", p.lambda}};
  j["kind"] = p.kind ? json(to_string(*p.kind)) : json(nullptr);
  j["alpha_pred"] = p.alpha_predicted ? json(*p.alpha_predicted) : json(nullptr);
  return j;
}

const char* rate_text(Kind k) {
  switch (k) {
    case Kind::B: return "rate ε^0";
    case Kind::S: return "rate ε^{-1}";
    case Kind::C: return "rate ε^{-2/3}";
  }
  return "";
}

std::string alpha_text(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", a);
  return buf;
}

// Subcommand handlers return the process exit code.

int cmd_classify(const VertexCondition& vc) {
  json out{{"schema", kSchema}, {"vertex_condition", to_json(vc)}};
  json preds = json::array();
  std::vector<std::string> lines;
  for (const auto& p : classify(vc)) {
    preds.push_back({{"kind", to_string(p.kind)}, {"alpha", p.alpha}, {"slope", predicted_slope(p.kind)}});
    lines.push_back(std::string("type ") + to_string(p.kind) + ", α=" + alpha_text(p.alpha) + ", " + rate_text(p.kind));
  }
  out["predictions"] = preds;
  if (const auto* r = std::get_if<Rank1>(&vc); r && !r->z_infinite() && -r->mu * (1 + r->z_abs2()) > 1)
    out["kappa1"] = solve_kappa1(r->z, r->mu);
  if (const auto* r = std::get_if<Rank0>(&vc)) {
    const bool has_k0 = r->a != 0.0 ? (std::norm(r->c) - r->a * r->b) / r->a > 1.0 : (r->c == cplx{} && -r->b > 1.0);
    if (has_k0) out["kappa0"] = solve_kappa0(r->a, r->b, r->c);
  }
  out["bls_nonresonant"] = bls_nonresonant(vc);
  out["borisov_nonresonant"] = borisov_nonresonant(vc);
  std::string summary;
  for (std::size_t i = 0; i < lines.size(); ++i) summary += (i ? "; " : "") + lines[i];
  out["summary"] = lines.empty() ? "no negative eigenvalues" : summary;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_spectrum(const VertexCondition& vc, double eps) {
  json pts = json::array();
  for (const auto& p : find_negative_eigenvalues(vc, eps)) {
    auto j = point_json(p);
    j["secular_residual"] = secular_neg(vc, eps, p.kappa);
    pts.push_back(j);
  }
  std::cout << json{{"schema", kSchema}, {"vertex_condition", to_json(vc)}, {"epsilon", eps}, {"eigenvalues", pts}}.dump(2)
            << '\n';
  return 0;
}

int cmd_sweep(const VertexCondition& vc, const std::string& eps_arg, const std::string& out, double tol, bool serial) {
  const auto eps = eps_arg.empty() ? default_eps_grid() : parse_list(eps_arg);
  const auto table = serial ? sweep_serial(vc, eps) : sweep_parallel(vc, eps);
  const auto fits = fit_branches(table, tol);

  json branches = json::array();
  bool ok = true;
  for (const auto& f : fits) {
    branches.push_back({{"kind", to_string(f.kind)},
                        {"slope", f.fit.slope},
                        {"rounded_slope", f.fit.rounded_slope},
                        {"coeff", f.fit.coeff},
                        {"fit_residual", f.fit.residual},
                        {"alpha_pred", f.alpha_predicted ? json(*f.alpha_predicted) : json(nullptr)},
                        {"slope_error", f.slope_error},
                        {"coeff_error", f.coeff_error},
                        {"agrees", f.agrees}});
    ok = ok && f.agrees;
  }
  if (fits.size() != classify(vc).size()) ok = false;
  const json report{{"schema", kSchema}, {"vertex_condition", to_json(vc)}, {"tol", tol}, {"branches", branches},
                    {"agrees", ok}};
  const std::string csv = sweep_csv(table);
  if (out.empty()) {
    std::cout << csv;
    std::cerr << report.dump(2) << '\n';
  } else {
    write_output(out, csv);
    std::cout << report.dump(2) << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_modes(const VertexCondition& vc, double eps, const std::string& out, std::size_t n) {
  json modes = json::array();
  std::size_t i = 0;
  for (const auto& p : find_negative_eigenvalues(vc, eps)) {
    const auto m = build_eigenmode(vc, p, n);
    const auto loc = localization(vc, p);
    auto j = point_json(p);
    j["norm_s_sq"] = loc.norm_s_sq;
    j["norm_e_sq"] = loc.norm_e_sq;
    j["c_s"] = cjson(m.c_s);
    j["c_e"] = cjson(m.c_e);
    j["residual"] = mode_residual(vc, p, m);
    if (!out.empty()) {
      std::ostringstream csv;
      csv << "y,re_psi_s,im_psi_s,x,re_psi_e,im_psi_e\n";
      for (std::size_t k = 0; k < m.psi_s.n(); ++k)
        csv << num(m.psi_s.node(k)) << ',' << num(m.psi_s[k].real()) << ',' << num(m.psi_s[k].imag()) << ','
            << num(m.psi_e.node(k)) << ',' << num(m.psi_e[k].real()) << ',' << num(m.psi_e[k].imag()) << '\n';
      const std::string path = out + "_mode" + std::to_string(i) + ".csv";
      write_output(path, csv.str());
      j["csv"] = path;
    }
    modes.push_back(j);
    ++i;
  }
  std::cout << json{{"schema", kSchema}, {"vertex_condition", to_json(vc)}, {"epsilon", eps}, {"modes", modes}}.dump(2)
            << '\n';
  return 0;
}

Forcing read_forcing(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  std::vector<cplx> fs, fe;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (lineno == 1 && line.find_first_of("abcdfghijklmnopqrstuvwxyz_") != std::string::npos) continue;  // header
    std::vector<double> v;
    try {
      v = parse_list(line);
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (v.size() != 5)
      throw InputError(path + ":" + std::to_string(lineno) + ": expected 5 columns x,re_fs,im_fs,re_fe,im_fe");
    fs.emplace_back(v[1], v[2]);
    fe.emplace_back(v[3], v[4]);
  }
  return {GridFunction(std::move(fs)), GridFunction(std::move(fe))};
}

int cmd_resolve(const VertexCondition& vc, double eps, const std::string& lambda_arg, const std::string& f_path,
                const std::string& out, double tol) {
  const cplx lam = parse_complex(lambda_arg);
  const Forcing f = read_forcing(f_path);
  const auto sol = resolve(vc, eps, lam, f);
  const double res = residual(vc, eps, lam, f, sol);
  std::ostringstream csv;
  csv << "y,re_us,im_us,x,re_ue,im_ue\n";
  for (std::size_t k = 0; k < sol.u_s.n(); ++k)
    csv << num(sol.u_s.node(k)) << ',' << num(sol.u_s[k].real()) << ',' << num(sol.u_s[k].imag()) << ','
        << num(sol.u_e.node(k)) << ',' << num(sol.u_e[k].real()) << ',' << num(sol.u_e[k].imag()) << '\n';
  const json header{{"schema", kSchema}, {"epsilon", eps},     {"lambda", cjson(lam)},
                    {"c_s", cjson(sol.c_s)}, {"c_e", cjson(sol.c_e)}, {"residual", res}};
  if (out.empty()) {
    std::cout << csv.str();
    std::cerr << header.dump(2) << '\n';
  } else {
    write_output(out, csv.str());
    std::cout << header.dump(2) << '\n';
  }
  return res <= tol ? 0 : 1;
}

int cmd_count(const VertexCondition& vc, double eps) {
  json out{{"schema", kSchema}, {"vertex_condition", to_json(vc)}, {"epsilon", eps}};
  if (const auto* r = std::get_if<Rank0>(&vc)) {
    const auto rep = count_negative(*r, eps);
    out.update({{"count", rep.count},
                {"via_inertia", rep.via_inertia},
                {"via_closed_form", rep.via_closed_form},
                {"conditions_matched", rep.conditions_matched}});
  } else {
    const int n = expected_negative_count(vc);
    out.update({{"count", n}, {"via_inertia", nullptr}, {"via_closed_form", n}, {"conditions_matched", "closed form"}});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_oracle(const VertexCondition& vc, double eps, const std::string& mesh, double tol) {
  const auto m = parse_list(mesh);
  if (m.size() != 2 || m[0] < 0 || m[1] < 0) throw InputError("--mesh expects n_s,n_e");
  const auto op = assemble(vc, eps, static_cast<std::size_t>(m[0]), static_cast<std::size_t>(m[1]));
  auto roots = find_negative_eigenvalues(vc, eps);
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  const auto ev = lowest_eigenvalues(op, roots.size());
  json sec = json::array(), disc = json::array(), rel = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double r = std::abs(ev[i] - roots[i].lambda) / std::abs(roots[i].lambda);
    sec.push_back(roots[i].lambda);
    disc.push_back(ev[i]);
    rel.push_back(r);
    ok = ok && r <= tol;
  }
  const auto inertia = negative_inertia(op);
  const int expected = expected_negative_count(vc);
  ok = ok && static_cast<int>(inertia) == expected;
  std::cout << json{{"schema", kSchema}, {"vertex_condition", to_json(vc)}, {"epsilon", eps},
                    {"mesh", {op.n_s, op.n_e}}, {"secular", sec}, {"discrete", disc}, {"rel_err", rel},
                    {"inertia", inertia}, {"expected_count", expected}, {"agrees", ok}}
                   .dump(2)
            << '\n';
  return ok ? 0 : 1;
}

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonHermitian:
    case ErrorCode::InvalidRank:
    case ErrorCode::InvalidInput:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::MeshTooCoarse:
    case ErrorCode::NearPole:
    case ErrorCode::NoRoot:
    case ErrorCode::WrongBranch:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, eigenmodes and resolvents of a two-edge quantum graph with a shrinking edge"};
  app.require_subcommand(1);

  std::string vc_arg, out, eps_list, lambda_arg, f_path, mesh = "2000,2000";
  double eps = 1e-3, tol = -1.0;
  std::size_t n = 257;
  bool serial = false;

  auto add_vc = [&](CLI::App* c) { c->add_option("--vc", vc_arg, "vertex condition: JSON file or inline JSON")->required(); };
  auto add_eps = [&](CLI::App* c) { c->add_option("--eps", eps, "edge length epsilon"); };

  auto* classify_cmd = app.add_subcommand("classify", "predicted eigenvalue types, kappa values, non-resonance flags");
  add_vc(classify_cmd);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "negative eigenvalues at one epsilon");
  add_vc(spectrum_cmd);
  add_eps(spectrum_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep with rate fits");
  add_vc(sweep_cmd);
  sweep_cmd->add_option("--eps", eps_list, "comma-separated decreasing epsilon grid (default 1e-2..1e-6, 9 points)");
  sweep_cmd->add_option("--out", out, "CSV output path");
  sweep_cmd->add_option("--tol", tol, "tolerance on slope and coefficient (default 0.02)");
  sweep_cmd->add_flag("--serial", serial, "use the single-threaded kernel");
  auto* modes_cmd = app.add_subcommand("modes", "normalized eigenfunctions and localization");
  add_vc(modes_cmd);
  add_eps(modes_cmd);
  modes_cmd->add_option("--out", out, "prefix for per-mode CSV files");
  modes_cmd->add_option("--n", n, "grid nodes per edge (odd, >= 9)");
  auto* resolve_cmd = app.add_subcommand("resolve", "apply the resolvent to a forcing");
  add_vc(resolve_cmd);
  add_eps(resolve_cmd);
  resolve_cmd->add_option("--lambda", lambda_arg, "spectral parameter re,im")->required();
  resolve_cmd->add_option("--f", f_path, "forcing CSV: x,re_fs,im_fs,re_fe,im_fe")->required();
  resolve_cmd->add_option("--out", out, "solution CSV output path");
  resolve_cmd->add_option("--tol", tol, "residual bound (default 1e-7)");
  auto* count_cmd = app.add_subcommand("count", "negative-eigenvalue count");
  add_vc(count_cmd);
  add_eps(count_cmd);
  auto* oracle_cmd = app.add_subcommand("oracle", "finite-element cross-check");
  add_vc(oracle_cmd);
  add_eps(oracle_cmd);
  oracle_cmd->add_option("--mesh", mesh, "nodes n_s,n_e (default 2000,2000)");
  oracle_cmd->add_option("--tol", tol, "relative eigenvalue bound (default 5e-3)");
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify_cmd->parsed()) return report(run_criteria(acceptance_criteria()), std::cout);
    const VertexCondition vc = load_vc(vc_arg);
    if (classify_cmd->parsed()) return cmd_classify(vc);
    if (spectrum_cmd->parsed()) return cmd_spectrum(vc, eps);
    if (sweep_cmd->parsed()) return cmd_sweep(vc, eps_list, out, tol < 0 ? 0.02 : tol, serial);
    if (modes_cmd->parsed()) return cmd_modes(vc, eps, out, n);
    if (resolve_cmd->parsed()) return cmd_resolve(vc, eps, lambda_arg, f_path, out, tol < 0 ? 1e-7 : tol);
    if (count_cmd->parsed()) return cmd_count(vc, eps);
    if (oracle_cmd->parsed()) return cmd_oracle(vc, eps, mesh, tol < 0 ? 5e-3 : tol);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return is_input_error(e.code()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
