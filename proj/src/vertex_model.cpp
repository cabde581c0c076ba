#include "shrinkedge/vertex_model.hpp"

#include <cmath>
#include <sstream>

#include "shrinkedge/detail/overloaded.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/hyperbolic.hpp"
#include "shrinkedge/roots.hpp"

namespace shrinkedge {

namespace {

using detail::overloaded;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::B: return "B";
    case Kind::S: return "S";
    case Kind::C: return "C";
  }
  return "?";
}

Kind kind_from_string(const std::string& s) {
  if (s == "B") return Kind::B;
  if (s == "S") return Kind::S;
  if (s == "C") return Kind::C;
  throw Error(ErrorCode::InvalidInput, "unknown eigenvalue kind '" + s + "'");
}

double predicted_slope(Kind kind) {
  switch (kind) {
    case Kind::B: return 0.0;
    case Kind::S: return -1.0;
    case Kind::C: return -2.0 / 3.0;
  }
  return 0.0;
}

int rank_of(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) { return 2; }, [](const Rank1&) { return 1; },
                               [](const Rank0&) { return 0; }},
                    vc);
}

VertexCondition validate(const VertexCondition& vc) {
  std::visit(overloaded{[](const Rank2&) {},
                        [](const Rank1& r) {
                          if (!std::isfinite(r.mu) || (r.z && !finite(*r.z)))
                            throw Error(ErrorCode::InvalidInput, "rank-1 parameters must be finite");
                        },
                        [](const Rank0& r) {
                          if (!std::isfinite(r.a) || !std::isfinite(r.b) || !finite(r.c))
                            throw Error(ErrorCode::InvalidInput, "rank-0 parameters must be finite");
                        }},
             vc);
  return vc;
}

Mat2 projection_P(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) {
                                 return Mat2{{{cplx{1.0}, cplx{}}, {cplx{}, cplx{1.0}}}};
                               },
                               [](const Rank1& r) {
                                 if (r.z_infinite())
                                   return Mat2{{{cplx{}, cplx{}}, {cplx{}, cplx{1.0}}}};
                                 const cplx z = *r.z;
                                 const double n = 1.0 + std::norm(z);
                                 return Mat2{{{cplx{1.0 / n}, z / n}, {std::conj(z) / n, cplx{std::norm(z) / n}}}};
                               },
                               [](const Rank0&) { return Mat2{}; }},
                    vc);
}

Mat2 projection_Q(const VertexCondition& vc) {
  Mat2 p = projection_P(vc);
  Mat2 q{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) q[i][j] = (i == j ? 1.0 : 0.0) - p[i][j];
  return q;
}

Mat2 coupling_T(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) { return Mat2{}; },
                               [&vc](const Rank1& r) {
                                 Mat2 q = projection_Q(vc);
                                 for (auto& row : q)
                                   for (auto& v : row) v *= r.mu;
                                 return q;
                               },
                               [](const Rank0& r) {
                                 return Mat2{{{cplx{r.a}, r.c}, {std::conj(r.c), cplx{r.b}}}};
                               }},
                    vc);
}

double solve_x_coth(double rhs) {
  if (!(rhs > 1.0)) {
    std::ostringstream os;
    os << "kappa coth kappa = " << rhs << " has no positive root (left side >= 1)";
    throw Error(ErrorCode::NoRoot, os.str());
  }
  // x coth x < x + 1, so the root lies below rhs + 2.
  const double hi = std::max(10.0, rhs + 2.0);
  auto root = bisect([rhs](double k) { return hyp::x_coth(k) - rhs; }, {0.0, hi});
  return *root;
}

double solve_kappa1(std::optional<cplx> z, double mu) {
  if (!z) throw Error(ErrorCode::WrongBranch, "kappa1 is defined only for finite z");
  return solve_x_coth(-mu * (1.0 + std::norm(*z)));
}

double solve_kappa0(double a, double b, cplx c) {
  const double c2 = std::norm(c);
  if (a != 0.0) return solve_x_coth((c2 - a * b) / a);
  if (c != cplx{}) throw Error(ErrorCode::WrongBranch, "a = 0 with c != 0 is type C; there is no kappa0");
  return solve_x_coth(-b);
}

std::vector<EigPrediction> classify(const VertexCondition& vc_in) {
  const VertexCondition vc = validate(vc_in);
  std::vector<EigPrediction> out;
  std::visit(overloaded{[](const Rank2&) {},
                        [&out](const Rank1& r) {
                          if (r.z_infinite()) {
                            if (r.mu < 0.0) out.push_back({Kind::S, std::abs(r.mu)});
                            return;
                          }
                          if (r.mu * (1.0 + r.z_abs2()) < -1.0) {
                            const double k1 = solve_kappa1(r.z, r.mu);
                            out.push_back({Kind::B, k1 * k1});
                          }
                        },
                        [&out](const Rank0& r) {
                          const double c2 = std::norm(r.c);
                          const double threshold = r.a * (r.b + 1.0);
                          if (r.a < 0.0) {
                            if (c2 < threshold) {
                              const double k0 = solve_kappa0(r.a, r.b, r.c);
                              out.push_back({Kind::B, k0 * k0});
                            }
                            out.push_back({Kind::S, std::abs(r.a)});
                          } else if (r.a == 0.0) {
                            if (c2 == 0.0) {
                              if (r.b + 1.0 < 0.0) {
                                const double k0 = solve_kappa0(r.a, r.b, r.c);
                                out.push_back({Kind::B, k0 * k0});
                              }
                            } else {
                              out.push_back({Kind::C, std::pow(c2, 2.0 / 3.0)});
                            }
                          } else if (c2 > threshold) {
                            const double k0 = solve_kappa0(r.a, r.b, r.c);
                            out.push_back({Kind::B, k0 * k0});
                          }
                        }},
             vc);
  return out;
}

bool bls_nonresonant(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) { return true; },
                               [](const Rank1& r) { return !(r.z_infinite() && r.mu == 0.0); },
                               [](const Rank0& r) { return !(r.a == 0.0 && r.c == cplx{}); }},
                    vc);
}

bool borisov_nonresonant(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) { return true; },
                               [](const Rank1& r) { return !r.z_infinite(); },
                               [](const Rank0&) { return false; }},
                    vc);
}

namespace {

cplx complex_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + name + "'");
  const auto& v = j.at(name);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_object()) {
    if (!v.contains("re")) throw Error(ErrorCode::InvalidInput, std::string("field '") + name + "' lacks \"re\"");
    return {v.at("re").get<double>(), v.value("im", 0.0)};
  }
  throw Error(ErrorCode::InvalidInput, std::string("field '") + name + "' must be a number or {re, im}");
}

double real_field(const nlohmann::json& j, const char* name) {
  const cplx v = complex_field(j, name);
  if (v.imag() != 0.0)
    throw Error(ErrorCode::NonHermitian, std::string("field '") + name + "' must be real for T to be Hermitian");
  return v.real();
}

nlohmann::json complex_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

}  // namespace

VertexCondition vertex_condition_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rank_p") || !j.at("rank_p").is_number_integer())
    throw Error(ErrorCode::InvalidRank, "expected integer field \"rank_p\"");
  const int rank = j.at("rank_p").get<int>();
  switch (rank) {
    case 2: return validate(Rank2{});
    case 1: {
      Rank1 r;
      r.mu = real_field(j, "mu");
      if (!j.contains("z")) throw Error(ErrorCode::InvalidInput, "missing field 'z'");
      if (j.at("z").is_string()) {
        if (j.at("z").get<std::string>() != "inf")
          throw Error(ErrorCode::InvalidInput, "z must be {re, im} or \"inf\"");
      } else {
        r.z = complex_field(j, "z");
      }
      return validate(r);
    }
    case 0: {
      Rank0 r;
      r.a = real_field(j, "a");
      r.b = real_field(j, "b");
      r.c = complex_field(j, "c");
      return validate(r);
    }
    default: throw Error(ErrorCode::InvalidRank, "rank_p must be 0, 1 or 2, got " + std::to_string(rank));
  }
}

nlohmann::json to_json(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) { return nlohmann::json{{"rank_p", 2}}; },
                               [](const Rank1& r) {
                                 nlohmann::json j{{"rank_p", 1}, {"mu", r.mu}};
                                 j["z"] = r.z ? complex_json(*r.z) : nlohmann::json("inf");
                                 return j;
                               },
                               [](const Rank0& r) {
                                 return nlohmann::json{
                                     {"rank_p", 0}, {"a", r.a}, {"b", r.b}, {"c", complex_json(r.c)}};
                               }},
                    vc);
}

std::string describe(const VertexCondition& vc) {
  std::ostringstream os;
  std::visit(overloaded{[&os](const Rank2&) { os << "Rank2"; },
                        [&os](const Rank1& r) {
                          os << "Rank1{z=";
                          if (r.z) os << r.z->real() << (r.z->imag() < 0 ? "" : "+") << r.z->imag() << "i";
                          else os << "inf";
                          os << ", mu=" << r.mu << "}";
                        },
                        [&os](const Rank0& r) {
                          os << "Rank0{a=" << r.a << ", b=" << r.b << ", c=" << r.c.real()
                             << (r.c.imag() < 0 ? "" : "+") << r.c.imag() << "i}";
                        }},
             vc);
  return os.str();
}

}  // namespace shrinkedge
