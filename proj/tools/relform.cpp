#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "relform/parser.hpp"
#include "relform/quantize.hpp"

using namespace relform;

namespace {

struct Problem {
  Context ambient;
  MultiVector pi;
  std::vector<std::string> transverse;
  std::optional<unsigned> truncation;
  unsigned order = 2;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Sections [vars], [poisson], [submanifold], [order]; '#' starts a comment.
Problem read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::vector<std::string>> sections;
  std::string current, line;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    if (current.empty()) throw std::runtime_error("text before the first section: " + line);
    sections[current].push_back(line);
  }
  for (const auto& [name, lines] : sections)
    if (name != "vars" && name != "poisson" && name != "submanifold" && name != "order")
      throw std::runtime_error("unknown section [" + name + "]");

  Problem p;
  std::vector<Variable> vars;
  std::vector<std::string> fibers;
  for (const auto& l : sections["vars"]) {
    auto w = words(l);
    if (w.size() < 2 || (w[1] != "even" && w[1] != "odd") || (w.size() == 3 && w[2] != "fiber") || w.size() > 3)
      throw std::runtime_error("expected 'name even|odd [fiber]', got: " + l);
    vars.push_back({w[0], w[1] == "odd" ? 1 : 0});
    if (w.size() == 3) fibers.push_back(w[0]);
  }
  if (vars.empty()) throw std::runtime_error("no variables declared");
  p.ambient = make_doubled(make_context(vars));
  std::string expr;
  for (const auto& l : sections["poisson"]) expr += l + " ";
  if (trim(expr).empty()) throw std::runtime_error("empty [poisson] section");
  p.pi = parse_poly(p.ambient, expr);

  p.transverse = fibers;
  for (const auto& l : sections["submanifold"]) {
    auto colon = l.find_first_of(":=");
    std::string key = trim(l.substr(0, colon)), value = colon == std::string::npos ? "" : l.substr(colon + 1);
    if (key == "transverse") p.transverse = words(value);
    else if (key == "truncation") p.truncation = static_cast<unsigned>(std::stoul(trim(value)));
    else throw std::runtime_error("expected 'transverse: ...' or 'truncation: K', got: " + l);
  }
  if (!sections["order"].empty()) p.order = static_cast<unsigned>(std::stoul(sections["order"].front()));
  return p;
}

SubmanifoldSpec make_spec(const Problem& p, unsigned max_arity) {
  return SubmanifoldSpec(p.ambient, p.transverse, p.truncation.value_or(default_truncation(p.order, max_arity)));
}

std::vector<int> parse_degrees(const std::string& s) {
  std::vector<int> out;
  for (const auto& w : words(s)) out.push_back(std::stoi(w));
  return out;
}

std::string graph_line(const KGraph& g) {
  std::string s = to_string(g);
  for (std::size_t pos; (pos = s.find('\n')) != std::string::npos;) s.replace(pos, 1, "; ");
  return s;
}

std::string estimate_string(const Estimate& e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g ± %.2g", e.value, e.err);
  return buf;
}

void print_weight_legend(const WeightRegistry& reg) {
  if (reg.size() == 0) return;
  std::cout << "weights:\n";
  for (std::uint32_t id = 0; id < reg.size(); ++id) {
    const auto& w = reg.weight_of(id);
    std::cout << "  w" << id << " = ";
    if (w.method == WeightMethod::exact) std::cout << w.exact.get_str();
    else std::cout << estimate_string({w.value, w.err});
    std::cout << "  [" << graph_line(reg.graph_of(id)) << "]\n";
  }
}

int run_graphs(int n, int m, const std::string& degrees, bool ordered, bool with_weights, const QmcOptions& q) {
  auto degs = parse_degrees(degrees);
  if (static_cast<int>(degs.size()) != n) throw std::runtime_error("need one out-degree per aerial vertex");
  auto graphs = ordered ? enumerate_graphs(n, m, degs) : canonical_graphs(n, m, degs);
  for (const auto& g : graphs) {
    std::cout << graph_line(g);
    if (with_weights) {
      auto w = weight(g, q);
      if (w.method == WeightMethod::exact) std::cout << " w=" << w.exact.get_str() << " err=0";
      else std::cout << " w=" << w.value << " err=" << w.err;
      std::cout << " method=" << to_string(w.method);
    }
    std::cout << "\n";
  }
  return 0;
}

int run_lambda(const std::string& path, unsigned max_arity) {
  auto p = read_problem(path);
  auto spec = make_spec(p, max_arity);
  auto lam = pinfinity_from_poisson(p.pi, spec, max_arity);
  for (std::size_t n = 0; n <= max_arity; ++n) std::cout << "lambda_" << n << " = " << to_string(lam.lambda(n)) << "\n";
  return 0;
}

int run_coiso(const std::string& path) {
  auto p = read_problem(path);
  auto spec = make_spec(p, 2);
  bool coiso = is_coisotropic(p.pi, spec);
  auto lam = pinfinity_from_poisson(p.pi, spec, 2);
  std::cout << "coisotropic: " << (coiso ? "yes" : "no") << "\n";
  std::cout << "lambda_0 = " << to_string(lam.lambda(0)) << "\n";
  std::cout << "lambda_1 = " << to_string(lam.lambda(1)) << "\n";
  return 0;
}

// Every tuple of generators of A (and the unit) up to the given length.
std::vector<std::vector<GradedPoly>> probe_tuples(const Context& base, std::size_t max_len) {
  std::vector<GradedPoly> gens{GradedPoly::constant(base, Rational(1))};
  for (std::size_t v = 0; v < base->size(); ++v) gens.push_back(GradedPoly::variable(base, v));
  std::vector<std::vector<GradedPoly>> out{{}};
  for (std::size_t len = 1, first = 0; len <= max_len; ++len) {
    std::size_t last = out.size();
    for (std::size_t i = first; i < last; ++i)
      for (const auto& g : gens) {
        auto t = out[i];
        t.push_back(g);
        out.push_back(t);
      }
    first = last;
  }
  return out;
}

int run_star(const std::string& path, unsigned max_arity, bool check, double sigmas, const QmcOptions& q) {
  auto p = read_problem(path);
  auto spec = make_spec(p, max_arity);
  WeightRegistry reg(q);
  auto mu = star_assemble(p.pi, spec, {p.order, max_arity}, reg);
  std::cout << "A = k[";
  const auto& base = mu.context();
  for (std::size_t v = 0; v < base->size(); ++v) std::cout << (v ? ", " : "") << base->var(v).name;
  std::cout << "]\n";
  for (unsigned k = 0; k <= mu.order(); ++k)
    for (std::size_t a = 0; a <= mu.max_arity(); ++a) {
      auto part = mu.component(k, a);
      if (!part.is_zero()) std::cout << "eps^" << k << " arity " << a << ": " << to_string(part) << "\n";
    }
  print_weight_legend(reg);
  if (!check) return 0;

  bool ok = true;
  std::size_t tuples = 0;
  for (const auto& args : probe_tuples(base, 3)) {
    auto res = a_infinity_residual(mu, args);
    for (unsigned k = 0; k < res.size(); ++k) {
      auto d = deviation(res[k], reg);
      if (d.exact_zero || d.max_sigma < sigmas) continue;
      ok = false;
      std::cout << "relation fails at eps^" << k << " on (";
      for (std::size_t i = 0; i < args.size(); ++i) std::cout << (i ? ", " : "") << to_string(args[i]);
      std::cout << "): " << to_string(res[k]) << "\n";
    }
    ++tuples;
  }
  std::cout << "check: A-infinity relations on " << tuples << " generator tuples: " << (ok ? "pass" : "FAIL") << "\n";
  if (p.order >= 2) {
    auto an = mu0_anomaly(mu, reg, sigmas);
    bool coiso = is_coisotropic(p.pi, spec);
    std::cout << "check: coisotropic: " << (coiso ? "yes" : "no") << "\n";
    std::cout << "check: eps^1 part of mu_0 = " << to_string(an.first_order) << "\n";
    std::cout << "check: anomaly F = " << to_string(an.curvature) << "\n";
    std::cout << "check: dF = " << to_string(an.differential) << " (" << (an.closed ? "closed" : "NOT closed") << ")\n";
    if (coiso && !an.first_order.is_zero()) ok = false;
    if (!an.closed) ok = false;
  }
  std::cout << "check: " << (ok ? "pass" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded algebra, formality graphs and star products of coisotropic submanifolds"};
  app.require_subcommand(1);

  QmcOptions q;
  auto add_qmc = [&](CLI::App* sub) {
    sub->add_option("--samples", q.samples, "Quasi-random samples per weight")->capture_default_str();
    sub->add_option("--replicates", q.replicates, "Randomized replicates for the error estimate")->capture_default_str();
    sub->add_option("--seed", q.seed, "Seed of the random shifts")->capture_default_str();
  };

  int n = 1, m = 0;
  std::string degrees;
  bool ordered = false;
  auto* graphs = app.add_subcommand("graphs", "List admissible graphs");
  auto* weights = app.add_subcommand("weights", "List admissible graphs with their weights");
  for (auto* sub : {graphs, weights}) {
    sub->add_option("n", n, "Aerial vertices")->required();
    sub->add_option("m", m, "Ground vertices")->required();
    sub->add_option("degrees", degrees, "Out-degrees p1,p2,...")->required();
    sub->add_flag("--ordered", ordered, "List every edge order instead of one per edge set");
  }
  add_qmc(weights);

  std::string file;
  unsigned max_arity = 3;
  auto* lambda = app.add_subcommand("lambda", "Print the P-infinity brackets of a submanifold");
  lambda->add_option("file", file, "Problem file")->required()->check(CLI::ExistingFile);
  lambda->add_option("--max-arity", max_arity, "Largest bracket arity")->capture_default_str();

  auto* coiso = app.add_subcommand("coiso", "Decide coisotropy and print lambda_1");
  coiso->add_option("file", file, "Problem file")->required()->check(CLI::ExistingFile);

  bool check = false;
  double sigmas = 3;
  auto* star = app.add_subcommand("star", "Assemble the star product to the requested order");
  star->add_option("file", file, "Problem file")->required()->check(CLI::ExistingFile);
  star->add_option("--max-arity", max_arity, "Largest operator arity")->capture_default_str();
  star->add_flag("--check", check, "Verify the A-infinity relations and the anomaly; exit 1 on failure");
  star->add_option("--sigmas", sigmas, "Tolerance for Monte Carlo weights")->capture_default_str();
  add_qmc(star);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*graphs) return run_graphs(n, m, degrees, ordered, false, q);
    if (*weights) return run_graphs(n, m, degrees, ordered, true, q);
    if (*lambda) return run_lambda(file, max_arity);
    if (*coiso) return run_coiso(file);
    if (*star) return run_star(file, max_arity, check, sigmas, q);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
