// Command-line front end: differentiation, divided differences, anchor and
// Kronecker matrices, and the randomized verification suites.  All results
// go to stdout as JSON; human-oriented notes go to stderr.  Exit codes:
// 0 success, 1 verification failure, 2 usage or input errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tangent/anchor.hpp"
#include "tangent/expr.hpp"
#include "tangent/hyperlin.hpp"
#include "tangent/json_io.hpp"
#include "tangent/ring.hpp"
#include "tangent/slope.hpp"
#include "tangent/talg.hpp"
#include "tangent/verify.hpp"

namespace {

using tangent::json;

struct Request {
  std::string ring = "rational";
  double float_epsilon = 1e-12;

  std::string expr_text;
  std::vector<std::string> vars;
  int order = 0;  // 0 means "number of --var flags"
  std::string at_bindings;
  std::string v0_text, v1_text, t_text, s_text;
  std::vector<std::string> t_list, s_list;
  std::vector<std::string> args;
  bool inverse = false;
  bool det = false;
  bool adjugate = false;
  std::string blocks_json;

  std::string suite = "all";
  std::uint64_t seed = 1;
  int max_order = 4;
  int cases = 100;
};

template <tangent::Ring R>
bool parse_allows_decimal();

template <>
bool parse_allows_decimal<tangent::RationalScalar>() { return false; }
template <>
bool parse_allows_decimal<tangent::FloatScalar>() { return true; }

template <tangent::Ring R>
R parse_scalar(const std::string& text);

template <>
tangent::RationalScalar parse_scalar<tangent::RationalScalar>(const std::string& text) {
  return tangent::RationalScalar::parse(text);
}
template <>
tangent::FloatScalar parse_scalar<tangent::FloatScalar>(const std::string& text) {
  return tangent::FloatScalar::parse(text);
}

template <tangent::Ring R>
std::vector<R> parse_scalar_list(const std::vector<std::string>& items) {
  std::vector<R> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(parse_scalar<R>(s));
  return out;
}

/// "x=2,y=3" -> {x: 2, y: 3}.
template <tangent::Ring R>
std::map<std::string, R> parse_bindings(const std::string& text) {
  std::map<std::string, R> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("binding '" + item + "' is not name=value");
    out[item.substr(0, eq)] = parse_scalar<R>(item.substr(eq + 1));
    pos = comma + 1;
  }
  return out;
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

template <tangent::Ring R>
int run_derive(const Request& req) {
  const tangent::ExprPtr e = tangent::parse(req.expr_text, parse_allows_decimal<R>());
  if (req.vars.empty()) throw std::invalid_argument("derive: at least one --var is required");
  std::vector<std::string> vars = req.vars;
  const int order = req.order > 0 ? req.order : static_cast<int>(vars.size());
  if (order != static_cast<int>(vars.size())) {
    if (vars.size() != 1)
      throw std::invalid_argument("derive: --order must match the number of --var flags");
    vars.assign(static_cast<std::size_t>(order), vars[0]);
  }
  const auto at = parse_bindings<R>(req.at_bindings);
  const R value = order == 1 ? tangent::derivative(*e, at, vars[0])
                             : tangent::derivative_mixed(*e, at, vars);
  emit(json{{"value", tangent::scalar_to_json(value)}});
  return 0;
}

template <tangent::Ring R>
int run_divdiff(const Request& req) {
  const tangent::ExprPtr e = tangent::parse(req.expr_text, parse_allows_decimal<R>());
  const auto vars = tangent::free_vars(*e);
  if (vars.size() != 1)
    throw std::invalid_argument("divdiff: expression must have exactly one variable");
  const tangent::PointFn<R> f = tangent::expr_point_fn<R>(e, {*vars.begin()});
  const R v0 = parse_scalar<R>(req.v0_text), v1 = parse_scalar<R>(req.v1_text);
  const R t = parse_scalar<R>(req.t_text), s = parse_scalar<R>(req.s_text);
  const auto result = tangent::slope1(f, {v0}, {v1}, t, s);
  emit(json{{"w0", tangent::scalar_to_json(result.coeff(0u).v[0])},
            {"w1", tangent::scalar_to_json(result.coeff(1u).v[0])}});
  return 0;
}

template <tangent::Ring R>
int run_slope(const Request& req) {
  const tangent::ExprPtr e = tangent::parse(req.expr_text, parse_allows_decimal<R>());
  const tangent::TimeLabel<R> label(parse_scalar_list<R>(req.t_list), parse_scalar_list<R>(req.s_list));
  std::map<std::string, tangent::TangentElement<R>> args;
  json point = json::object();
  for (const auto& item : req.args) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--arg '" + item + "' is not name=value");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    tangent::TangentElement<R> elem = [&] {
      if (!value.empty() && value.front() == '[') {
        const json arr = json::parse(value);
        if (!arr.is_array() || arr.size() != tangent::subset_count(label.order()))
          throw std::invalid_argument("--arg " + name + ": expected " +
                                      std::to_string(tangent::subset_count(label.order())) +
                                      " coefficients");
        std::vector<R> coeffs;
        for (const auto& c : arr) coeffs.push_back(tangent::scalar_from_json<R>(c));
        return tangent::TangentElement<R>(label, std::move(coeffs));
      }
      return tangent::from_base<R, R>(label, parse_scalar<R>(value));
    }();
    point[name] = tangent::element_to_json(elem);
    args.emplace(name, std::move(elem));
  }
  const auto result = tangent::extend_expr(*e, label, args);
  emit(json{{"label", tangent::label_to_json(label)},
            {"point", std::move(point)},
            {"result", tangent::element_to_json(result)}});
  return 0;
}

template <tangent::Ring R>
int run_anchor(const Request& req) {
  const tangent::TimeLabel<R> label(parse_scalar_list<R>(req.t_list), parse_scalar_list<R>(req.s_list));
  const auto m = req.inverse ? tangent::anchor_inverse_matrix(label) : tangent::anchor_matrix(label);
  emit(tangent::matrix_to_json(m));
  return 0;
}

template <tangent::Ring R>
tangent::TwoByTwo<R> block_from_json(const json& j) {
  if (j.is_array() && j.size() == 4)
    return {tangent::scalar_from_json<R>(j[0]), tangent::scalar_from_json<R>(j[1]),
            tangent::scalar_from_json<R>(j[2]), tangent::scalar_from_json<R>(j[3])};
  if (j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[1].is_array() &&
      j[1].size() == 2)
    return {tangent::scalar_from_json<R>(j[0][0]), tangent::scalar_from_json<R>(j[0][1]),
            tangent::scalar_from_json<R>(j[1][0]), tangent::scalar_from_json<R>(j[1][1])};
  throw std::invalid_argument("block must be [a,b,c,d] or [[a,b],[c,d]]: " + j.dump());
}

template <tangent::Ring R>
int run_kron(const Request& req) {
  const json blocks_json = json::parse(req.blocks_json);
  if (!blocks_json.is_array() || blocks_json.empty())
    throw std::invalid_argument("--blocks must be a nonempty JSON array");
  std::vector<tangent::TwoByTwo<R>> blocks;
  for (const auto& b : blocks_json) blocks.push_back(block_from_json<R>(b));
  if (req.det) {
    emit(json{{"det", tangent::scalar_to_json(tangent::kron_det(blocks))}});
    return 0;
  }
  if (req.adjugate) {
    emit(tangent::matrix_to_json(tangent::symplectic_adjugate(blocks)));
    return 0;
  }
  if (req.inverse) {
    auto inv = tangent::kron_inverse(blocks);
    if (!inv) throw tangent::NotInvertibleError("kron: some block determinant is not a unit");
    emit(tangent::matrix_to_json(*inv));
    return 0;
  }
  emit(tangent::matrix_to_json(tangent::kron_n(blocks)));
  return 0;
}

int run_verify(const Request& req) {
  tangent::verify::Options opt;
  opt.seed = req.seed;
  opt.max_order = req.max_order;
  opt.cases = req.cases;
  const auto results = tangent::verify::run(req.suite, opt);
  json suites = json::array();
  bool passed = true;
  for (const auto& r : results) {
    json msgs = json::array();
    for (const auto& m : r.messages) msgs.push_back(m);
    suites.push_back(json{{"name", r.name}, {"cases", r.cases}, {"failures", r.failures},
                          {"messages", std::move(msgs)}});
    std::cerr << "suite " << r.name << ": " << r.cases << " cases, " << r.failures
              << " failures\n";
    passed = passed && r.passed();
  }
  emit(json{{"suites", std::move(suites)}, {"passed", passed}});
  return passed ? 0 : 1;
}

template <tangent::Ring R>
int dispatch(const std::string& command, const Request& req) {
  if (command == "derive") return run_derive<R>(req);
  if (command == "divdiff") return run_divdiff<R>(req);
  if (command == "slope") return run_slope<R>(req);
  if (command == "anchor") return run_anchor<R>(req);
  if (command == "kron") return run_kron<R>(req);
  throw std::logic_error("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  Request req;
  CLI::App app{"Tangent-algebra differentiation toolkit"};
  app.require_subcommand(1);
  app.add_option("--ring", req.ring, "Scalar ring")
      ->check(CLI::IsMember({"rational", "float"}))
      ->envname("TANGENT_RING");
  app.add_option("--float-epsilon", req.float_epsilon,
                 "Invertibility threshold for the float ring");

  auto* derive = app.add_subcommand("derive", "Exact derivative of an expression at a point");
  derive->add_option("--expr", req.expr_text, "Expression text")->required();
  derive->add_option("--var", req.vars, "Differentiation variable (repeatable)")->required();
  derive->add_option("--order", req.order, "Derivative order (defaults to the number of --var flags)");
  derive->add_option("--at", req.at_bindings, "Point bindings, e.g. x=2,y=3")->required();

  auto* divdiff = app.add_subcommand("divdiff", "First-order divided difference of an expression");
  divdiff->add_option("--expr", req.expr_text, "Expression in one variable")->required();
  divdiff->add_option("--v0", req.v0_text, "Foot point")->required();
  divdiff->add_option("--v1", req.v1_text, "Direction")->required();
  divdiff->add_option("--t", req.t_text, "Target time")->required();
  divdiff->add_option("--s", req.s_text, "Source time")->required();

  auto* slope = app.add_subcommand("slope", "Order-n extension of an expression at a label");
  slope->add_option("--expr", req.expr_text, "Expression text")->required();
  slope->add_option("--t", req.t_list, "Target times, comma separated")->required()->delimiter(',');
  slope->add_option("--s", req.s_list, "Source times, comma separated")->required()->delimiter(',');
  slope->add_option("--arg", req.args,
                    "Argument binding name=scalar or name=[c0,c1,...] (repeatable)")
      ->required();

  auto* anchor = app.add_subcommand("anchor", "Anchor matrix of a label");
  anchor->add_option("--t", req.t_list, "Target times, comma separated")->required()->delimiter(',');
  anchor->add_option("--s", req.s_list, "Source times, comma separated")->required()->delimiter(',');
  anchor->add_flag("--inverse", req.inverse, "Emit the inverse anchor matrix");

  auto* kron = app.add_subcommand("kron", "Kronecker product of 2x2 blocks");
  kron->add_option("--blocks", req.blocks_json, "JSON array of blocks [a,b,c,d]")->required();
  auto* kinv = kron->add_flag("--inverse", req.inverse, "Emit the closed-form inverse");
  auto* kdet = kron->add_flag("--det", req.det, "Emit the determinant only");
  auto* kadj = kron->add_flag("--adjugate", req.adjugate, "Emit the symplectic adjugate");
  kinv->excludes(kdet, kadj);
  kdet->excludes(kadj);

  auto* verify = app.add_subcommand("verify", "Run randomized property suites (exact rationals)");
  verify->add_option("--suite", req.suite, "all|algebra|anchor|kron|slope|structure")
      ->check(CLI::IsMember({"all", "algebra", "anchor", "kron", "slope", "structure"}));
  verify->add_option("--seed", req.seed, "Random seed");
  verify->add_option("--n", req.max_order, "Maximum order");
  verify->add_option("--cases", req.cases, "Cases per property batch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  tangent::FloatScalar::set_invert_epsilon(req.float_epsilon);

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "verify") return run_verify(req);
    if (req.ring == "float") return dispatch<tangent::FloatScalar>(command, req);
    return dispatch<tangent::RationalScalar>(command, req);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
