#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "rt/dsl.hpp"
#include "rt/ewise.hpp"
#include "rt/lattice.hpp"
#include "rt/pagewise.hpp"

namespace rt::dsl {

namespace {

class AssertionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace

Environment::Environment(std::uint64_t seed) : rng_(seed) {}

const Tensor* Environment::find(const std::string& name) const {
  auto it = tensors_.find(name);
  return it == tensors_.end() ? nullptr : &it->second;
}

Index Environment::index(const std::string& name) {
  auto it = index_by_name_.find(name);
  if (it != index_by_name_.end()) return it->second;
  Index h = Index::fresh();
  index_by_name_.emplace(name, h);
  return h;
}

std::string Environment::index_name(const Index& h) const {
  for (const auto& [name, idx] : index_by_name_)
    if (idx.same_id(h)) return name;
  return "#" + std::to_string(h.id());
}

namespace {

Tensor as_tensor(const Value& v) {
  if (auto b = std::get_if<bool>(&v)) return Tensor(Array::booleans({1, 1}, {*b}), {});
  return std::get<Tensor>(v);
}

// Wraps an array as a tensor: plain when 2D, fresh indices otherwise.
Tensor wrap(Array a) {
  if (a.ndims() <= 2) return Tensor::plain(std::move(a));
  return Tensor::from_array(std::move(a)).first;
}

// Index subscript: a name under any number of '~'.
bool index_like(const Node& n) {
  if (n.kind == NodeKind::name) return true;
  return n.kind == NodeKind::unary && n.text == "~" && index_like(*n.args[0]);
}

Index to_index(const Node& n, Environment& env) {
  if (n.kind == NodeKind::name) return env.index(n.text);
  return ~to_index(*n.args[0], env);
}

class Evaluator {
 public:
  explicit Evaluator(Environment& env) : env_(env) {}

  Value eval(const Node& n) {
    switch (n.kind) {
      case NodeKind::number:
        if (n.imaginary) return Tensor(Array::scalar(cplx(0, n.value)), {});
        return Tensor::scalar(n.value);
      case NodeKind::name: return name(n);
      case NodeKind::apply: return apply(n);
      case NodeKind::unary: return unary(n);
      case NodeKind::postfix: {
        Tensor t = tensor(*n.args[0]);
        return n.text == "'" ? page_ctranspose(t) : page_transpose(t);
      }
      case NodeKind::binary: return binary(n);
      case NodeKind::matrix: return matrix(n);
      case NodeKind::range: {
        const double lo = number(*n.args[0]), hi = number(*n.args[1]);
        std::vector<double> v;
        for (double x = lo; x <= hi; x += 1.0) v.push_back(x);
        const std::size_t n_v = v.size();
        return Tensor::plain(Array({1, n_v}, std::move(v)));
      }
      case NodeKind::colon: throw SyntaxError(n.at, "':' is only valid as a subscript");
    }
    return false;
  }

  Tensor tensor(const Node& n) { return as_tensor(eval(n)); }

  // Real integer-valued scalar argument.
  double number(const Node& n) {
    Tensor t = tensor(n);
    if (t.degree() != 0 || t.numel() != 1 || t.kind() == Kind::complex)
      throw OperandKindError(where(n) + "expected a real scalar");
    return t.entries().real_at(0);
  }

  std::size_t count(const Node& n) {
    const double v = number(n);
    if (!(v >= 0) || v != std::floor(v))
      throw OperandKindError(where(n) + "expected a nonnegative integer, got " + std::to_string(v));
    return static_cast<std::size_t>(v);
  }

  static std::string where(const Node& n) {
    return std::to_string(n.at.line) + ":" + std::to_string(n.at.col) + ": ";
  }

  Value name(const Node& n) {
    if (const Tensor* t = env_.find(n.text)) {
      if (t->degree() != 0)
        throw OperandKindError(where(n) + "'" + n.text + "' has degree " +
                               std::to_string(t->degree()) + " and needs index subscripts");
      return *t;
    }
    if (n.text == "pi") return Tensor::scalar(std::numbers::pi);
    if (n.text == "true") return true;
    if (n.text == "false") return false;
    throw NameError(where(n) + "unknown name '" + n.text + "'");
  }

  Value apply(const Node& n) {
    if (const Tensor* t = env_.find(n.text)) return subscript(*t, n);
    return call(n);
  }

  Value subscript(const Tensor& t, const Node& n) {
    if (n.args.empty()) return t;
    std::size_t indexed = 0;
    for (const auto& a : n.args) indexed += index_like(*a);
    if (indexed == n.args.size()) {
      std::vector<Index> subs;
      for (const auto& a : n.args) subs.push_back(to_index(*a, env_));
      return reindex(t, std::move(subs));
    }
    if (indexed != 0)
      throw SubscriptKindError(where(n) + "subscripts of '" + n.text +
                               "' mix indices and numbers");
    std::vector<Subscript> subs;
    for (const auto& a : n.args) {
      if (a->kind == NodeKind::colon) {
        subs.push_back(Subscript::colon());
      } else if (a->kind == NodeKind::range) {
        subs.push_back(Subscript::range(count(*a->args[0]), count(*a->args[1])));
      } else {
        subs.push_back(Subscript::at(count(*a)));
      }
    }
    return wrap(slice(t, subs));
  }

  Dims dims_from(const Node& n, std::size_t first) {
    Dims d;
    for (std::size_t k = first; k < n.args.size(); ++k) d.push_back(count(*n.args[k]));
    if (d.empty()) d = {1, 1};
    if (d.size() == 1) d.push_back(d[0]);
    return canonical_dims(d);
  }

  void arity(const Node& n, std::size_t lo, std::size_t hi) {
    if (n.args.size() < lo || n.args.size() > hi)
      throw OperandKindError(where(n) + n.text + "() takes " + std::to_string(lo) +
                             (hi != lo ? " to " + std::to_string(hi) : "") + " arguments, got " +
                             std::to_string(n.args.size()));
  }

  Value call(const Node& n) {
    const std::string& f = n.text;
    if (f == "rand" || f == "randn" || f == "ones" || f == "zeros") {
      const Dims d = dims_from(n, 0);
      std::vector<double> v(product_of(d));
      if (f == "rand") {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& x : v) x = u(env_.rng());
      } else if (f == "randn") {
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& x : v) x = g(env_.rng());
      } else if (f == "ones") {
        std::fill(v.begin(), v.end(), 1.0);
      }
      return wrap(Array(d, std::move(v)));
    }
    if (f == "eye") {
      arity(n, 1, 2);
      const std::size_t r = count(*n.args[0]);
      const std::size_t c = n.args.size() > 1 ? count(*n.args[1]) : r;
      std::vector<double> v(r * c, 0.0);
      for (std::size_t i = 0; i < std::min(r, c); ++i) v[i * (r + 1)] = 1.0;
      return Tensor::plain(Array({r, c}, std::move(v)));
    }
    if (f == "reshape") {
      if (n.args.size() < 2) arity(n, 2, 2);
      Tensor t = tensor(*n.args[0]);
      Dims d;
      for (std::size_t k = 1; k < n.args.size(); ++k) d.push_back(count(*n.args[k]));
      if (d.size() == 1) d.push_back(1);
      if (product_of(d) != t.numel())
        throw DimMismatchError(where(n) + "reshape to " + dims_string(d) + " changes numel " +
                               std::to_string(t.numel()));
      return wrap(t.entries().reshaped(canonical_dims(d)));
    }
    static const std::pair<const char*, UnaryOp> unary_fns[] = {
        {"abs", UnaryOp::abs},   {"log", UnaryOp::log},   {"exp", UnaryOp::exp},
        {"conj", UnaryOp::conj}, {"real", UnaryOp::real}, {"imag", UnaryOp::imag},
        {"step", UnaryOp::step}, {"not", UnaryOp::logical_not}};
    for (const auto& [name, op] : unary_fns) {
      if (f == name) {
        arity(n, 1, 1);
        return ewise_unary(op, tensor(*n.args[0]));
      }
    }
    if (f == "round") {
      arity(n, 1, 2);
      const int p = n.args.size() > 1 ? static_cast<int>(number(*n.args[1])) : 0;
      return ewise_unary(UnaryOp::round, tensor(*n.args[0]), p);
    }
    if (f == "trace") return arity(n, 1, 1), page_trace(tensor(*n.args[0]));
    if (f == "diag") return arity(n, 1, 1), page_diag(tensor(*n.args[0]));
    if (f == "transpose") return arity(n, 1, 1), page_transpose(tensor(*n.args[0]));
    if (f == "ctranspose") return arity(n, 1, 1), page_ctranspose(tensor(*n.args[0]));
    if (f == "cat") {
      if (n.args.size() < 2) arity(n, 2, 2);
      std::vector<Tensor> ops;
      for (std::size_t k = 1; k < n.args.size(); ++k) ops.push_back(tensor(*n.args[k]));
      const Node& w = *n.args[0];
      if (index_like(w)) return concat(to_index(w, env_), ops);
      const std::size_t axis = count(w);
      if (axis != 1 && axis != 2)
        throw OperandKindError(where(w) + "cat() needs an index, 1 or 2 as first argument");
      return concat(axis == 1 ? MatrixAxis::rows : MatrixAxis::cols, ops);
    }
    if (f == "sum") {
      if (n.args.empty()) arity(n, 1, 1);
      Tensor t = tensor(*n.args[0]);
      std::vector<Index> over;
      for (std::size_t k = 1; k < n.args.size(); ++k) {
        if (!index_like(*n.args[k]))
          throw SubscriptKindError(where(*n.args[k]) + "sum() takes indices after the operand");
        over.push_back(to_index(*n.args[k], env_));
      }
      return sum(t, over);
    }
    if (f == "isequal") {
      if (n.args.size() < 2) arity(n, 2, 2);
      std::vector<Tensor> ops;
      for (const auto& a : n.args) ops.push_back(tensor(*a));
      return equal_all(ops);
    }
    throw NameError(where(n) + "unknown name '" + f + "'");
  }

  Value unary(const Node& n) {
    Value v = eval(*n.args[0]);
    if (n.text == "~") {
      if (auto b = std::get_if<bool>(&v)) return !*b;
      return ewise_unary(UnaryOp::logical_not, std::get<Tensor>(v));
    }
    Tensor t = as_tensor(v);
    return ewise_unary(n.text == "-" ? UnaryOp::neg : UnaryOp::uplus, t);
  }

  Value binary(const Node& n) {
    Tensor a = tensor(*n.args[0]);
    Tensor b = tensor(*n.args[1]);
    const std::string& op = n.text;
    if (op == "*") return product(a, b);
    if (op == "\\") return solve_left(a, b);
    if (op == "/") return solve_right(a, b);
    static const std::pair<const char*, BinaryOp> ops[] = {
        {"+", BinaryOp::add},          {"-", BinaryOp::sub},        {"==", BinaryOp::eq},
        {"~=", BinaryOp::ne},          {"<", BinaryOp::lt},         {">", BinaryOp::gt},
        {"<=", BinaryOp::le},          {">=", BinaryOp::ge},        {"&", BinaryOp::logical_and},
        {"|", BinaryOp::logical_or},   {".*", BinaryOp::times},     {"./", BinaryOp::rdivide},
        {".\\", BinaryOp::ldivide},    {".^", BinaryOp::power}};
    for (const auto& [sym, code] : ops)
      if (op == sym) return ewise_binary(code, a, b);
    throw SyntaxError(n.at, "unknown operator '" + op + "'");
  }

  Value matrix(const Node& n) {
    if (n.rows.empty()) return Tensor::plain(Array::zeros({0, 0}));
    std::vector<Tensor> rows;
    for (const auto& row : n.rows) {
      std::vector<Tensor> elems;
      for (const auto& e : row) elems.push_back(tensor(*e));
      rows.push_back(elems.size() == 1 ? elems[0] : concat(MatrixAxis::cols, elems));
    }
    return rows.size() == 1 ? rows[0] : concat(MatrixAxis::rows, rows);
  }

 private:
  Environment& env_;
};

bool truthy(const Value& v) {
  if (auto b = std::get_if<bool>(&v)) return *b;
  const Tensor& t = std::get<Tensor>(v);
  if (t.numel() == 0) return false;
  for (std::size_t k = 0; k < t.numel(); ++k)
    if (t.entries().complex_at(k) == cplx(0)) return false;
  return true;
}

std::string entry_text(const Array& a, std::size_t k) {
  char buf[64];
  switch (a.kind()) {
    case Kind::boolean: return a.real_at(k) != 0 ? "1" : "0";
    case Kind::real: std::snprintf(buf, sizeof buf, "%.6g", a.real_at(k)); return buf;
    case Kind::complex: {
      const cplx z = a.complex_at(k);
      std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
      return buf;
    }
  }
  return {};
}

std::string index_list(const Tensor& t, const Environment& env) {
  std::string s;
  for (std::size_t k = 0; k < t.degree(); ++k) {
    const Index& h = t.indices()[k];
    s += (k ? ", " : "") + std::string(h.variant() ? "" : "~") + env.index_name(h);
  }
  return s;
}

}  // namespace

Value evaluate(const Node& node, Environment& env) { return Evaluator(env).eval(node); }

Value execute(const Statement& s, Environment& env) {
  Evaluator ev(env);
  switch (s.kind) {
    case StatementKind::expression: {
      Value v = ev.eval(*s.expr);
      if (auto t = std::get_if<Tensor>(&v)) env.set("ans", *t);
      return v;
    }
    case StatementKind::assert_true: {
      Value v = ev.eval(*s.expr);
      if (!truthy(v)) throw AssertionFailed("assertion failed: " + to_string(*s.expr));
      return v;
    }
    case StatementKind::assign: break;
  }
  Value v = ev.eval(*s.expr);
  const Node& target = *s.target;
  if (target.kind == NodeKind::name) {
    Tensor t = as_tensor(v);
    env.set(target.text, t);
    return t;
  }
  std::vector<Index> subs;
  for (const auto& a : target.args) {
    if (!index_like(*a))
      throw SubscriptKindError(std::to_string(a->at.line) + ":" + std::to_string(a->at.col) +
                               ": assignment subscripts must be indices");
    subs.push_back(to_index(*a, env));
  }
  if (std::holds_alternative<bool>(v))
    throw AssignKindError("a logical value cannot take index subscripts");
  const Tensor* old = env.find(target.text);
  Tensor stored = assign(old ? *old : Tensor(), subs, std::get<Tensor>(v));
  env.set(target.text, stored);
  return stored;
}

std::string describe(const Value& v, const Environment& env, std::size_t max_entries) {
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const Tensor& t = std::get<Tensor>(v);
  std::string s = std::string(kind_name(t.kind())) + ", degree " + std::to_string(t.degree()) +
                  ", " + dims_string(t.entries().dims());
  if (t.degree()) s += ", indices (" + index_list(t, env) + ")";
  s += "\n  [";
  const std::size_t n = std::min(max_entries, t.numel());
  for (std::size_t k = 0; k < n; ++k) s += (k ? ", " : "") + entry_text(t.entries(), k);
  if (t.numel() > n) s += ", ...";
  return s + "]";
}

std::string to_json(const Value& v, const Environment& env) {
  using nlohmann::json;
  json j;
  if (auto b = std::get_if<bool>(&v)) {
    j["value"] = *b;
    j["dims"] = json::array();
    j["indices"] = json::array();
    return j.dump();
  }
  const Tensor& t = std::get<Tensor>(v);
  const Array& a = t.entries();
  json values = json::array();
  for (std::size_t k = 0; k < a.numel(); ++k) {
    switch (a.kind()) {
      case Kind::boolean: values.push_back(a.real_at(k) != 0); break;
      case Kind::real: values.push_back(a.real_at(k)); break;
      case Kind::complex: {
        const cplx z = a.complex_at(k);
        values.push_back({z.real(), z.imag()});
        break;
      }
    }
  }
  j["value"] = values;
  j["dims"] = a.dims();
  json idx = json::array();
  for (const auto& h : t.indices())
    idx.push_back(std::string(h.variant() ? "" : "~") + env.index_name(h));
  j["indices"] = idx;
  j["kind"] = kind_name(a.kind());
  return j.dump();
}

RunReport run_script(std::string_view text, Environment& env, std::ostream& out) {
  RunReport report;
  Program prog;
  try {
    prog = parse_program(text);
  } catch (const SyntaxError& e) {
    report.ok = false;
    report.error = e.what();
    return report;
  }
  for (const auto& s : prog) {
    try {
      Value v = execute(s, env);
      ++report.statements;
      if (s.quiet || s.kind == StatementKind::assert_true) continue;
      std::string label = "ans";
      if (s.kind == StatementKind::assign) label = s.target->text;
      if (s.kind == StatementKind::expression && std::holds_alternative<bool>(v)) label = "ans";
      out << label << " = " << describe(v, env) << "\n";
    } catch (const std::exception& e) {
      report.ok = false;
      std::string msg = e.what();
      // Messages from the evaluator may already carry a position.
      const std::string pos = std::to_string(s.at.line) + ":" + std::to_string(s.at.col);
      report.error = msg.rfind(std::to_string(s.at.line) + ":", 0) == 0 ? msg : pos + ": " + msg;
      return report;
    }
  }
  return report;
}

}  // namespace rt::dsl
