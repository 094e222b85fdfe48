#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rt/errors.hpp"
#include "rt/tensor.hpp"

namespace rt::dsl {

struct Location {
  int line = 1;
  int col = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(Location at, const std::string& what);
  Location where() const noexcept { return at_; }

 private:
  Location at_;
};

class NameError : public Error {
 public:
  using Error::Error;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind {
  number,   // value, imaginary
  name,     // text
  apply,    // text(args...): tensor subscripting or builtin call
  unary,    // op, args[0]
  postfix,  // op, args[0]
  binary,   // op, args[0], args[1]
  matrix,   // rows of elements
  colon,    // bare ':' subscript
  range,    // args[0] : args[1]
};

struct Node {
  NodeKind kind = NodeKind::number;
  Location at;
  double value = 0;
  bool imaginary = false;
  std::string text;  // name, or operator spelling
  std::vector<NodePtr> args;
  std::vector<std::vector<NodePtr>> rows;
};

bool same_ast(const Node& a, const Node& b);

enum class StatementKind { expression, assign, assert_true };

struct Statement {
  StatementKind kind = StatementKind::expression;
  Location at;
  NodePtr target;  // name or apply node for assignments
  NodePtr expr;
  bool quiet = false;  // trailing ';'
};

using Program = std::vector<Statement>;

/// Parses one expression; trailing text is an error.
NodePtr parse_expression(std::string_view text);
/// Parses statements separated by newlines or ';'.
Program parse_program(std::string_view text);

/// Fully parenthesized spelling that parses back to the same tree.
std::string to_string(const Node& node);
std::string to_string(const Statement& stmt);

using Value = std::variant<Tensor, bool>;

/// Named tensors, interned index names and the random stream.
class Environment {
 public:
  explicit Environment(std::uint64_t seed = 0);

  void set(const std::string& name, Tensor t) { tensors_[name] = std::move(t); }
  const Tensor* find(const std::string& name) const;
  const std::map<std::string, Tensor>& tensors() const noexcept { return tensors_; }

  /// The true-variant index interned under `name`.
  Index index(const std::string& name);
  /// Name of an interned index id, or "#<id>" for anonymous ones.
  std::string index_name(const Index& h) const;

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  std::map<std::string, Tensor> tensors_;
  std::map<std::string, Index> index_by_name_;
  std::mt19937_64 rng_;
};

Value evaluate(const Node& node, Environment& env);
/// Executes one statement; assignments return the stored tensor and set no
/// `ans`, other expressions are stored as `ans`.
Value execute(const Statement& stmt, Environment& env);

/// Summary line(s): degree, dims, indices and leading entries.
std::string describe(const Value& v, const Environment& env, std::size_t max_entries = 8);
/// JSON record {value, dims, indices}.
std::string to_json(const Value& v, const Environment& env);

struct RunReport {
  bool ok = true;
  std::size_t statements = 0;
  std::string error;  // "line:col: message" on failure
};

/// Runs a script, writing result summaries of non-quiet statements to `out`.
/// Stops at the first failed assert or error.
RunReport run_script(std::string_view text, Environment& env, std::ostream& out);

}  // namespace rt::dsl
