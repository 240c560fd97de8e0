#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>

#include "curvetrace/expr.hpp"

namespace curvetrace {

ParseError::ParseError(Code code, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)),
      code_(code),
      offset_(offset) {}

namespace {

std::optional<UnaryOp> function_named(std::string_view name) {
  if (name == "sin") return UnaryOp::Sin;
  if (name == "cos") return UnaryOp::Cos;
  if (name == "tan") return UnaryOp::Tan;
  if (name == "atan") return UnaryOp::Atan;
  if (name == "exp") return UnaryOp::Exp;
  if (name == "log") return UnaryOp::Log;
  if (name == "sqrt") return UnaryOp::Sqrt;
  if (name == "abs") return UnaryOp::Abs;
  if (name == "sign") return UnaryOp::Sign;
  return std::nullopt;
}

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> variables)
      : text_(text), variables_(variables) {}

  Expression run() {
    Expression e = expr();
    skip_space();
    if (pos_ != text_.size()) fail(ParseError::Code::Syntax, "unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Code code, const std::string& what) const {
    throw ParseError(code, pos_ + 1, what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(ParseError::Code::Syntax, std::string("expected '") + c + "'");
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expression primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(ParseError::Code::Syntax, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(ParseError::Code::Syntax, "unexpected character");
  }

  Expression number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail(ParseError::Code::Syntax, "malformed number");
    }
    return Expression::constant(value);
  }

  Expression name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);

    for (std::size_t i = 0; i < variables_.size(); ++i)
      if (variables_[i] == id) return Expression::variable(i);

    if (const auto fn = function_named(id)) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '(')
        fail(ParseError::Code::Syntax, "expected '(' after function " + std::string(id));
      ++pos_;
      Expression arg = expr();
      std::size_t arity = 1;
      while (accept(',')) {
        expr();
        ++arity;
      }
      if (arity != 1) {
        pos_ = start;
        fail(ParseError::Code::Arity,
             std::string(id) + " takes 1 argument, got " + std::to_string(arity));
      }
      expect(')');
      return Expression::unary(*fn, arg);
    }
    if (id == "pi") return Expression::constant(std::numbers::pi);
    if (id == "e") return Expression::constant(std::numbers::e);

    pos_ = start;
    fail(ParseError::Code::UnknownIdentifier, "unknown identifier '" + std::string(id) + "'");
  }

  std::string_view text_;
  std::span<const std::string> variables_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, variables).run();
}

}  // namespace curvetrace
