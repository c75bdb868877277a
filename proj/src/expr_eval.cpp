// Copyright 2026 The DCE Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dce/expr_eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <regex>

#include "dce/lexer.hpp"

namespace dce::fold {

bool BoundMethod::operator==(const BoundMethod& other) const {
  return name == other.name && receiver && other.receiver &&
         *receiver == *other.receiver;
}

bool Value::is_number() const {
  return std::holds_alternative<std::int64_t>(data) ||
         std::holds_alternative<double>(data);
}

bool Value::operator==(const Value& other) const {
  if (is_number() && other.is_number()) {
    if (std::holds_alternative<std::int64_t>(data) &&
        std::holds_alternative<std::int64_t>(other.data)) {
      return std::get<std::int64_t>(data) == std::get<std::int64_t>(other.data);
    }
    auto as_double = [](const Value& v) {
      return std::holds_alternative<double>(v.data)
                 ? std::get<double>(v.data)
                 : static_cast<double>(std::get<std::int64_t>(v.data));
    };
    return as_double(*this) == as_double(other);
  }
  if (data.index() != other.data.index()) return false;
  if (auto* list = std::get_if<std::shared_ptr<List>>(&data)) {
    const auto& rhs = std::get<std::shared_ptr<List>>(other.data);
    return *list && rhs && **list == *rhs;
  }
  return data == other.data;
}

Value make_list(List items) {
  return Value{std::make_shared<List>(std::move(items))};
}

void Env::bind(const std::string& name, Value value) {
  unknown.erase(name);
  bindings[name] = std::move(value);
}

void Env::forget(const std::string& name) {
  bindings.erase(name);
  unknown.insert(name);
}

namespace {

using Maybe = std::optional<Value>;

enum class TokKind { kNumber, kString, kIdent, kOp, kEnd, kBad };

struct Tok {
  TokKind kind = TokKind::kEnd;
  std::string text;
  Value value;
};

constexpr std::string_view kMultiOps[] = {"**", "//", "<=", ">=", "==",
                                          "!=", "&&", "||", "->"};

std::optional<std::string> unescape(std::string_view body, bool raw) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\' || raw) {
      out += body[i];
      continue;
    }
    if (++i >= body.size()) return std::nullopt;
    switch (body[i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case '\\': out += '\\'; break;
      case '\'': out += '\''; break;
      case '"': out += '"'; break;
      case '0': out += '\0'; break;
      default: return std::nullopt;
    }
  }
  return out;
}

std::vector<Tok> tokenize(std::string_view text, Language language) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto bad = [&] {
    out.push_back({TokKind::kBad, "", {}});
    return out;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t start = i;
      bool is_float = false;
      if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
        i += 2;
        while (i < text.size() && std::isxdigit(static_cast<unsigned char>(text[i]))) ++i;
        auto digits = std::string(text.substr(start + 2, i - start - 2));
        if (digits.empty()) return bad();
        out.push_back({TokKind::kNumber, std::string(text.substr(start, i - start)),
                       Value{static_cast<std::int64_t>(std::stoll(digits, nullptr, 16))}});
        continue;
      }
      while (i < text.size()) {
        char d = text[i];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '_') {
          ++i;
        } else if (d == '.' && !(i + 1 < text.size() && text[i + 1] == '.')) {
          is_float = true;
          ++i;
        } else if ((d == 'e' || d == 'E') && i + 1 < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i + 1])) ||
                    text[i + 1] == '-' || text[i + 1] == '+')) {
          is_float = true;
          i += 2;
        } else {
          break;
        }
      }
      std::string digits;
      for (char d : text.substr(start, i - start)) {
        if (d != '_') digits += d;
      }
      // Java literal suffixes.
      if (i < text.size() && language == Language::kJava) {
        char s = text[i];
        if (s == 'L' || s == 'l') {
          ++i;
        } else if (s == 'd' || s == 'D' || s == 'f' || s == 'F') {
          is_float = true;
          ++i;
        }
      }
      if (i < text.size() && lex::is_ident_char(text[i])) return bad();
      Value value = is_float ? Value{std::stod(digits)}
                             : Value{static_cast<std::int64_t>(std::stoll(digits))};
      out.push_back({TokKind::kNumber, digits, value});
      continue;
    }
    if (lex::is_ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && lex::is_ident_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      bool prefix = language == Language::kPython && word.size() <= 2 &&
                    i < text.size() && (text[i] == '\'' || text[i] == '"') &&
                    word.find_first_not_of("rRbBuUfF") == std::string::npos;
      if (!prefix) {
        out.push_back({TokKind::kIdent, word, {}});
        continue;
      }
      if (word.find_first_of("fFbB") != std::string::npos) return bad();
      c = text[i];
    }
    if (c == '"' || c == '\'') {
      bool raw = i > 0 && (text[i - 1] == 'r' || text[i - 1] == 'R');
      if (text.substr(i, 3) == std::string(3, c)) return bad();
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != c) {
        if (text[j] == '\\' && !raw) ++j;
        ++j;
      }
      if (j >= text.size()) return bad();
      auto body = unescape(text.substr(i + 1, j - i - 1), raw);
      if (!body) return bad();
      if (language == Language::kJava && c == '\'') {
        // char literal: fold as its code point
        if (body->size() != 1) return bad();
        out.push_back({TokKind::kNumber, *body,
                       Value{static_cast<std::int64_t>(
                           static_cast<unsigned char>((*body)[0]))}});
      } else {
        out.push_back({TokKind::kString, *body, Value{*body}});
      }
      i = j + 1;
      continue;
    }
    bool matched = false;
    for (auto op : kMultiOps) {
      if (text.substr(i, op.size()) == op) {
        out.push_back({TokKind::kOp, std::string(op), {}});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/%<>!()[]{},.:;=~").find(c) == std::string_view::npos) {
      return bad();
    }
    out.push_back({TokKind::kOp, std::string(1, c), {}});
    ++i;
  }
  out.push_back({TokKind::kEnd, "", {}});
  return out;
}

double as_double(const Value& v) {
  return std::holds_alternative<double>(v.data)
             ? std::get<double>(v.data)
             : static_cast<double>(std::get<std::int64_t>(v.data));
}

bool both_ints(const Value& a, const Value& b) {
  return std::holds_alternative<std::int64_t>(a.data) &&
         std::holds_alternative<std::int64_t>(b.data);
}

const std::string* as_string(const Value& v) {
  return std::get_if<std::string>(&v.data);
}

const List* as_list(const Value& v) {
  auto* p = std::get_if<std::shared_ptr<List>>(&v.data);
  return p && *p ? p->get() : nullptr;
}

Maybe checked(std::int64_t a, std::int64_t b, char op) {
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case '+': overflow = __builtin_add_overflow(a, b, &r); break;
    case '-': overflow = __builtin_sub_overflow(a, b, &r); break;
    case '*': overflow = __builtin_mul_overflow(a, b, &r); break;
    default: return std::nullopt;
  }
  if (overflow) return std::nullopt;
  return Value{r};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Maybe arithmetic(const Value& a, const std::string& op, const Value& b,
                 Language language) {
  bool python = language == Language::kPython;
  if (op == "+") {
    if (auto* sa = as_string(a)) {
      if (auto* sb = as_string(b)) return Value{*sa + *sb};
      if (!python && std::holds_alternative<std::int64_t>(b.data)) {
        return Value{*sa + std::to_string(std::get<std::int64_t>(b.data))};
      }
      return std::nullopt;
    }
    if (!python && as_string(b) && std::holds_alternative<std::int64_t>(a.data)) {
      return Value{std::to_string(std::get<std::int64_t>(a.data)) + *as_string(b)};
    }
    if (python && as_list(a) && as_list(b)) {
      List joined = *as_list(a);
      joined.insert(joined.end(), as_list(b)->begin(), as_list(b)->end());
      return make_list(std::move(joined));
    }
  }
  if (op == "*" && python) {
    const Value* text = as_string(a) ? &a : (as_string(b) ? &b : nullptr);
    const Value* count = text == &a ? &b : &a;
    if (text && std::holds_alternative<std::int64_t>(count->data)) {
      std::string out;
      auto n = std::get<std::int64_t>(count->data);
      if (n > 4096) return std::nullopt;
      for (std::int64_t k = 0; k < n; ++k) out += *as_string(*text);
      return Value{out};
    }
  }
  if (!a.is_number() || !b.is_number()) return std::nullopt;
  if (both_ints(a, b)) {
    auto x = std::get<std::int64_t>(a.data);
    auto y = std::get<std::int64_t>(b.data);
    if (op == "+" || op == "-" || op == "*") return checked(x, y, op[0]);
    if (op == "/" && !python) {
      if (y == 0) return std::nullopt;
      return Value{x / y};
    }
    if (op == "//") {
      if (y == 0) return std::nullopt;
      return Value{floor_div(x, y)};
    }
    if (op == "%") {
      if (y == 0) return std::nullopt;
      if (!python) return Value{x % y};
      return Value{x - floor_div(x, y) * y};
    }
    if (op == "**" && python) {
      if (y < 0) return Value{std::pow(static_cast<double>(x), static_cast<double>(y))};
      std::int64_t r = 1;
      for (std::int64_t k = 0; k < y; ++k) {
        if (__builtin_mul_overflow(r, x, &r)) return std::nullopt;
      }
      return Value{r};
    }
  }
  double x = as_double(a);
  double y = as_double(b);
  if (op == "+") return Value{x + y};
  if (op == "-") return Value{x - y};
  if (op == "*") return Value{x * y};
  if (op == "/") {
    if (y == 0.0) return std::nullopt;
    return Value{x / y};
  }
  if (op == "//" && python) {
    if (y == 0.0) return std::nullopt;
    return Value{std::floor(x / y)};
  }
  if (op == "%") {
    if (y == 0.0) return std::nullopt;
    double r = std::fmod(x, y);
    if (python && r != 0.0 && ((r < 0) != (y < 0))) r += y;
    return Value{r};
  }
  if (op == "**" && python) return Value{std::pow(x, y)};
  return std::nullopt;
}

std::optional<int> order(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (both_ints(a, b)) {
      auto x = std::get<std::int64_t>(a.data);
      auto y = std::get<std::int64_t>(b.data);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    double x = as_double(a);
    double y = as_double(b);
    if (std::isnan(x) || std::isnan(y)) return std::nullopt;
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (as_string(a) && as_string(b)) {
    int c = as_string(a)->compare(*as_string(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return std::nullopt;
}

Maybe compare(const Value& a, const std::string& op, const Value& b,
              Language language) {
  if (op == "==" || op == "!=") {
    bool known_types = (a.is_number() && b.is_number()) ||
                       a.data.index() == b.data.index();
    if (!known_types && language == Language::kJava) return std::nullopt;
    if (!known_types) return Value{op == "!="};
    if (language == Language::kJava && as_string(a)) {
      // Reference comparison of strings is not foldable.
      return std::nullopt;
    }
    bool eq = a == b;
    return Value{op == "==" ? eq : !eq};
  }
  auto c = order(a, b);
  if (!c) return std::nullopt;
  if (op == "<") return Value{*c < 0};
  if (op == "<=") return Value{*c <= 0};
  if (op == ">") return Value{*c > 0};
  if (op == ">=") return Value{*c >= 0};
  return std::nullopt;
}

bool sortable(const List& items) {
  if (items.empty()) return true;
  bool numbers = std::all_of(items.begin(), items.end(),
                             [](const Value& v) { return v.is_number(); });
  bool strings = std::all_of(items.begin(), items.end(),
                             [](const Value& v) { return as_string(v) != nullptr; });
  return numbers || strings;
}

void sort_values(List& items) {
  std::stable_sort(items.begin(), items.end(), [](const Value& a, const Value& b) {
    auto c = order(a, b);
    return c && *c < 0;
  });
}

// Java reference-type names a boxed value is an instance of.
bool java_instance_of(const Value& v, const std::string& type) {
  if (type == "Object") return !std::holds_alternative<None>(v.data);
  if (std::holds_alternative<std::int64_t>(v.data)) {
    return type == "Integer" || type == "Number" || type == "Comparable";
  }
  if (std::holds_alternative<double>(v.data)) {
    return type == "Double" || type == "Number" || type == "Comparable";
  }
  if (std::holds_alternative<bool>(v.data)) return type == "Boolean";
  if (as_string(v)) {
    return type == "String" || type == "CharSequence" || type == "Comparable";
  }
  return false;
}

Maybe python_isinstance(const Value& v, const Value& type) {
  auto* sym = std::get_if<Symbol>(&type.data);
  if (!sym) return std::nullopt;
  const std::string& t = sym->path;
  if (t == "object") return Value{true};
  if (t == "bool") return Value{std::holds_alternative<bool>(v.data)};
  if (t == "int") {
    return Value{std::holds_alternative<std::int64_t>(v.data) ||
                 std::holds_alternative<bool>(v.data)};
  }
  if (t == "float") return Value{std::holds_alternative<double>(v.data)};
  if (t == "str") return Value{as_string(v) != nullptr};
  if (t == "list") return Value{as_list(v) != nullptr};
  if (t == "dict" || t == "tuple" || t == "set") return Value{false};
  return std::nullopt;
}

Maybe numeric_unary(const Value& v, double (*fn)(double), bool to_int) {
  if (!v.is_number()) return std::nullopt;
  if (std::holds_alternative<std::int64_t>(v.data)) {
    return to_int ? v : Value{static_cast<double>(std::get<std::int64_t>(v.data))};
  }
  double r = fn(std::get<double>(v.data));
  if (!to_int) return Value{r};
  if (!std::isfinite(r) || std::fabs(r) > 9.0e18) return std::nullopt;
  return Value{static_cast<std::int64_t>(r)};
}

Maybe extremum(const std::vector<Value>& args, bool want_max) {
  const List* pool = nullptr;
  List flat;
  if (args.size() == 1) {
    pool = as_list(args[0]);
  } else {
    flat = args;
    pool = &flat;
  }
  if (!pool || pool->empty()) return std::nullopt;
  Value best = pool->front();
  for (const auto& v : *pool) {
    auto c = order(v, best);
    if (!c) return std::nullopt;
    if ((want_max && *c > 0) || (!want_max && *c < 0)) best = v;
  }
  return best;
}

Maybe abs_value(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v.data)) {
    auto x = std::get<std::int64_t>(v.data);
    if (x == std::numeric_limits<std::int64_t>::min()) return std::nullopt;
    return Value{x < 0 ? -x : x};
  }
  if (std::holds_alternative<double>(v.data)) {
    return Value{std::fabs(std::get<double>(v.data))};
  }
  return std::nullopt;
}

Maybe call_builtin(const std::string& path, const std::vector<Value>& args,
                   Language language) {
  bool python = language == Language::kPython;
  auto arity = [&](std::size_t n) { return args.size() == n; };
  if (python) {
    if (path == "len" && arity(1)) {
      if (auto* s = as_string(args[0])) return Value{static_cast<std::int64_t>(s->size())};
      if (auto* l = as_list(args[0])) return Value{static_cast<std::int64_t>(l->size())};
      return std::nullopt;
    }
    if (path == "abs" && arity(1)) return abs_value(args[0]);
    if (path == "min" && !args.empty()) return extremum(args, false);
    if (path == "max" && !args.empty()) return extremum(args, true);
    if (path == "sorted" && arity(1)) {
      auto* l = as_list(args[0]);
      if (!l || !sortable(*l)) return std::nullopt;
      List copy = *l;
      sort_values(copy);
      return make_list(std::move(copy));
    }
    if (path == "sum" && arity(1)) {
      auto* l = as_list(args[0]);
      if (!l) return std::nullopt;
      Value total{std::int64_t{0}};
      for (const auto& v : *l) {
        auto next = arithmetic(total, "+", v, language);
        if (!next) return std::nullopt;
        total = *next;
      }
      return total;
    }
    if (path == "isinstance" && arity(2)) return python_isinstance(args[0], args[1]);
    if (path == "int" && arity(1)) {
      if (std::holds_alternative<bool>(args[0].data)) {
        return Value{static_cast<std::int64_t>(std::get<bool>(args[0].data))};
      }
      return numeric_unary(args[0], std::trunc, true);
    }
    if (path == "float" && arity(1) && args[0].is_number()) {
      return Value{as_double(args[0])};
    }
    if (path == "str" && arity(1) &&
        std::holds_alternative<std::int64_t>(args[0].data)) {
      return Value{std::to_string(std::get<std::int64_t>(args[0].data))};
    }
    if ((path == "floor" || path == "math.floor") && arity(1)) {
      return numeric_unary(args[0], std::floor, true);
    }
    if ((path == "ceil" || path == "math.ceil") && arity(1)) {
      return numeric_unary(args[0], std::ceil, true);
    }
    if (path == "math.fabs" && arity(1) && args[0].is_number()) {
      return Value{std::fabs(as_double(args[0]))};
    }
    return std::nullopt;
  }
  if (path == "Math.floor" && arity(1)) return numeric_unary(args[0], std::floor, false);
  if (path == "Math.ceil" && arity(1)) return numeric_unary(args[0], std::ceil, false);
  if (path == "Math.abs" && arity(1)) return abs_value(args[0]);
  if ((path == "Math.min" || path == "Math.max") && arity(2)) {
    if (!args[0].is_number() || !args[1].is_number()) return std::nullopt;
    auto best = extremum(args, path == "Math.max");
    if (!best) return std::nullopt;
    if (!both_ints(args[0], args[1])) return Value{as_double(*best)};
    return best;
  }
  return std::nullopt;
}

Maybe call_method(const Value& receiver, const std::string& name,
                  const std::vector<Value>& args, Language language) {
  if (auto* s = as_string(receiver)) {
    if (language == Language::kJava) {
      if (name == "length" && args.empty()) return Value{static_cast<std::int64_t>(s->size())};
      if (name == "isEmpty" && args.empty()) return Value{s->empty()};
      if (name == "equals" && args.size() == 1) {
        auto* other = as_string(args[0]);
        return Value{other != nullptr && *other == *s};
      }
    } else {
      if (name == "upper" && args.empty()) {
        std::string out = *s;
        for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return Value{out};
      }
      if (name == "startswith" && args.size() == 1 && as_string(args[0])) {
        return Value{s->rfind(*as_string(args[0]), 0) == 0};
      }
    }
  }
  return std::nullopt;
}

// Recursive-descent parser that folds as it parses. A syntax error sets
// `failed_`; an unknown value is represented by nullopt and propagates.
class Parser {
 public:
  Parser(std::vector<Tok> tokens, Language language, const Env& env)
      : toks_(std::move(tokens)), language_(language), env_(env) {
    for (const auto& t : toks_) {
      if (t.kind == TokKind::kBad) failed_ = true;
    }
  }

  Maybe parse_all() {
    if (failed_) return std::nullopt;
    Maybe v = parse_or();
    if (peek().kind != TokKind::kEnd) failed_ = true;
    if (failed_) return std::nullopt;
    return v;
  }

 private:
  const Tok& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  bool is_op(std::string_view op, std::size_t ahead = 0) const {
    const Tok& t = peek(ahead);
    return t.kind == TokKind::kOp && t.text == op;
  }
  bool is_word(std::string_view word, std::size_t ahead = 0) const {
    const Tok& t = peek(ahead);
    return t.kind == TokKind::kIdent && t.text == word;
  }
  Tok take() {
    Tok t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  void expect(std::string_view op) {
    if (!is_op(op)) {
      failed_ = true;
      return;
    }
    take();
  }
  bool python() const { return language_ == Language::kPython; }

  Maybe parse_or() {
    Maybe left = parse_and();
    while (python() ? is_word("or") : is_op("||")) {
      take();
      Maybe right = parse_and();
      left = logical(left, right, /*is_and=*/false);
    }
    return left;
  }

  Maybe parse_and() {
    Maybe left = parse_not();
    while (python() ? is_word("and") : is_op("&&")) {
      take();
      Maybe right = parse_not();
      left = logical(left, right, /*is_and=*/true);
    }
    return left;
  }

  Maybe logical(const Maybe& left, const Maybe& right, bool is_and) {
    std::optional<bool> lt = left ? truth(*left, language_) : std::nullopt;
    if (lt) {
      if (is_and && !*lt) return python() ? left : Maybe(Value{false});
      if (!is_and && *lt) return python() ? left : Maybe(Value{true});
      if (python()) return right;
      if (!right) return std::nullopt;
      auto rt = truth(*right, language_);
      if (!rt) return std::nullopt;
      return Value{*rt};
    }
    // Left unknown: the result is still known if the right operand decides.
    std::optional<bool> rt = right ? truth(*right, language_) : std::nullopt;
    if (rt && !python()) {
      if (is_and && !*rt) return Value{false};
      if (!is_and && *rt) return Value{true};
    }
    return std::nullopt;
  }

  Maybe parse_not() {
    if (python() && is_word("not")) {
      take();
      Maybe v = parse_not();
      if (!v) return std::nullopt;
      auto t = truth(*v, language_);
      if (!t) return std::nullopt;
      return Value{!*t};
    }
    return parse_comparison();
  }

  static bool is_comparison(const Tok& t) {
    if (t.kind != TokKind::kOp) return false;
    return t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" ||
           t.text == "==" || t.text == "!=";
  }

  Maybe parse_comparison() {
    Maybe left = parse_additive();
    Maybe result;
    bool chained = false;
    while (true) {
      std::string op;
      if (is_comparison(peek())) {
        op = take().text;
      } else if (python() && is_word("in")) {
        take();
        op = "in";
      } else if (python() && is_word("not") && is_word("in", 1)) {
        take();
        take();
        op = "not in";
      } else if (python() && is_word("is")) {
        take();
        op = "is";
        if (is_word("not")) {
          take();
          op = "is not";
        }
      } else if (!python() && is_word("instanceof")) {
        take();
        std::string type = parse_type_name();
        Maybe value = (!left) ? Maybe() : Maybe(Value{java_instance_of(*left, type)});
        left = value;
        continue;
      } else {
        break;
      }
      Maybe right = parse_additive();
      Maybe step;
      if (left && right) step = apply_comparison(*left, op, *right);
      if (python()) {
        // a < b < c  ==  (a < b) and (b < c)
        if (!chained) {
          result = step;
        } else if (result && step) {
          auto rt = truth(*result, language_);
          auto st = truth(*step, language_);
          result = (rt && st) ? Maybe(Value{*rt && *st}) : std::nullopt;
        } else if (result && truth(*result, language_) == false) {
          // already false
        } else {
          result = std::nullopt;
        }
        chained = true;
        left = right;
      } else {
        left = step;
      }
    }
    if (python() && chained) return result;
    return left;
  }

  Maybe apply_comparison(const Value& a, const std::string& op, const Value& b) {
    if (op == "in" || op == "not in") {
      bool found = false;
      if (auto* l = as_list(b)) {
        found = std::any_of(l->begin(), l->end(), [&](const Value& v) { return v == a; });
      } else if (as_string(b) && as_string(a)) {
        found = as_string(b)->find(*as_string(a)) != std::string::npos;
      } else {
        return std::nullopt;
      }
      return Value{op == "in" ? found : !found};
    }
    if (op == "is" || op == "is not") {
      if (!std::holds_alternative<None>(b.data)) return std::nullopt;
      bool same = std::holds_alternative<None>(a.data);
      return Value{op == "is" ? same : !same};
    }
    return compare(a, op, b, language_);
  }

  std::string parse_type_name() {
    std::string type;
    if (peek().kind != TokKind::kIdent) {
      failed_ = true;
      return type;
    }
    type = take().text;
    while (is_op(".") && peek(1).kind == TokKind::kIdent) {
      take();
      type = take().text;  // keep the simple name
    }
    return type;
  }

  Maybe parse_additive() {
    Maybe left = parse_multiplicative();
    while (is_op("+") || is_op("-")) {
      std::string op = take().text;
      Maybe right = parse_multiplicative();
      left = (left && right) ? arithmetic(*left, op, *right, language_) : std::nullopt;
    }
    return left;
  }

  Maybe parse_multiplicative() {
    Maybe left = parse_unary();
    while (is_op("*") || is_op("/") || is_op("%") || (python() && is_op("//"))) {
      std::string op = take().text;
      Maybe right = parse_unary();
      left = (left && right) ? arithmetic(*left, op, *right, language_) : std::nullopt;
    }
    return left;
  }

  Maybe parse_unary() {
    if (is_op("-") || is_op("+")) {
      std::string op = take().text;
      Maybe v = parse_unary();
      if (!v || !v->is_number()) return std::nullopt;
      if (op == "+") return v;
      if (std::holds_alternative<std::int64_t>(v->data)) {
        auto x = std::get<std::int64_t>(v->data);
        if (x == std::numeric_limits<std::int64_t>::min()) return std::nullopt;
        return Value{-x};
      }
      return Value{-std::get<double>(v->data)};
    }
    if (!python() && is_op("!")) {
      take();
      Maybe v = parse_unary();
      if (!v || !std::holds_alternative<bool>(v->data)) return std::nullopt;
      return Value{!std::get<bool>(v->data)};
    }
    if (!python() && is_op("(") && peek(1).kind == TokKind::kIdent && is_op(")", 2) &&
        is_cast_type(peek(1).text)) {
      // (double) x, (int) x
      take();
      std::string type = take().text;
      take();
      Maybe v = parse_unary();
      if (!v || !v->is_number()) return std::nullopt;
      if (type == "double" || type == "float") return Value{as_double(*v)};
      return numeric_unary(*v, std::trunc, true);
    }
    return parse_power();
  }

  static bool is_cast_type(const std::string& name) {
    return name == "int" || name == "long" || name == "double" || name == "float";
  }

  Maybe parse_power() {
    Maybe base = parse_postfix();
    if (python() && is_op("**")) {
      take();
      Maybe exponent = parse_unary();
      if (!base || !exponent) return std::nullopt;
      return arithmetic(*base, "**", *exponent, language_);
    }
    return base;
  }

  std::vector<Maybe> parse_arguments(std::string_view close) {
    std::vector<Maybe> args;
    if (is_op(close)) {
      take();
      return args;
    }
    while (!failed_) {
      args.push_back(parse_or());
      if (is_op(",")) {
        take();
        if (is_op(close)) {
          take();
          break;
        }
        continue;
      }
      expect(close);
      break;
    }
    return args;
  }

  static std::optional<std::vector<Value>> all_known(const std::vector<Maybe>& items) {
    std::vector<Value> out;
    for (const auto& item : items) {
      if (!item) return std::nullopt;
      out.push_back(*item);
    }
    return out;
  }

  Maybe parse_postfix() {
    Maybe value = parse_primary();
    while (!failed_) {
      if (is_op("(")) {
        take();
        auto args = parse_arguments(")");
        auto known = all_known(args);
        if (!value || !known) {
          value = std::nullopt;
        } else if (auto* sym = std::get_if<Symbol>(&value->data)) {
          value = call_builtin(sym->path, *known, language_);
        } else if (auto* method = std::get_if<BoundMethod>(&value->data)) {
          value = call_method(*method->receiver, method->name, *known, language_);
        } else {
          value = std::nullopt;
        }
      } else if (is_op("[")) {
        take();
        Maybe index = parse_or();
        if (is_op(":")) {
          // slices are not modeled
          while (!failed_ && !is_op("]") && peek().kind != TokKind::kEnd) take();
          index = std::nullopt;
        }
        expect("]");
        value = (value && index) ? subscript(*value, *index) : std::nullopt;
      } else if (is_op(".") && peek(1).kind == TokKind::kIdent) {
        take();
        std::string name = take().text;
        value = value ? attribute(*value, name) : std::nullopt;
      } else {
        break;
      }
    }
    return value;
  }

  Maybe subscript(const Value& container, const Value& index) {
    if (!std::holds_alternative<std::int64_t>(index.data)) return std::nullopt;
    auto i = std::get<std::int64_t>(index.data);
    std::int64_t size = 0;
    if (auto* l = as_list(container)) {
      size = static_cast<std::int64_t>(l->size());
    } else if (auto* s = as_string(container)) {
      size = static_cast<std::int64_t>(s->size());
    } else {
      return std::nullopt;
    }
    if (i < 0 && python()) i += size;
    if (i < 0 || i >= size) return std::nullopt;
    if (auto* l = as_list(container)) return (*l)[static_cast<std::size_t>(i)];
    if (!python()) return std::nullopt;
    return Value{std::string(1, (*as_string(container))[static_cast<std::size_t>(i)])};
  }

  Maybe attribute(const Value& value, const std::string& name) {
    if (auto* sym = std::get_if<Symbol>(&value.data)) {
      return Value{Symbol{sym->path + "." + name}};
    }
    if (!python() && name == "length") {
      if (auto* l = as_list(value)) return Value{static_cast<std::int64_t>(l->size())};
    }
    return Value{BoundMethod{std::make_shared<Value>(value), name}};
  }

  Maybe parse_primary() {
    const Tok& t = peek();
    switch (t.kind) {
      case TokKind::kNumber:
      case TokKind::kString: {
        Value v = take().value;
        // implicit concatenation of adjacent Python string literals
        while (python() && peek().kind == TokKind::kString && as_string(v)) {
          v = Value{*as_string(v) + take().text};
        }
        return v;
      }
      case TokKind::kIdent:
        return parse_name();
      case TokKind::kOp:
        break;
      default:
        failed_ = true;
        return std::nullopt;
    }
    if (is_op("(")) {
      take();
      Maybe v = parse_or();
      if (is_op(",")) {
        // tuples are not modeled
        while (!failed_ && !is_op(")") && peek().kind != TokKind::kEnd) take();
        v = std::nullopt;
      }
      expect(")");
      return v;
    }
    if (is_op("[") && python()) {
      take();
      auto items = all_known(parse_arguments("]"));
      if (!items) return std::nullopt;
      return make_list(*items);
    }
    if (is_op("{") && !python()) {
      take();
      auto items = all_known(parse_arguments("}"));
      if (!items) return std::nullopt;
      return make_list(*items);
    }
    failed_ = true;
    return std::nullopt;
  }

  Maybe parse_name() {
    std::string name = take().text;
    if (python()) {
      if (name == "True") return Value{true};
      if (name == "False") return Value{false};
      if (name == "None") return Value{None{}};
    } else {
      if (name == "true") return Value{true};
      if (name == "false") return Value{false};
      if (name == "null") return Value{None{}};
      if (name == "new") return parse_new();
    }
    if (env_.unknown.count(name)) return std::nullopt;
    auto it = env_.bindings.find(name);
    if (it != env_.bindings.end()) return it->second;
    return Value{Symbol{name}};
  }

  // new int[]{...}; other allocations are opaque.
  Maybe parse_new() {
    parse_type_name();
    bool array = false;
    while (is_op("[")) {
      take();
      if (!is_op("]")) {
        while (!failed_ && !is_op("]") && peek().kind != TokKind::kEnd) take();
        expect("]");
        return std::nullopt;
      }
      take();
      array = true;
    }
    if (array && is_op("{")) {
      take();
      auto items = all_known(parse_arguments("}"));
      if (!items) return std::nullopt;
      return make_list(*items);
    }
    if (is_op("(")) {
      take();
      parse_arguments(")");
    }
    return std::nullopt;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  Language language_;
  const Env& env_;
  bool failed_ = false;
};

// Splits at top-level occurrences of `sep`, outside brackets and strings.
std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '(' || c == '[' || c == '{') {
      ++depth;
    } else if (c == ')' || c == ']' || c == '}') {
      --depth;
    } else if (c == sep && depth == 0) {
      parts.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.emplace_back(text.substr(start));
  return parts;
}

// Position of a top-level '=' that is an assignment (not ==, <=, ...).
std::optional<std::size_t> assignment_equals(std::string_view text) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '(' || c == '[' || c == '{') {
      ++depth;
    } else if (c == ')' || c == ']' || c == '}') {
      --depth;
    } else if (c == '=' && depth == 0) {
      char prev = i > 0 ? text[i - 1] : ' ';
      char next = i + 1 < text.size() ? text[i + 1] : ' ';
      if (next == '=' ) {
        ++i;
        continue;
      }
      if (std::string_view("=!<>+-*/%&|^:~").find(prev) != std::string_view::npos) {
        continue;
      }
      return i;
    }
  }
  return std::nullopt;
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !lex::is_ident_start(text[0])) return false;
  return std::all_of(text.begin(), text.end(), lex::is_ident_char);
}

std::optional<Value> coerce_java(const std::string& type, const Value& v) {
  std::string base = type;
  bool array = false;
  if (base.size() > 2 && base.substr(base.size() - 2) == "[]") {
    array = true;
    base = base.substr(0, base.size() - 2);
  }
  if (array) {
    auto* l = as_list(v);
    if (!l) return std::nullopt;
    List out;
    for (const auto& item : *l) {
      auto c = coerce_java(base, item);
      if (!c) return std::nullopt;
      out.push_back(*c);
    }
    return make_list(std::move(out));
  }
  if (base == "int" || base == "long" || base == "short" || base == "byte" ||
      base == "Integer" || base == "Long") {
    if (!std::holds_alternative<std::int64_t>(v.data)) return std::nullopt;
    return v;
  }
  if (base == "double" || base == "float" || base == "Double" || base == "Float") {
    if (!v.is_number()) return std::nullopt;
    return Value{as_double(v)};
  }
  if (base == "boolean" || base == "Boolean") {
    if (!std::holds_alternative<bool>(v.data)) return std::nullopt;
    return v;
  }
  if (base == "String") {
    if (!as_string(v)) return std::nullopt;
    return v;
  }
  if (base == "Object" || base == "var" || base == "Number" ||
      base == "CharSequence" || base == "Comparable") {
    return v;
  }
  return std::nullopt;
}

const std::regex& java_declaration() {
  static const std::regex re(
      R"(^(?:final\s+)?([A-Za-z_][\w.]*(?:<[^=]*>)?(?:\[\])*)\s+([A-Za-z_]\w*)\s*(?:=\s*([\s\S]+))?$)");
  return re;
}

bool is_java_keyword(const std::string& word) {
  static const std::set<std::string> kKeywords{
      "return", "throw", "new", "else", "case", "assert", "break", "continue",
      "if", "while", "for", "do", "switch", "try", "catch", "finally", "yield"};
  return kKeywords.count(word) > 0;
}

StepResult sort_in_place(const std::string& name, Env& env) {
  auto it = env.bindings.find(name);
  if (it == env.bindings.end()) return StepResult::kUnsupported;
  auto* list = std::get_if<std::shared_ptr<List>>(&it->second.data);
  if (!list || !*list || !sortable(**list)) return StepResult::kUnsupported;
  List copy = **list;
  sort_values(copy);
  env.bind(name, make_list(std::move(copy)));
  return StepResult::kOk;
}

StepResult execute_python(std::string_view stmt, Env& env,
                          std::vector<std::string>* assigned) {
  auto head = lex::head_word(stmt);
  if (stmt == "pass") return StepResult::kOk;
  if (head == "assert") {
    auto parts = split_top_level(stmt.substr(6), ',');
    auto verdict = evaluate_condition(parts[0], Language::kPython, env);
    return verdict == true ? StepResult::kOk : StepResult::kAssertFailed;
  }
  if (head == "import") {
    static const std::regex re(R"(^import\s+([A-Za-z_][\w.]*)(?:\s+as\s+([A-Za-z_]\w*))?$)");
    std::cmatch m;
    std::string text(stmt);
    if (!std::regex_match(text.c_str(), m, re)) return StepResult::kUnsupported;
    std::string module = m[1];
    std::string alias = m[2].matched ? std::string(m[2]) : module.substr(0, module.find('.'));
    if (assigned) assigned->push_back(alias);
    env.bind(alias, Value{Symbol{m[2].matched ? module : alias}});
    return StepResult::kOk;
  }
  if (head == "from") {
    static const std::regex re(R"(^from\s+([A-Za-z_][\w.]*)\s+import\s+([A-Za-z_]\w*)(?:\s+as\s+([A-Za-z_]\w*))?$)");
    std::cmatch m;
    std::string text(stmt);
    if (!std::regex_match(text.c_str(), m, re)) return StepResult::kUnsupported;
    std::string alias = m[3].matched ? std::string(m[3]) : std::string(m[2]);
    if (assigned) assigned->push_back(alias);
    env.bind(alias, Value{Symbol{std::string(m[1]) + "." + std::string(m[2])}});
    return StepResult::kOk;
  }
  static const std::regex sort_re(R"(^([A-Za-z_]\w*)\.sort\(\)$)");
  {
    std::cmatch m;
    std::string text(stmt);
    if (std::regex_match(text.c_str(), m, sort_re)) return sort_in_place(m[1], env);
  }
  auto eq = assignment_equals(stmt);
  if (!eq) return StepResult::kUnsupported;
  std::string target(lex::trim(stmt.substr(0, *eq)));
  auto colon = target.find(':');
  if (colon != std::string::npos) target = std::string(lex::trim(target.substr(0, colon)));
  if (!is_identifier(target)) return StepResult::kUnsupported;
  if (assigned) assigned->push_back(target);
  auto value = evaluate(stmt.substr(*eq + 1), Language::kPython, env);
  if (!value) {
    env.forget(target);
    return StepResult::kUnsupported;
  }
  env.bind(target, *value);
  return StepResult::kOk;
}

StepResult execute_java(std::string_view stmt, Env& env,
                        std::vector<std::string>* assigned) {
  if (!stmt.empty() && stmt.back() == ';') stmt = lex::rtrim(stmt.substr(0, stmt.size() - 1));
  if (stmt.empty()) return StepResult::kOk;
  auto head = lex::head_word(stmt);
  if (head == "assert") {
    auto parts = split_top_level(stmt.substr(6), ':');
    auto verdict = evaluate_condition(parts[0], Language::kJava, env);
    return verdict == true ? StepResult::kOk : StepResult::kAssertFailed;
  }
  static const std::regex sort_re(R"(^(?:java\.util\.)?Arrays\.sort\(\s*([A-Za-z_]\w*)\s*\)$)");
  std::string text(stmt);
  {
    std::cmatch m;
    if (std::regex_match(text.c_str(), m, sort_re)) return sort_in_place(m[1], env);
  }
  std::cmatch m;
  if (std::regex_match(text.c_str(), m, java_declaration()) &&
      !is_java_keyword(m[1])) {
    std::string type = m[1];
    std::string name = m[2];
    if (assigned) assigned->push_back(name);
    if (!m[3].matched) {
      env.forget(name);
      return StepResult::kOk;
    }
    auto value = evaluate(std::string(m[3]), Language::kJava, env);
    std::optional<Value> typed = value ? coerce_java(type, *value) : std::nullopt;
    if (!typed) {
      env.forget(name);
      return StepResult::kUnsupported;
    }
    env.bind(name, *typed);
    return StepResult::kOk;
  }
  auto eq = assignment_equals(stmt);
  if (!eq) return StepResult::kUnsupported;
  std::string target(lex::trim(stmt.substr(0, *eq)));
  if (!is_identifier(target)) return StepResult::kUnsupported;
  if (assigned) assigned->push_back(target);
  auto value = evaluate(stmt.substr(*eq + 1), Language::kJava, env);
  if (!value) {
    env.forget(target);
    return StepResult::kUnsupported;
  }
  env.bind(target, *value);
  return StepResult::kOk;
}

}  // namespace

std::optional<Value> evaluate(std::string_view expr, Language language,
                              const Env& env) {
  Parser parser(tokenize(expr, language), language, env);
  return parser.parse_all();
}

std::optional<bool> truth(const Value& value, Language language) {
  if (auto* b = std::get_if<bool>(&value.data)) return *b;
  if (language == Language::kJava) return std::nullopt;
  if (std::holds_alternative<None>(value.data)) return false;
  if (auto* i = std::get_if<std::int64_t>(&value.data)) return *i != 0;
  if (auto* d = std::get_if<double>(&value.data)) return *d != 0.0;
  if (auto* s = as_string(value)) return !s->empty();
  if (auto* l = as_list(value)) return !l->empty();
  return std::nullopt;
}

std::optional<bool> evaluate_condition(std::string_view expr, Language language,
                                       const Env& env) {
  auto value = evaluate(expr, language, env);
  if (!value) return std::nullopt;
  return truth(*value, language);
}

StepResult execute(std::string_view statement, Language language, Env& env,
                   std::vector<std::string>* assigned) {
  std::string_view stmt = lex::trim(statement);
  return language == Language::kPython ? execute_python(stmt, env, assigned)
                                       : execute_java(stmt, env, assigned);
}

std::vector<std::string> assignment_targets(std::string_view statement,
                                            Language language) {
  Env scratch;
  std::vector<std::string> assigned;
  execute(statement, language, scratch, &assigned);
  return assigned;
}

}  // namespace dce::fold
