#pragma once

// Canonical text form of polynomials, and the checksummed data files built on it.
//
//   # free-form title
//   crc32: 1a2b3c4d
//   vars: M B
//   5364/1*B^9
//   ...
//
// Terms are sorted by exponent tuple; the crc32 covers everything from the "vars:" line on.

#include <zlib.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "multipoly.hpp"
#include "rational.hpp"

namespace saddleloop {

inline std::string to_canonical(const MultiPoly& p) {
  std::string out = "vars:";
  for (const auto& v : p.vars()) out += " " + v;
  out += "\n";
  for (const auto& [e, c] : p.terms()) {
    out += to_fraction(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) out += "*" + p.vars()[i] + "^" + std::to_string(e[i]);
    out += "\n";
  }
  return out;
}

inline MultiPoly parse_canonical(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> vars;
  bool have_vars = false;
  MultiPoly::TermMap terms;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("crc32:", 0) == 0) continue;
    if (line.rfind("vars:", 0) == 0) {
      std::istringstream vs(line.substr(5));
      std::string v;
      while (vs >> v) vars.push_back(v);
      have_vars = true;
      continue;
    }
    if (!have_vars) throw MalformedInput("polynomial text: term before the vars line");
    std::size_t star = line.find('*');
    Exponents e(vars.size(), 0);
    BigRational c = parse_rational(line.substr(0, star));
    while (star != std::string::npos) {
      std::size_t next = line.find('*', star + 1);
      std::string mono = line.substr(star + 1, next == std::string::npos ? std::string::npos : next - star - 1);
      std::size_t caret = mono.find('^');
      std::string name = mono.substr(0, caret);
      int power = caret == std::string::npos ? 1 : std::stoi(mono.substr(caret + 1));
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) throw MalformedInput("polynomial text: unknown variable '" + name + "'");
      e[static_cast<std::size_t>(it - vars.begin())] += power;
      star = next;
    }
    terms[e] += c;
  }
  if (!have_vars) throw MalformedInput("polynomial text: missing vars line");
  return MultiPoly(vars, std::move(terms));
}

namespace detail {

// Recursive-descent reader for expressions such as "x^2 - 3/4*x*y + (y - 1)^3".
class ExprReader {
 public:
  ExprReader(std::string_view t, const std::vector<std::string>& vars) : t_(t), vars_(vars) {}
  MultiPoly run() {
    MultiPoly p = sum();
    skip();
    if (i_ != t_.size()) throw MalformedInput("expression: unexpected '" + std::string(1, t_[i_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  bool eat(char ch) {
    skip();
    if (i_ < t_.size() && t_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }
  MultiPoly sum() {
    MultiPoly acc(vars_);
    bool neg = eat('-');
    if (!neg) eat('+');
    acc = neg ? -product() : product();
    while (true) {
      if (eat('+'))
        acc = acc + product();
      else if (eat('-'))
        acc = acc - product();
      else
        return acc;
    }
  }
  MultiPoly product() {
    MultiPoly acc = power();
    while (true) {
      if (eat('*')) {
        acc = acc * power();
      } else if (eat('/')) {
        MultiPoly d = power();
        if (d.total_degree() != 0) throw MalformedInput("expression: division by a non-constant");
        acc = acc * (1 / d.terms().begin()->second);
      } else {
        return acc;
      }
    }
  }
  MultiPoly power() {
    MultiPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t j = i_;
      while (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) ++i_;
      if (j == i_) throw MalformedInput("expression: exponent expected");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(t_.substr(j, i_ - j)))));
    }
    return base;
  }
  MultiPoly atom() {
    skip();
    if (eat('(')) {
      MultiPoly p = sum();
      if (!eat(')')) throw MalformedInput("expression: ')' expected");
      return p;
    }
    if (eat('-')) return -power();
    std::size_t j = i_;
    if (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) {
      while (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) ++i_;
      return MultiPoly::constant(vars_, BigRational(BigInt(std::string(t_.substr(j, i_ - j)))));
    }
    while (i_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[i_])) || t_[i_] == '_')) ++i_;
    if (j == i_) throw MalformedInput("expression: operand expected");
    std::string name(t_.substr(j, i_ - j));
    if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) throw MalformedInput("expression: unknown variable '" + name + "'");
    return MultiPoly::variable(vars_, name);
  }

  std::string_view t_;
  const std::vector<std::string>& vars_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline MultiPoly parse_expression(std::string_view text, const std::vector<std::string>& vars) {
  return detail::ExprReader(text, vars).run();
}

inline UniPoly parse_uni(std::string_view text, const std::string& var = "x") { return parse_expression(text, {var}).to_uni(var); }

inline unsigned long crc32_of(std::string_view body) {
  return ::crc32(::crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
}

struct DataFile {
  std::string title;
  MultiPoly poly;
};

inline std::string write_data_file(const DataFile& d) {
  std::string body = to_canonical(d.poly);
  char crc[16];
  std::snprintf(crc, sizeof crc, "%08lx", crc32_of(body));
  return "# " + d.title + "\ncrc32: " + crc + "\n" + body;
}

// Parses a data file and verifies its checksum; a mismatch is malformed input.
inline DataFile read_data_file(std::string_view text) {
  DataFile d;
  std::size_t vpos = text.find("vars:");
  if (vpos == std::string_view::npos) throw MalformedInput("data file: missing vars line");
  std::size_t cpos = text.find("crc32:");
  if (cpos == std::string_view::npos || cpos > vpos) throw MalformedInput("data file: missing checksum");
  unsigned long want = std::stoul(std::string(text.substr(cpos + 6, 10)), nullptr, 16);
  if (crc32_of(text.substr(vpos)) != want) throw MalformedInput("data file: checksum mismatch");
  if (!text.empty() && text[0] == '#') {
    std::size_t eol = text.find('\n');
    d.title = std::string(text.substr(2, eol - 2));
  }
  d.poly = parse_canonical(text.substr(vpos));
  return d;
}

inline DataFile load_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_data_file(ss.str());
}

}  // namespace saddleloop
