#include "tavdc/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tavdc/error.hpp"

namespace tavdc::lp {

namespace {

constexpr std::size_t kMaxLine = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Appends " + 3 x" style terms, wrapping long rows.
void write_terms(std::ostringstream& os, std::string line, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    std::string piece;
    const double mag = std::fabs(t.coef);
    const char* sign = t.coef < 0 ? "-" : "+";
    if (first) {
      piece = t.coef < 0 ? "- " : "";
    } else {
      piece = std::string(" ") + sign + " ";
    }
    if (mag != 1.0) piece += format_number(mag) + " ";
    piece += t.var;
    if (line.size() + piece.size() > kMaxLine) {
      os << line << '\n';
      line = "   ";
    }
    line += piece;
    first = false;
  }
  if (terms.empty()) line += "0 __zero";
  os << line;
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::le: return "<=";
    case Sense::ge: return ">=";
    case Sense::eq: return "=";
  }
  return "=";
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

enum class Section { none, objective, constraints, bounds, generals, binaries, end };

// Recognizes a section header line; returns the section and consumes the
// header keyword from `line` (objectives may continue on the same line).
bool section_header(std::string_view& line, Section& section, bool& minimize) {
  const std::string low = lower(trim(line));
  auto starts = [&low](std::string_view kw) {
    return low.rfind(kw, 0) == 0 && (low.size() == kw.size() || std::isspace(static_cast<unsigned char>(low[kw.size()])));
  };
  static const std::pair<std::string_view, Section> keywords[] = {
      {"minimize", Section::objective}, {"minimum", Section::objective}, {"min", Section::objective},
      {"maximize", Section::objective}, {"maximum", Section::objective}, {"max", Section::objective},
      {"subject to", Section::constraints}, {"such that", Section::constraints}, {"s.t.", Section::constraints},
      {"st", Section::constraints}, {"bounds", Section::bounds}, {"bound", Section::bounds},
      {"generals", Section::generals}, {"general", Section::generals}, {"integers", Section::generals},
      {"binaries", Section::binaries}, {"binary", Section::binaries}, {"end", Section::end}};
  for (const auto& [kw, sec] : keywords) {
    if (starts(kw)) {
      section = sec;
      if (sec == Section::objective) minimize = kw.substr(0, 3) == "min";
      line = trim(line);
      line.remove_prefix(kw.size());
      return true;
    }
  }
  return false;
}

struct Token {
  enum Kind { ident, label, number, plus, minus, rel } kind;
  std::string text;
  double value = 0.0;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.!\"#$%&()/,;?@'`{}|~[]").find(c) != std::string_view::npos;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '+') {
      out.push_back({Token::plus, "+"});
      ++i;
    } else if (c == '-') {
      out.push_back({Token::minus, "-"});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == '<' || text[j] == '>' || text[j] == '=')) ++j;
      std::string rel(text.substr(i, j - i));
      if (rel == "<" || rel == "=<") rel = "<=";
      if (rel == ">" || rel == "=>") rel = ">=";
      if (rel != "<=" && rel != ">=" && rel != "=") throw InputError("LP: bad relational operator '" + rel + "'");
      out.push_back({Token::rel, rel});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto res = std::from_chars(text.data() + i, text.data() + text.size(), v);
      if (res.ec != std::errc()) throw InputError("LP: bad number near '" + std::string(text.substr(i, 16)) + "'");
      out.push_back({Token::number, std::string(text.substr(i, static_cast<std::size_t>(res.ptr - (text.data() + i)))), v});
      i = static_cast<std::size_t>(res.ptr - text.data());
    } else if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string name(text.substr(i, j - i));
      std::size_t k = j;
      while (k < text.size() && text[k] == ' ') ++k;
      if (k < text.size() && text[k] == ':') {
        out.push_back({Token::label, name});
        i = k + 1;
      } else {
        const std::string low = lower(name);
        if (low == "inf" || low == "infinity") {
          out.push_back({Token::number, name, kInf});
        } else {
          out.push_back({Token::ident, name});
        }
        i = j;
      }
    } else {
      throw InputError(std::string("LP: unexpected character '") + c + "'");
    }
  }
  return out;
}

// Parses "[+-] [coef] var" terms from tokens[pos] until a non-term token.
std::vector<Term> parse_terms(const std::vector<Token>& toks, std::size_t& pos) {
  std::vector<Term> terms;
  while (pos < toks.size()) {
    double sign = 1.0;
    bool any_sign = false;
    while (pos < toks.size() && (toks[pos].kind == Token::plus || toks[pos].kind == Token::minus)) {
      if (toks[pos].kind == Token::minus) sign = -sign;
      ++pos;
      any_sign = true;
    }
    if (pos >= toks.size()) {
      if (any_sign) throw InputError("LP: dangling sign");
      break;
    }
    double coef = 1.0;
    if (toks[pos].kind == Token::number) {
      if (pos + 1 >= toks.size() || toks[pos + 1].kind != Token::ident) {
        // A bare constant on the left-hand side: only zero is tolerated.
        if (toks[pos].value != 0.0) throw InputError("LP: constant term in expression");
        ++pos;
        continue;
      }
      coef = toks[pos].value;
      ++pos;
    }
    if (toks[pos].kind != Token::ident) {
      if (any_sign) throw InputError("LP: expected variable after sign");
      break;
    }
    if (toks[pos].text != "__zero") terms.push_back({sign * coef, toks[pos].text});
    ++pos;
  }
  return terms;
}

double parse_rhs(const std::vector<Token>& toks, std::size_t& pos) {
  double sign = 1.0;
  while (pos < toks.size() && (toks[pos].kind == Token::plus || toks[pos].kind == Token::minus)) {
    if (toks[pos].kind == Token::minus) sign = -sign;
    ++pos;
  }
  if (pos >= toks.size() || toks[pos].kind != Token::number) throw InputError("LP: expected right-hand side");
  return sign * toks[pos++].value;
}

Sense to_sense(const std::string& rel) {
  if (rel == "<=") return Sense::le;
  if (rel == ">=") return Sense::ge;
  return Sense::eq;
}

void parse_bound_line(std::string_view line, std::unordered_map<std::string, Bound>& bounds,
                      std::vector<std::string>& order) {
  const auto toks = tokenize(line);
  if (toks.empty()) return;
  auto slot = [&](const std::string& var) -> Bound& {
    auto [it, inserted] = bounds.try_emplace(var, Bound{var, 0.0, kInf});
    if (inserted) order.push_back(var);
    return it->second;
  };
  auto number_at = [&toks](std::size_t& p) {
    double sign = 1.0;
    while (p < toks.size() && (toks[p].kind == Token::plus || toks[p].kind == Token::minus)) {
      if (toks[p].kind == Token::minus) sign = -sign;
      ++p;
    }
    if (p >= toks.size() || toks[p].kind != Token::number) throw InputError("LP: malformed bound");
    return sign * toks[p++].value;
  };
  std::size_t p = 0;
  if (toks[0].kind == Token::ident) {
    Bound& b = slot(toks[0].text);
    p = 1;
    if (p < toks.size() && toks[p].kind == Token::ident && lower(toks[p].text) == "free") {
      b.lower = -kInf;
      b.upper = kInf;
      return;
    }
    if (p >= toks.size() || toks[p].kind != Token::rel) throw InputError("LP: malformed bound");
    const std::string rel = toks[p++].text;
    const double v = number_at(p);
    if (rel == "<=") b.upper = v;
    else if (rel == ">=") b.lower = v;
    else b.lower = b.upper = v;
    return;
  }
  const double lo = number_at(p);
  if (p >= toks.size() || toks[p].kind != Token::rel) throw InputError("LP: malformed bound");
  const std::string rel1 = toks[p++].text;
  if (p >= toks.size() || toks[p].kind != Token::ident) throw InputError("LP: malformed bound");
  Bound& b = slot(toks[p++].text);
  if (rel1 == "<=") b.lower = lo;
  else if (rel1 == ">=") b.upper = lo;
  else b.lower = b.upper = lo;
  if (p < toks.size()) {
    if (toks[p].kind != Token::rel) throw InputError("LP: malformed bound");
    const std::string rel2 = toks[p++].text;
    const double hi = number_at(p);
    if (rel2 == "<=") b.upper = hi;
    else b.lower = hi;
  }
}

}  // namespace

std::size_t Model::count_variables_with_prefix(std::string_view prefix) const {
  std::size_t n = 0;
  for (const auto& v : variables()) {
    if (v.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

std::vector<std::string> Model::variables() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& v) {
    if (seen.insert(v).second) out.push_back(v);
  };
  for (const auto& t : objective) add(t.var);
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) add(t.var);
  }
  for (const auto& b : bounds) add(b.var);
  for (const auto& g : generals) add(g);
  for (const auto& b : binaries) add(b);
  return out;
}

std::string write(const Model& model) {
  std::ostringstream os;
  if (!model.comment.empty()) {
    std::istringstream lines(model.comment);
    for (std::string l; std::getline(lines, l);) os << "\\ " << l << '\n';
  }
  os << (model.minimize ? "Minimize" : "Maximize") << '\n';
  write_terms(os, " " + model.objective_name + ": ", model.objective);
  os << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    std::ostringstream row;
    write_terms(row, " " + c.name + ": ", c.terms);
    os << row.str() << ' ' << sense_text(c.sense) << ' ' << format_number(c.rhs) << '\n';
  }
  if (!model.bounds.empty()) {
    os << "Bounds\n";
    for (const auto& b : model.bounds) {
      if (std::isinf(b.lower) && b.lower < 0 && std::isinf(b.upper) && b.upper > 0) {
        os << ' ' << b.var << " free\n";
      } else if (b.lower == b.upper) {
        os << ' ' << b.var << " = " << format_number(b.lower) << '\n';
      } else {
        os << ' ' << format_number(b.lower) << " <= " << b.var << " <= " << format_number(b.upper) << '\n';
      }
    }
  }
  auto write_list = [&os](const char* header, const std::vector<std::string>& names) {
    if (names.empty()) return;
    os << header << '\n';
    std::string line = "";
    for (const auto& n : names) {
      if (line.size() + n.size() + 1 > kMaxLine) {
        os << line << '\n';
        line.clear();
      }
      line += ' ' + n;
    }
    os << line << '\n';
  };
  write_list("General", model.generals);
  write_list("Binary", model.binaries);
  os << "End\n";
  return os.str();
}

Model parse(std::string_view text) {
  Model model;
  Section section = Section::none;
  std::string objective_text;
  std::string constraint_text;
  std::unordered_map<std::string, Bound> bounds;
  std::vector<std::string> bound_order;
  bool saw_objective = false;

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto bs = line.find('\\'); bs != std::string_view::npos) {
      // Whole-line comments ahead of the objective become the model comment.
      if (section == Section::none && trim(line.substr(0, bs)).empty()) {
        auto body = line.substr(bs + 1);
        if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        model.comment.append(body).push_back('\n');
      }
      line = line.substr(0, bs);
    }
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    bool minimize = model.minimize;
    if (section_header(line, section, minimize)) {
      if (section == Section::objective) {
        model.minimize = minimize;
        saw_objective = true;
      }
      if (section == Section::end) break;
    }
    switch (section) {
      case Section::none: throw InputError("LP: content before objective section");
      case Section::objective: objective_text.append(line).push_back(' '); break;
      case Section::constraints: constraint_text.append(line).push_back(' '); break;
      case Section::bounds:
        if (!trim(line).empty()) parse_bound_line(line, bounds, bound_order);
        break;
      case Section::generals:
      case Section::binaries: {
        for (const auto& tok : tokenize(line)) {
          if (tok.kind != Token::ident) throw InputError("LP: expected variable names in integer section");
          (section == Section::generals ? model.generals : model.binaries).push_back(tok.text);
        }
        break;
      }
      case Section::end: break;
    }
    if (end == text.size()) break;
  }
  if (section != Section::end) throw InputError("LP: missing End");
  if (!saw_objective) throw InputError("LP: missing objective section");

  {
    const auto toks = tokenize(objective_text);
    std::size_t pos = 0;
    if (pos < toks.size() && toks[pos].kind == Token::label) model.objective_name = toks[pos++].text;
    model.objective = parse_terms(toks, pos);
    if (pos != toks.size()) throw InputError("LP: trailing tokens in objective");
  }
  {
    const auto toks = tokenize(constraint_text);
    std::size_t pos = 0;
    std::size_t anonymous = 0;
    while (pos < toks.size()) {
      Constraint c;
      if (toks[pos].kind == Token::label) {
        c.name = toks[pos++].text;
      } else {
        c.name = "R" + std::to_string(++anonymous);
      }
      c.terms = parse_terms(toks, pos);
      if (pos >= toks.size() || toks[pos].kind != Token::rel) {
        throw InputError("LP: constraint '" + c.name + "' lacks a relational operator");
      }
      c.sense = to_sense(toks[pos++].text);
      c.rhs = parse_rhs(toks, pos);
      model.constraints.push_back(std::move(c));
    }
  }
  for (const auto& v : bound_order) model.bounds.push_back(bounds.at(v));
  return model;
}

Assignment parse_assignment(std::string_view text) {
  Assignment values;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == '\\') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError("solution line " + std::to_string(line_no) + ": expected name=value");
    const std::string name(trim(line.substr(0, eq)));
    const std::string_view rhs = trim(line.substr(eq + 1));
    double v = 0.0;
    auto res = std::from_chars(rhs.data(), rhs.data() + rhs.size(), v);
    if (name.empty() || res.ec != std::errc() || res.ptr != rhs.data() + rhs.size()) {
      throw InputError("solution line " + std::to_string(line_no) + ": malformed entry");
    }
    if (!values.emplace(name, v).second) throw InputError("solution: duplicate variable " + name);
  }
  return values;
}

std::string write_assignment(const Assignment& values) {
  std::vector<std::pair<std::string, double>> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [name, v] : sorted) out += name + "=" + format_number(v) + "\n";
  return out;
}

std::string family_of(std::string_view name) {
  if (name.size() > 1 && name.front() == 'c') {
    const auto us = name.find('_');
    return std::string(name.substr(1, us == std::string_view::npos ? std::string_view::npos : us - 1));
  }
  return std::string(name);
}

bool Evaluation::feasible() const {
  return std::all_of(families.begin(), families.end(), [](const auto& kv) { return kv.second.violated == 0; });
}

Evaluation evaluate(const Model& model, const Assignment& values, double tol) {
  auto value_of = [&values](const std::string& v) {
    auto it = values.find(v);
    return it == values.end() ? 0.0 : it->second;
  };
  auto note = [](FamilyCheck& f, bool ok, const std::string& name) {
    ++f.checked;
    if (!ok) {
      if (f.violated == 0) f.first_violation = name;
      ++f.violated;
    }
  };

  Evaluation ev;
  for (const auto& t : model.objective) ev.objective += t.coef * value_of(t.var);

  for (const auto& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * value_of(t.var);
    const double slack = tol * std::max(1.0, std::fabs(c.rhs));
    bool ok = true;
    switch (c.sense) {
      case Sense::le: ok = lhs <= c.rhs + slack; break;
      case Sense::ge: ok = lhs >= c.rhs - slack; break;
      case Sense::eq: ok = std::fabs(lhs - c.rhs) <= slack; break;
    }
    note(ev.families[family_of(c.name)], ok, c.name);
  }

  std::unordered_map<std::string, std::pair<double, double>> box;
  for (const auto& b : model.bounds) box[b.var] = {b.lower, b.upper};
  std::unordered_set<std::string> binaries(model.binaries.begin(), model.binaries.end());
  auto& bounds = ev.families["bounds"];
  auto& integrality = ev.families["integrality"];
  for (const auto& v : model.variables()) {
    double lo = 0.0;
    double hi = kInf;
    if (auto it = box.find(v); it != box.end()) std::tie(lo, hi) = it->second;
    if (binaries.count(v)) {
      lo = std::max(lo, 0.0);
      hi = std::min(hi, 1.0);
    }
    const double x = value_of(v);
    note(bounds, x >= lo - tol && x <= hi + tol, v);
  }
  auto integral = [&](const std::string& v) {
    const double x = value_of(v);
    note(integrality, std::fabs(x - std::round(x)) <= tol, v);
  };
  for (const auto& v : model.generals) integral(v);
  for (const auto& v : model.binaries) integral(v);
  return ev;
}

}  // namespace tavdc::lp
