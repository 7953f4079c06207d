#include "crncert/netio.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace crncert {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column),
      detail_(what) {}

namespace {

enum class Tok { Name, Int, Plus, Arrow, BiArrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool suffix_char(char c) { return c == '+' || c == '-' || c == '\''; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Text after a name may only be a separator for a trailing +/-/' to belong
// to the name.
bool name_boundary(std::string_view s, std::size_t p) {
  if (p >= s.size()) return true;
  if (is_space(s[p]) || s[p] == '#') return true;
  return s.substr(p).starts_with("->") || s.substr(p).starts_with("<->");
}

class Lexer {
 public:
  Lexer(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t p = 0;
    while (true) {
      while (p < s_.size() && is_space(s_[p])) ++p;
      if (p >= s_.size() || s_[p] == '#') {
        out.push_back({Tok::End, "", p + 1});
        return out;
      }
      const std::size_t start = p;
      const char c = s_[p];
      if (s_.substr(p).starts_with("<->")) {
        out.push_back({Tok::BiArrow, "<->", start + 1});
        p += 3;
      } else if (s_.substr(p).starts_with("->")) {
        out.push_back({Tok::Arrow, "->", start + 1});
        p += 2;
      } else if (c == '+') {
        out.push_back({Tok::Plus, "+", start + 1});
        ++p;
      } else if (c >= '0' && c <= '9') {
        while (p < s_.size() && s_[p] >= '0' && s_[p] <= '9') ++p;
        out.push_back({Tok::Int, std::string(s_.substr(start, p - start)), start + 1});
      } else if (ident_start(c)) {
        while (p < s_.size() && ident_char(s_[p])) ++p;
        std::size_t run = 0;
        while (p + run < s_.size() && suffix_char(s_[p + run])) ++run;
        for (std::size_t take = run; take > 0; --take) {
          if (name_boundary(s_, p + take)) {
            p += take;
            break;
          }
        }
        out.push_back({Tok::Name, std::string(s_.substr(start, p - start)), start + 1});
      } else {
        throw ParseError(line_no_, start + 1,
                         std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  std::string_view s_;
  std::size_t line_no_;
};

class Parser {
 public:
  NetworkDocument parse(std::string_view text) {
    NetworkDocument doc;
    doc.source = std::string(text);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      ++line_no;
      parse_line(text.substr(pos, nl - pos), line_no, doc);
      pos = nl + 1;
    }
    try {
      doc.network = Network(std::move(names_), std::move(reactions_));
    } catch (const NetworkError& e) {
      throw ParseError(line_no, 1, e.what());
    }
    return doc;
  }

 private:
  std::size_t species_id(const std::string& name) {
    auto [it, inserted] = ids_.emplace(name, names_.size());
    if (inserted) names_.push_back(name);
    return it->second;
  }

  // side := '0' | term ('+' term)* ; term := [INT] NAME
  Side parse_side(const std::vector<Token>& toks, std::size_t& k, std::size_t line_no) {
    Side side;
    if (toks[k].kind == Tok::Int && toks[k].text == "0" && toks[k + 1].kind != Tok::Name) {
      ++k;
      return side;
    }
    while (true) {
      int coeff = 1;
      if (toks[k].kind == Tok::Int) {
        const auto& t = toks[k];
        if (toks[k + 1].kind != Tok::Name)
          throw ParseError(line_no, toks[k + 1].column, "expected species name after coefficient");
        unsigned long long v = 0;
        for (char c : t.text) {
          v = v * 10 + static_cast<unsigned>(c - '0');
          if (v > 1000000) throw ParseError(line_no, t.column, "coefficient too large");
        }
        if (v == 0) throw ParseError(line_no, t.column, "coefficient 0");
        coeff = static_cast<int>(v);
        ++k;
      }
      if (toks[k].kind != Tok::Name)
        throw ParseError(line_no, toks[k].column, "expected species term");
      side.push_back({species_id(toks[k].text), coeff});
      ++k;
      if (toks[k].kind != Tok::Plus) break;
      ++k;
    }
    return canonical_side(std::move(side));
  }

  void parse_line(std::string_view line, std::size_t line_no, NetworkDocument& doc) {
    auto toks = Lexer(line, line_no).run();
    if (toks.front().kind == Tok::End) return;
    std::size_t k = 0;
    Side lhs = parse_side(toks, k, line_no);
    const Token arrow = toks[k];
    if (arrow.kind != Tok::Arrow && arrow.kind != Tok::BiArrow)
      throw ParseError(line_no, arrow.column, "expected '->' or '<->'");
    ++k;
    if (toks[k].kind == Tok::End)
      throw ParseError(line_no, toks[k].column, "missing right-hand side (use 0 for empty)");
    Side rhs = parse_side(toks, k, line_no);
    if (toks[k].kind != Tok::End)
      throw ParseError(line_no, toks[k].column, "unexpected '" + toks[k].text + "'");
    if (lhs.empty() && rhs.empty())
      throw ParseError(line_no, arrow.column, "both sides of the reaction are empty");

    add(Reaction{lhs, rhs, std::nullopt}, line_no, doc);
    if (arrow.kind == Tok::BiArrow) {
      const std::size_t fwd = reactions_.size() - 1;
      add(Reaction{rhs, lhs, fwd}, line_no, doc);
      reactions_[fwd].reverse_of = fwd + 1;
    }
  }

  void add(Reaction r, std::size_t line_no, NetworkDocument& doc) {
    auto key = std::make_pair(r.reactants, r.products);
    auto [it, inserted] = seen_.emplace(key, line_no);
    if (!inserted) {
      doc.warnings.push_back("line " + std::to_string(line_no) +
                             ": duplicate reaction (first declared on line " +
                             std::to_string(it->second) + ")");
    }
    reactions_.push_back(std::move(r));
    doc.reaction_line.push_back(line_no);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<Reaction> reactions_;
  std::map<std::pair<Side, Side>, std::size_t> seen_;
};

}  // namespace

NetworkDocument parse_network(std::string_view text) { return Parser().parse(text); }

NetworkDocument load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

std::string serialize_network(const Network& net) {
  std::string out;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    const auto& r = net.reaction(j);
    const bool paired = r.reverse_of.has_value();
    if (paired && *r.reverse_of < j) continue;
    out += net.describe_side(r.reactants);
    out += paired ? " <-> " : " -> ";
    out += net.describe_side(r.products);
    out += '\n';
  }
  return out;
}

}  // namespace crncert
