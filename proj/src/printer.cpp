#include "recourse/rulelang.hpp"

#include <sstream>

namespace recourse {

CmpOp complement(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return CmpOp::ne;
    case CmpOp::ne: return CmpOp::eq;
    case CmpOp::lt: return CmpOp::ge;
    case CmpOp::le: return CmpOp::gt;
    case CmpOp::gt: return CmpOp::le;
    case CmpOp::ge: return CmpOp::lt;
  }
  return op;
}

CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return CmpOp::gt;
    case CmpOp::le: return CmpOp::ge;
    case CmpOp::gt: return CmpOp::lt;
    case CmpOp::ge: return CmpOp::le;
    default: return op;
  }
}

bool is_ordering(CmpOp op) { return op != CmpOp::eq && op != CmpOp::ne; }

const char* spelling(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "\\=";
    case CmpOp::lt: return "#<";
    case CmpOp::le: return "#=<";
    case CmpOp::gt: return "#>";
    case CmpOp::ge: return "#>=";
  }
  return "?";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::pre: return "pre";
    case Phase::post: return "post";
    case Phase::none: return "none";
  }
  return "none";
}

std::string to_string(const PredKey& key) { return key.first + "/" + std::to_string(key.second); }

std::string print_term(const Term& term, int scale) {
  switch (term.kind) {
    case Term::Kind::variable: return term.text;
    case Term::Kind::number: return format_scaled(term.number, scale);
    case Term::Kind::symbol:
      return is_bare_symbol(term.text) ? term.text : "'" + term.text + "'";
  }
  return {};
}

std::string print_atom(const Atom& atom, int scale) {
  std::string out = atom.pred;
  if (atom.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ", ";
    out += print_term(atom.args[i], scale);
  }
  out += ')';
  return out;
}

std::string print_literal(const Literal& literal, int scale) {
  switch (literal.kind) {
    case Literal::Kind::positive: return print_atom(literal.atom, scale);
    case Literal::Kind::naf: return "not " + print_atom(literal.atom, scale);
    case Literal::Kind::comparison:
      return print_term(literal.cmp.lhs, scale) + " " + spelling(literal.cmp.op) + " " +
             print_term(literal.cmp.rhs, scale);
  }
  return {};
}

std::string print_rule(const Rule& rule, int scale) {
  std::string out;
  switch (rule.head_kind) {
    case HeadKind::atom: out = print_atom(rule.head, scale); break;
    case HeadKind::negated: out = "not " + print_atom(rule.head, scale); break;
    case HeadKind::none: out = ""; break;
  }
  if (!rule.body.empty()) {
    out += rule.head_kind == HeadKind::none ? ":- " : " :- ";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (i) out += ", ";
      out += print_literal(rule.body[i], scale);
    }
  }
  out += '.';
  return out;
}

std::string print_program(const Program& program, int scale) {
  std::ostringstream os;
  for (const auto& rule : program.rules()) os << print_rule(rule, scale) << '\n';
  return os.str();
}

}  // namespace recourse
