#include "recourse/store.hpp"

#include "recourse/error.hpp"

#include <algorithm>
#include <limits>

namespace recourse {

bool NumericRange::contains(Scaled x) const {
  return x >= lo && x <= hi && !std::binary_search(excluded.begin(), excluded.end(), x);
}

namespace {

template <class T>
bool insert_sorted(std::vector<T>& v, const T& x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

void check_range(const Value& v) {
  if (v.is_number() && (v.as_number() > kScaledLimit || v.as_number() < -kScaledLimit)) {
    throw Error(ErrorCode::store_overflow,
                "numeric constant " + std::to_string(v.as_number()) + " exceeds the store bounds");
  }
}

[[noreturn]] void kind_mismatch(const std::string& what) {
  throw Error(ErrorCode::kind_mismatch, "ordering comparison on a symbol: " + what);
}

bool evaluate(const Value& a, CmpOp op, const Value& b) {
  if (op == CmpOp::eq) return a == b;
  if (op == CmpOp::ne) return a != b;
  if (!a.is_number() || !b.is_number()) kind_mismatch(a.str() + " " + spelling(op) + " " + b.str());
  Scaled x = a.as_number(), y = b.as_number();
  switch (op) {
    case CmpOp::lt: return x < y;
    case CmpOp::le: return x <= y;
    case CmpOp::gt: return x > y;
    case CmpOp::ge: return x >= y;
    default: return false;
  }
}

}  // namespace

VarId ConstraintStore::new_var() {
  Var v;
  v.parent = static_cast<VarId>(vars_.size());
  vars_.push_back(std::move(v));
  return static_cast<VarId>(vars_.size() - 1);
}

VarId ConstraintStore::new_numeric(Scaled lo, Scaled hi) {
  check_range(Value::number(lo));
  check_range(Value::number(hi));
  VarId id = new_var();
  vars_[id].kind = VarKind::numeric;
  vars_[id].lo = lo;
  vars_[id].hi = hi;
  if (!normalize(id)) fail();
  return id;
}

VarId ConstraintStore::new_categorical(std::vector<std::string> domain) {
  VarId id = new_var();
  vars_[id].kind = VarKind::categorical;
  vars_[id].domain = std::make_shared<const std::vector<std::string>>(std::move(domain));
  if (!normalize(id)) fail();
  return id;
}

VarId ConstraintStore::find(VarId id) const {
  while (vars_[id].parent != id) id = vars_[id].parent;
  return id;
}

VarId ConstraintStore::root(VarId id) {
  VarId r = find(id);
  while (vars_[id].parent != r) {
    VarId next = vars_[id].parent;
    vars_[id].parent = r;
    id = next;
  }
  return r;
}

std::optional<Value> ConstraintStore::value(VarId id) const { return vars_[find(id)].value; }

std::optional<ConstraintStore> ConstraintStore::add(const Operand& lhs, CmpOp op,
                                                    const Operand& rhs) const {
  ConstraintStore copy = *this;
  if (!copy.post(lhs, op, rhs)) return std::nullopt;
  return copy;
}

bool ConstraintStore::post(const Operand& lhs, CmpOp op, const Operand& rhs) {
  if (!ok_) return false;
  auto resolve = [&](const Operand& o) -> Operand {
    if (!o.is_var()) {
      check_range(std::get<Value>(o.v));
      return o;
    }
    VarId r = root(std::get<VarId>(o.v));
    if (vars_[r].value) return Operand::constant(*vars_[r].value);
    return Operand::var(r);
  };
  Operand l = resolve(lhs), r = resolve(rhs);

  if (!l.is_var() && !r.is_var()) {
    return evaluate(std::get<Value>(l.v), op, std::get<Value>(r.v)) || fail();
  }
  if (!l.is_var()) {
    std::swap(l, r);
    op = mirror(op);
  }
  VarId a = std::get<VarId>(l.v);

  if (r.is_var()) {
    VarId b = std::get<VarId>(r.v);
    if (is_ordering(op) && (!make_numeric(a) || !make_numeric(b))) return fail();
    if (a == b) {
      return (op == CmpOp::eq || op == CmpOp::le || op == CmpOp::ge) || fail();
    }
    if (op == CmpOp::eq) return (unify(a, b) && propagate()) || fail();
    relations_.push_back({a, op, b});
    return propagate() || fail();
  }

  const Value& c = std::get<Value>(r.v);
  switch (op) {
    case CmpOp::eq: return (bind(a, c) && propagate()) || fail();
    case CmpOp::ne: return (exclude(a, c) && propagate()) || fail();
    default: break;
  }
  if (!c.is_number()) kind_mismatch("variable " + std::string(spelling(op)) + " " + c.str());
  if (!make_numeric(a)) return fail();
  Scaled x = c.as_number();
  Scaled lo = -kScaledLimit, hi = kScaledLimit;
  switch (op) {
    case CmpOp::lt: hi = x - 1; break;
    case CmpOp::le: hi = x; break;
    case CmpOp::gt: lo = x + 1; break;
    case CmpOp::ge: lo = x; break;
    default: break;
  }
  bool changed = false;
  return (tighten(a, lo, hi, changed) && propagate()) || fail();
}

bool ConstraintStore::make_numeric(VarId r) {
  Var& v = vars_[r];
  if (v.kind == VarKind::categorical || (v.value && v.value->is_symbol())) {
    kind_mismatch("categorical variable in an ordering");
  }
  if (v.kind == VarKind::unknown) {
    v.kind = VarKind::numeric;
    v.excluded_syms.clear();
    return normalize(r);
  }
  return true;
}

bool ConstraintStore::bind(VarId r, const Value& val) {
  Var& v = vars_[r];
  if (v.value) return *v.value == val;
  if (val.is_symbol()) {
    if (v.kind == VarKind::numeric) return false;
    if (v.domain && std::find(v.domain->begin(), v.domain->end(), val.as_symbol()) == v.domain->end()) {
      return false;
    }
    if (std::binary_search(v.excluded_syms.begin(), v.excluded_syms.end(), val.as_symbol())) return false;
    v.kind = VarKind::categorical;
  } else {
    if (v.kind == VarKind::categorical) return false;
    Scaled x = val.as_number();
    if (x < v.lo || x > v.hi) return false;
    if (std::binary_search(v.excluded_nums.begin(), v.excluded_nums.end(), x)) return false;
    v.kind = VarKind::numeric;
  }
  v.value = val;
  v.excluded_nums.clear();
  v.excluded_syms.clear();
  return true;
}

bool ConstraintStore::exclude(VarId r, const Value& val) {
  Var& v = vars_[r];
  if (v.value) return *v.value != val;
  if (val.is_symbol()) {
    if (v.kind == VarKind::numeric) return true;
    insert_sorted(v.excluded_syms, val.as_symbol());
  } else {
    if (v.kind == VarKind::categorical) return true;
    Scaled x = val.as_number();
    if (x < v.lo || x > v.hi) return true;
    insert_sorted(v.excluded_nums, x);
  }
  return normalize(r);
}

bool ConstraintStore::tighten(VarId r, Scaled lo, Scaled hi, bool& changed) {
  Var& v = vars_[r];
  if (v.value) {
    Scaled x = v.value->as_number();
    return x >= lo && x <= hi;
  }
  if (lo > v.lo) {
    v.lo = lo;
    changed = true;
  }
  if (hi < v.hi) {
    v.hi = hi;
    changed = true;
  }
  return normalize(r);
}

bool ConstraintStore::normalize(VarId r) {
  Var& v = vars_[r];
  if (v.value) return true;
  if (v.kind != VarKind::categorical) {
    auto& ex = v.excluded_nums;
    while (v.lo <= v.hi && std::binary_search(ex.begin(), ex.end(), v.lo)) ++v.lo;
    while (v.hi >= v.lo && std::binary_search(ex.begin(), ex.end(), v.hi)) --v.hi;
    if (v.lo > v.hi) return false;
    ex.erase(ex.begin(), std::lower_bound(ex.begin(), ex.end(), v.lo));
    ex.erase(std::upper_bound(ex.begin(), ex.end(), v.hi), ex.end());
    if (v.kind == VarKind::numeric && v.lo == v.hi) {
      v.value = Value::number(v.lo);
      ex.clear();
    }
    return true;
  }
  if (!v.domain) return true;
  std::optional<std::string> only;
  std::size_t count = 0;
  for (const auto& s : *v.domain) {
    if (std::binary_search(v.excluded_syms.begin(), v.excluded_syms.end(), s)) continue;
    if (++count == 1) only = s;
  }
  if (count == 0) return false;
  if (count == 1) {
    v.value = Value::symbol(*only);
    v.excluded_syms.clear();
  }
  return true;
}

bool ConstraintStore::unify(VarId a, VarId b) {
  Var& x = vars_[a];
  Var& y = vars_[b];
  if ((x.kind == VarKind::categorical && y.kind == VarKind::numeric) ||
      (x.kind == VarKind::numeric && y.kind == VarKind::categorical)) {
    return false;
  }
  if (x.kind == VarKind::unknown) x.kind = y.kind;
  x.lo = std::max(x.lo, y.lo);
  x.hi = std::min(x.hi, y.hi);
  for (Scaled n : y.excluded_nums) insert_sorted(x.excluded_nums, n);
  for (const auto& s : y.excluded_syms) insert_sorted(x.excluded_syms, s);
  if (x.domain && y.domain) {
    std::vector<std::string> both;
    for (const auto& s : *x.domain) {
      if (std::find(y.domain->begin(), y.domain->end(), s) != y.domain->end()) both.push_back(s);
    }
    x.domain = std::make_shared<const std::vector<std::string>>(std::move(both));
  } else if (y.domain) {
    x.domain = y.domain;
  }
  if (x.kind == VarKind::categorical) x.excluded_nums.clear();
  if (x.kind == VarKind::numeric) x.excluded_syms.clear();
  y.parent = a;
  return normalize(a);
}

bool ConstraintStore::propagate() {
  const std::size_t cap = 4 * (vars_.size() + relations_.size()) + 64;
  for (std::size_t round = 0;; ++round) {
    if (round > cap) return false;
    bool changed = false;
    std::vector<Relation> keep;
    keep.reserve(relations_.size());
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      Relation rel = relations_[i];
      VarId a = root(rel.a), b = root(rel.b);
      const auto& va = vars_[a].value;
      const auto& vb = vars_[b].value;
      if (a == b) {
        if (rel.op == CmpOp::ne || rel.op == CmpOp::lt || rel.op == CmpOp::gt) return false;
        changed = true;
        continue;
      }
      if (va && vb) {
        if (!evaluate(*va, rel.op, *vb)) return false;
        changed = true;
        continue;
      }
      if (va || vb) {
        // one side bound: becomes a unary constraint on the other
        VarId other = va ? b : a;
        CmpOp op = va ? mirror(rel.op) : rel.op;
        Value c = va ? *va : *vb;
        changed = true;
        if (op == CmpOp::ne) {
          if (!exclude(other, c)) return false;
          continue;
        }
        if (!c.is_number()) kind_mismatch("relation with a bound symbol");
        Scaled x = c.as_number();
        Scaled lo = -kScaledLimit, hi = kScaledLimit;
        switch (op) {
          case CmpOp::lt: hi = x - 1; break;
          case CmpOp::le: hi = x; break;
          case CmpOp::gt: lo = x + 1; break;
          case CmpOp::ge: lo = x; break;
          default: break;
        }
        bool dummy = false;
        if (!tighten(other, lo, hi, dummy)) return false;
        continue;
      }
      keep.push_back({a, rel.op, b});
      if (rel.op == CmpOp::ne) continue;
      // a op b, normalized to low <(=) high
      VarId low = a, high = b;
      CmpOp op = rel.op;
      if (op == CmpOp::gt || op == CmpOp::ge) {
        std::swap(low, high);
        op = mirror(op);
      }
      Scaled gap = op == CmpOp::lt ? 1 : 0;
      if (!tighten(low, -kScaledLimit, vars_[high].hi - gap, changed)) return false;
      if (!tighten(high, vars_[low].lo + gap, kScaledLimit, changed)) return false;
    }
    relations_ = std::move(keep);
    if (!changed) return true;
  }
}

NumericRange ConstraintStore::numeric_range(VarId id) const {
  const Var& v = vars_[find(id)];
  NumericRange out;
  if (v.value && v.value->is_number()) {
    out.lo = out.hi = v.value->as_number();
    return out;
  }
  out.lo = v.lo;
  out.hi = v.hi;
  out.excluded = v.excluded_nums;
  return out;
}

std::optional<std::vector<std::string>> ConstraintStore::candidates(VarId id) const {
  const Var& v = vars_[find(id)];
  if (v.value) {
    if (v.value->is_symbol()) return std::vector<std::string>{v.value->as_symbol()};
    return std::vector<std::string>{};
  }
  if (!v.domain) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& s : *v.domain) {
    if (!std::binary_search(v.excluded_syms.begin(), v.excluded_syms.end(), s)) out.push_back(s);
  }
  return out;
}

std::vector<std::string> ConstraintStore::excluded_symbols(VarId id) const {
  return vars_[find(id)].excluded_syms;
}

std::vector<ConstraintStore::Relation> ConstraintStore::relations() const {
  std::vector<Relation> out;
  for (const auto& r : relations_) out.push_back({find(r.a), r.op, find(r.b)});
  return out;
}

Value ConstraintStore::witness(VarId id) const {
  if (!ok_) throw Error(ErrorCode::infeasible, "witness requested from an infeasible store");
  const Var& v = vars_[find(id)];
  if (v.value) return *v.value;
  if (v.kind == VarKind::numeric) return Value::number(v.lo);
  if (auto c = candidates(id); c && !c->empty()) return Value::symbol(c->front());
  throw Error(ErrorCode::infeasible, "variable has no finite domain to draw a witness from");
}

std::optional<std::vector<Value>> ConstraintStore::witness_all(std::span<const VarId> ids) const {
  if (!ok_) return std::nullopt;
  if (ids.empty()) return std::vector<Value>{};
  VarId id = ids.front();
  std::vector<Value> options;
  const Var& v = vars_[find(id)];
  if (v.value) {
    options.push_back(*v.value);
  } else if (v.kind == VarKind::numeric) {
    constexpr int kMaxTries = 64;
    for (Scaled x = v.lo; x <= v.hi && static_cast<int>(options.size()) < kMaxTries; ++x) {
      if (!std::binary_search(v.excluded_nums.begin(), v.excluded_nums.end(), x)) {
        options.push_back(Value::number(x));
      }
    }
  } else if (auto c = candidates(id)) {
    for (auto& s : *c) options.push_back(Value::symbol(std::move(s)));
  } else {
    return std::nullopt;
  }
  for (const auto& opt : options) {
    ConstraintStore next = *this;
    if (!next.post(Operand::var(id), CmpOp::eq, Operand::constant(opt))) continue;
    if (auto rest = next.witness_all(ids.subspan(1))) {
      rest->insert(rest->begin(), opt);
      return rest;
    }
  }
  return std::nullopt;
}

std::uint64_t ConstraintStore::feasible_size(VarId id) const {
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  if (!ok_) return 0;
  const Var& v = vars_[find(id)];
  if (v.value) return 1;
  if (v.kind == VarKind::numeric) {
    auto width = static_cast<std::uint64_t>(v.hi - v.lo) + 1;
    return width - v.excluded_nums.size();
  }
  if (auto c = candidates(id)) return c->size();
  return kInf;
}

std::string ConstraintStore::describe(VarId id, int scale) const {
  const Var& v = vars_[find(id)];
  if (v.value) {
    return v.value->is_number() ? format_scaled(v.value->as_number(), scale) : v.value->str();
  }
  if (v.kind == VarKind::numeric) {
    std::string out = format_scaled(v.lo, scale) + ".." + format_scaled(v.hi, scale);
    if (!v.excluded_nums.empty()) {
      out += " \\ {";
      for (std::size_t i = 0; i < v.excluded_nums.size(); ++i) {
        out += (i ? ", " : "") + format_scaled(v.excluded_nums[i], scale);
      }
      out += "}";
    }
    return out;
  }
  if (auto c = candidates(id)) {
    std::string out = "{";
    for (std::size_t i = 0; i < c->size(); ++i) out += (i ? ", " : "") + (*c)[i];
    return out + "}";
  }
  if (!v.excluded_syms.empty() || !v.excluded_nums.empty()) {
    std::string out;
    for (const auto& s : v.excluded_syms) out += (out.empty() ? "" : ", ") + ("\\= " + Value::symbol(s).str());
    for (Scaled n : v.excluded_nums) out += (out.empty() ? "" : ", ") + ("\\= " + format_scaled(n, scale));
    return out;
  }
  return "_";
}

}  // namespace recourse
