#include "ilc/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "ilc/error.hpp"
#include "ilc/plugin.hpp"

namespace ilc {

Environment Environment::extend(std::string name, Value value) const {
  return Environment(
      std::make_shared<const Node>(Node{std::move(name), std::move(value), head_}),
      size_ + 1);
}

const Value* Environment::lookup(std::string_view name) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

std::vector<std::pair<std::string, Value>> Environment::bindings() const {
  std::vector<std::pair<std::string, Value>> out;
  for (const Node* n = head_.get(); n; n = n->next.get())
    out.emplace_back(n->name, n->value);
  return {out.rbegin(), out.rend()};
}

namespace {

thread_local EvalStats* tlStats = nullptr;

void tick() {
  if (!tlStats) return;
  ++tlStats->steps;
  if (tlStats->fuel != 0 && tlStats->steps > tlStats->fuel)
    throw Error(ErrorKind::FuelExhausted,
                "evaluation exceeded " + std::to_string(tlStats->fuel) + " steps");
}

struct ConstSlot {
  std::weak_ptr<const Term> term;
  const Plugin* plugin;
  Value value;
};

// Constant values are pure functions of (plugin, name, type arguments); memoize
// them per syntax node so hot loops skip name resolution.
Value constantAt(const Plugin& plugin, const TermPtr& t) {
  thread_local std::unordered_map<const Term*, ConstSlot> cache;
  auto it = cache.find(t.get());
  if (it != cache.end() && it->second.plugin == &plugin && it->second.term.lock() == t)
    return it->second.value;
  Value v = resolveConstantValue(plugin, t->name(), t->typeArgs());
  thread_local std::size_t limit = 1u << 16;
  if (cache.size() > limit) {
    std::erase_if(cache, [](const auto& kv) { return kv.second.term.expired(); });
    limit = std::max(limit, 2 * cache.size());
  }
  cache.insert_or_assign(t.get(), ConstSlot{t, &plugin, v});
  return v;
}

Value defer(const Plugin& plugin, const TermPtr& t, const Environment& env) {
  switch (t->kind()) {
    case Term::Kind::Var:
      // Pass the binding through as-is: it may already be deferred.
      if (const Value* v = env.lookup(t->name())) return *v;
      throw Error(ErrorKind::UnboundVariable, t->name());
    case Term::Kind::Const:
    case Term::Kind::Lam:
      return eval(plugin, t, env);
    case Term::Kind::App:
      break;
  }
  if (tlStats) ++tlStats->deferrals;
  return Value::thunk(std::make_shared<Thunk>(Thunk{&plugin, t, env, std::nullopt}));
}

}  // namespace

ScopedEvalStats::ScopedEvalStats(EvalStats& stats) : previous_(tlStats) {
  tlStats = &stats;
}
ScopedEvalStats::~ScopedEvalStats() { tlStats = previous_; }

EvalStats* currentEvalStats() noexcept { return tlStats; }

Value force(const Value& v) {
  if (!v.isThunk()) return v;
  Thunk& th = *v.thunk();
  if (th.value) return *th.value;
  if (th.forcing)
    throw Error(ErrorKind::TypeMismatch, "deferred value depends on itself");
  th.forcing = true;
  if (tlStats) ++tlStats->forces;
  Value result = force(eval(*th.plugin, th.term, th.env));
  th.value = result;
  th.forcing = false;
  th.term.reset();
  th.env = Environment();
  return result;
}

Value eval(const Plugin& plugin, const TermPtr& t, const Environment& env) {
  switch (t->kind()) {
    case Term::Kind::Const:
      return constantAt(plugin, t);
    case Term::Kind::Var: {
      const Value* v = env.lookup(t->name());
      if (!v) throw Error(ErrorKind::UnboundVariable, t->name());
      return force(*v);
    }
    case Term::Kind::Lam:
      return Value::closure(
          std::make_shared<const Closure>(Closure{&plugin, env, t->name(), t->body()}));
    case Term::Kind::App: {
      Value f = eval(plugin, t->fun(), env);
      Value a = t->deferArg() ? defer(plugin, t->arg(), env) : eval(plugin, t->arg(), env);
      return apply(f, a);
    }
  }
  throw Error(ErrorKind::TypeMismatch, "malformed term");
}

Value apply(const Value& fv, const Value& arg) {
  Value f = force(fv);
  if (f.kind() == Value::Kind::Closure) {
    tick();
    const Closure& c = f.closure();
    return eval(*c.plugin, c.body, c.env.extend(c.param, arg));
  }
  if (f.kind() != Value::Kind::Native)
    throw Error(ErrorKind::NotAFunction, "cannot apply " + showValue(f));
  const NativeFn& n = f.native();
  if (static_cast<int>(n.args.size()) + 1 < n.arity) {
    auto partial = std::make_shared<NativeFn>(n);
    partial->args.push_back(arg);
    return Value::native(std::move(partial));
  }
  tick();
  std::vector<Value> args;
  args.reserve(n.args.size() + 1);
  for (const auto& a : n.args) args.push_back(a);
  args.push_back(arg);
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!(n.lazyMask & (1u << i))) args[i] = force(args[i]);
  return n.fn(args);
}

Value apply(const Value& f, std::initializer_list<Value> args) {
  Value result = f;
  for (const auto& a : args) result = apply(result, a);
  return result;
}

}  // namespace ilc
