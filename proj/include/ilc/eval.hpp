#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ilc/term.hpp"
#include "ilc/value.hpp"

namespace ilc {

class Plugin;

/// Persistent association list; lookup returns the rightmost binding.
class Environment {
 public:
  Environment() = default;

  Environment extend(std::string name, Value value) const;
  /// Null when unbound. May point at a deferred (thunk) value.
  const Value* lookup(std::string_view name) const;
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  /// Bindings in binding order (leftmost first).
  std::vector<std::pair<std::string, Value>> bindings() const;

 private:
  struct Node {
    std::string name;
    Value value;
    std::shared_ptr<const Node> next;
  };
  explicit Environment(std::shared_ptr<const Node> head, std::size_t size)
      : head_(std::move(head)), size_(size) {}

  std::shared_ptr<const Node> head_;
  std::size_t size_ = 0;
};

struct Closure {
  const Plugin* plugin;
  Environment env;
  std::string param;
  TermPtr body;
};

/// Memoized deferred computation: evaluated at most once, on first force.
struct Thunk {
  const Plugin* plugin;
  TermPtr term;
  Environment env;
  std::optional<Value> value;
  bool forcing = false;
};

/// Per-thread evaluation counters. `forces` counts first-time evaluation of
/// deferred base arguments; `fuel` bounds β-steps plus primitive calls
/// (0 means unbounded).
struct EvalStats {
  std::uint64_t steps = 0;
  std::uint64_t forces = 0;
  std::uint64_t deferrals = 0;
  std::uint64_t fuel = 0;
};

/// Installs `stats` as the current thread's counters for its lifetime.
class ScopedEvalStats {
 public:
  explicit ScopedEvalStats(EvalStats& stats);
  ~ScopedEvalStats();
  ScopedEvalStats(const ScopedEvalStats&) = delete;
  ScopedEvalStats& operator=(const ScopedEvalStats&) = delete;

 private:
  EvalStats* previous_;
};

EvalStats* currentEvalStats() noexcept;

/// Call-by-value evaluation; applications flagged `deferArg` pass their
/// argument as a thunk instead.
Value eval(const Plugin& plugin, const TermPtr& t, const Environment& env = {});

Value apply(const Value& f, const Value& arg);
Value apply(const Value& f, std::initializer_list<Value> args);

/// Evaluates a thunk (once); other values are returned unchanged.
Value force(const Value& v);

}  // namespace ilc
