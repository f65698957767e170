#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsreason/core/task.hpp"
#include "tsreason/core/value.hpp"
#include "tsreason/plan/ast.hpp"

namespace tsreason::retrieval {
class Client;
}

namespace tsreason::plan {

/// Static argument typing used by the validator. `number` admits scalar
/// values; `any` admits everything (used where an argument legitimately takes
/// more than one kind, e.g. a model name or a fitted handle).
enum class ArgType {
    any,
    series,
    frame,
    series_or_frame,
    number,
    string,
    int_vec,
    bin_vec,
    matrix,
    model_handle,
    test_result,
};

const char* to_string(ArgType t);
bool arg_type_admits(ArgType t, Value::Kind k);

struct ParamSpec {
    std::string name;
    ArgType type = ArgType::any;
    bool required = true;
};

/// Evaluated arguments for one operator call. Accessors throw OpError with
/// codes MissingArgument / TypeMismatch, which the executor converts into
/// step-level feedback.
class CallArgs {
public:
    explicit CallArgs(std::map<std::string, Value> values) : values_(std::move(values)) {}

    bool has(const std::string& name) const { return values_.count(name) != 0; }
    const Value& get(const std::string& name) const;

    double number(const std::string& name) const;
    long integer(const std::string& name) const;
    const std::string& text(const std::string& name) const;
    const TimeSeries& series(const std::string& name) const;
    const Frame& frame(const std::string& name) const;

    std::optional<double> opt_number(const std::string& name) const;
    std::optional<long> opt_integer(const std::string& name) const;
    std::optional<std::string> opt_text(const std::string& name) const;

    const std::map<std::string, Value>& all() const { return values_; }

private:
    std::map<std::string, Value> values_;
};

/// Ambient services an operator may use. Task is present during episodes
/// (knowledge like anomaly rate); retrieval is wired when data-retrieval
/// operators are allowed to run.
struct ExecContext {
    const TaskInstance* task = nullptr;
    retrieval::Client* retrieval = nullptr;
};

struct OperatorSpec {
    std::string name;     // canonical name
    std::string summary;  // one-line description for listings and prompts
    std::vector<ParamSpec> params;
    Value::Kind result = Value::Kind::series;
    bool implemented = true;
    std::function<Value(const CallArgs&, ExecContext&)> fn;

    const ParamSpec* find_param(const std::string& name) const;
};

/// Immutable operator catalog. Canonical snake_case names carry the
/// implementations; the alias table accepts the CamelCase *OP names that
/// decomposer output uses, mapping each onto one canonical operator. A few
/// *OP names are registered as declared-but-unimplemented so plans using them
/// get a structured UnimplementedOp diagnostic instead of UnknownOp.
class Registry {
public:
    static const Registry& instance();

    /// Resolve a canonical name or alias; nullptr when unknown.
    const OperatorSpec* find(const std::string& name) const;
    /// Canonical operators in registration order (stable for listings).
    const std::vector<std::string>& names() const { return order_; }
    const std::map<std::string, std::string>& aliases() const { return aliases_; }
    /// Aliases pointing at one canonical operator, sorted.
    std::vector<std::string> aliases_of(const std::string& canonical) const;

private:
    Registry();
    void add(OperatorSpec spec);
    void alias(const std::string& from, const std::string& to);

    std::map<std::string, OperatorSpec> ops_;
    std::map<std::string, std::string> aliases_;
    std::vector<std::string> order_;
};

}  // namespace tsreason::plan
