#include "tsreason/core/task_io.hpp"

#include <nlohmann/json.hpp>

#include "tsreason/core/csv.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/util/fs.hpp"

namespace tsreason {

namespace {

using nlohmann::json;

json value_to_json(const Value& v, const std::filesystem::path& dir,
                   const std::string& file_stem) {
    json j;
    j["kind"] = v.kind_name();
    switch (v.kind()) {
        case Value::Kind::scalar:
            j["value"] = v.scalar();
            break;
        case Value::Kind::series:
            j["file"] = file_stem + ".csv";
            csv::write_series(dir / (file_stem + ".csv"), v.series());
            break;
        case Value::Kind::frame:
            j["file"] = file_stem + ".csv";
            csv::write_frame(dir / (file_stem + ".csv"), v.frame());
            break;
        case Value::Kind::int_vec:
            j["values"] = v.int_vec().values;
            break;
        case Value::Kind::bin_vec:
            j["bits"] = v.bin_vec().bits;
            break;
        case Value::Kind::matrix:
            j["rows"] = v.matrix().rows;
            j["cols"] = v.matrix().cols;
            j["data"] = v.matrix().data;
            break;
        case Value::Kind::text:
            j["value"] = v.text().value;
            break;
        case Value::Kind::test_result:
            j["test"] = v.test_result().kind;
            j["statistic"] = v.test_result().statistic;
            j["p_value"] = v.test_result().p_value;
            j["verdict"] = v.test_result().verdict;
            break;
        case Value::Kind::model_handle:
            j["id"] = v.model_handle().id;
            j["intercept"] = v.model_handle().intercept;
            j["coeffs"] = v.model_handle().coeffs;
            break;
    }
    return j;
}

Value value_from_json(const json& j, const std::filesystem::path& dir) {
    const Value::Kind kind = value_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
        case Value::Kind::scalar:
            return Value(j.at("value").get<double>());
        case Value::Kind::series:
            return Value(csv::read_series(dir / j.at("file").get<std::string>()));
        case Value::Kind::frame:
            return Value(csv::read_frame(dir / j.at("file").get<std::string>()));
        case Value::Kind::int_vec: {
            IntVec v;
            v.values = j.at("values").get<std::vector<std::int64_t>>();
            return Value(std::move(v));
        }
        case Value::Kind::bin_vec: {
            BinVec v;
            v.bits = j.at("bits").get<std::vector<std::uint8_t>>();
            return Value(std::move(v));
        }
        case Value::Kind::matrix: {
            Matrix m;
            m.rows = j.at("rows").get<std::size_t>();
            m.cols = j.at("cols").get<std::size_t>();
            m.data = j.at("data").get<std::vector<double>>();
            if (m.data.size() != m.rows * m.cols)
                fail("BadTaskFile", "matrix data length does not match rows x cols");
            return Value(std::move(m));
        }
        case Value::Kind::text:
            return Value(Text{j.at("value").get<std::string>()});
        case Value::Kind::test_result: {
            TestResult t;
            t.kind = j.at("test").get<std::string>();
            t.statistic = j.at("statistic").get<double>();
            t.p_value = j.at("p_value").get<double>();
            t.verdict = j.at("verdict").get<bool>();
            return Value(std::move(t));
        }
        case Value::Kind::model_handle: {
            ModelHandle h;
            h.id = j.at("id").get<std::string>();
            h.intercept = j.at("intercept").get<double>();
            h.coeffs = j.at("coeffs").get<std::vector<double>>();
            return Value(std::move(h));
        }
    }
    fail("BadTaskFile", "unrecognized value kind");
}

}  // namespace

void write_task(const std::filesystem::path& dir, const TaskInstance& task) {
    std::filesystem::create_directories(dir);
    json j;
    j["schema"] = 1;
    j["id"] = task.id;
    j["family"] = task.family;
    j["kind"] = to_string(task.kind);
    j["question"] = task.question;
    j["seed"] = task.seed;
    j["binding"] = task.binding;
    if (task.horizon > 0) j["horizon"] = task.horizon;

    if (task.constraint) {
        json c;
        c["kind"] = constraints::to_string(task.constraint->kind);
        c["value"] = task.constraint->value;
        if (task.constraint->anchor) c["anchor"] = *task.constraint->anchor;
        j["constraint"] = c;
    }

    json knowledge = json::object();
    if (task.knowledge.anomaly_rate) knowledge["anomaly_rate"] = *task.knowledge.anomaly_rate;
    if (task.knowledge.relation_ratio)
        knowledge["relation_ratio"] = *task.knowledge.relation_ratio;
    if (!knowledge.empty()) j["knowledge"] = knowledge;

    json contract;
    contract["kind"] = Value::kind_name(task.output_contract.kind);
    contract["shape"] = task.output_contract.shape;
    j["output_contract"] = contract;

    json env = json::object();
    for (const auto& [name, value] : task.env)
        env[name] = value_to_json(value, dir, "env_" + name);
    j["env"] = env;

    if (task.ground_truth)
        j["ground_truth"] = value_to_json(*task.ground_truth, dir, "truth");

    util::write_text_atomic(dir / "task.json", j.dump(2) + "\n");
}

TaskInstance read_task(const std::filesystem::path& dir) {
    const std::filesystem::path file = dir / "task.json";
    json j = json::parse(util::read_text_file(file), nullptr, false);
    if (j.is_discarded()) fail("BadTaskFile", "'" + file.string() + "' is not valid JSON");
    try {
        if (j.at("schema").get<int>() != 1)
            fail("BadTaskFile", "unsupported task schema in '" + file.string() + "'");

        TaskInstance task;
        task.id = j.at("id").get<std::string>();
        task.family = j.at("family").get<std::string>();
        task.kind = task_kind_from_string(j.at("kind").get<std::string>());
        task.question = j.at("question").get<std::string>();
        task.seed = j.at("seed").get<std::uint64_t>();
        task.binding = j.value("binding", false);
        task.horizon = j.value("horizon", std::size_t{0});

        if (j.contains("constraint")) {
            constraints::ConstraintSpec spec;
            const auto& c = j["constraint"];
            const auto kind = constraints::kind_from_string(c.at("kind").get<std::string>());
            if (!kind) fail("BadTaskFile", "unknown constraint kind in '" + file.string() + "'");
            spec.kind = *kind;
            spec.value = c.at("value").get<double>();
            if (c.contains("anchor")) spec.anchor = c["anchor"].get<double>();
            task.constraint = spec;
        }

        if (j.contains("knowledge")) {
            const auto& k = j["knowledge"];
            if (k.contains("anomaly_rate"))
                task.knowledge.anomaly_rate = k["anomaly_rate"].get<double>();
            if (k.contains("relation_ratio"))
                task.knowledge.relation_ratio = k["relation_ratio"].get<double>();
        }

        const auto& contract = j.at("output_contract");
        task.output_contract.kind =
            value_kind_from_string(contract.at("kind").get<std::string>());
        task.output_contract.shape = contract.at("shape").get<std::vector<std::size_t>>();

        for (const auto& [name, value] : j.at("env").items())
            task.env.emplace(name, value_from_json(value, dir));

        if (j.contains("ground_truth"))
            task.ground_truth = value_from_json(j["ground_truth"], dir);
        return task;
    } catch (const json::exception& e) {
        fail("BadTaskFile", "'" + file.string() + "': " + e.what());
    }
}

}  // namespace tsreason
