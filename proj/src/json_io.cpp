#include "chorefair/json_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace chorefair {

using nlohmann::json;

namespace {

// SAX-to-DOM builder that stores float tokens as their raw strings.
class ExactBuilder : public nlohmann::json_sax<json> {
  public:
    json root;

    bool null() override { return place(json(nullptr)); }
    bool boolean(bool val) override { return place(json(val)); }
    bool number_integer(number_integer_t val) override { return place(json(val)); }
    bool number_unsigned(number_unsigned_t val) override { return place(json(val)); }
    bool number_float(number_float_t, const string_t& raw) override { return place(json(raw)); }
    bool string(string_t& val) override { return place(json(val)); }
    bool binary(binary_t& val) override { return place(json(val)); }
    bool key(string_t& val) override {
        pending_key_ = val;
        return true;
    }
    bool start_object(std::size_t) override {
        open_.push_back(place_slot(json::object()));
        return true;
    }
    bool end_object() override {
        open_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        open_.push_back(place_slot(json::array()));
        return true;
    }
    bool end_array() override {
        open_.pop_back();
        return true;
    }
    bool parse_error(std::size_t position, const std::string&,
                     const nlohmann::detail::exception& ex) override {
        throw UsageError("invalid JSON at byte " + std::to_string(position) + ": " + ex.what());
    }

  private:
    std::vector<json*> open_;
    std::string pending_key_;

    json* place_slot(json value) {
        if (open_.empty()) {
            root = std::move(value);
            return &root;
        }
        json& top = *open_.back();
        if (top.is_object()) {
            top[pending_key_] = std::move(value);
            return &top[pending_key_];
        }
        top.push_back(std::move(value));
        return &top.back();
    }
    bool place(json value) {
        place_slot(std::move(value));
        return true;
    }
};

const json& expect(const json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end()) throw UsageError(std::string("missing field \"") + field + '"');
    return *it;
}

std::size_t expect_size(const json& doc, const char* field) {
    const json& v = expect(doc, field);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw UsageError(std::string("field \"") + field + "\" must be a non-negative integer");
    return v.get<std::size_t>();
}

Rational rational_from_json(const json& value, const char* what) {
    CostValue v = cost_from_json(value);
    if (v.is_infinite()) throw UsageError(std::string(what) + " must be finite");
    return v.finite();
}

std::vector<std::int64_t> ints_from_json(const json& value) {
    if (!value.is_array()) throw UsageError("\"ints\" must be an array");
    std::vector<std::int64_t> out;
    out.reserve(value.size());
    for (const json& v : value) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw UsageError("\"ints\" entries must be integers");
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

json closed_form_to_json(const ClosedForm& form) {
    json out = json::object();
    if (const auto* t1 = std::get_if<Theorem1Form>(&form)) {
        out["name"] = "theorem1";
        out["params"] = {{"k", cost_to_json(CostValue(t1->k))}};
    } else if (const auto* part = std::get_if<PartitionForm>(&form)) {
        out["name"] = "npc";
        out["params"] = {{"ints", part->ints}, {"big", cost_to_json(part->big)}};
    } else {
        const auto& trip = std::get<TripletForm>(form);
        out["name"] = "strong-np";
        out["params"] = {{"ints", trip.ints},
                         {"agents", trip.agents},
                         {"big", cost_to_json(trip.big)}};
    }
    return out;
}

ClosedForm closed_form_from_json(const json& doc) {
    const std::string name = expect(doc, "name").get<std::string>();
    const json& params = expect(doc, "params");
    if (name == "theorem1") {
        return Theorem1Form{rational_from_json(expect(params, "k"), "k")};
    }
    if (name == "npc" || name == "npc_reduction") {
        PartitionForm form;
        form.ints = ints_from_json(expect(params, "ints"));
        if (params.contains("big")) form.big = cost_from_json(params.at("big"));
        return form;
    }
    if (name == "strong-np" || name == "strong_np_reduction") {
        TripletForm form;
        form.ints = ints_from_json(expect(params, "ints"));
        form.agents = expect_size(params, "agents");
        if (params.contains("big")) form.big = cost_from_json(params.at("big"));
        return form;
    }
    throw UsageError("unknown closed_form name \"" + name + '"');
}

} // namespace

json parse_exact(const std::string& text) {
    ExactBuilder builder;
    json::sax_parse(text, &builder);
    return std::move(builder.root);
}

json cost_to_json(const CostValue& value) {
    if (value.is_infinite()) return "inf";
    const Rational& r = value.finite();
    if (boost::multiprecision::denominator(r) == 1) {
        const auto num = boost::multiprecision::numerator(r);
        if (num <= std::numeric_limits<std::int64_t>::max())
            return num.convert_to<std::int64_t>();
    }
    return value.str();
}

CostValue cost_from_json(const json& value) {
    if (value.is_number_integer()) {
        const std::int64_t v = value.get<std::int64_t>();
        if (v < 0) throw UsageError("cost value must be non-negative");
        return CostValue(v);
    }
    if (value.is_number_unsigned()) {
        using Int = boost::multiprecision::cpp_int;
        return CostValue(Rational(Int(value.get<std::uint64_t>())));
    }
    if (value.is_string()) return CostValue::parse(value.get<std::string>());
    if (value.is_number_float())
        throw InternalFault("float reached cost parsing; use parse_exact");
    throw UsageError("cost values must be numbers, \"p/q\" strings, or \"inf\"");
}

json instance_to_json(const Instance& inst) {
    json models = json::array();
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        const CostModel& model = inst.model(i);
        json entry = json::object();
        if (const auto* add = std::get_if<AdditiveModel>(&model)) {
            entry["type"] = "additive";
            json costs = json::array();
            for (const CostValue& c : add->costs) costs.push_back(cost_to_json(c));
            entry["costs"] = std::move(costs);
        } else if (const auto* table = std::get_if<TableModel>(&model)) {
            entry["type"] = "table";
            json entries = json::object();
            for (ChoreSet mask = 0; mask < table->entries.size(); ++mask)
                entries[std::to_string(mask)] = cost_to_json(table->entries[mask]);
            entry["entries"] = std::move(entries);
        } else {
            entry["type"] = "closed_form";
            json form = closed_form_to_json(std::get<ClosedFormModel>(model).form);
            entry["name"] = form["name"];
            entry["params"] = form["params"];
        }
        models.push_back(std::move(entry));
    }
    return json{{"n", inst.agents()},
                {"m", inst.chores()},
                {"label", inst.label()},
                {"cost_models", std::move(models)}};
}

Instance instance_from_json(const json& doc) {
    if (!doc.is_object()) throw UsageError("instance JSON must be an object");
    const std::size_t n = expect_size(doc, "n");
    const std::size_t m = expect_size(doc, "m");
    std::string label;
    if (doc.contains("label") && doc.at("label").is_string()) label = doc.at("label");
    const json& models_json = expect(doc, "cost_models");
    if (!models_json.is_array() || models_json.size() != n)
        throw UsageError("\"cost_models\" must list one model per agent");

    std::vector<CostModel> models;
    models.reserve(n);
    for (const json& entry : models_json) {
        const std::string type = expect(entry, "type").get<std::string>();
        if (type == "additive") {
            const json& costs = expect(entry, "costs");
            if (!costs.is_array() || costs.size() != m)
                throw UsageError("additive \"costs\" must list one value per chore");
            AdditiveModel model;
            model.costs.reserve(m);
            for (const json& c : costs) model.costs.push_back(cost_from_json(c));
            models.push_back(std::move(model));
        } else if (type == "table") {
            if (m > 24) throw UsageError("table models support at most 24 chores");
            const json& entries = expect(entry, "entries");
            if (!entries.is_object()) throw UsageError("table \"entries\" must be an object");
            TableModel model;
            model.entries.assign(ChoreSet{1} << m, CostValue());
            std::vector<bool> seen(model.entries.size(), false);
            for (auto it = entries.begin(); it != entries.end(); ++it) {
                std::size_t mask = 0;
                try {
                    std::size_t pos = 0;
                    mask = std::stoull(it.key(), &pos);
                    if (pos != it.key().size()) throw std::invalid_argument(it.key());
                } catch (const std::exception&) {
                    throw UsageError("table key \"" + it.key() + "\" is not a bundle bitmask");
                }
                if (mask >= model.entries.size())
                    throw UsageError("table key " + it.key() + " exceeds 2^m");
                model.entries[mask] = cost_from_json(it.value());
                seen[mask] = true;
            }
            for (std::size_t mask = 0; mask < seen.size(); ++mask)
                if (!seen[mask])
                    throw UsageError("table is missing an entry for bundle mask " +
                                     std::to_string(mask));
            models.push_back(std::move(model));
        } else if (type == "closed_form") {
            models.push_back(ClosedFormModel{closed_form_from_json(entry)});
        } else {
            throw UsageError("unknown cost model type \"" + type + '"');
        }
    }
    return Instance(n, m, std::move(models), std::move(label));
}

Instance parse_instance(const std::string& text) { return instance_from_json(parse_exact(text)); }

json allocation_to_json(const Allocation& alloc) {
    json bundles = json::array();
    for (ChoreSet b : alloc.bundles) bundles.push_back(chores_of(b));
    return json{{"bundles", std::move(bundles)}};
}

Allocation allocation_from_json(const json& doc) {
    if (!doc.is_object()) throw UsageError("allocation JSON must be an object");
    const json& bundles = expect(doc, "bundles");
    if (!bundles.is_array()) throw UsageError("\"bundles\" must be an array of chore lists");
    Allocation alloc;
    for (const json& bundle : bundles) {
        if (!bundle.is_array()) throw UsageError("each bundle must be an array of chore indices");
        ChoreSet mask = 0;
        for (const json& c : bundle) {
            if (!c.is_number_integer() && !c.is_number_unsigned())
                throw UsageError("chore indices must be integers");
            const std::int64_t v = c.get<std::int64_t>();
            if (v < 0 || v >= static_cast<std::int64_t>(kMaxChores))
                throw UsageError("chore index out of range: " + std::to_string(v));
            mask |= ChoreSet{1} << v;
        }
        alloc.bundles.push_back(mask);
    }
    return alloc;
}

Allocation parse_allocation(const std::string& text) {
    return allocation_from_json(parse_exact(text));
}

json report_to_json(const FairnessReport& report) {
    json rows = json::array();
    for (std::size_t i = 0; i < report.n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < report.n; ++j) {
            if (i == j)
                row.push_back(nullptr); // envy toward oneself is undefined
            else
                row.push_back(cost_to_json(report.at(i, j)));
        }
        rows.push_back(std::move(row));
    }
    json out{{"envy_ratio", std::move(rows)},
             {"worst_ratio", cost_to_json(report.worst)},
             {"worst_ratio_approx", report.worst.approx()},
             {"efx_at", cost_to_json(report.worst)},
             {"is_efx", report.efx},
             {"is_ef1", report.ef1}};
    if (report.mms) {
        json mms = json::array();
        for (const MmsVerdict& v : *report.mms)
            mms.push_back(json{{"share", cost_to_json(v.share)},
                               {"bundle_cost", cost_to_json(v.bundle_cost)},
                               {"ok", v.ok}});
        out["mms"] = std::move(mms);
    }
    return out;
}

json solve_result_to_json(const SolveResult& result) {
    json out{{"efx_exists", result.efx_allocation.has_value()},
             {"best_ratio", cost_to_json(result.best_ratio)},
             {"best_ratio_approx", result.best_ratio.approx()},
             {"argmin_allocation", allocation_to_json(result.argmin_allocation)},
             {"explored", result.explored}};
    out["efx_allocation"] =
        result.efx_allocation ? allocation_to_json(*result.efx_allocation) : json(nullptr);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    out << text;
    if (!out) throw UsageError("write failed: " + path);
}

} // namespace chorefair
