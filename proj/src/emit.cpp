#include "qlock/emit.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qlock/version.hpp"

namespace qlock {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void check_shared_grid(const std::vector<NoiseBudget>& budgets) {
    if (budgets.empty()) throw ConfigError("nothing to emit: no budgets");
    for (const auto& b : budgets) {
        if (b.omega.size() != budgets.front().omega.size() || b.units != budgets.front().units)
            throw ConfigError("budgets do not share one grid; cannot emit a single table");
        for (std::size_t k = 0; k < b.omega.size(); ++k)
            if (b.omega[k] != budgets.front().omega[k])
                throw ConfigError("budgets do not share one grid; cannot emit a single table");
    }
}

} // namespace

std::string emit_csv(const std::vector<NoiseBudget>& budgets) {
    check_shared_grid(budgets);

    std::string out = "omega";
    for (const auto& b : budgets) out += "," + b.label;
    for (const auto& b : budgets)
        for (const auto& src : b.source_ids) out += "," + b.label + "." + src;
    for (const auto& b : budgets)
        if (b.has_gain()) out += "," + b.label + ".gain_re," + b.label + ".gain_im";
    out += "\n";

    const std::size_t npts = budgets.front().omega.size();
    for (std::size_t k = 0; k < npts; ++k) {
        out += fmt(budgets.front().omega[k]);
        for (const auto& b : budgets) out += "," + fmt(b.total[k]);
        for (const auto& b : budgets)
            for (const auto& column : b.per_source) out += "," + fmt(column[k]);
        for (const auto& b : budgets)
            if (b.has_gain())
                out += "," + fmt(b.gain[k].real()) + "," + fmt(b.gain[k].imag());
        out += "\n";
    }
    return out;
}

std::string emit_json(const std::vector<NoiseBudget>& budgets) {
    check_shared_grid(budgets);

    nlohmann::json doc;
    doc["version"] = kVersion;
    doc["units"] = std::string(unit_mode_name(budgets.front().units));
    doc["omega"] = budgets.front().omega;

    nlohmann::json list = nlohmann::json::array();
    for (const auto& b : budgets) {
        nlohmann::json entry;
        entry["label"] = b.label;
        entry["id"] = std::string(scenario_id_name(b.id));
        entry["params"] = b.metadata;
        entry["total"] = b.total;
        nlohmann::json per_source;
        for (std::size_t s = 0; s < b.source_ids.size(); ++s)
            per_source[b.source_ids[s]] = b.per_source[s];
        entry["per_source"] = per_source;
        if (b.has_gain()) {
            std::vector<double> re(b.gain.size()), im(b.gain.size());
            for (std::size_t k = 0; k < b.gain.size(); ++k) {
                re[k] = b.gain[k].real();
                im[k] = b.gain[k].imag();
            }
            entry["gain_re"] = re;
            entry["gain_im"] = im;
        }
        list.push_back(std::move(entry));
    }
    doc["budgets"] = std::move(list);
    return doc.dump(2) + "\n";
}

std::vector<NoiseBudget> parse_budgets_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid budgets JSON: ") + e.what());
    }

    std::vector<NoiseBudget> budgets;
    const UnitMode units = doc.at("units").get<std::string>() == "si" ? UnitMode::SI
                                                                      : UnitMode::Normalized;
    const auto omega = doc.at("omega").get<std::vector<double>>();
    for (const auto& entry : doc.at("budgets")) {
        NoiseBudget b;
        b.label = entry.at("label").get<std::string>();
        b.id = scenario_id_from(entry.at("id").get<std::string>());
        b.units = units;
        b.omega = omega;
        b.total = entry.at("total").get<std::vector<double>>();
        for (const auto& [key, column] : entry.at("per_source").items()) {
            b.source_ids.push_back(key);
            b.per_source.push_back(column.get<std::vector<double>>());
        }
        if (entry.contains("gain_re")) {
            const auto re = entry.at("gain_re").get<std::vector<double>>();
            const auto im = entry.at("gain_im").get<std::vector<double>>();
            for (std::size_t k = 0; k < re.size(); ++k) b.gain.emplace_back(re[k], im[k]);
        }
        if (entry.contains("params"))
            b.metadata = entry.at("params").get<std::map<std::string, double>>();
        budgets.push_back(std::move(b));
    }
    return budgets;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace qlock
