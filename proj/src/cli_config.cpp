#include "vmg/cli_config.hpp"

#include <json.hpp>

namespace vmg {

namespace {

using nlohmann::json;

Vec get_vec(const json& doc, const std::string& key, Index expected) {
    if (!doc.contains(key)) throw ValidationError("config: missing field " + key);
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ValidationError("config: field " + key + " must be an array");
    if (expected >= 0 && static_cast<Index>(arr.size()) != expected)
        throw ValidationError("config: field " + key + " has wrong length");
    Vec v(static_cast<Index>(arr.size()));
    for (Index i = 0; i < v.size(); ++i) v[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

Mat get_mat(const json& doc, const std::string& key, Index rows, Index cols) {
    if (!doc.contains(key)) throw ValidationError("config: missing field " + key);
    const auto& arr = doc.at(key);
    if (!arr.is_array() || static_cast<Index>(arr.size()) != rows)
        throw ValidationError("config: field " + key + " must have " + std::to_string(rows) + " rows");
    Mat m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = arr.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ValidationError("config: row " + std::to_string(i) + " of " + key +
                                  " must have " + std::to_string(cols) + " entries");
        for (Index j = 0; j < cols; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    return m;
}

} // namespace

ModelConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("config: JSON parse error: ") + err.what());
    }
    try {
        ModelConfig config;
        config.schema = doc.value("schema", 1);
        if (config.schema != 1) throw ValidationError("config: unsupported schema version");
        const Index d = doc.at("d").get<Index>();
        const Index k = doc.at("k").get<Index>();
        const Index n = doc.at("n").get<Index>();
        config.params = make_vmgamma(get_vec(doc, "b", n), get_mat(doc, "M", d, n),
                                     get_vec(doc, "mu", d), get_vec(doc, "sigma", d));
        if (doc.contains("A") && doc.contains("rho"))
            throw ValidationError("config: specify either A or rho, not both");
        if (doc.contains("A")) {
            config.A = get_mat(doc, "A", k, d);
        } else if (doc.contains("rho")) {
            if (k != 2 || d != 2) throw ValidationError("config: rho shorthand requires k = d = 2");
            config.rho = doc.at("rho").get<double>();
            config.A = correlation_root_2d(*config.rho);
        } else {
            throw ValidationError("config: missing field A or rho");
        }
        config.m = get_vec(doc, "m", k);
        config.q = get_vec(doc, "q", k);
        config.s0 = get_vec(doc, "S0", k);
        if (!doc.contains("r")) throw ValidationError("config: missing field r");
        config.r = doc.at("r").get<double>();
        if (doc.contains("lattice")) {
            const auto& lt = doc.at("lattice");
            config.lattice.n1 = lt.value("n1", config.lattice.n1);
            config.lattice.n2 = lt.value("n2", config.lattice.n2);
            config.lattice.step1 = lt.value("step1", config.lattice.step1);
            config.lattice.step2 = lt.value("step2", config.lattice.step2);
            config.lattice.dt = lt.value("dt", config.lattice.dt);
        }
        if (doc.contains("grid")) {
            const auto& gr = doc.at("grid");
            config.grid.n1 = gr.value("n1", config.grid.n1);
            config.grid.n2 = gr.value("n2", config.grid.n2);
            config.grid.extent_sds = gr.value("extent_sds", config.grid.extent_sds);
        }
        return config;
    } catch (const json::exception& err) {
        throw ValidationError(std::string("config: ") + err.what());
    }
}

MarketModel to_market(const ModelConfig& config) {
    return make_market(config.params, config.A, config.m, config.q, config.r, config.s0);
}

} // namespace vmg
