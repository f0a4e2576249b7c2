#include "funcspace/serialize.hpp"

#include <fstream>

namespace funcspace {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw io_error("artifact: expected a numeric array");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw io_error("artifact: expected a matrix (array of rows)");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw io_error("artifact: ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
    return m;
}

void require_kind(const nlohmann::json& j, const std::string& kind) {
    if (artifact_kind(j) != kind)
        throw io_error("artifact: expected kind \"" + kind + "\", got \"" + artifact_kind(j) +
                       "\"");
}

}  // namespace

std::string artifact_kind(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw io_error("artifact: missing \"kind\" field");
    return j["kind"].get<std::string>();
}

nlohmann::json to_json(const TwoLayerMeasure& mu) {
    nlohmann::json j;
    j["kind"] = "two_layer_measure";
    j["dim"] = mu.dim;
    j["atoms"] = nlohmann::json::array();
    for (const NeuronAtom& atom : mu.atoms) {
        j["atoms"].push_back({{"w", atom.weight},
                              {"a", atom.outer},
                              {"b", vector_to_json(atom.inner)},
                              {"c", atom.bias}});
    }
    return j;
}

TwoLayerMeasure measure_from_json(const nlohmann::json& j) {
    require_kind(j, "two_layer_measure");
    TwoLayerMeasure mu;
    mu.dim = j.at("dim").get<int>();
    for (const auto& ja : j.at("atoms")) {
        NeuronAtom atom;
        atom.weight = ja.at("w").get<double>();
        atom.outer = ja.at("a").get<double>();
        atom.inner = vector_from_json(ja.at("b"));
        atom.bias = ja.at("c").get<double>();
        mu.atoms.push_back(std::move(atom));
    }
    mu.validate();
    return mu;
}

nlohmann::json to_json(const TwoLayerNet& net) {
    nlohmann::json j;
    j["kind"] = "two_layer_net";
    j["dim"] = net.dim;
    j["neurons"] = nlohmann::json::array();
    for (const TwoLayerNeuron& nrn : net.neurons) {
        j["neurons"].push_back({{"a", nrn.a}, {"b", vector_to_json(nrn.b)}, {"c", nrn.c}});
    }
    return j;
}

TwoLayerNet net_from_json(const nlohmann::json& j) {
    require_kind(j, "two_layer_net");
    TwoLayerNet net;
    net.dim = j.at("dim").get<int>();
    for (const auto& jn : j.at("neurons")) {
        TwoLayerNeuron nrn;
        nrn.a = jn.at("a").get<double>();
        nrn.b = vector_from_json(jn.at("b"));
        nrn.c = jn.at("c").get<double>();
        net.neurons.push_back(std::move(nrn));
    }
    net.validate();
    return net;
}

nlohmann::json to_json(const ResidualSchedule& schedule) {
    nlohmann::json j;
    j["kind"] = "schedule";
    j["D"] = schedule.D;
    j["m"] = schedule.m;
    j["segments"] = nlohmann::json::array();
    for (const ScheduleSegment& seg : schedule.segments) {
        nlohmann::json js;
        js["t0"] = seg.t0;
        js["t1"] = seg.t1;
        js["atoms"] = nlohmann::json::array();
        for (const LayerAtom& atom : seg.atoms)
            js["atoms"].push_back(
                {{"w", atom.weight}, {"U", matrix_to_json(atom.U)}, {"W", matrix_to_json(atom.W)}});
        j["segments"].push_back(std::move(js));
    }
    return j;
}

ResidualSchedule schedule_from_json(const nlohmann::json& j) {
    require_kind(j, "schedule");
    ResidualSchedule schedule;
    schedule.D = j.at("D").get<int>();
    schedule.m = j.at("m").get<int>();
    for (const auto& js : j.at("segments")) {
        ScheduleSegment seg;
        seg.t0 = js.at("t0").get<double>();
        seg.t1 = js.at("t1").get<double>();
        for (const auto& ja : js.at("atoms")) {
            LayerAtom atom;
            atom.weight = ja.at("w").get<double>();
            atom.U = matrix_from_json(ja.at("U"));
            atom.W = matrix_from_json(ja.at("W"));
            seg.atoms.push_back(std::move(atom));
        }
        schedule.segments.push_back(std::move(seg));
    }
    schedule.validate();
    return schedule;
}

nlohmann::json to_json(const ResidualNet& net) {
    nlohmann::json j;
    j["kind"] = "resnet";
    j["d"] = net.d;
    j["D"] = net.D;
    j["m"] = net.m;
    j["L"] = net.L;
    j["alpha"] = vector_to_json(net.alpha);
    j["layers"] = nlohmann::json::array();
    for (const ResidualLayer& layer : net.layers)
        j["layers"].push_back({{"U", matrix_to_json(layer.U)}, {"W", matrix_to_json(layer.W)}});
    return j;
}

ResidualNet resnet_from_json(const nlohmann::json& j) {
    require_kind(j, "resnet");
    ResidualNet net;
    net.d = j.at("d").get<int>();
    net.D = j.at("D").get<int>();
    net.m = j.at("m").get<int>();
    net.L = j.at("L").get<int>();
    net.alpha = vector_from_json(j.at("alpha"));
    for (const auto& jl : j.at("layers")) {
        ResidualLayer layer;
        layer.U = matrix_from_json(jl.at("U"));
        layer.W = matrix_from_json(jl.at("W"));
        net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
}

nlohmann::json to_json(const CompositionalFunction& fn) {
    nlohmann::json j;
    j["kind"] = "comp_function";
    j["d"] = fn.d;
    j["alpha"] = vector_to_json(fn.alpha);
    j["schedule"] = to_json(fn.schedule);
    return j;
}

CompositionalFunction comp_function_from_json(const nlohmann::json& j) {
    require_kind(j, "comp_function");
    CompositionalFunction fn;
    fn.d = j.at("d").get<int>();
    fn.alpha = vector_from_json(j.at("alpha"));
    fn.schedule = schedule_from_json(j.at("schedule"));
    fn.validate();
    return fn;
}

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw io_error("cannot parse " + path.string() + ": " + e.what());
    }
    return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw io_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw io_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot rename " + tmp.string() + " -> " + path.string());
}

void save_json_atomic(const std::filesystem::path& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace funcspace
