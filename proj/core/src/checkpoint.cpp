#include "tccm/checkpoint.hpp"

#include "tccm/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tccm {

namespace {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Matrix matrix_from_json(const json& j, const char* name) {
    if (!j.is_array()) throw DataFormatError(std::string("checkpoint: ") + name + " must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw DataFormatError(std::string("checkpoint: ragged rows in ") + name);
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

Vector vector_from_json(const json& j, const char* name) {
    if (!j.is_array()) throw DataFormatError(std::string("checkpoint: ") + name + " must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

}  // namespace

bool Checkpoint::operator==(const Checkpoint& o) const {
    return params == o.params && scaler == o.scaler && t_fixed == o.t_fixed && provenance == o.provenance;
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    const ModelParams& p = ckpt.params;
    p.validate();

    json weights;
    weights["w1"] = matrix_to_json(p.w1);
    weights["b1"] = vector_to_json(p.b1);
    weights["w2"] = matrix_to_json(p.w2);
    weights["b2"] = vector_to_json(p.b2);
    weights["w3"] = matrix_to_json(p.w3);
    weights["b3"] = vector_to_json(p.b3);
    const auto& e = p.embed_params;
    if (e.w1.size()) weights["embed_w1"] = matrix_to_json(e.w1);
    if (e.b1.size()) weights["embed_b1"] = vector_to_json(e.b1);
    if (e.w2.size()) weights["embed_w2"] = matrix_to_json(e.w2);
    if (e.b2.size()) weights["embed_b2"] = vector_to_json(e.b2);

    const Provenance& pv = ckpt.provenance;
    json doc;
    doc["schema_version"] = Checkpoint::kSchemaVersion;
    doc["input_dim"] = p.input_dim;
    doc["embed"] = {{"kind", std::string(to_string(p.embed.kind))}, {"dim", p.embed.dim},
                    {"mlp_hidden", p.embed.mlp_hidden}};
    doc["hidden"] = {p.hidden1, p.hidden2};
    doc["weights"] = std::move(weights);
    doc["scaler"] = {{"mean", vector_to_json(ckpt.scaler.mean)}, {"std", vector_to_json(ckpt.scaler.std)}};
    doc["t_fixed"] = ckpt.t_fixed;
    doc["provenance"] = {{"seed", pv.seed},
                         {"epochs", pv.epochs},
                         {"dataset", pv.dataset},
                         {"config_hash", pv.config_hash},
                         {"loss", pv.loss},
                         {"contamination", pv.contamination},
                         {"normalize", pv.normalize},
                         {"noise_injection", pv.noise_injection},
                         {"time_interpolation", pv.time_interpolation}};
    // std::map-backed objects serialize keys in sorted order.
    return doc.dump(1) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataFormatError(std::string("checkpoint: malformed JSON: ") + e.what());
    }
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != Checkpoint::kSchemaVersion) {
            throw DataFormatError("checkpoint: unsupported schema_version " + std::to_string(version));
        }
        Checkpoint c;
        ModelParams& p = c.params;
        p.input_dim = doc.at("input_dim").get<int>();
        const json& emb = doc.at("embed");
        p.embed.kind = parse_embedding_kind(emb.at("kind").get<std::string>());
        p.embed.dim = emb.at("dim").get<int>();
        p.embed.mlp_hidden = emb.at("mlp_hidden").get<int>();
        const json& hidden = doc.at("hidden");
        if (!hidden.is_array() || hidden.size() != 2) throw DataFormatError("checkpoint: hidden must list two sizes");
        p.hidden1 = hidden[0].get<int>();
        p.hidden2 = hidden[1].get<int>();

        const json& w = doc.at("weights");
        p.w1 = matrix_from_json(w.at("w1"), "w1");
        p.b1 = vector_from_json(w.at("b1"), "b1");
        p.w2 = matrix_from_json(w.at("w2"), "w2");
        p.b2 = vector_from_json(w.at("b2"), "b2");
        p.w3 = matrix_from_json(w.at("w3"), "w3");
        p.b3 = vector_from_json(w.at("b3"), "b3");
        if (w.contains("embed_w1")) p.embed_params.w1 = matrix_from_json(w["embed_w1"], "embed_w1");
        if (w.contains("embed_b1")) p.embed_params.b1 = vector_from_json(w["embed_b1"], "embed_b1");
        if (w.contains("embed_w2")) p.embed_params.w2 = matrix_from_json(w["embed_w2"], "embed_w2");
        if (w.contains("embed_b2")) p.embed_params.b2 = vector_from_json(w["embed_b2"], "embed_b2");
        try {
            p.embed.validate();
            p.validate();
        } catch (const Error& e) {
            throw DataFormatError(std::string("checkpoint: ") + e.what());
        }

        c.scaler.mean = vector_from_json(doc.at("scaler").at("mean"), "scaler.mean");
        c.scaler.std = vector_from_json(doc.at("scaler").at("std"), "scaler.std");
        if (c.scaler.mean.size() != p.input_dim || c.scaler.std.size() != p.input_dim) {
            throw DataFormatError("checkpoint: scaler size does not match input_dim");
        }
        c.t_fixed = doc.at("t_fixed").get<double>();

        const json& pv = doc.at("provenance");
        c.provenance.seed = pv.at("seed").get<std::uint64_t>();
        c.provenance.epochs = pv.at("epochs").get<int>();
        c.provenance.dataset = pv.at("dataset").get<std::string>();
        c.provenance.config_hash = pv.at("config_hash").get<std::string>();
        c.provenance.loss = pv.at("loss").get<std::string>();
        c.provenance.contamination = pv.at("contamination").get<double>();
        c.provenance.normalize = pv.at("normalize").get<bool>();
        c.provenance.noise_injection = pv.at("noise_injection").get<bool>();
        c.provenance.time_interpolation = pv.at("time_interpolation").get<bool>();
        return c;
    } catch (const json::exception& e) {
        throw DataFormatError(std::string("checkpoint: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataFormatError(std::string("checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const std::string text = serialize_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataFormatError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw DataFormatError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataFormatError("cannot open checkpoint " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_checkpoint(buf.str());
}

}  // namespace tccm
