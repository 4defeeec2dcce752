#include "dpk/document.hpp"

#include <fstream>
#include <sstream>

#include "dpk/error.hpp"

namespace dpk {

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    // nlohmann reports the 1-based count of bytes read, including the offending one.
    const std::size_t end = std::min(text.size(), byte > 0 ? byte - 1 : 0);
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const Json& field(const Json& obj, const char* name) {
    const auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(std::string("instance document: missing field \"") + name + "\"");
    return *it;
}

std::size_t count_field(const Json& obj, const char* name) {
    const Json& v = field(obj, name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ParseError(std::string("instance document: \"") + name + "\" must be a non-negative integer");
    return v.get<std::size_t>();
}

double real(const Json& v, const char* what) {
    if (!v.is_number()) throw ParseError(std::string("instance document: ") + what + " must be numbers");
    return v.get<double>();
}

}  // namespace

InstanceDocument parse_instance_document(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw ParseError("instance document: syntax error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what(),
                         line, col);
    }
    if (!j.is_object()) throw ParseError("instance document: top level must be an object");

    const Json& schema = field(j, "schema_version");
    if (!schema.is_string() || schema.get<std::string>() != kInstanceSchema)
        throw ParseError("instance document: unsupported schema_version (expected \"" + std::string(kInstanceSchema) +
                         "\")");
    const std::size_t n = count_field(j, "n");
    const std::size_t k = count_field(j, "k");
    if (n == 0 || k == 0 || k > n) throw ParseError("instance document: need 1 <= k <= n");

    const Json& jd = field(j, "d");
    if (!jd.is_array() || jd.size() != n) throw ParseError("instance document: \"d\" must be an array of n numbers");
    Vector d;
    d.reserve(n);
    for (const auto& x : jd) d.push_back(real(x, "entries of \"d\""));

    const Json& jv = field(j, "V");
    if (!jv.is_array() || jv.size() != n) throw ParseError("instance document: \"V\" must have n rows");
    std::vector<double> v;
    v.reserve(n * k);
    for (const auto& row : jv) {
        if (!row.is_array() || row.size() != k) throw ParseError("instance document: every row of \"V\" must have k entries");
        for (const auto& x : row) v.push_back(real(x, "entries of \"V\""));
    }

    std::optional<std::uint64_t> seed;
    std::optional<std::string> description;
    if (const auto it = j.find("metadata"); it != j.end()) {
        if (!it->is_object()) throw ParseError("instance document: \"metadata\" must be an object");
        if (const auto s = it->find("seed"); s != it->end()) {
            if (!s->is_number_unsigned()) throw ParseError("instance document: metadata.seed must be a non-negative integer");
            seed = s->get<std::uint64_t>();
        }
        if (const auto s = it->find("description"); s != it->end()) {
            if (!s->is_string()) throw ParseError("instance document: metadata.description must be a string");
            description = s->get<std::string>();
        }
    }

    try {
        return InstanceDocument{schema.get<std::string>(), DpkInstance(std::move(d), Matrix(n, k, std::move(v))), seed,
                                std::move(description)};
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("instance document: ") + e.what());
    }
}

std::string emit_instance_document(const InstanceDocument& doc) {
    const DpkInstance& inst = doc.instance;
    Json j;
    j["schema_version"] = doc.schema_version;
    j["n"] = inst.n();
    j["k"] = inst.k();
    j["d"] = inst.d();
    Json rows = Json::array();
    for (std::size_t i = 0; i < inst.n(); ++i) {
        const auto r = inst.V().row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["V"] = std::move(rows);
    if (doc.seed || doc.description) {
        Json meta = Json::object();
        if (doc.seed) meta["seed"] = *doc.seed;
        if (doc.description) meta["description"] = *doc.description;
        j["metadata"] = std::move(meta);
    }
    return j.dump(2) + "\n";
}

InstanceDocument read_instance_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open instance file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance_document(ss.str());
}

void write_instance_file(const std::filesystem::path& path, const InstanceDocument& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write instance file " + path.string());
    out << emit_instance_document(doc);
    if (!out) throw InvalidArgument("failed writing instance file " + path.string());
}

Json stats_json(const InstanceStats& stats) {
    Json j;
    j["G_min"] = stats.g_min;
    j["lambda_lb"] = stats.lambda_lb;
    j["psi"] = stats.psi;
    j["psi_ceil"] = stats.psi_ceil;
    return j;
}

Json result_json(const SolveResult& result, std::optional<double> wall_time_ms) {
    Json j;
    j["a_star"] = result.a_star;
    j["f_star"] = result.f_star;
    Json s = stats_json(result.stats);
    s["phase1_points"] = result.phase1_points;
    s["candidates_evaluated"] = result.candidates_evaluated;
    s["used_path"] = std::string(to_string(result.used_path));
    if (wall_time_ms) s["wall_time_ms"] = *wall_time_ms;
    j["stats"] = std::move(s);
    return j;
}

Json oracle_json(const OracleResult& result, const InstanceStats& stats) {
    Json j;
    j["a_star"] = result.minimizers.front();
    j["f_star"] = result.f_star;
    j["minimizers"] = result.minimizers;
    Json s = stats_json(stats);
    s["vectors_scanned"] = result.vectors_scanned;
    j["stats"] = std::move(s);
    return j;
}

Json rate_json(const RateResult& rate, std::span<const double> h, double power, std::optional<double> wall_time_ms) {
    Json j = result_json(rate.solve, wall_time_ms);
    j["h"] = std::vector<double>(h.begin(), h.end());
    j["power"] = power;
    j["scale"] = rate.scale;
    j["rate_bits"] = rate.rate_bits;
    j["log_base"] = 2;
    return j;
}

}  // namespace dpk
