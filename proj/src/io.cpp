#include "pqca/io.hpp"

#include <cstdint>

namespace pqca {

using nlohmann::json;

json to_json(const Tessellation& t) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["p"] = format_p(t.spec.p);
    j["q"] = t.spec.q;
    j["max_generation"] = t.spec.max_generation;
    j["sibling_stripped"] = t.sibling_stripped;
    j["origin"] = t.origin;

    json vs = json::array();
    for (const Vertex& v : t.vertices) {
        json e;
        e["id"] = v.id;
        e["generation"] = v.generation;
        e["position"] = v.position;
        e["parents"] = v.parents;
        e["children"] = v.children;
        if (!v.siblings.empty()) e["siblings"] = v.siblings;
        if (!v.cousins.empty()) e["cousins"] = v.cousins;
        e["interior"] = v.interior;
        e["class"] = to_string(v.kind);
        if (v.strength != Strength::NotApplicable) e["strength"] = to_string(v.strength);
        vs.push_back(std::move(e));
    }
    j["vertices"] = std::move(vs);

    json es = json::array();
    for (const Edge& e : t.edges)
        es.push_back({{"id", e.id}, {"a", e.a}, {"b", e.b}, {"kind", to_string(e.kind)}});
    j["edges"] = std::move(es);

    j["generations"] = t.generations;
    j["faces"] = t.faces;
    return j;
}

Tessellation tessellation_from_json(const json& j) {
    Tessellation t;
    t.spec.p = parse_p(j.at("p").get<std::string>());
    t.spec.q = j.at("q").get<int>();
    t.spec.max_generation = j.at("max_generation").get<int>();
    t.sibling_stripped = j.value("sibling_stripped", false);
    t.origin = j.at("origin").get<VertexId>();

    for (const auto& e : j.at("vertices")) {
        Vertex v;
        v.id = e.at("id").get<VertexId>();
        v.generation = e.at("generation").get<int>();
        v.position = e.at("position").get<std::int32_t>();
        v.parents = e.at("parents").get<std::vector<VertexId>>();
        v.children = e.at("children").get<std::vector<VertexId>>();
        if (e.contains("siblings")) v.siblings = e.at("siblings").get<std::vector<VertexId>>();
        if (e.contains("cousins")) v.cousins = e.at("cousins").get<std::vector<VertexId>>();
        v.interior = e.at("interior").get<bool>();
        std::string k = e.at("class").get<std::string>();
        v.kind = k == "origin" ? VertexKind::Origin
                               : (k == "one-parent" ? VertexKind::OneParent : VertexKind::TwoParent);
        if (e.contains("strength"))
            v.strength =
                e.at("strength").get<std::string>() == "strong" ? Strength::Strong : Strength::Weak;
        t.vertices.push_back(std::move(v));
    }
    for (const auto& e : j.at("edges")) {
        Edge ed;
        ed.id = e.at("id").get<EdgeId>();
        ed.a = e.at("a").get<VertexId>();
        ed.b = e.at("b").get<VertexId>();
        std::string k = e.at("kind").get<std::string>();
        ed.kind = k == "parent-child" ? EdgeKind::ParentChild
                                      : (k == "sibling" ? EdgeKind::Sibling : EdgeKind::Cousin);
        t.edges.push_back(ed);
    }
    t.generations = j.at("generations").get<std::vector<std::vector<VertexId>>>();
    t.faces = j.at("faces").get<std::vector<std::vector<VertexId>>>();
    t.rebuild_indices();
    return t;
}

json to_json(const AuditReport& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["pass"] = r.pass;
    json vs = json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"rule", v.rule},
                      {"vertices", v.vertices},
                      {"edges", v.edges},
                      {"message", v.message}});
    j["violations"] = std::move(vs);
    j["generation_sizes"] = r.generation_sizes;
    j["class_counts"] = r.class_counts;
    return j;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string content_hash(const Tessellation& t) {
    return fnv1a_hex(to_json(t).dump());
}

}  // namespace pqca
