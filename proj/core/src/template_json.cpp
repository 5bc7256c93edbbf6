#include "hgg/template_json.hpp"

#include <fstream>

#include <json.hpp>

namespace hgg {

using nlohmann::json;

std::string template_to_json(const BodyTemplate& t) {
    json j;
    j["vertices"] = json::array();
    for (const Vec3& v : t.rest_vertices) j["vertices"].push_back({v.x(), v.y(), v.z()});
    j["faces"] = json::array();
    for (const auto& f : t.faces) j["faces"].push_back({f[0], f[1], f[2]});
    j["joints"]["rest"] = json::array();
    for (const Vec3& p : t.joint_rest) j["joints"]["rest"].push_back({p.x(), p.y(), p.z()});
    j["joints"]["parents"] = t.joint_parents;
    j["weights"] = json::array();
    for (const SkinRow& row : t.skin_weights) {
        json jrow = json::array();
        for (const SkinInfluence& inf : row) jrow.push_back({inf.joint, inf.weight});
        j["weights"].push_back(jrow);
    }
    if (t.has_shape_dirs()) {
        j["shape_dirs"] = json::array();
        for (const auto& m : t.shape_dirs) {
            json dirs = json::array();
            for (int s = 0; s < 10; ++s) dirs.push_back({m(0, s), m(1, s), m(2, s)});
            j["shape_dirs"].push_back(dirs);
        }
    }
    return j.dump(2);
}

BodyTemplate template_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("template JSON parse error: ") + e.what());
    }
    try {
        BodyTemplate t;
        for (const auto& v : j.at("vertices")) {
            t.rest_vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(),
                                         v.at(2).get<double>());
        }
        for (const auto& f : j.at("faces")) {
            t.faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
        }
        for (const auto& p : j.at("joints").at("rest")) {
            t.joint_rest.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                                      p.at(2).get<double>());
        }
        t.joint_parents = j.at("joints").at("parents").get<std::vector<int>>();
        for (const auto& jrow : j.at("weights")) {
            SkinRow row;
            for (const auto& inf : jrow) {
                row.push_back({inf.at(0).get<int>(), inf.at(1).get<double>()});
            }
            t.skin_weights.push_back(std::move(row));
        }
        if (j.contains("shape_dirs")) {
            for (const auto& dirs : j.at("shape_dirs")) {
                Eigen::Matrix<double, 3, 10> m;
                for (int s = 0; s < 10; ++s) {
                    m(0, s) = dirs.at(s).at(0).get<double>();
                    m(1, s) = dirs.at(s).at(1).get<double>();
                    m(2, s) = dirs.at(s).at(2).get<double>();
                }
                t.shape_dirs.push_back(m);
            }
        }
        return t;
    } catch (const json::exception& e) {
        throw DataError(std::string("template JSON missing field: ") + e.what());
    }
}

void save_template(const BodyTemplate& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for write: " + path);
    out << template_to_json(t);
    if (!out) throw DataError("write failed: " + path);
}

BodyTemplate load_template(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return template_from_json(text);
}

}  // namespace hgg
