#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "gsprune/errors.hpp"

namespace gsprune {

// Pinhole camera.  `rotation` / `translation` map world to camera space
// (p_cam = R p + t); the camera looks along +z in its own frame.
struct CameraModel {
    int width = 0;
    int height = 0;
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d position() const { return -(rotation.transpose() * translation); }
};

inline void validate_camera(const CameraModel& cam) {
    if (cam.width <= 0 || cam.height <= 0)
        throw config_error("camera image size must be positive");
    if (!(cam.fx > 0.0) || !(cam.fy > 0.0))
        throw config_error("camera focal lengths must be positive");
    if (!cam.rotation.allFinite() || !cam.translation.allFinite() || !std::isfinite(cam.cx) ||
        !std::isfinite(cam.cy))
        throw config_error("camera parameters must be finite");
    const Eigen::Matrix3d err =
        cam.rotation.transpose() * cam.rotation - Eigen::Matrix3d::Identity();
    if (err.cwiseAbs().maxCoeff() > 1e-6)
        throw config_error("camera rotation is not orthonormal");
    if (cam.rotation.determinant() < 0.0)
        throw config_error("camera rotation is reflected (negative determinant)");
}

// JSON layout: {"width", "height", "fx", "fy", "cx", "cy",
// "rotation": [9 row-major], "translation": [3]}
inline CameraModel load_camera(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("'" + path + "': invalid JSON: " + e.what());
    }
    CameraModel cam;
    try {
        cam.width = j.at("width").get<int>();
        cam.height = j.at("height").get<int>();
        cam.fx = j.at("fx").get<double>();
        cam.fy = j.at("fy").get<double>();
        cam.cx = j.at("cx").get<double>();
        cam.cy = j.at("cy").get<double>();
        const auto& r = j.at("rotation");
        const auto& t = j.at("translation");
        if (r.size() != 9) throw format_error("'" + path + "': rotation must have 9 entries");
        if (t.size() != 3) throw format_error("'" + path + "': translation must have 3 entries");
        for (int k = 0; k < 9; ++k) cam.rotation(k / 3, k % 3) = r.at(k).get<double>();
        for (int k = 0; k < 3; ++k) cam.translation(k) = t.at(k).get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw format_error("'" + path + "': bad camera field: " + e.what());
    }
    validate_camera(cam);
    return cam;
}

inline void save_camera(const CameraModel& cam, const std::string& path) {
    validate_camera(cam);
    nlohmann::json j;
    j["width"] = cam.width;
    j["height"] = cam.height;
    j["fx"] = cam.fx;
    j["fy"] = cam.fy;
    j["cx"] = cam.cx;
    j["cy"] = cam.cy;
    nlohmann::json r = nlohmann::json::array();
    for (int k = 0; k < 9; ++k) r.push_back(cam.rotation(k / 3, k % 3));
    nlohmann::json t = nlohmann::json::array();
    for (int k = 0; k < 3; ++k) t.push_back(cam.translation(k));
    j["rotation"] = r;
    j["translation"] = t;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw io_error("failed writing '" + path + "'");
}

} // namespace gsprune
