#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gsprune/errors.hpp"
#include "gsprune/splat_model.hpp"

namespace gsprune {
namespace detail {

// Property order of the on-disk vertex record.  Field 62-float layout:
// position, normal, DC color, 45 higher-order SH values grouped by channel,
// opacity logit, log scales, quaternion (w, x, y, z).
inline const std::array<const char*, kFloatsPerPrimitive>& ply_property_names() {
    static const std::array<const char*, kFloatsPerPrimitive> names = [] {
        std::array<const char*, kFloatsPerPrimitive> n{};
        static std::array<std::string, kFloatsPerPrimitive> storage;
        const char* fixed_head[] = {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
        const char* fixed_tail[] = {"opacity", "scale_0", "scale_1", "scale_2",
                                    "rot_0", "rot_1", "rot_2", "rot_3"};
        std::size_t k = 0;
        for (const char* s : fixed_head) storage[k++] = s;
        for (int i = 0; i < 45; ++i) storage[k++] = "f_rest_" + std::to_string(i);
        for (const char* s : fixed_tail) storage[k++] = s;
        for (std::size_t i = 0; i < n.size(); ++i) n[i] = storage[i].c_str();
        return n;
    }();
    return names;
}

inline void record_to_primitive(const float* rec, GaussianPrimitive& p) {
    p.center = {rec[0], rec[1], rec[2]};
    p.normal = {rec[3], rec[4], rec[5]};
    for (int c = 0; c < 3; ++c) {
        p.sh[static_cast<std::size_t>(c) * kShCoeffsPerChannel] = rec[6 + c];
        for (int k = 0; k < 15; ++k)
            p.sh[static_cast<std::size_t>(c) * kShCoeffsPerChannel + 1 + static_cast<std::size_t>(k)] =
                rec[9 + c * 15 + k];
    }
    p.opacity_logit = rec[54];
    p.log_scale = {rec[55], rec[56], rec[57]};
    p.rotation = {rec[58], rec[59], rec[60], rec[61]};
}

inline void primitive_to_record(const GaussianPrimitive& p, float* rec) {
    rec[0] = p.center.x();
    rec[1] = p.center.y();
    rec[2] = p.center.z();
    rec[3] = p.normal.x();
    rec[4] = p.normal.y();
    rec[5] = p.normal.z();
    for (int c = 0; c < 3; ++c) {
        rec[6 + c] = p.sh[static_cast<std::size_t>(c) * kShCoeffsPerChannel];
        for (int k = 0; k < 15; ++k)
            rec[9 + c * 15 + k] =
                p.sh[static_cast<std::size_t>(c) * kShCoeffsPerChannel + 1 + static_cast<std::size_t>(k)];
    }
    rec[54] = p.opacity_logit;
    rec[55] = p.log_scale.x();
    rec[56] = p.log_scale.y();
    rec[57] = p.log_scale.z();
    rec[58] = p.rotation[0];
    rec[59] = p.rotation[1];
    rec[60] = p.rotation[2];
    rec[61] = p.rotation[3];
}

} // namespace detail

// Reads a binary little-endian splat PLY.  The vertex element must carry
// exactly the 62 float properties of the standard splat layout, in order.
// Quaternions are renormalized only when clearly denormalized (|norm - 1|
// beyond 1e-6), so loading a freshly saved file is byte-stable; an all-zero
// quaternion falls back to identity.
inline GaussianField load_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw io_error("'" + path + "': empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") throw format_error("'" + path + "': missing ply magic");

    std::uint64_t vertex_count = 0;
    bool have_format = false, have_vertex = false, in_vertex = false;
    std::size_t prop_idx = 0;
    const auto& names = detail::ply_property_names();
    while (true) {
        if (!std::getline(in, line)) throw format_error("'" + path + "': unterminated header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "end_header") break;
        if (tok == "comment" || tok == "obj_info" || tok.empty()) continue;
        if (tok == "format") {
            std::string fmt, ver;
            ls >> fmt >> ver;
            if (fmt != "binary_little_endian")
                throw format_error("'" + path + "': unsupported encoding '" + fmt + "'");
            have_format = true;
        } else if (tok == "element") {
            std::string name;
            std::uint64_t count = 0;
            ls >> name >> count;
            if (name != "vertex")
                throw format_error("'" + path + "': unexpected element '" + name + "'");
            if (have_vertex) throw format_error("'" + path + "': duplicate vertex element");
            vertex_count = count;
            have_vertex = true;
            in_vertex = true;
        } else if (tok == "property") {
            std::string type, name;
            ls >> type >> name;
            if (!in_vertex)
                throw format_error("'" + path + "': property outside vertex element");
            if (type != "float")
                throw format_error("'" + path + "': property '" + name + "' has type '" + type +
                                   "', expected float");
            if (prop_idx >= names.size() || name != names[prop_idx])
                throw format_error("'" + path + "': unexpected property '" + name + "'");
            ++prop_idx;
        } else {
            throw format_error("'" + path + "': unrecognized header line '" + line + "'");
        }
    }
    if (!have_format) throw format_error("'" + path + "': missing format declaration");
    if (!have_vertex) throw format_error("'" + path + "': missing vertex element");
    if (prop_idx != names.size())
        throw format_error("'" + path + "': expected " + std::to_string(names.size()) +
                           " vertex properties, found " + std::to_string(prop_idx));

    GaussianField field;
    field.primitives.resize(vertex_count);
    std::vector<float> record(kFloatsPerPrimitive);
    for (std::uint64_t i = 0; i < vertex_count; ++i) {
        in.read(reinterpret_cast<char*>(record.data()),
                static_cast<std::streamsize>(kBytesPerPrimitive));
        if (static_cast<std::size_t>(in.gcount()) != kBytesPerPrimitive)
            throw io_error("'" + path + "': truncated payload at vertex " + std::to_string(i));
        auto& p = field.primitives[i];
        detail::record_to_primitive(record.data(), p);
        const double norm = p.rotation.cast<double>().norm();
        if (norm == 0.0) {
            p.rotation = {1.0f, 0.0f, 0.0f, 0.0f};
        } else if (std::abs(norm - 1.0) > 1e-6) {
            p.rotation = (p.rotation.cast<double>() / norm).cast<float>();
        }
    }
    return field;
}

inline void save_ply(const GaussianField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");

    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n"
           << "element vertex " << field.size() << "\n";
    for (const char* name : detail::ply_property_names())
        header << "property float " << name << "\n";
    header << "end_header\n";
    const std::string head = header.str();
    out.write(head.data(), static_cast<std::streamsize>(head.size()));

    std::vector<float> record(kFloatsPerPrimitive);
    for (const auto& p : field.primitives) {
        detail::primitive_to_record(p, record.data());
        out.write(reinterpret_cast<const char*>(record.data()),
                  static_cast<std::streamsize>(kBytesPerPrimitive));
    }
    if (!out) throw io_error("failed writing '" + path + "'");
}

} // namespace gsprune
