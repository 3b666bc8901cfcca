#pragma once

// Volume and mass of a model element from its axis-aligned bounding box plus
// catalog data. Each shape class corrects the raw box volume differently:
//
//   Box             V = Lx * Ly * Lz
//   SolidCylinder   V = pi D^2 / 4 * H, D from the two equal extents
//   HollowPipe      V = pi / 4 (OD^2 - ID^2) * L_max
//   Profile         V = Ar * L_max
//   RotatedProfile  V = Ar * sqrt(Lx^2 + Ly^2 + Lz^2)

#include <qto/catalogs.hpp>
#include <qto/error.hpp>
#include <qto/geometry.hpp>
#include <qto/scene.hpp>
#include <qto/detail/text.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace qto {

enum class ShapeClass { Box, SolidCylinder, HollowPipe, Profile, RotatedProfile };

inline const char* to_string(ShapeClass c) {
    switch (c) {
    case ShapeClass::Box: return "box";
    case ShapeClass::SolidCylinder: return "cylinder";
    case ShapeClass::HollowPipe: return "pipe";
    case ShapeClass::Profile: return "profile";
    case ShapeClass::RotatedProfile: return "rotated-profile";
    }
    return "box";
}

enum class MassBasis { LinearMass, Density };

struct QuantityRow {
    std::string element_id;
    std::string element_type;
    ShapeClass shape = ShapeClass::Box;
    double lx = 0.0;
    double ly = 0.0;
    double lz = 0.0;
    double length = 0.0; ///< H, L_max or the box diagonal, by shape class
    double area = 0.0;   ///< cross-section area used for the volume
    double volume = 0.0;
    MassBasis basis_kind = MassBasis::Density;
    double mass_basis = 0.0; ///< kg/m or ton/m3 depending on basis_kind
    double mass_kg = 0.0;

    friend bool operator==(const QuantityRow&, const QuantityRow&) = default;
};

/// Relative tolerance for treating two box extents as one diameter.
inline constexpr double kEqualExtentTolerance = 1e-3;

inline bool extents_equal(double a, double b) {
    return std::abs(a - b) <= kEqualExtentTolerance * std::max(a, b);
}

inline double box_volume(const Aabb& box) {
    const auto e = box.extents();
    return e[0] * e[1] * e[2];
}

struct CylinderFit {
    double diameter = 0.0;
    double height = 0.0;
    double volume = 0.0;
};

/// Picks the closest pair of equal extents as the diameter; the remaining
/// extent is the height.
inline std::optional<CylinderFit> fit_cylinder(const Aabb& box) {
    const auto e = box.extents();
    constexpr std::array<std::array<int, 3>, 3> pairs{{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
    std::optional<CylinderFit> best;
    double best_gap = 0.0;
    for (const auto& p : pairs) {
        const double a = e[p[0]];
        const double b = e[p[1]];
        if (!extents_equal(a, b)) {
            continue;
        }
        const double hi = std::max(a, b);
        const double gap = hi > 0.0 ? std::abs(a - b) / hi : 0.0;
        if (!best || gap < best_gap) {
            const double d = (a + b) / 2.0;
            const double h = e[p[2]];
            best = CylinderFit{d, h, std::numbers::pi * d * d / 4.0 * h};
            best_gap = gap;
        }
    }
    return best;
}

inline CylinderFit cylinder_volume(const Aabb& box) {
    if (auto fit = fit_cylinder(box)) {
        return *fit;
    }
    const auto e = box.extents();
    throw Error(ErrorCode::NotCylindrical, "no two bounding-box extents are equal within 1e-3 (" +
                                               std::to_string(e[0]) + ", " + std::to_string(e[1]) + ", " +
                                               std::to_string(e[2]) + ")");
}

struct SectionFit {
    double area = 0.0;
    double length = 0.0;
    double volume = 0.0;
};

inline SectionFit pipe_volume(const PipeRecord& pipe, double length) {
    if (!(length > 0.0)) {
        throw Error(ErrorCode::NonPositive, "pipe length must be positive");
    }
    const double od = pipe.outer_diameter_m;
    const double id = pipe_inner_diameter(pipe);
    const double area = std::numbers::pi / 4.0 * (od * od - id * id);
    return {area, length, area * length};
}

inline SectionFit profile_volume(double area, const Aabb& box) {
    if (!(area > 0.0)) {
        throw Error(ErrorCode::NonPositive, "section area must be positive");
    }
    const auto e = box.extents();
    const double length = std::max({e[0], e[1], e[2]});
    return {area, length, area * length};
}

inline SectionFit rotated_profile_volume(double area, const Aabb& box) {
    if (!(area > 0.0)) {
        throw Error(ErrorCode::NonPositive, "section area must be positive");
    }
    const auto e = box.extents();
    const double length = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    return {area, length, area * length};
}

/// Linear mass times length when a section is known, otherwise volume times
/// density (ton/m3 -> kg).
inline double element_mass(double volume, double length, const SectionRecord* section, const Material* material) {
    if (section != nullptr) {
        return section->linear_mass_kg_per_m * length;
    }
    if (material != nullptr) {
        return volume * material->density_ton_per_m3 * 1000.0;
    }
    throw Error(ErrorCode::MassBasisMissing, "no section or material to derive mass from");
}

namespace detail {

inline bool suggests_piping(const Element& e) {
    for (const char* key : {"material", "discipline"}) {
        if (auto v = e.property(key); v && fold_case(*v).find("pip") != std::string::npos) {
            return true;
        }
    }
    return false;
}

inline bool is_rotated_tag(const Element& e) {
    auto o = e.property("orientation");
    return o && fold_case(trim(*o)) == "rotated";
}

/// Geometric fallback for untagged rotated members. An axis-aligned prism has
/// its two smaller extents within the section envelope (taken as 3 * sqrt(Ar),
/// which covers wide-flange depth-to-area ratios) and close to each other.
inline bool looks_rotated(const Aabb& box, double section_area) {
    auto e = box.extents();
    std::sort(e.begin(), e.end());
    const double envelope = 3.0 * std::sqrt(section_area);
    return e[1] > 1.5 * std::max(e[0], envelope) || e[0] > 1.5 * envelope;
}

} // namespace detail

/// Precedence: explicit `shape`; pipe metadata resolving in the pipe catalog;
/// name resolving in the section catalog (rotated when tagged, or by the
/// geometric fallback); equal extents on a piping element; otherwise box.
inline ShapeClass classify(const Element& element, const CatalogSet& catalogs) {
    const SectionRecord* section = catalogs.lookup_section(element.name);
    auto profile_class = [&] {
        if (detail::is_rotated_tag(element) || (section && detail::looks_rotated(element.aabb, section->area_m2))) {
            return ShapeClass::RotatedProfile;
        }
        return ShapeClass::Profile;
    };

    if (auto shape = element.property("shape")) {
        const std::string s = detail::fold_case(detail::trim(*shape));
        if (s == "box") {
            return ShapeClass::Box;
        }
        if (s == "cylinder") {
            return ShapeClass::SolidCylinder;
        }
        if (s == "pipe") {
            return ShapeClass::HollowPipe;
        }
        if (s == "profile") {
            return profile_class();
        }
        throw Error(ErrorCode::UnknownShape, "unknown shape '" + *shape + "'");
    }
    const auto npd = element.property("npd");
    const auto schedule = element.property("schedule");
    if (npd && schedule && catalogs.lookup_pipe(*npd, *schedule)) {
        return ShapeClass::HollowPipe;
    }
    if (section) {
        return profile_class();
    }
    if (detail::suggests_piping(element) && fit_cylinder(element.aabb)) {
        return ShapeClass::SolidCylinder;
    }
    return ShapeClass::Box;
}

namespace detail {

inline QuantityRow estimate_unchecked(const Element& element, const CatalogSet& catalogs, bool with_mass) {
    QuantityRow row;
    row.element_id = element.id;
    row.shape = classify(element, catalogs);
    row.element_type = element.name.empty() ? to_string(row.shape) : element.name;
    const auto ext = element.aabb.extents();
    row.lx = ext[0];
    row.ly = ext[1];
    row.lz = ext[2];

    const SectionRecord* section = nullptr;
    switch (row.shape) {
    case ShapeClass::Box: {
        row.volume = box_volume(element.aabb);
        row.length = std::max({ext[0], ext[1], ext[2]});
        row.area = row.length > 0.0 ? row.volume / row.length : 0.0;
        break;
    }
    case ShapeClass::SolidCylinder: {
        const CylinderFit c = cylinder_volume(element.aabb);
        row.length = c.height;
        row.area = std::numbers::pi * c.diameter * c.diameter / 4.0;
        row.volume = c.volume;
        break;
    }
    case ShapeClass::HollowPipe: {
        const auto npd = element.property("npd");
        const auto schedule = element.property("schedule");
        const PipeRecord* pipe = (npd && schedule) ? catalogs.lookup_pipe(*npd, *schedule) : nullptr;
        if (pipe == nullptr) {
            throw Error(ErrorCode::NotFound, "pipe (npd " + npd.value_or("?") + ", schedule " +
                                                 schedule.value_or("?") + ") not in pipe catalog");
        }
        const SectionFit f = pipe_volume(*pipe, std::max({ext[0], ext[1], ext[2]}));
        row.area = f.area;
        row.length = f.length;
        row.volume = f.volume;
        break;
    }
    case ShapeClass::Profile:
    case ShapeClass::RotatedProfile: {
        section = catalogs.lookup_section(element.name);
        if (section == nullptr) {
            throw Error(ErrorCode::NotFound, "section '" + element.name + "' not in section catalog");
        }
        const SectionFit f = row.shape == ShapeClass::Profile ? profile_volume(section->area_m2, element.aabb)
                                                              : rotated_profile_volume(section->area_m2, element.aabb);
        row.area = f.area;
        row.length = f.length;
        row.volume = f.volume;
        break;
    }
    }

    if (!with_mass) {
        return row;
    }
    const Material* material = nullptr;
    if (auto m = element.property("material")) {
        material = catalogs.lookup_material(*m);
    }
    row.mass_kg = element_mass(row.volume, row.length, section, material);
    if (section != nullptr) {
        row.basis_kind = MassBasis::LinearMass;
        row.mass_basis = section->linear_mass_kg_per_m;
    } else {
        row.basis_kind = MassBasis::Density;
        row.mass_basis = material->density_ton_per_m3;
    }
    return row;
}

} // namespace detail

/// Volume-only estimate (mass fields left at zero); used where no mass basis
/// is needed, e.g. validation against mesh volumes.
inline QuantityRow estimate_volume(const Element& element, const CatalogSet& catalogs) {
    try {
        return detail::estimate_unchecked(element, catalogs, false);
    } catch (const Error& e) {
        throw e.with_element(element.id);
    }
}

inline QuantityRow estimate(const Element& element, const CatalogSet& catalogs) {
    try {
        return detail::estimate_unchecked(element, catalogs, true);
    } catch (const Error& e) {
        throw e.with_element(element.id);
    }
}

} // namespace qto
