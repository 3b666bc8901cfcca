#pragma once

#include <qto/detail/text.hpp>
#include <qto/error.hpp>

#include <fmt/format.h>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qto {

struct SectionRecord {
    std::string name;
    double area_m2 = 0.0;
    double linear_mass_kg_per_m = 0.0;

    friend bool operator==(const SectionRecord&, const SectionRecord&) = default;
};

struct PipeRecord {
    std::string npd;
    std::string schedule;
    double outer_diameter_m = 0.0;
    double thickness_m = 0.0;

    friend bool operator==(const PipeRecord&, const PipeRecord&) = default;
};

struct Material {
    std::string name;
    double density_ton_per_m3 = 0.0;

    friend bool operator==(const Material&, const Material&) = default;
};

inline double pipe_inner_diameter(const PipeRecord& r) { return r.outer_diameter_m - 2.0 * r.thickness_m; }

/// Trimmed, ASCII case-folded, with the multiplication sign unified to 'x'.
inline std::string normalize_section_name(std::string_view name) {
    std::string s = detail::fold_case(detail::trim(name));
    constexpr std::string_view times = "\xC3\x97"; // U+00D7
    for (auto pos = s.find(times); pos != std::string::npos; pos = s.find(times, pos + 1)) {
        s.replace(pos, times.size(), "x");
    }
    return s;
}

inline std::string normalize_key(std::string_view s) { return detail::fold_case(detail::trim(s)); }

/// Reference tables for sections, pipes and materials. Keys are normalized
/// so lookups tolerate the naming drift of model exports.
class CatalogSet {
public:
    void add_section(SectionRecord r) {
        if (!(r.area_m2 > 0.0) || !(r.linear_mass_kg_per_m > 0.0)) {
            throw Error(ErrorCode::InvariantViolation, "section '" + r.name + "' needs area > 0 and linear mass > 0");
        }
        auto key = normalize_section_name(r.name);
        if (sections_.contains(key)) {
            throw Error(ErrorCode::DuplicateKey, "duplicate section '" + r.name + "'");
        }
        sections_.emplace(std::move(key), std::move(r));
    }

    void add_pipe(PipeRecord r) {
        if (!(r.thickness_m > 0.0) || !(r.thickness_m < r.outer_diameter_m / 2.0)) {
            throw Error(ErrorCode::InvariantViolation, fmt::format("pipe {} {}: need 0 < thickness < OD/2 (t={}, OD={})",
                                                                   r.npd, r.schedule, r.thickness_m,
                                                                   r.outer_diameter_m));
        }
        auto key = std::make_pair(normalize_key(r.npd), normalize_key(r.schedule));
        if (pipes_.contains(key)) {
            throw Error(ErrorCode::DuplicateKey, "duplicate pipe " + r.npd + " " + r.schedule);
        }
        pipes_.emplace(std::move(key), std::move(r));
    }

    void add_material(Material m) {
        if (!(m.density_ton_per_m3 > 0.0)) {
            throw Error(ErrorCode::InvariantViolation, "material '" + m.name + "' needs density > 0");
        }
        auto key = normalize_key(m.name);
        if (materials_.contains(key)) {
            throw Error(ErrorCode::DuplicateKey, "duplicate material '" + m.name + "'");
        }
        materials_.emplace(std::move(key), std::move(m));
    }

    /// Exact match after normalization; not-found is a normal outcome.
    const SectionRecord* lookup_section(std::string_view name) const {
        auto it = sections_.find(normalize_section_name(name));
        return it == sections_.end() ? nullptr : &it->second;
    }

    const PipeRecord* lookup_pipe(std::string_view npd, std::string_view schedule) const {
        auto it = pipes_.find({normalize_key(npd), normalize_key(schedule)});
        return it == pipes_.end() ? nullptr : &it->second;
    }

    const Material* lookup_material(std::string_view name) const {
        auto it = materials_.find(normalize_key(name));
        return it == materials_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, SectionRecord>& sections() const { return sections_; }
    const std::map<std::pair<std::string, std::string>, PipeRecord>& pipes() const { return pipes_; }
    const std::map<std::string, Material>& materials() const { return materials_; }

    friend bool operator==(const CatalogSet&, const CatalogSet&) = default;

private:
    std::map<std::string, SectionRecord> sections_;
    std::map<std::pair<std::string, std::string>, PipeRecord> pipes_;
    std::map<std::string, Material> materials_;
};

namespace detail {

/// Minimal CSV table: header-named columns, comma-separated, no quoting.
/// Calls `row(line_no, fields)` with fields reordered to `columns`.
template <typename Fn>
void read_csv(std::string_view text, std::string_view table, const std::vector<std::string_view>& columns, Fn&& row) {
    // Strip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }
    std::vector<std::size_t> order;
    std::size_t width = 0;
    bool have_header = false;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (trim(line).empty()) {
            return;
        }
        auto fields = split(line, ',');
        for (auto& f : fields) {
            f = trim(f);
        }
        if (!have_header) {
            have_header = true;
            width = fields.size();
            for (std::string_view col : columns) {
                std::size_t found = fields.size();
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (fields[i] == col) {
                        found = i;
                    }
                }
                if (found == fields.size()) {
                    throw Error(ErrorCode::MissingColumn,
                                std::string(table) + ": missing column '" + std::string(col) + "'", line_no);
                }
                order.push_back(found);
            }
            return;
        }
        if (fields.size() != width) {
            throw Error(ErrorCode::Syntax,
                        std::string(table) + ": expected " + std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()),
                        line_no);
        }
        std::vector<std::string_view> picked;
        for (std::size_t i : order) {
            picked.push_back(fields[i]);
        }
        row(line_no, picked);
    });
    if (!have_header) {
        throw Error(ErrorCode::MissingColumn, std::string(table) + ": empty file, header expected");
    }
}

template <typename Fn>
void with_line(std::size_t line_no, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        if (e.line() != 0) {
            throw;
        }
        throw Error(e.code(), e.what(), line_no);
    }
}

} // namespace detail

inline void load_sections(CatalogSet& cat, std::string_view csv) {
    detail::read_csv(csv, "sections", {"name", "area_m2", "linear_mass_kg_per_m"},
                     [&](std::size_t ln, const std::vector<std::string_view>& f) {
                         detail::with_line(ln, [&] {
                             cat.add_section({std::string(f[0]), detail::parse_double(f[1]),
                                              detail::parse_double(f[2])});
                         });
                     });
}

inline void load_pipes(CatalogSet& cat, std::string_view csv) {
    detail::read_csv(csv, "pipes", {"npd", "schedule", "outer_diameter_m", "thickness_m"},
                     [&](std::size_t ln, const std::vector<std::string_view>& f) {
                         detail::with_line(ln, [&] {
                             cat.add_pipe({std::string(f[0]), std::string(f[1]), detail::parse_double(f[2]),
                                           detail::parse_double(f[3])});
                         });
                     });
}

inline void load_materials(CatalogSet& cat, std::string_view csv) {
    detail::read_csv(csv, "materials", {"name", "density_ton_per_m3"},
                     [&](std::size_t ln, const std::vector<std::string_view>& f) {
                         detail::with_line(ln, [&] {
                             cat.add_material({std::string(f[0]), detail::parse_double(f[1])});
                         });
                     });
}

inline CatalogSet load_catalogs(std::string_view section_csv, std::string_view pipe_csv,
                                std::string_view material_csv) {
    CatalogSet cat;
    load_sections(cat, section_csv);
    load_pipes(cat, pipe_csv);
    load_materials(cat, material_csv);
    return cat;
}

/// CSV text for each table; numbers use shortest round-trip form so that
/// reloading yields an identical CatalogSet.
struct CatalogCsv {
    std::string sections;
    std::string pipes;
    std::string materials;
};

inline CatalogCsv serialize_catalogs(const CatalogSet& cat) {
    CatalogCsv out;
    out.sections = "name,area_m2,linear_mass_kg_per_m\n";
    for (const auto& [key, r] : cat.sections()) {
        out.sections += fmt::format("{},{},{}\n", r.name, r.area_m2, r.linear_mass_kg_per_m);
    }
    out.pipes = "npd,schedule,outer_diameter_m,thickness_m\n";
    for (const auto& [key, r] : cat.pipes()) {
        out.pipes += fmt::format("{},{},{},{}\n", r.npd, r.schedule, r.outer_diameter_m, r.thickness_m);
    }
    out.materials = "name,density_ton_per_m3\n";
    for (const auto& [key, m] : cat.materials()) {
        out.materials += fmt::format("{},{}\n", m.name, m.density_ton_per_m3);
    }
    return out;
}

} // namespace qto
