#pragma once

// File-level orchestration behind the `qto` command line tool. Each command
// returns a process exit code and writes human output to `out`, diagnostics
// to `err`.

#include <qto/box_export.hpp>
#include <qto/catalogs.hpp>
#include <qto/estimator.hpp>
#include <qto/filter.hpp>
#include <qto/reporting.hpp>
#include <qto/scene.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace qto {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitPartial = 2, ///< --skip-errors dropped at least one element
};

struct RunConfig {
    std::filesystem::path scene;
    std::filesystem::path sections;
    std::filesystem::path pipes;
    std::filesystem::path materials;
    std::filesystem::path filters;
    std::vector<std::string> filter_names;
    std::filesystem::path work_areas;
    std::filesystem::path out_dir;
    bool skip_errors = false;
};

/// Reads a JSON run configuration. Keys mirror the command-line flags
/// (scene, sections, pipes, materials, filters, filter, work_areas, out,
/// skip_errors); relative paths resolve against the config file's directory.
inline RunConfig load_run_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const nlohmann::json j = detail::parse_json(text);
    if (!j.is_object()) {
        throw Error(ErrorCode::Syntax, "config must be a JSON object");
    }
    const std::filesystem::path base = path.parent_path();
    RunConfig c;
    auto path_of = [&](const char* key, std::filesystem::path& dst) {
        if (j.contains(key)) {
            if (!j[key].is_string()) {
                throw Error(ErrorCode::Syntax, std::string("config '") + key + "' must be a string");
            }
            dst = base / j[key].get<std::string>();
        }
    };
    path_of("scene", c.scene);
    path_of("sections", c.sections);
    path_of("pipes", c.pipes);
    path_of("materials", c.materials);
    path_of("filters", c.filters);
    path_of("work_areas", c.work_areas);
    path_of("out", c.out_dir);
    if (j.contains("filter")) {
        if (j["filter"].is_string()) {
            c.filter_names.push_back(j["filter"].get<std::string>());
        } else if (j["filter"].is_array()) {
            for (const auto& f : j["filter"]) {
                c.filter_names.push_back(f.get<std::string>());
            }
        } else {
            throw Error(ErrorCode::Syntax, "config 'filter' must be a string or array of strings");
        }
    }
    if (j.contains("skip_errors")) {
        c.skip_errors = j["skip_errors"].get<bool>();
    }
    return c;
}

inline CatalogSet load_catalog_files(const RunConfig& c) {
    CatalogSet cat;
    if (!c.sections.empty()) {
        load_sections(cat, read_text_file(c.sections));
    }
    if (!c.pipes.empty()) {
        load_pipes(cat, read_text_file(c.pipes));
    }
    if (!c.materials.empty()) {
        load_materials(cat, read_text_file(c.materials));
    }
    return cat;
}

/// The union of the named filters, or nullopt when no filter is selected.
inline std::optional<FilterExpr> selected_filter(const RunConfig& c) {
    if (c.filter_names.empty()) {
        return std::nullopt;
    }
    if (c.filters.empty()) {
        throw Error(ErrorCode::MissingField, "--filter needs a --filters file");
    }
    const FilterCatalog catalog = load_filters(read_text_file(c.filters));
    std::vector<FilterExpr> picked;
    for (const std::string& name : c.filter_names) {
        auto it = catalog.find(name);
        if (it == catalog.end()) {
            throw Error(ErrorCode::NotFound, "no filter named '" + name + "'");
        }
        picked.push_back(it->second);
    }
    if (picked.size() == 1) {
        return picked.front();
    }
    return FilterExpr::any_of(std::move(picked));
}

inline std::vector<const Element*> select_elements(const Scene& scene, const std::optional<FilterExpr>& filter) {
    std::vector<const Element*> out;
    for (const Element& e : scene.elements) {
        if (!filter || eval_filter(*filter, e)) {
            out.push_back(&e);
        }
    }
    return out;
}

inline std::filesystem::path prepare_out_dir(const RunConfig& c) {
    std::filesystem::path dir = c.out_dir.empty() ? std::filesystem::path(".") : c.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

// ---------------------------------------------------------------------------

inline int cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Scene scene = load_scene_file(c.scene);
        std::map<std::string, std::size_t> disciplines;
        std::size_t meshes = 0;
        for (const Element& e : scene.elements) {
            ++disciplines[e.property("discipline").value_or("unspecified")];
            meshes += e.mesh ? 1 : 0;
        }
        out << scene.elements.size() << " elements (" << meshes << " from meshes)\n";
        out << "disciplines:";
        for (const auto& [d, n] : disciplines) {
            out << ' ' << d << '=' << n;
        }
        out << '\n';
        if (!scene.elements.empty()) {
            Point3 lo = scene.elements.front().aabb.min();
            Point3 hi = scene.elements.front().aabb.max();
            for (const Element& e : scene.elements) {
                lo = {std::min(lo.x, e.aabb.min().x), std::min(lo.y, e.aabb.min().y), std::min(lo.z, e.aabb.min().z)};
                hi = {std::max(hi.x, e.aabb.max().x), std::max(hi.y, e.aabb.max().y), std::max(hi.z, e.aabb.max().z)};
            }
            out << fmt::format("scene bounds: ({:.4f}, {:.4f}, {:.4f}) - ({:.4f}, {:.4f}, {:.4f})\n", lo.x, lo.y,
                               lo.z, hi.x, hi.y, hi.z);
        }
        out << "id,name,source,lx_m,ly_m,lz_m\n";
        for (const Element& e : scene.elements) {
            const auto x = e.aabb.extents();
            out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", e.id, e.name, e.mesh ? "mesh" : "aabb", x[0],
                               x[1], x[2]);
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "ingest: " << e.what() << '\n';
        return kExitFailure;
    }
}

inline int cmd_takeoff(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Scene scene = load_scene_file(c.scene);
        const CatalogSet catalogs = load_catalog_files(c);
        const auto filter = selected_filter(c);
        std::map<std::string, std::string> areas;
        if (!c.work_areas.empty()) {
            areas = assign_work_area(scene, load_work_areas(read_text_file(c.work_areas)));
        }
        const auto dir = prepare_out_dir(c);

        std::vector<QuantityRow> rows;
        std::vector<std::pair<std::string, std::string>> failures;
        std::map<std::string, const Element*> by_id;
        for (const Element* e : select_elements(scene, filter)) {
            by_id[e->id] = e;
            try {
                rows.push_back(estimate(*e, catalogs));
            } catch (const Error& ex) {
                if (!c.skip_errors) {
                    err << "takeoff: " << ex.what() << '\n';
                    return kExitFailure;
                }
                failures.emplace_back(e->id, ex.what());
            }
        }

        std::vector<RollUp> groups = roll_up(rows, [&](const QuantityRow& r) {
            return "discipline:" + by_id.at(r.element_id)->property("discipline").value_or("unspecified");
        });
        if (!areas.empty()) {
            auto by_area = roll_up(rows, [&](const QuantityRow& r) { return "work_area:" + areas.at(r.element_id); });
            groups.insert(groups.end(), by_area.begin(), by_area.end());
        }
        write_report(groups, rows, dir / "report.csv");

        const RollUp total = total_of(rows);
        out << fmt::format("{} elements estimated, total volume {:.4f} m3, total mass {:.4f} ton\n",
                           total.element_count, total.total_volume_m3, total.total_mass_ton);
        out << "report: " << (dir / "report.csv").string() << '\n';
        if (c.skip_errors) {
            std::string side = "element_id,error\n";
            for (const auto& [id, msg] : failures) {
                side += detail::csv_field(id) + "," + detail::csv_field(msg) + "\n";
            }
            write_text_file(dir / "errors.csv", side);
            if (!failures.empty()) {
                err << "takeoff: " << failures.size() << " elements skipped, see "
                    << (dir / "errors.csv").string() << '\n';
                return kExitPartial;
            }
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "takeoff: " << e.what() << '\n';
        return kExitFailure;
    }
}

inline int cmd_export_boxes(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Scene scene = load_scene_file(c.scene);
        const auto selected = select_elements(scene, selected_filter(c));
        const auto dir = prepare_out_dir(c);
        export_boxes(selected, dir / "boxes.obj");
        out << selected.size() << " boxes written to " << (dir / "boxes.obj").string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "export-boxes: " << e.what() << '\n';
        return kExitFailure;
    }
}

/// Compares the estimator's volume with the enclosed volume of each element
/// mesh. Elements without a mesh are skipped; non-watertight meshes and
/// estimation failures are reported and excluded from the summary.
inline int cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Scene scene = load_scene_file(c.scene);
        const CatalogSet catalogs = load_catalog_files(c);
        const auto selected = select_elements(scene, selected_filter(c));

        std::string table = "element_id,shape,estimated_m3,mesh_m3,relative_error\n";
        double max_abs = 0.0;
        double sum_abs = 0.0;
        std::size_t compared = 0;
        std::size_t excluded = 0;
        for (const Element* e : selected) {
            if (!e->mesh) {
                continue;
            }
            try {
                const double truth = mesh_volume(*e->mesh);
                const QuantityRow row = estimate_volume(*e, catalogs);
                const double rel = truth > 0.0 ? (row.volume - truth) / truth : (row.volume == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
                table += fmt::format("{},{},{:.9f},{:.9f},{:.9e}\n", e->id, to_string(row.shape), row.volume, truth, rel);
                max_abs = std::max(max_abs, std::abs(rel));
                sum_abs += std::abs(rel);
                ++compared;
            } catch (const Error& ex) {
                err << "validate: " << e->id << ": " << ex.what() << '\n';
                ++excluded;
            }
        }
        out << table;
        out << fmt::format("compared {} elements, excluded {}, max |relative error| {:.9e}, mean {:.9e}\n", compared,
                           excluded, max_abs, compared ? sum_abs / static_cast<double>(compared) : 0.0);
        if (!c.out_dir.empty()) {
            write_text_file(prepare_out_dir(c) / "validation.csv", table);
        }
        return excluded == 0 ? kExitOk : kExitPartial;
    } catch (const Error& e) {
        err << "validate: " << e.what() << '\n';
        return kExitFailure;
    }
}

inline int cmd_filters_list(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const FilterCatalog catalog = load_filters(read_text_file(c.filters));
        for (const auto& [name, expr] : catalog) {
            out << name << '\t' << filter_to_json(expr).dump() << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "filters list: " << e.what() << '\n';
        return kExitFailure;
    }
}

inline int cmd_filters_apply(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        const Scene scene = load_scene_file(c.scene);
        const auto filter = selected_filter(c);
        if (!filter) {
            throw Error(ErrorCode::MissingField, "filters apply needs --filter");
        }
        for (const std::string& id : apply_filter(scene, *filter)) {
            out << id << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "filters apply: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace qto
