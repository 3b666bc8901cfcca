#include <qto/pipeline.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct Flags {
    std::string config;
    std::string scene;
    std::string sections;
    std::string pipes;
    std::string materials;
    std::string filters;
    std::vector<std::string> filter;
    std::string work_areas;
    std::string out;
    bool skip_errors = false;
};

void add_common(CLI::App* cmd, Flags& f, bool estimation) {
    cmd->add_option("--config", f.config, "JSON run configuration; flags override it");
    cmd->add_option("--scene", f.scene, "scene file (JSON)");
    cmd->add_option("--filters", f.filters, "filter definitions (JSON)");
    cmd->add_option("--filter", f.filter, "filter name to apply (repeat for a union)");
    cmd->add_option("--out", f.out, "output directory");
    if (estimation) {
        cmd->add_option("--sections", f.sections, "section catalog CSV");
        cmd->add_option("--pipes", f.pipes, "pipe catalog CSV");
        cmd->add_option("--materials", f.materials, "material catalog CSV");
        cmd->add_option("--work-areas", f.work_areas, "work-area definitions (JSON)");
        cmd->add_flag("--skip-errors", f.skip_errors, "record failing elements in errors.csv and continue");
    }
}

qto::RunConfig resolve(const Flags& f) {
    qto::RunConfig c = f.config.empty() ? qto::RunConfig{} : qto::load_run_config(f.config);
    auto set = [](const std::string& flag, std::filesystem::path& dst) {
        if (!flag.empty()) {
            dst = flag;
        }
    };
    set(f.scene, c.scene);
    set(f.sections, c.sections);
    set(f.pipes, c.pipes);
    set(f.materials, c.materials);
    set(f.filters, c.filters);
    set(f.work_areas, c.work_areas);
    set(f.out, c.out_dir);
    if (!f.filter.empty()) {
        c.filter_names = f.filter;
    }
    c.skip_errors = c.skip_errors || f.skip_errors;
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantity take-off from bounding-box geometry and catalog data"};
    app.require_subcommand(1);
    Flags f;

    auto* ingest = app.add_subcommand("ingest", "parse a scene and print a summary");
    add_common(ingest, f, false);
    auto* takeoff = app.add_subcommand("takeoff", "estimate volumes and masses, write report.csv");
    add_common(takeoff, f, true);
    auto* export_boxes = app.add_subcommand("export-boxes", "write bounding boxes to boxes.obj");
    add_common(export_boxes, f, false);
    auto* validate = app.add_subcommand("validate", "compare estimates with mesh volumes");
    add_common(validate, f, true);
    auto* filters = app.add_subcommand("filters", "inspect and apply filter definitions");
    filters->require_subcommand(1);
    auto* filters_list = filters->add_subcommand("list", "list filter names");
    add_common(filters_list, f, false);
    auto* filters_apply = filters->add_subcommand("apply", "print ids of elements passing --filter");
    add_common(filters_apply, f, false);

    CLI11_PARSE(app, argc, argv);

    qto::RunConfig config;
    try {
        config = resolve(f);
    } catch (const qto::Error& e) {
        std::cerr << "config: " << e.what() << '\n';
        return qto::kExitFailure;
    }
    if (*ingest) {
        return qto::cmd_ingest(config, std::cout, std::cerr);
    }
    if (*takeoff) {
        return qto::cmd_takeoff(config, std::cout, std::cerr);
    }
    if (*export_boxes) {
        return qto::cmd_export_boxes(config, std::cout, std::cerr);
    }
    if (*validate) {
        return qto::cmd_validate(config, std::cout, std::cerr);
    }
    if (*filters_list) {
        return qto::cmd_filters_list(config, std::cout, std::cerr);
    }
    if (*filters_apply) {
        return qto::cmd_filters_apply(config, std::cout, std::cerr);
    }
    return qto::kExitFailure;
}
