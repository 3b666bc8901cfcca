#pragma once

#include <qto/error.hpp>
#include <qto/estimator.hpp>
#include <qto/scene.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qto {

struct RollUp {
    std::string group_key;
    std::size_t element_count = 0;
    double total_volume_m3 = 0.0;
    double total_mass_ton = 0.0;

    friend bool operator==(const RollUp&, const RollUp&) = default;
};

using GroupSelector = std::function<std::string(const QuantityRow&)>;

/// One RollUp per distinct key, sorted by key. Rows are accumulated in
/// element-id order so the sums do not depend on input order; mass is summed
/// in kg and converted to ton per group.
inline std::vector<RollUp> roll_up(const std::vector<QuantityRow>& rows, const GroupSelector& group_by) {
    std::vector<const QuantityRow*> ordered;
    ordered.reserve(rows.size());
    for (const QuantityRow& r : rows) {
        ordered.push_back(&r);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const QuantityRow* a, const QuantityRow* b) { return a->element_id < b->element_id; });

    struct Acc {
        std::size_t count = 0;
        double volume = 0.0;
        double kg = 0.0;
    };
    std::map<std::string, Acc> groups;
    for (const QuantityRow* r : ordered) {
        Acc& a = groups[group_by(*r)];
        ++a.count;
        a.volume += r->volume;
        a.kg += r->mass_kg;
    }
    std::vector<RollUp> out;
    out.reserve(groups.size());
    for (const auto& [key, a] : groups) {
        out.push_back({key, a.count, a.volume, a.kg / 1000.0});
    }
    return out;
}

inline RollUp total_of(const std::vector<QuantityRow>& rows) {
    auto r = roll_up(rows, [](const QuantityRow&) { return std::string("TOTAL"); });
    return r.empty() ? RollUp{"TOTAL", 0, 0.0, 0.0} : r.front();
}

struct ComparisonResult {
    double computed_ton = 0.0;
    double known_ton = 0.0;
    double relative_difference = 0.0; ///< signed fraction, (computed - known) / known
};

inline ComparisonResult compare_known(double computed_ton, double known_ton) {
    if (!(known_ton > 0.0)) {
        throw Error(ErrorCode::NonPositive, "known quantity must be positive");
    }
    return {computed_ton, known_ton, (computed_ton - known_ton) / known_ton};
}

inline std::string format_percent(double fraction) { return fmt::format("{:+.4f}%", fraction * 100.0); }

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

inline constexpr std::string_view kReportHeader =
    "element_id,element_type,lx_m,ly_m,lz_m,length_m,area_m2,volume_m3,mass_basis,mass_kg";
inline constexpr std::string_view kTotalsHeader = "group,count,total_volume_m3,total_mass_ton";

/// Report CSV: one line per element ordered by id, a blank line, then the
/// group roll-ups followed by a TOTAL line over all rows. Lengths print with
/// 4 decimals, areas and mass bases with 6, m3 and ton with 4, kg with 3.
inline std::string write_report(const std::vector<RollUp>& rollups, const std::vector<QuantityRow>& rows) {
    std::vector<const QuantityRow*> ordered;
    for (const QuantityRow& r : rows) {
        ordered.push_back(&r);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const QuantityRow* a, const QuantityRow* b) { return a->element_id < b->element_id; });

    std::string out(kReportHeader);
    out += '\n';
    for (const QuantityRow* r : ordered) {
        out += fmt::format("{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.6f},{:.4f},{:.6f},{:.3f}\n",
                           detail::csv_field(r->element_id), detail::csv_field(r->element_type), r->lx, r->ly,
                           r->lz, r->length, r->area, r->volume, r->mass_basis, r->mass_kg);
    }
    out += '\n';
    out += kTotalsHeader;
    out += '\n';
    auto line = [&](const RollUp& g) {
        out += fmt::format("{},{},{:.4f},{:.4f}\n", detail::csv_field(g.group_key), g.element_count,
                           g.total_volume_m3, g.total_mass_ton);
    };
    for (const RollUp& g : rollups) {
        line(g);
    }
    line(total_of(rows));
    return out;
}

inline void write_report(const std::vector<RollUp>& rollups, const std::vector<QuantityRow>& rows,
                         const std::filesystem::path& destination) {
    write_text_file(destination, write_report(rollups, rows));
}

} // namespace qto
