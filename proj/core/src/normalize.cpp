#include "ehrgraph/normalize.hpp"

#include <algorithm>
#include <unordered_map>

namespace ehrgraph {
namespace {

void sort_events(std::vector<ClinicalEvent>& events) {
    // Headers (no timestamp) first, then ascending time; stable on ties so
    // input order is the tie-break.
    std::stable_sort(events.begin(), events.end(),
                     [](const ClinicalEvent& a, const ClinicalEvent& b) {
                         if (!a.timestamp.has_value() || !b.timestamp.has_value()) {
                             return !a.timestamp.has_value() && b.timestamp.has_value();
                         }
                         return *a.timestamp < *b.timestamp;
                     });
}

bool lacks_second_precision(const ClinicalEvent& e) {
    return !e.timestamp.has_value() || e.day_only;
}

void remove_column(ClinicalEvent& event, std::size_t idx) {
    event.columns.erase(event.columns.begin() + static_cast<std::ptrdiff_t>(idx));
    for (auto& row : event.rows) {
        if (idx < row.size()) row.erase(row.begin() + static_cast<std::ptrdiff_t>(idx));
    }
}

}  // namespace

std::vector<CodeMapApplication> default_code_map_applications() {
    return {
        {"diagnoses_icd", "icd_code", "ccs_type", CodeMapKind::icd_to_ccs},
        {"procedures_icd", "icd_code", "ccs_type", CodeMapKind::icd_to_ccs},
        {"prescriptions", "ndc", "atc_type", CodeMapKind::ndc_to_atc},
        {"pharmacy", "ndc", "atc_type", CodeMapKind::ndc_to_atc},
        {"medrecon", "ndc", "atc_type", CodeMapKind::ndc_to_atc},
    };
}

PatientTimeline normalize_timeline(std::vector<ClinicalEvent> raw_events,
                                   std::string subject_id) {
    PatientTimeline timeline;
    timeline.subject_id = std::move(subject_id);
    timeline.events = std::move(raw_events);
    sort_events(timeline.events);
    return timeline;
}

PatientTimeline enrich_timestamps(PatientTimeline timeline, const EnrichConfig& cfg,
                                  std::vector<WarningRecord>& warnings) {
    // Latest hospital discharge per admission id, latest ED discharge per stay.
    std::unordered_map<std::string, Timestamp> hosp_discharge;
    std::unordered_map<std::string, Timestamp> ed_discharge;
    for (const auto& event : timeline.events) {
        if (!event.timestamp.has_value()) continue;
        if (event.category == cfg.discharge_category) {
            if (auto id = event.value(cfg.admission_id_column)) {
                auto [it, inserted] = hosp_discharge.emplace(*id, *event.timestamp);
                if (!inserted && it->second < *event.timestamp) it->second = *event.timestamp;
            }
        } else if (event.category == cfg.ed_stay_category) {
            auto type = event.value(cfg.ed_event_type_column);
            if (!type || *type != cfg.ed_discharge_value) continue;
            if (auto id = event.value(cfg.stay_id_column)) {
                auto [it, inserted] = ed_discharge.emplace(*id, *event.timestamp);
                if (!inserted && it->second < *event.timestamp) it->second = *event.timestamp;
            }
        }
    }

    auto anchor = [&](ClinicalEvent& event, const std::string& id_column,
                      const std::unordered_map<std::string, Timestamp>& discharges,
                      std::string_view discharge_kind) {
        const auto id = event.value(id_column);
        if (id.has_value()) {
            auto it = discharges.find(std::string(*id));
            if (it != discharges.end()) {
                event.timestamp = Timestamp{it->second.seconds - kSecondsPerMinute};
                event.day_only = false;
                return;
            }
        }
        event.excluded = true;
        warnings.push_back({timeline.subject_id,
                            event.category + " event has no matching " +
                                std::string(discharge_kind) + " discharge; excluded"});
    };

    for (auto& event : timeline.events) {
        if (event.category == cfg.hosp_diagnosis_category && lacks_second_precision(event)) {
            anchor(event, cfg.admission_id_column, hosp_discharge, "hospital");
        } else if (event.category == cfg.ed_diagnosis_category && lacks_second_precision(event)) {
            anchor(event, cfg.stay_id_column, ed_discharge, "ED");
        } else if (event.category == cfg.procedure_category) {
            if (event.timestamp.has_value() && event.day_only) {
                event.timestamp = Timestamp{start_of_day(*event.timestamp).seconds +
                                            kSecondsPerDay - 1};
                event.day_only = false;
            } else if (!event.timestamp.has_value()) {
                event.excluded = true;
                warnings.push_back({timeline.subject_id,
                                    event.category + " event has no date; excluded"});
            }
        }
    }

    sort_events(timeline.events);
    return timeline;
}

PatientTimeline apply_code_maps(PatientTimeline timeline, std::span<const CodeMap> maps,
                                std::span<const CodeMapApplication> applications) {
    for (const auto& app : applications) {
        const CodeMap* map = nullptr;
        for (const auto& m : maps) {
            if (m.kind == app.kind) {
                map = &m;
                break;
            }
        }
        if (map == nullptr) continue;
        for (auto& event : timeline.events) {
            if (event.category != app.category) continue;
            if (event.column_index(app.derived_column) >= 0) continue;  // already applied
            const int code_idx = event.column_index(app.code_column);
            event.columns.push_back(app.derived_column);
            for (auto& row : event.rows) {
                std::string derived{kUnmappedSentinel};
                if (code_idx >= 0 && static_cast<std::size_t>(code_idx) < row.size()) {
                    if (auto hit = map->lookup(row[static_cast<std::size_t>(code_idx)])) {
                        derived = std::string(*hit);
                    }
                }
                row.push_back(std::move(derived));
            }
        }
    }
    return timeline;
}

PatientTimeline relocate_admission_context(PatientTimeline timeline, const EnrichConfig& cfg,
                                           std::vector<WarningRecord>& warnings) {
    std::unordered_map<std::string, std::size_t> admission_by_id;
    for (std::size_t i = 0; i < timeline.events.size(); ++i) {
        const auto& event = timeline.events[i];
        if (event.category != cfg.admission_category) continue;
        if (auto id = event.value(cfg.admission_id_column)) {
            admission_by_id.emplace(std::string(*id), i);
        }
    }

    for (auto& event : timeline.events) {
        if (event.category != cfg.discharge_category) continue;
        std::size_t admission_idx = timeline.events.size();
        if (auto id = event.value(cfg.admission_id_column)) {
            auto it = admission_by_id.find(std::string(*id));
            if (it != admission_by_id.end()) admission_idx = it->second;
        }
        for (const auto& field : cfg.relocatable_fields) {
            const int idx = event.column_index(field);
            if (idx < 0) continue;
            const std::size_t col = static_cast<std::size_t>(idx);
            if (admission_idx == timeline.events.size()) {
                warnings.push_back({timeline.subject_id,
                                    "discharge field '" + field +
                                        "' has no matching admission; dropped"});
            } else {
                auto& admission = timeline.events[admission_idx];
                if (admission.column_index(field) < 0) {
                    const std::string value =
                        event.rows.empty() || col >= event.rows[0].size()
                            ? std::string()
                            : event.rows[0][col];
                    admission.columns.push_back(field);
                    for (auto& row : admission.rows) row.push_back(value);
                }
            }
            remove_column(event, col);
        }
    }
    return timeline;
}

std::vector<ClinicalEvent> mask_pharmacy_leakage(std::vector<ClinicalEvent> window,
                                                 std::string_view target_category,
                                                 const MaskConfig& cfg) {
    if (target_category != cfg.trigger_category) return window;
    for (auto& event : window) {
        if (event.category != cfg.pharmacy_category) continue;
        const int idx = event.column_index(cfg.medication_column);
        if (idx < 0) continue;
        for (auto& row : event.rows) {
            auto& cell = row[static_cast<std::size_t>(idx)];
            if (!cell.empty()) cell = cfg.mask_token;
        }
    }
    return window;
}

}  // namespace ehrgraph
