#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehrgraph/event.hpp"

namespace ehrgraph {

// Category/column names driving timestamp enrichment and context relocation.
// Defaults follow common hospital-EHR table naming; all of it is config.
struct EnrichConfig {
    std::string admission_category = "admissions";
    std::string discharge_category = "discharge";
    std::string ed_stay_category = "edstays";
    std::string hosp_diagnosis_category = "diagnoses_icd";
    std::string ed_diagnosis_category = "diagnosis";
    std::string procedure_category = "procedures_icd";
    std::string admission_id_column = "hadm_id";
    std::string stay_id_column = "stay_id";
    std::string ed_event_type_column = "eventtype";
    std::string ed_discharge_value = "discharge";
    // Discharge-note fields that are in fact observable at admission time.
    std::vector<std::string> relocatable_fields = {
        "chief_complaint",
        "social_history",
        "past_medical_history",
        "physical_examination",
    };
};

// Which code map applies to which event table, and where.
struct CodeMapApplication {
    std::string category;
    std::string code_column;
    std::string derived_column;
    CodeMapKind kind = CodeMapKind::icd_to_ccs;
};

// diagnoses/procedures gain a CCS column, medication tables gain an ATC one.
std::vector<CodeMapApplication> default_code_map_applications();

// Codes absent from a map still yield a value so row shapes stay uniform.
inline constexpr std::string_view kUnmappedSentinel = "unmapped";

struct MaskConfig {
    std::string trigger_category = "prescriptions";
    std::string pharmacy_category = "pharmacy";
    std::string medication_column = "medication";
    std::string mask_token = "[MASKED]";
};

// Chronological order, stable for equal timestamps; untimestamped header
// events first. Idempotent.
PatientTimeline normalize_timeline(std::vector<ClinicalEvent> raw_events,
                                   std::string subject_id);

// Assigns second-precision timestamps to diagnosis events (one minute before
// the matching hospital/ED discharge) and to date-only procedure events
// (23:59:59 of that day), then re-sorts. Events that cannot be anchored are
// flagged `excluded` and reported.
PatientTimeline enrich_timestamps(PatientTimeline timeline, const EnrichConfig& cfg,
                                  std::vector<WarningRecord>& warnings);

// Appends one derived category column per matching table row; existing
// columns are never touched, and a second application is a no-op.
PatientTimeline apply_code_maps(PatientTimeline timeline, std::span<const CodeMap> maps,
                                std::span<const CodeMapApplication> applications);

// Moves admission-observable fields from discharge events onto the admission
// event sharing the same admission id.
PatientTimeline relocate_admission_context(PatientTimeline timeline, const EnrichConfig& cfg,
                                           std::vector<WarningRecord>& warnings);

// When the prediction target is a prescriptions event, medication names in
// contemporaneous pharmacy events are hidden from the observable window.
std::vector<ClinicalEvent> mask_pharmacy_leakage(std::vector<ClinicalEvent> window,
                                                 std::string_view target_category,
                                                 const MaskConfig& cfg = {});

}  // namespace ehrgraph
