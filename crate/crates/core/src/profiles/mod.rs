//! Rank and separator profiles, defect sets, global rank and the
//! aperiodicity classification.

mod language;
mod rank;
mod report;

pub use language::{builtin, exact_language, mod_language, threshold_language, LanguageHandle};
pub use rank::{
    defect_set, min_global_rank, rho, rho_via_defect, sigma, DefectPair, DefectSet, Profiler, RhoResult,
    Separator, SigmaResult,
};
pub use report::{classify, Classification, ClassifyOptions, GlobalRank, ProfileReport, ProfileRow, WitnessInfo};
