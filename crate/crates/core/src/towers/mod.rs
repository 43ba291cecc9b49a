//! Inverse systems: `lim` and `lim¹` of multiplication and completion
//! towers, Mittag-Leffler certificates, and a truncation oracle.

mod lemmas;
mod oracle;
mod tower;

pub use lemmas::{
    check_lemma_4_1, check_lemma_4_2, Lemma41Report, Lemma42Degree, Lemma42Report, Lemma42Source, DEFAULT_DEPTH,
};
pub use oracle::{limits_truncated, oracle_crosscheck, CrossCheck, DescentStep, TruncatedLimit};
pub use tower::{
    limits_closed_form, localization_against_completed, ml_certificate, Lim1, LimValue, LimVerdict, MLCertificate,
    MLVerdict, NonStabilization, SymbolicLocalization, Tower,
};
pub(crate) use tower::{multiplication_limits, torsion_stabilization_index};
