//! Regularity certification.
