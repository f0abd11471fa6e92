//! Renormalization: cascade detection, periodic domains, straightening
//! charts and nested return sequences.

mod cascade;
mod domain;
mod returns;

pub use cascade::{find_cascade, superstable_parameters, Cascade, CascadeEntry};
pub use domain::{find_periodic_domain, PeriodicDomain};
pub use returns::{
    build_straightening_chart, graph_transform_horizontal, nested_returns, renormalize,
    HenonReturn, RenormSequence,
};
