//! Graded cell complexes at face-poset level, group actions on them, and the
//! standard constructions: face poset, order complex, barycentric and
//! stellar subdivision, deletion.

mod action;
mod complex;
pub mod export;
mod ops;
mod poset;
mod working;

pub use action::{compose, symmetric_group, GroupAction, Perm};
pub use complex::{CellComplex, CellId, ComplexBuilder};
pub(crate) use complex::{intersect, is_subset};
pub use ops::{
    apex_label, check_g_isomorphism, deletion, disjoint_union, free_facet, independently_free,
    stellar_cone_complex, stellar_g_subdivision,
};
pub use poset::{barycentric_subdivision, face_poset, order_complex, Poset};
pub use working::Working;

use crate::error::{Limits, Result};

/// `sd K` together with the induced action.
pub fn barycentric_subdivision_g(
    k: &CellComplex,
    a: &GroupAction,
    limits: &Limits,
) -> Result<(CellComplex, GroupAction)> {
    let sd = barycentric_subdivision(k, limits)?;
    let act = a.subdivide(&sd)?;
    Ok((sd, act))
}
