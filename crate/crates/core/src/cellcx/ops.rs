use std::collections::HashSet;

use crate::error::{Error, Limits, Result};
use crate::label::Label;

use super::action::GroupAction;
use super::complex::{CellComplex, CellId, ComplexBuilder};
use super::working::Working;

/// `dl_S(K)`: remove every cell having a member of `s` as a face.
pub fn deletion(k: &CellComplex, s: &[CellId]) -> Result<CellComplex> {
    let mut keep = vec![true; k.len()];
    for &c in s {
        keep[c] = false;
        for d in k.strict_cofaces(c) {
            keep[d] = false;
        }
    }
    k.subcomplex(&keep)
}

/// The unique facet of which `sigma` is a proper face, if there is exactly one.
pub fn free_facet(k: &CellComplex, sigma: CellId) -> Option<CellId> {
    Working::full(k).free_facet(sigma)
}

/// Whether the orbit of `sigma` is independently free: no cell is a coface
/// of two distinct orbit members. Every member must be free.
pub fn independently_free(k: &CellComplex, a: &GroupAction, sigma: CellId) -> Result<bool> {
    let w = Working::full(k);
    let orbit = a.orbit(sigma);
    if let Some(&m) = orbit.iter().find(|&&m| w.free_facet(m).is_none()) {
        return Err(Error::NotFree(k.cell_label(m)));
    }
    Ok(w.first_shared_coface(&orbit).is_none())
}

/// Open and closed stars of each orbit member, after checking that no two
/// members share a coface.
struct OrbitStars {
    members: Vec<CellId>,
    open: Vec<Vec<CellId>>,
    closed: Vec<Vec<CellId>>,
}

fn orbit_stars(k: &CellComplex, a: &GroupAction, sigma: CellId) -> Result<OrbitStars> {
    let members = a.orbit(sigma);
    let mut owner = vec![usize::MAX; k.len()];
    let mut open = Vec::with_capacity(members.len());
    let mut closed = Vec::with_capacity(members.len());
    for (i, &m) in members.iter().enumerate() {
        let mut st = k.strict_cofaces(m);
        st.push(m);
        st.sort_unstable();
        for &c in &st {
            if owner[c] != usize::MAX {
                return Err(Error::OrbitCofaceClash(
                    k.cell_label(members[owner[c]]),
                    k.cell_label(m),
                ));
            }
            owner[c] = i;
        }
        let mut cl: HashSet<CellId> = st.iter().copied().collect();
        for &c in &st {
            cl.extend(k.strict_faces(c));
        }
        let mut cl: Vec<CellId> = cl.into_iter().collect();
        cl.sort_unstable();
        open.push(st);
        closed.push(cl);
    }
    Ok(OrbitStars {
        members,
        open,
        closed,
    })
}

/// Label of the apex that replaces `cell` in a stellar subdivision.
pub fn apex_label(k: &CellComplex, cell: CellId) -> Label {
    Label::bary(k.cell_label(cell))
}

fn apex_action(
    k: &CellComplex,
    a: &GroupAction,
    target: &CellComplex,
) -> Result<GroupAction> {
    GroupAction::from_vertex_map(target, a.elements().to_vec(), |g, l| {
        if k.vertex_id(l).is_some() {
            return a.vertex_image(k, g, l);
        }
        let c = k.cell_of_label(l.as_bary()?)?;
        Some(apex_label(k, a.act(g, c)))
    })
}

fn start_builder(k: &CellComplex) -> ComplexBuilder {
    let mut b = ComplexBuilder::new();
    for l in k.vertex_labels() {
        b.vertex(l.clone());
    }
    b
}

fn add_apex(b: &mut ComplexBuilder, k: &CellComplex, m: CellId) -> Result<usize> {
    let l = apex_label(k, m);
    if k.vertex_id(&l).is_some() {
        return Err(Error::InvalidParams(format!("apex {l} is not a fresh vertex")));
    }
    let apex = b.vertex(l);
    b.add_cell(0, vec![apex]);
    Ok(apex)
}

fn add_cone(b: &mut ComplexBuilder, k: &CellComplex, base: CellId, apex: usize) {
    let mut vs = k.verts(base).to_vec();
    vs.push(apex);
    b.add_cell(k.dim(base) + 1, vs);
}

/// Stellar G-subdivision of `k` at the orbit of `sigma`.
///
/// Cells containing an orbit member `σg` are replaced by cones from a fresh
/// apex over the cells of the closed star of `σg` that do not contain it.
/// Works at face-poset level, so polytopal cells are coned the same way.
pub fn stellar_g_subdivision(
    k: &CellComplex,
    a: &GroupAction,
    sigma: CellId,
    limits: &Limits,
) -> Result<(CellComplex, GroupAction)> {
    let stars = orbit_stars(k, a, sigma)?;
    let mut in_open = vec![false; k.len()];
    for st in &stars.open {
        for &c in st {
            in_open[c] = true;
        }
    }
    let mut b = start_builder(k);
    for c in (0..k.len()).filter(|&c| !in_open[c]) {
        b.add_cell(k.dim(c), k.verts(c).to_vec());
    }
    for (i, &m) in stars.members.iter().enumerate() {
        let apex = add_apex(&mut b, k, m)?;
        for &f in &stars.closed[i] {
            if !in_open[f] {
                add_cone(&mut b, k, f, apex);
            }
        }
    }
    let out = b.build(limits)?;
    let act = apex_action(k, a, &out)?;
    Ok((out, act))
}

/// `k` with a cone over the closed star of every orbit member attached. It
/// contains both `k` and the stellar subdivision at the orbit as subcomplexes.
pub fn stellar_cone_complex(
    k: &CellComplex,
    a: &GroupAction,
    sigma: CellId,
    limits: &Limits,
) -> Result<(CellComplex, GroupAction)> {
    let stars = orbit_stars(k, a, sigma)?;
    let mut b = start_builder(k);
    for c in 0..k.len() {
        b.add_cell(k.dim(c), k.verts(c).to_vec());
    }
    for (i, &m) in stars.members.iter().enumerate() {
        let apex = add_apex(&mut b, k, m)?;
        for &f in &stars.closed[i] {
            add_cone(&mut b, k, f, apex);
        }
    }
    let out = b.build(limits)?;
    let act = apex_action(k, a, &out)?;
    Ok((out, act))
}

/// Disjoint union; vertex labels become `[0, l]` and `[1, l]`.
pub fn disjoint_union(x: &CellComplex, y: &CellComplex, limits: &Limits) -> Result<CellComplex> {
    let mut b = ComplexBuilder::new();
    for (tag, k) in [(0usize, x), (1, y)] {
        let ids: Vec<usize> = k
            .vertex_labels()
            .iter()
            .map(|l| b.vertex(Label::List(vec![Label::int(tag), l.clone()])))
            .collect();
        for (d, vs) in k.raw_cells() {
            b.add_cell(d, vs.iter().map(|&v| ids[v]).collect());
        }
    }
    b.build(limits)
}

/// Checks that the vertex map `phi` induces an isomorphism of G-complexes
/// `x → y`: bijective on vertices and cells, dimension preserving, and
/// commuting with the two actions (which must list the same elements).
pub fn check_g_isomorphism<F>(
    x: &CellComplex,
    ax: &GroupAction,
    y: &CellComplex,
    ay: &GroupAction,
    phi: F,
) -> Result<()>
where
    F: Fn(&Label) -> Option<Label>,
{
    let fail = |m: String| Err(Error::NotIsomorphic(m));
    if x.len() != y.len() || x.num_vertices() != y.num_vertices() {
        return fail(format!(
            "sizes differ: {} cells / {} vertices vs {} cells / {} vertices",
            x.len(),
            x.num_vertices(),
            y.len(),
            y.num_vertices()
        ));
    }
    if ax.elements() != ay.elements() {
        return fail("actions use different group elements".into());
    }
    let mut vmap = Vec::with_capacity(x.num_vertices());
    let mut hit = vec![false; y.num_vertices()];
    for l in x.vertex_labels() {
        let Some(w) = phi(l).and_then(|m| y.vertex_id(&m)) else {
            return fail(format!("vertex {l} has no image"));
        };
        if std::mem::replace(&mut hit[w], true) {
            return fail(format!("vertex map not injective at {l}"));
        }
        vmap.push(w);
    }
    let mut seen = vec![false; y.len()];
    let mut buf = Vec::new();
    for c in 0..x.len() {
        buf.clear();
        buf.extend(x.verts(c).iter().map(|&v| vmap[v]));
        buf.sort_unstable();
        match y.cell(&buf) {
            Some(d) if y.dim(d) == x.dim(c) && !seen[d] => seen[d] = true,
            _ => return fail(format!("cell {} has no matching image", x.cell_label(c))),
        }
    }
    for g in 0..ax.order() {
        for v in 0..x.num_vertices() {
            if vmap[ax.act_vertex(g, v)] != ay.act_vertex(g, vmap[v]) {
                return fail(format!(
                    "map is not equivariant at vertex {} and element {g}",
                    x.vertex_label(v)
                ));
            }
        }
    }
    Ok(())
}
