//! The box complex `B_edge(H)`, the poset maps `p` and `i` between it and
//! the multihomomorphism poset, and the criterion for `i∘p = 1`.

use crate::cellcx::{symmetric_group, CellComplex, CellId, ComplexBuilder, GroupAction};
use crate::error::{Error, Limits, Result};
use crate::homcx::{
    act_on_tuple_label, enumerate_multihoms, tuple_label, tuple_of_label, MultiHom,
};
use crate::rgraph::{RGraph, VertexId};

/// Largest product `i(f)` whose faces we agree to enumerate.
const MAX_PRODUCT: usize = 24;

/// `B_edge(H)` with its right `S_r`-action. Vertices are ordered edge tuples
/// labeled as in the Hom complex, so both complexes share vertex ids.
#[derive(Clone, Debug)]
pub struct BoxComplex {
    pub complex: CellComplex,
    pub action: GroupAction,
    r: usize,
    tuples: Vec<Vec<VertexId>>,
    ip: Vec<CellId>,
}

pub fn box_edge(h: &RGraph, limits: &Limits) -> Result<BoxComplex> {
    let poset = enumerate_multihoms(h, limits)?;
    let mut b = ComplexBuilder::new();
    for m in poset.maximal() {
        let ts = poset.elements()[m].tuples();
        if ts.len() > MAX_PRODUCT {
            return Err(Error::guard("box complex simplex", MAX_PRODUCT));
        }
        let vs = ts.iter().map(|t| b.vertex(tuple_label(h, t))).collect();
        b.add_simplex(vs);
    }
    let complex = b.build_closure(limits)?;
    let tuples: Vec<Vec<VertexId>> = complex
        .vertex_labels()
        .iter()
        .map(|l| tuple_of_label(h, l).expect("tuple vertex"))
        .collect();
    let elements = symmetric_group(h.r());
    let action = GroupAction::from_vertex_map(&complex, elements.clone(), |g, l| {
        act_on_tuple_label(l, &elements[g])
    })?;
    let mut bx = BoxComplex {
        complex,
        action,
        r: h.r(),
        tuples,
        ip: Vec::new(),
    };
    let ip = (0..bx.complex.len())
        .map(|c| {
            let f = bx.map_p(c);
            bx.map_i(&f).ok_or_else(|| {
                Error::InvalidParams(format!(
                    "i(p(F)) is not a simplex for F = {}",
                    bx.complex.cell_label(c)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    bx.ip = ip;
    Ok(bx)
}

impl BoxComplex {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// Vertex tuple of box vertex `v`.
    pub fn tuple(&self, v: usize) -> &[VertexId] {
        &self.tuples[v]
    }

    /// Box vertex of an ordered edge tuple.
    pub fn vertex_of_tuple(&self, h: &RGraph, t: &[VertexId]) -> Option<usize> {
        self.complex.vertex_id(&tuple_label(h, t))
    }

    /// `p(F)(j) = pr_j(F)`.
    pub fn map_p(&self, c: CellId) -> MultiHom {
        let mut parts: Vec<Vec<VertexId>> = vec![Vec::new(); self.r];
        for &v in self.complex.verts(c) {
            for (p, &x) in parts.iter_mut().zip(&self.tuples[v]) {
                p.push(x);
            }
        }
        for p in &mut parts {
            p.sort_unstable();
            p.dedup();
        }
        MultiHom::from_sorted_parts(parts)
    }

    /// `i(f) = ∏ f(j)` as a simplex, if it is one.
    pub fn map_i(&self, f: &MultiHom) -> Option<CellId> {
        let mut vs = Vec::new();
        for t in f.tuples() {
            vs.push(self.tuples.binary_search(&t).ok()?);
        }
        vs.sort_unstable();
        self.complex.cell(&vs)
    }

    /// `i(p(F))`.
    pub fn ip(&self, c: CellId) -> CellId {
        self.ip[c]
    }

    pub fn ip_fixed(&self, c: CellId) -> bool {
        self.ip[c] == c
    }

    /// Mask of the image subcomplex `i(P)`.
    pub fn image_mask(&self) -> Vec<bool> {
        (0..self.len()).map(|c| self.ip_fixed(c)).collect()
    }

    /// Simplex as a list of named tuples.
    pub fn simplex_json(&self, h: &RGraph, c: CellId) -> Vec<Vec<String>> {
        self.complex
            .verts(c)
            .iter()
            .map(|&v| self.tuples[v].iter().map(|&x| h.vertex_name(x).to_string()).collect())
            .collect()
    }

    /// Simplex with the given named tuples.
    pub fn simplex_of_json<S: AsRef<str>>(&self, h: &RGraph, ts: &[Vec<S>]) -> Result<CellId> {
        let mut vs = Vec::with_capacity(ts.len());
        for t in ts {
            let ids = t
                .iter()
                .map(|x| h.vertex_id(x.as_ref()))
                .collect::<Result<Vec<_>>>()?;
            vs.push(self.tuples.binary_search(&ids).map_err(|_| {
                Error::InvalidParams(format!("{:?} is not an edge tuple", ids))
            })?);
        }
        vs.sort_unstable();
        vs.dedup();
        self.complex
            .cell(&vs)
            .ok_or_else(|| Error::InvalidParams("tuples do not form a simplex".into()))
    }
}

/// `(every simplex is fixed by i∘p, H has no K^r_{1,…,1,2,2})`. The two
/// answers are expected to agree.
pub fn iso_criterion(h: &RGraph, limits: &Limits) -> Result<(bool, bool)> {
    let bx = box_edge(h, limits)?;
    let fixed = (0..bx.len()).all(|c| bx.ip_fixed(c));
    let contains = if h.r() >= 2 {
        let mut sizes = vec![1; h.r()];
        sizes[h.r() - 1] = 2;
        sizes[h.r() - 2] = 2;
        h.contains_complete_sub(&sizes, limits)?
    } else {
        false
    };
    Ok((fixed, !contains))
}
