//! Multihomomorphisms `K_r^r → H` and the Hom complex they index.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cellcx::{symmetric_group, CellComplex, CellId, ComplexBuilder, GroupAction};
use crate::error::{Error, Limits, Result};
use crate::label::Label;
use crate::rgraph::{RGraph, VertexId};

/// An r-tuple of nonempty vertex sets such that every choice of one vertex
/// per coordinate is an edge. Parts are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiHom {
    parts: Vec<Vec<VertexId>>,
}

/// On-disk form with vertex names: `{"parts": [["a0"], ["b0", "b1"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiHomJson {
    pub parts: Vec<Vec<String>>,
}

impl MultiHom {
    /// Checks the multihomomorphism condition against `h`.
    pub fn new(h: &RGraph, mut parts: Vec<Vec<VertexId>>) -> Result<Self> {
        for p in &mut parts {
            p.sort_unstable();
            p.dedup();
        }
        if !h.generates_complete(&parts)? {
            return Err(Error::InvalidParams(format!(
                "parts {parts:?} do not generate a complete sub-r-graph"
            )));
        }
        Ok(MultiHom { parts })
    }

    pub(crate) fn from_sorted_parts(parts: Vec<Vec<VertexId>>) -> Self {
        MultiHom { parts }
    }

    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// `Σ_j (|f(j)| - 1)`.
    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.len() - 1).sum()
    }

    /// Componentwise inclusion.
    pub fn le(&self, other: &MultiHom) -> bool {
        self.parts
            .iter()
            .zip(&other.parts)
            .all(|(a, b)| crate::cellcx::is_subset(a, b))
    }

    /// Every tuple choosing one vertex per part, in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<VertexId>> {
        self.parts
            .iter()
            .map(|p| p.iter().copied())
            .multi_cartesian_product()
            .collect()
    }

    pub fn to_json(&self, h: &RGraph) -> MultiHomJson {
        MultiHomJson {
            parts: self
                .parts
                .iter()
                .map(|p| p.iter().map(|&v| h.vertex_name(v).to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(h: &RGraph, j: &MultiHomJson) -> Result<Self> {
        MultiHom::new(h, h.parts_by_name(&j.parts)?)
    }

    pub fn to_label(&self, h: &RGraph) -> Label {
        Label::List(
            self.parts
                .iter()
                .map(|p| Label::List(p.iter().map(|&v| Label::str(h.vertex_name(v))).collect()))
                .collect(),
        )
    }
}

/// `(fσ)(j) = f(σ(j))`.
pub fn action_on_multihoms(f: &MultiHom, sigma: &[usize]) -> MultiHom {
    MultiHom {
        parts: sigma.iter().map(|&s| f.parts[s].clone()).collect(),
    }
}

/// Label of an ordered edge tuple, shared by the vertices of both complexes.
pub fn tuple_label(h: &RGraph, t: &[VertexId]) -> Label {
    Label::List(t.iter().map(|&v| Label::str(h.vertex_name(v))).collect())
}

/// Inverse of [`tuple_label`].
pub fn tuple_of_label(h: &RGraph, l: &Label) -> Option<Vec<VertexId>> {
    l.as_list()?
        .iter()
        .map(|x| match x {
            Label::Str(s) => h.vertex_id(s).ok(),
            _ => None,
        })
        .collect()
}

/// `(t·σ)_j = t_{σ(j)}` on tuple labels.
pub fn act_on_tuple_label(l: &Label, sigma: &[usize]) -> Option<Label> {
    let xs = l.as_list()?;
    if xs.len() != sigma.len() {
        return None;
    }
    Some(Label::List(sigma.iter().map(|&s| xs[s].clone()).collect()))
}

/// The poset of multihomomorphisms under componentwise inclusion, listed by
/// `(dim, parts)`.
#[derive(Clone, Debug)]
pub struct MultiHomPoset {
    elements: Vec<MultiHom>,
    index: HashMap<MultiHom, usize>,
}

impl MultiHomPoset {
    pub fn elements(&self) -> &[MultiHom] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, f: &MultiHom) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Strict order.
    pub fn less(&self, a: usize, b: usize) -> bool {
        a != b && self.elements[a].le(&self.elements[b])
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.less(a, b)))
            .collect()
    }
}

struct Enumerator<'a> {
    h: &'a RGraph,
    parts: Vec<Vec<VertexId>>,
    out: Vec<MultiHom>,
    budget: usize,
    limits: &'a Limits,
}

impl Enumerator<'_> {
    // `sels`: every selection from the parts fixed so far, each sorted.
    fn run(&mut self, sels: Vec<Vec<VertexId>>) -> Result<()> {
        let j = self.parts.len();
        if j == self.h.r() {
            self.out.push(MultiHom::from_sorted_parts(self.parts.clone()));
            return self.limits.check_cells("multihomomorphism poset", self.out.len());
        }
        let cands: Vec<VertexId> = (0..self.h.num_vertices())
            .filter(|&v| {
                sels.iter().all(|s| {
                    s.binary_search(&v).is_err_and(|pos| {
                        let mut t = s.clone();
                        t.insert(pos, v);
                        self.h.is_subedge(&t)
                    })
                })
            })
            .collect();
        for part in cands.iter().copied().powerset().skip(1) {
            if self.budget == 0 {
                return Err(Error::guard("multihomomorphism search", self.limits.max_assignments));
            }
            self.budget -= 1;
            let mut next = Vec::with_capacity(sels.len() * part.len());
            for s in &sels {
                for &v in &part {
                    let mut t = s.clone();
                    let pos = t.binary_search(&v).unwrap_err();
                    t.insert(pos, v);
                    next.push(t);
                }
            }
            self.parts.push(part);
            self.run(next)?;
            self.parts.pop();
        }
        Ok(())
    }
}

/// All multihomomorphisms `K_r^r → H`.
///
/// Parts are chosen coordinate by coordinate; a vertex may enter part `j`
/// only if it extends every selection from the earlier parts to a subset of
/// an edge, so every branch of the search yields multihomomorphisms.
pub fn enumerate_multihoms(h: &RGraph, limits: &Limits) -> Result<MultiHomPoset> {
    let mut e = Enumerator {
        h,
        parts: Vec::with_capacity(h.r()),
        out: Vec::new(),
        budget: limits.max_assignments,
        limits,
    };
    e.run(vec![Vec::new()])?;
    let mut elements = e.out;
    elements.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    let index = elements.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(MultiHomPoset { elements, index })
}

/// `Hom(K_r^r, H)` as a polytopal complex with its right `S_r`-action.
///
/// Vertices are ordered edge tuples (labels `[v_0, ..., v_{r-1}]`), and the
/// cell of `f` has vertex set `i(f)` and dimension `Σ(|f(j)| - 1)`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: CellComplex,
    pub action: GroupAction,
    multihoms: Vec<MultiHom>,
    cell_of: HashMap<MultiHom, CellId>,
}

impl HomComplex {
    pub fn multihom(&self, c: CellId) -> &MultiHom {
        &self.multihoms[c]
    }

    pub fn cell_of(&self, f: &MultiHom) -> Option<CellId> {
        self.cell_of.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }
}

pub fn hom_complex(h: &RGraph, limits: &Limits) -> Result<HomComplex> {
    let poset = enumerate_multihoms(h, limits)?;
    let mut b = ComplexBuilder::new();
    for f in poset.elements() {
        let vs = f
            .tuples()
            .iter()
            .map(|t| b.vertex(tuple_label(h, t)))
            .collect();
        b.add_cell(f.dim(), vs);
    }
    let complex = b.build(limits)?;
    let mut multihoms = Vec::with_capacity(complex.len());
    for c in 0..complex.len() {
        let mut parts: Vec<Vec<VertexId>> = vec![Vec::new(); h.r()];
        for &v in complex.verts(c) {
            let t = tuple_of_label(h, complex.vertex_label(v)).expect("tuple vertex");
            for (p, x) in parts.iter_mut().zip(t) {
                p.push(x);
            }
        }
        for p in &mut parts {
            p.sort_unstable();
            p.dedup();
        }
        multihoms.push(MultiHom::from_sorted_parts(parts));
    }
    let cell_of = multihoms.iter().cloned().enumerate().map(|(c, f)| (f, c)).collect();
    let elements = symmetric_group(h.r());
    let action = GroupAction::from_vertex_map(&complex, elements.clone(), |g, l| {
        act_on_tuple_label(l, &elements[g])
    })?;
    Ok(HomComplex {
        complex,
        action,
        multihoms,
        cell_of,
    })
}
