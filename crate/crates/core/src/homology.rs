//! Simplicial homology over the integers and over the two-element field.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::boxcx::box_edge;
use crate::cellcx::{barycentric_subdivision, CellComplex};
use crate::error::{Error, Limits, Result};
use crate::homcx::hom_complex;
use crate::rgraph::RGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff {
    Z,
    Z2,
}

/// `{"betti":[..],"torsion":[[..]..]}`; `torsion[k]` lists the invariant
/// factors above 1 of `H_k` (always empty over the field).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<u64>>,
}

impl HomologyReport {
    /// Extends with zero groups up to degree `n - 1`.
    pub fn pad_to(&mut self, n: usize) {
        while self.betti.len() < n {
            self.betti.push(0);
            self.torsion.push(Vec::new());
        }
    }
}

type Column = Vec<(usize, i64)>;

/// Columns of `∂_d` indexed by `d`-cells, rows by `(d-1)`-cells, both
/// counted from the first cell of their dimension. The face opposite the
/// vertex in position `i` gets sign `(-1)^i`.
pub fn boundary_columns(k: &CellComplex, d: usize) -> Vec<Column> {
    let lo = k.cells_of_dim(d - 1).next().unwrap_or(0);
    let mut buf = Vec::new();
    k.cells_of_dim(d)
        .map(|c| {
            let vs = k.verts(c);
            let mut col: Column = (0..vs.len())
                .map(|skip| {
                    buf.clear();
                    buf.extend(vs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    let f = k.cell(&buf).expect("simplicial complex");
                    (f - lo, if skip % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect()
}

/// Sparse elimination on unit pivots. Returns the number of unit pivots and
/// the columns that remain (with pivot rows removed) when none is left.
fn eliminate(mut cols: Vec<Column>, nrows: usize, field2: bool) -> (usize, Vec<Column>) {
    let norm = |x: i64| if field2 { x.rem_euclid(2) } else { x };
    for col in &mut cols {
        for e in col.iter_mut() {
            e.1 = norm(e.1);
        }
        col.retain(|e| e.1 != 0);
    }
    let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, _) in col {
            rows[i].insert(j);
        }
    }
    let mut alive: Vec<bool> = vec![true; cols.len()];
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| cols[j].len());
    let mut rank = 0;
    let mut progress = true;
    while progress {
        progress = false;
        for &j in &order {
            if !alive[j] || cols[j].is_empty() {
                continue;
            }
            // sparsest row among unit entries
            let Some(&(p, pv)) = cols[j]
                .iter()
                .filter(|e| e.1.abs() == 1)
                .min_by_key(|e| rows[e.0].len())
            else {
                continue;
            };
            let others: Vec<usize> = rows[p].iter().copied().filter(|&o| o != j).collect();
            let mut overflow = false;
            for o in others {
                let ov = cols[o].iter().find(|e| e.0 == p).unwrap().1;
                let factor = ov * pv; // ov / pv since pv = ±1
                match axpy(&cols[o], &cols[j], factor, field2) {
                    Some(new) => {
                        for &(i, _) in &cols[o] {
                            rows[i].remove(&o);
                        }
                        for &(i, _) in &new {
                            rows[i].insert(o);
                        }
                        cols[o] = new;
                    }
                    None => {
                        overflow = true;
                        break;
                    }
                }
            }
            if overflow {
                continue;
            }
            for &(i, _) in &cols[j] {
                rows[i].remove(&j);
            }
            // row p is now zero outside column j
            alive[j] = false;
            cols[j].clear();
            rank += 1;
            progress = true;
        }
    }
    let rest = cols
        .into_iter()
        .zip(alive)
        .filter(|(c, a)| *a && !c.is_empty())
        .map(|(c, _)| c)
        .collect();
    (rank, rest)
}

/// `a - factor * b`, or `None` on overflow.
fn axpy(a: &Column, b: &Column, factor: i64, field2: bool) -> Option<Column> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (row, v) = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, x.1.checked_sub(factor.checked_mul(y.1)?)?)
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, x.1)
            }
            (Some(x), None) => {
                i += 1;
                (x.0, x.1)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, factor.checked_mul(y.1)?.checked_neg()?)
            }
            (None, None) => unreachable!(),
        };
        let v = if field2 { v.rem_euclid(2) } else { v };
        if v != 0 {
            out.push((row, v));
        }
    }
    Some(out)
}

/// Nonzero invariant factors of a dense integer matrix.
fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            let (top, rest) = m.split_at_mut(i);
            for (x, p) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                *x -= p * &q;
            }
            if !m[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            for row in &mut m[t..] {
                let v = &row[t] * &q;
                row[j] -= v;
            }
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
        if let Some((i, _)) = bad {
            let (top, rest) = m.split_at_mut(i);
            for (x, v) in top[t][t..].iter_mut().zip(&rest[0][t..]) {
                *x += v;
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Rank and invariant factors above 1 of `∂_d`.
fn boundary_invariants(k: &CellComplex, d: usize, field2: bool) -> (usize, Vec<BigInt>) {
    let nrows = k.cells_of_dim(d - 1).len();
    let (units, rest) = eliminate(boundary_columns(k, d), nrows, field2);
    if rest.is_empty() {
        return (units, Vec::new());
    }
    let mut used: Vec<usize> = rest.iter().flatten().map(|e| e.0).collect();
    used.sort_unstable();
    used.dedup();
    let mut dense = vec![vec![BigInt::zero(); rest.len()]; used.len()];
    for (j, col) in rest.iter().enumerate() {
        for &(i, v) in col {
            dense[used.binary_search(&i).unwrap()][j] = BigInt::from(v);
        }
    }
    let diag = smith_diagonal(dense);
    let big: Vec<BigInt> = diag.iter().filter(|x| !x.is_one()).cloned().collect();
    (units + diag.len(), big)
}

/// Betti numbers (and torsion over the integers) of a simplicial complex.
pub fn betti(k: &CellComplex, coeff: Coeff, limits: &Limits) -> Result<HomologyReport> {
    if !k.is_simplicial() {
        return Err(Error::InvalidParams(
            "homology needs a simplicial complex; subdivide first".into(),
        ));
    }
    limits.check_cells("homology", k.len())?;
    let Some(top) = k.max_dim() else {
        return Ok(HomologyReport {
            betti: Vec::new(),
            torsion: Vec::new(),
        });
    };
    let field2 = coeff == Coeff::Z2;
    let counts = k.counts_by_dim();
    // rank[d] and torsion[d] of ∂_d, with ∂_0 = ∂_{top+1} = 0
    let mut rank = vec![0; top + 2];
    let mut tors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for d in 1..=top {
        let (r, t) = boundary_invariants(k, d, field2);
        rank[d] = r;
        tors[d] = t;
    }
    let mut report = HomologyReport {
        betti: Vec::with_capacity(top + 1),
        torsion: Vec::with_capacity(top + 1),
    };
    for d in 0..=top {
        report.betti.push(counts[d] - rank[d] - rank[d + 1]);
        let mut t = tors[d + 1]
            .iter()
            .map(|x| {
                x.to_u64()
                    .ok_or_else(|| Error::InvalidParams("torsion coefficient too large".into()))
            })
            .collect::<Result<Vec<u64>>>()?;
        t.sort_unstable();
        report.torsion.push(t);
    }
    Ok(report)
}

/// Homology of `sd B_edge(H)` and `sd Hom(K_r^r, H)`, both reported over
/// the same range of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub box_complex: HomologyReport,
    pub hom_complex: HomologyReport,
    pub agree: bool,
}

pub fn homology_agreement(h: &RGraph, coeff: Coeff, limits: &Limits) -> Result<Agreement> {
    let bx = box_edge(h, limits)?;
    let hk = hom_complex(h, limits)?;
    let mut b = betti(&barycentric_subdivision(&bx.complex, limits)?, coeff, limits)?;
    let mut m = betti(&barycentric_subdivision(&hk.complex, limits)?, coeff, limits)?;
    let n = b.betti.len().max(m.betti.len());
    b.pad_to(n);
    m.pad_to(n);
    Ok(Agreement {
        agree: b == m,
        box_complex: b,
        hom_complex: m,
    })
}
