//! JSON and DOT dumps of a complex's face poset.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::label::Label;

use super::complex::{CellComplex, CellId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub id: CellId,
    pub dim: usize,
    pub label: Label,
    pub covers: Vec<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub cells: Vec<CellRecord>,
}

/// Dump with the default payload (list of vertex labels).
pub fn dump(k: &CellComplex) -> ComplexDump {
    dump_with(k, |c| k.cell_label(c))
}

/// Dump with a caller-chosen payload per cell.
pub fn dump_with<F: Fn(CellId) -> Label>(k: &CellComplex, label: F) -> ComplexDump {
    ComplexDump {
        cells: (0..k.len())
            .map(|c| CellRecord {
                id: c,
                dim: k.dim(c),
                label: label(c),
                covers: k.faces(c).to_vec(),
            })
            .collect(),
    }
}

/// Hasse diagram: one node per cell, one arc per cover (face to coface).
pub fn hasse_dot<F: Fn(CellId) -> Label>(k: &CellComplex, label: F) -> String {
    let mut s = String::from("digraph hasse {\n  rankdir=BT;\n");
    for c in 0..k.len() {
        let text = label(c).to_string().replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(s, "  c{c} [label=\"{text}\", dim={}];", k.dim(c));
    }
    for c in 0..k.len() {
        for &f in k.faces(c) {
            let _ = writeln!(s, "  c{f} -> c{c};");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellcx::complex::tests::simplex;

    #[test]
    fn dump_shape() {
        let k = simplex(2);
        let d = dump(&k);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"cells":[{"id":0,"dim":0,"label":[0],"covers":[]},{"id":1,"dim":0,"label":[1],"covers":[]},{"id":2,"dim":1,"label":[0,1],"covers":[0,1]}]}"#
        );
        let dot = hasse_dot(&k, |c| k.cell_label(c));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
