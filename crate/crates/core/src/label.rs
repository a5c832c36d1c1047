use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque, totally ordered payload attached to vertices and cells.
///
/// Serialized as plain JSON: integers, strings, arrays, and `{"bary": ..}`
/// for the apex introduced by a stellar subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(u64),
    Str(String),
    List(Vec<Label>),
    Bary { bary: Box<Label> },
}

impl Label {
    pub fn str(s: impl Into<String>) -> Self {
        Label::Str(s.into())
    }

    pub fn int(i: usize) -> Self {
        Label::Int(i as u64)
    }

    pub fn bary(inner: Label) -> Self {
        Label::Bary {
            bary: Box::new(inner),
        }
    }

    pub fn as_int(&self) -> Option<usize> {
        match self {
            Label::Int(i) => Some(*i as usize),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Label]> {
        match self {
            Label::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bary(&self) -> Option<&Label> {
        match self {
            Label::Bary { bary } => Some(bary),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => write!(f, "{s}"),
            Label::List(v) => {
                write!(f, "[")?;
                for (k, x) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Label::Bary { bary } => write!(f, "^{bary}"),
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Str(s.to_string())
    }
}

impl From<usize> for Label {
    fn from(i: usize) -> Self {
        Label::int(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let l = Label::List(vec![
            Label::int(3),
            Label::str("a"),
            Label::bary(Label::List(vec![Label::str("b")])),
        ]);
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"[3,"a",{"bary":["b"]}]"#);
        let back: Label = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
