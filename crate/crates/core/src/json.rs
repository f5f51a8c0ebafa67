//! JSON forms of algebras and verdicts. Coefficients are exact fraction
//! strings such as `"1/2"`.

use serde::{Deserialize, Serialize};

use crate::algebra::GradedLieAlgebra;
use crate::classify::Verdict;
use crate::error::{Error, Result};
use crate::linalg::SVec;
use crate::rational::{format_q, parse_q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketDoc {
    pub left: String,
    pub right: String,
    pub value: Vec<TermDoc>,
}

/// `degrees[i]` is the depth of basis element `i`: it spans part of `g_{-degrees[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub labels: Vec<String>,
    pub degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    pub dims: Vec<usize>,
    pub brackets: Vec<BracketDoc>,
}

pub fn algebra_doc(g: &GradedLieAlgebra) -> AlgebraDoc {
    let brackets = g
        .structure_constants()
        .map(|(&(i, j), v)| BracketDoc {
            left: g.label(i).to_string(),
            right: g.label(j).to_string(),
            value: v.iter().map(|(k, c)| TermDoc { coeff: format_q(c), label: g.label(*k).to_string() }).collect(),
        })
        .collect();
    AlgebraDoc {
        labels: g.labels().to_vec(),
        degrees: g.degrees().to_vec(),
        weights: g.weights().map(|w| w.to_vec()),
        dims: g.dims(),
        brackets,
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<GradedLieAlgebra> {
    let index = |l: &str| {
        doc.labels.iter().position(|x| x == l).ok_or_else(|| Error::UnknownBasisLabel(l.to_string()))
    };
    let mut entries = Vec::new();
    for b in &doc.brackets {
        let mut pairs = Vec::new();
        for t in &b.value {
            let c = parse_q(&t.coeff).ok_or_else(|| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            pairs.push((index(&t.label)?, c));
        }
        entries.push((index(&b.left)?, index(&b.right)?, SVec::from_pairs(pairs)));
    }
    let g = GradedLieAlgebra::from_table(doc.labels.clone(), doc.degrees.clone(), doc.weights.clone(), entries)?;
    if g.dims() != doc.dims {
        return Err(Error::DimensionMismatch { expected: doc.dims.clone(), found: g.dims() });
    }
    Ok(g)
}

pub fn algebra_to_json(g: &GradedLieAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_doc(g)).expect("serializable")
}

pub fn algebra_from_json(s: &str) -> Result<GradedLieAlgebra> {
    let doc: AlgebraDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    algebra_from_doc(&doc)
}

pub fn verdict_to_json(v: &Verdict) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn verdict_from_json(s: &str) -> Result<Verdict> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_model;

    #[test]
    fn half_entries_survive() {
        let g = build_model("A4_DEG").unwrap();
        let s = algebra_to_json(&g);
        assert!(s.contains("\"1/2\""));
        assert!(!s.contains("0.5"));
        assert_eq!(algebra_from_json(&s).unwrap(), g);
    }

    #[test]
    fn verdict_round_trip() {
        let v = crate::classify::classify(&crate::MarkedDiagram::parse("D4[1,3,4]").unwrap()).unwrap();
        let s = verdict_to_json(&v);
        assert!(s.contains("\"canonical_form\""));
        assert_eq!(verdict_from_json(&s).unwrap(), v);
    }

    #[test]
    fn rejects_bad_coefficients() {
        let bad = r#"{"labels":["a","b","c"],"degrees":[1,1,2],"dims":[2,1],
            "brackets":[{"left":"a","right":"b","value":[{"coeff":"0.5","label":"c"}]}]}"#;
        assert!(matches!(algebra_from_json(bad), Err(Error::Parse(_))));
    }
}
