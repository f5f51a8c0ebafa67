//! Splitting types of invariant distributions and relative tangent bundles
//! restricted to a minimal rational curve of class `α`: each root `γ` in the
//! relevant support contributes a summand `O(<γ, α>)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::MarkedDiagram;
use crate::root_system::Root;
use crate::serre::parabolic_nilradical;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    /// Twist degrees, sorted descending.
    pub degrees: Vec<i64>,
    pub total: i64,
}

impl SplittingType {
    pub fn from_degrees(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let total = degrees.iter().sum();
        SplittingType { degrees, total }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.degrees.iter().map(|d| format!("O({d})")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

fn require_marked(md: &MarkedDiagram, node: usize) -> Result<()> {
    if node >= md.total_rank() {
        return Err(Error::UnknownNode(node));
    }
    if !md.is_marked(node) {
        return Err(Error::NotMarked(node));
    }
    Ok(())
}

/// `Λ_1(β)`: roots of `I`-degree one with `β`-coefficient one.
pub fn first_layer(md: &MarkedDiagram, beta: usize) -> Result<Vec<Root>> {
    require_marked(md, beta)?;
    Ok(md
        .positive_roots()
        .into_iter()
        .filter(|g| MarkedDiagram::deg_in(md.marked(), g) == 1 && g.0[beta] == 1)
        .collect())
}

/// Root support of the weak derived flag generated by `g_{-1}(β)` inside the
/// root-labelled `g_-(I)`; entry `k-1` is `Λ_k(β)`.
pub fn derived_layers(md: &MarkedDiagram, beta: usize) -> Result<Vec<Vec<Root>>> {
    let start = first_layer(md, beta)?;
    let n = parabolic_nilradical(md)?;
    let g = &n.algebra;
    let base: Vec<usize> = start.iter().map(|r| n.index_of_root(r).expect("root of degree one")).collect();
    let mut seen: BTreeSet<usize> = base.iter().copied().collect();
    let mut layers = vec![base.clone()];
    loop {
        let last = layers.last().unwrap();
        let mut next = BTreeSet::new();
        for &a in &base {
            for &c in last {
                for (t, _) in g.bracket_basis(a, c).iter() {
                    if seen.insert(*t) {
                        next.insert(*t);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next.into_iter().collect());
    }
    Ok(layers.into_iter().map(|l| l.into_iter().map(|i| n.root_of(i).clone()).collect()).collect())
}

fn pairings(md: &MarkedDiagram, roots: &[Root], alpha: usize) -> Result<SplittingType> {
    let ds = roots.iter().map(|g| md.pairing(g, alpha)).collect::<Result<Vec<_>>>()?;
    Ok(SplittingType::from_degrees(ds))
}

pub fn distribution_splitting(md: &MarkedDiagram, beta: usize, k: usize, alpha: usize) -> Result<SplittingType> {
    require_marked(md, alpha)?;
    let layers = derived_layers(md, beta)?;
    let roots = match k {
        0 => return Err(Error::InvariantViolation("distribution layer must be at least 1".into())),
        k => layers.get(k - 1).cloned().unwrap_or_default(),
    };
    pairings(md, &roots, alpha)
}

/// Relative tangent bundle of the contraction attached to `A`: support
/// `{γ : deg_{I∖A} γ = 0, deg_A γ ≥ 1}`.
pub fn relative_fiber_splitting(md: &MarkedDiagram, subset: &BTreeSet<usize>, alpha: usize) -> Result<SplittingType> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &a in subset {
        require_marked(md, a)?;
    }
    if alpha >= md.total_rank() {
        return Err(Error::UnknownNode(alpha));
    }
    let rest: BTreeSet<usize> = md.marked().difference(subset).copied().collect();
    let support: Vec<Root> = md
        .positive_roots()
        .into_iter()
        .filter(|g| MarkedDiagram::deg_in(&rest, g) == 0 && MarkedDiagram::deg_in(subset, g) >= 1)
        .collect();
    pairings(md, &support, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(s: &str) -> MarkedDiagram {
        MarkedDiagram::parse(s).unwrap()
    }

    #[test]
    fn a3_12_distributions() {
        let d = md("A3[1,2]");
        assert_eq!(distribution_splitting(&d, 0, 1, 1).unwrap().degrees, vec![-1]);
        assert_eq!(distribution_splitting(&d, 1, 1, 1).unwrap().degrees, vec![2, 1]);
        let t = distribution_splitting(&d, 1, 1, 0).unwrap();
        assert_eq!((t.degrees.clone(), t.total), (vec![-1, -1], -2));
        assert_eq!(t.to_string(), "O(-1)+O(-1)");
    }

    #[test]
    fn a3_12_relative() {
        let d = md("A3[1,2]");
        let t = relative_fiber_splitting(&d, &BTreeSet::from([1]), 0).unwrap();
        assert_eq!((t.degrees, t.total), (vec![-1, -1], -2));
        let t = relative_fiber_splitting(&d, &BTreeSet::from([0]), 1).unwrap();
        assert_eq!(t.degrees, vec![-1]);
        assert!(matches!(relative_fiber_splitting(&d, &BTreeSet::new(), 0), Err(Error::EmptySubset)));
    }

    #[test]
    fn unmarked_rejected() {
        let d = md("A3[1,2]");
        assert!(matches!(distribution_splitting(&d, 2, 1, 1), Err(Error::NotMarked(2))));
        assert!(matches!(distribution_splitting(&d, 0, 1, 2), Err(Error::NotMarked(2))));
    }

    #[test]
    fn derived_layers_deeper() {
        // D4[2,3,4], beta = central node: layers pick up brackets with itself
        let d = md("D4[2,3,4]");
        let layers = derived_layers(&d, 1).unwrap();
        assert_eq!(layers[0].len(), 2);
        let n = parabolic_nilradical(&d).unwrap();
        let start: Vec<_> = layers[0]
            .iter()
            .map(|r| crate::linalg::SVec::unit(n.index_of_root(r).unwrap()))
            .collect();
        let ranks = n.algebra.derived_subsystem(&start);
        let mut acc = 0;
        let cumulative: Vec<usize> = layers.iter().map(|l| { acc += l.len(); acc }).collect();
        assert_eq!(ranks, cumulative);
    }

    #[test]
    fn self_pairing_gives_two_on_p1_fibres() {
        for s in ["A3[1,2]", "A4[1,3]", "D4[1,3,4]", "D5[2,5]"] {
            let d = md(s);
            for &b in d.marked() {
                let t = distribution_splitting(&d, b, 1, b).unwrap();
                if t.rank() == 1 {
                    assert_eq!(t.degrees, vec![2]);
                }
                assert_eq!(t.degrees.iter().filter(|&&x| x == 2).count(), 1, "{s} node {b}");
            }
        }
    }
}
