//! Degree-0 derivations and Tanaka prolongation of a graded nilpotent Lie
//! algebra `g_-`.
//!
//! An element of `l_i` maps each basis element `b` of degree `k` into
//! `W_{i-k}`, where `W_m = g_m` for `m < 0` and `W_m = l_m` for `m >= 0`.
//! Elements of `W_m` are stored as coordinates: on the `g` basis when
//! `m < 0`, on the basis of `l_m` otherwise.

use std::collections::BTreeMap;

use crate::algebra::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{nullspace, SVec};
use crate::parabolic::MarkedDiagram;
use crate::root_system::TypeLetter;
use crate::serre::parabolic_nilradical;

/// One element of `l_step`: `images[b]` lies in `W_{step - deg b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub step: usize,
    pub images: Vec<SVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongationStep {
    pub step: usize,
    pub basis: Vec<GradedMap>,
}

impl ProlongationStep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub type DerivationSpace = ProlongationStep;

/// Basis of `W_m` as a count.
fn w_dim(g: &GradedLieAlgebra, lower: &[ProlongationStep], m: i64) -> usize {
    if m < 0 {
        g.basis_of_degree((-m) as usize).len()
    } else {
        lower.get(m as usize).map_or(0, |s| s.dim())
    }
}

/// Position of a `g` basis element inside its degree block.
fn block_positions(g: &GradedLieAlgebra) -> (Vec<usize>, BTreeMap<usize, Vec<usize>>) {
    let mut pos = vec![0; g.dim()];
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in pos.iter_mut().enumerate() {
        let b = blocks.entry(g.degree(i)).or_default();
        *p = b.len();
        b.push(i);
    }
    (pos, blocks)
}

/// `w(v)` for `w` in `W_m` (local coordinates) and `v` a basis element of `g`;
/// the result is in `W_{m - deg v}`, local coordinates.
fn act(g: &GradedLieAlgebra, lower: &[ProlongationStep], m: i64, w: &SVec, v: usize) -> SVec {
    let (pos, blocks) = block_positions(g);
    act_with(g, lower, m, w, v, &pos, &blocks)
}

fn act_with(
    g: &GradedLieAlgebra,
    lower: &[ProlongationStep],
    m: i64,
    w: &SVec,
    v: usize,
    pos: &[usize],
    blocks: &BTreeMap<usize, Vec<usize>>,
) -> SVec {
    if m < 0 {
        let global = w.remap(|t| Some(blocks[&((-m) as usize)][t]));
        g.bracket(&global, &SVec::unit(v)).remap(|k| Some(pos[k]))
    } else {
        let level = &lower[m as usize];
        w.apply(|t| level.basis[t].images[v].clone())
    }
}

fn check_lower(lower: &[ProlongationStep], step: usize) -> Result<()> {
    for j in 0..step {
        match lower.get(j) {
            Some(s) if s.step == j => {}
            _ => return Err(Error::MissingLowerStep(j)),
        }
    }
    Ok(())
}

/// Solves for `l_step` given `l_0 .. l_{step-1}`.
pub fn prolong_step(g: &GradedLieAlgebra, lower: &[ProlongationStep], step: usize) -> Result<ProlongationStep> {
    check_lower(lower, step)?;
    let lower = &lower[..step];
    let (pos, blocks) = block_positions(g);
    let target = |b: usize| step as i64 - g.degree(b) as i64;
    // Unknown (b, t): coordinate t of the image of b.
    let mut offset = vec![0; g.dim() + 1];
    for b in 0..g.dim() {
        offset[b + 1] = offset[b] + w_dim(g, lower, target(b));
    }
    let nvars = offset[g.dim()];
    let mut rows: Vec<SVec> = Vec::new();
    for v1 in 0..g.dim() {
        for v2 in v1 + 1..g.dim() {
            // phi([v1,v2]) - phi(v1)(v2) + phi(v2)(v1) = 0, one row per
            // output coordinate in W_{step - k1 - k2}.
            let mut eq: BTreeMap<usize, SVec> = BTreeMap::new();
            let mut push = |o: usize, var: usize, c: &crate::rational::Q| {
                let e = eq.entry(o).or_default();
                *e = e.add(&SVec::single(var, c.clone()));
            };
            for (b, c) in g.bracket_basis(v1, v2).iter() {
                for t in 0..(offset[b + 1] - offset[*b]) {
                    push(t, offset[*b] + t, c);
                }
            }
            let m1 = target(v1);
            for t in 0..(offset[v1 + 1] - offset[v1]) {
                for (o, c) in act_with(g, lower, m1, &SVec::unit(t), v2, &pos, &blocks).iter() {
                    push(*o, offset[v1] + t, &-c.clone());
                }
            }
            let m2 = target(v2);
            for t in 0..(offset[v2 + 1] - offset[v2]) {
                for (o, c) in act_with(g, lower, m2, &SVec::unit(t), v1, &pos, &blocks).iter() {
                    push(*o, offset[v2] + t, c);
                }
            }
            rows.extend(eq.into_values().filter(|r| !r.is_zero()));
        }
    }
    let basis = nullspace(&rows, nvars)
        .into_iter()
        .map(|sol| GradedMap {
            step,
            images: (0..g.dim())
                .map(|b| {
                    SVec::from_pairs(
                        sol.iter()
                            .filter(|(k, _)| *k >= offset[b] && *k < offset[b + 1])
                            .map(|(k, c)| (k - offset[b], c.clone())),
                    )
                })
                .collect(),
        })
        .collect();
    Ok(ProlongationStep { step, basis })
}

pub fn graded_derivations_deg0(g: &GradedLieAlgebra) -> DerivationSpace {
    prolong_step(g, &[], 0).expect("no lower steps needed")
}

/// Re-checks the defining identity of every basis element of `s` on all
/// pairs, independently of the assembled linear system.
pub fn verify_step(g: &GradedLieAlgebra, lower: &[ProlongationStep], s: &ProlongationStep) -> bool {
    let target = |b: usize| s.step as i64 - g.degree(b) as i64;
    s.basis.iter().all(|phi| {
        phi.images.len() == g.dim()
            && (0..g.dim()).all(|v1| {
                (0..g.dim()).all(|v2| {
                    let br = g.bracket_basis(v1, v2);
                    // phi([v1,v2]) in local coordinates of W_{step - k1 - k2}
                    let lhs = br.apply(|b| phi.images[b].clone());
                    let rhs = act(g, lower, target(v1), &phi.images[v1], v2)
                        .sub(&act(g, lower, target(v2), &phi.images[v2], v1));
                    lhs == rhs
                })
            })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerRow {
    pub step: usize,
    pub computed: usize,
    pub root_data: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub diagram: String,
    pub rows: Vec<TowerRow>,
    /// Inputs where degree-0 derivations may exceed `g_0`.
    pub exception: bool,
}

impl TowerReport {
    pub fn mismatches(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.computed != r.root_data).map(|r| r.step).collect()
    }
}

pub fn is_projective_space(md: &MarkedDiagram) -> bool {
    md.is_simple() && {
        let c = &md.components()[0];
        let marks: Vec<usize> = md.marked().iter().copied().collect();
        c.type_letter() == TypeLetter::A && (marks == [0] || marks == [c.rank() - 1])
    }
}

/// `(A_m, {a_1, a_i})` and `(A_m, {a_i, a_m})`.
pub fn is_derivation_exception(md: &MarkedDiagram) -> bool {
    md.is_simple()
        && md.components()[0].type_letter() == TypeLetter::A
        && md.marked().len() == 2
        && {
            let n = md.components()[0].rank();
            md.is_marked(0) || md.is_marked(n - 1)
        }
}

/// Root-data dimension of `g_k(I)`: `rank + |Lambda_0|` at `k = 0`.
pub fn root_data_dim(md: &MarkedDiagram, k: usize) -> usize {
    let count = md.positive_roots().iter().filter(|r| MarkedDiagram::deg_in(md.marked(), r) == k as i64).count();
    if k == 0 {
        md.total_rank() + 2 * count
    } else {
        count
    }
}

pub fn prolongation_tower(md: &MarkedDiagram, max_step: usize) -> Result<TowerReport> {
    if md.marked().is_empty() {
        return Err(Error::EmptyMarking);
    }
    if md.components().iter().any(|c| !c.type_letter().is_simply_laced()) {
        return Err(Error::ScopeError(format!("{md} is not simply laced")));
    }
    if is_projective_space(md) {
        return Err(Error::ProjectiveSpaceInput(md.to_string()));
    }
    let g = parabolic_nilradical(md)?.algebra;
    let mut steps: Vec<ProlongationStep> = Vec::new();
    let mut rows = Vec::new();
    for k in 0..=max_step {
        let s = if steps.last().is_some_and(|s| s.dim() == 0) {
            ProlongationStep { step: k, basis: vec![] }
        } else {
            prolong_step(&g, &steps, k)?
        };
        let verified = verify_step(&g, &steps, &s);
        rows.push(TowerRow { step: k, computed: s.dim(), root_data: root_data_dim(md, k), verified });
        steps.push(s);
    }
    Ok(TowerReport { diagram: md.to_string(), rows, exception: is_derivation_exception(md) })
}

/// Dimensions of `l_0, ..., l_max` for an arbitrary algebra.
pub fn tower_dims(g: &GradedLieAlgebra, max_step: usize) -> Result<Vec<usize>> {
    let mut steps: Vec<ProlongationStep> = Vec::new();
    for k in 0..=max_step {
        let s = prolong_step(g, &steps, k)?;
        if !verify_step(g, &steps, &s) {
            return Err(Error::InvariantViolation(format!("prolongation step {k} failed re-verification")));
        }
        steps.push(s);
    }
    Ok(steps.iter().map(|s| s.dim()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(s: &str) -> MarkedDiagram {
        MarkedDiagram::parse(s).unwrap()
    }

    #[test]
    fn one_dimensional_abelian() {
        let g = GradedLieAlgebra::abelian(vec!["x".into()]);
        assert_eq!(tower_dims(&g, 3).unwrap(), vec![1, 1, 1, 1]);
        let g = GradedLieAlgebra::abelian(vec!["x".into(), "y".into()]);
        // gl(2), then S^2 ⊗ dual: n^2(n+1)/2 = 6
        assert_eq!(tower_dims(&g, 1).unwrap(), vec![4, 6]);
    }

    #[test]
    fn d4_234() {
        let g = parabolic_nilradical(&md("D4[2,3,4]")).unwrap().algebra;
        let d0 = graded_derivations_deg0(&g);
        assert_eq!(d0.dim(), 6);
        assert!(verify_step(&g, &[], &d0));
        let l1 = prolong_step(&g, std::slice::from_ref(&d0), 1).unwrap();
        assert_eq!(l1.dim(), 4);
        assert!(verify_step(&g, &[d0], &l1));
    }

    #[test]
    fn a4_234_matches_root_data() {
        let g = parabolic_nilradical(&md("A4[2,3,4]")).unwrap().algebra;
        assert_eq!(graded_derivations_deg0(&g).dim(), 6);
    }

    #[test]
    fn missing_lower() {
        let g = GradedLieAlgebra::abelian(vec!["x".into()]);
        assert!(matches!(prolong_step(&g, &[], 1), Err(Error::MissingLowerStep(0))));
    }

    #[test]
    fn towers() {
        let r = prolongation_tower(&md("A3[1,2]"), 2).unwrap();
        let rd: Vec<usize> = r.rows.iter().map(|x| x.root_data).collect();
        assert_eq!(rd, vec![5, 3, 2]);
        assert!(r.exception);
        assert!(matches!(prolongation_tower(&md("A4[1]"), 1), Err(Error::ProjectiveSpaceInput(_))));
        assert!(matches!(prolongation_tower(&md("A4[4]"), 1), Err(Error::ProjectiveSpaceInput(_))));
        let r = prolongation_tower(&md("A3[1,2,3]"), 1).unwrap();
        assert_eq!(r.rows[0].root_data, 3);
        assert_eq!(r.rows[0].computed, 3);
    }
}
