//! Negative nilradicals `g_-(R)` and `g_-(I)` as explicit graded algebras,
//! built from Serre presentations, plus the presentation of `g_-(I)` on its
//! degree-one part.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::free_lie::{FreeElement, Presentation, Word};
use crate::linalg::{Echelon, SVec};
use crate::nilpotent::nilpotent_quotient;
use crate::parabolic::MarkedDiagram;
use crate::root_system::{Root, RootSystem};

/// A nilradical with each basis element tagged by the positive root `γ`
/// such that it spans `g_{-γ}`.
#[derive(Clone, Debug)]
pub struct NilradicalHandle {
    pub diagram: MarkedDiagram,
    pub algebra: GradedLieAlgebra,
    pub roots: Vec<Root>,
}

impl NilradicalHandle {
    pub fn index_of_root(&self, r: &Root) -> Option<usize> {
        self.roots.iter().position(|x| x == r)
    }

    pub fn root_of(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.algebra.dims()
    }
}

pub fn root_label(r: &Root) -> String {
    if r.0.iter().all(|&c| (0..10).contains(&c)) {
        format!("r{}", r.0.iter().map(|c| c.to_string()).collect::<String>())
    } else {
        format!("r{}", r.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("."))
    }
}

fn x(i: usize) -> FreeElement {
    FreeElement::generator(i)
}

/// Serre presentation on all nodes of `md`, generators `v1..vn` with unit
/// weights.
pub fn serre_presentation(md: &MarkedDiagram) -> Presentation {
    let n = md.total_rank();
    let weights = (0..n).map(|i| Root::simple(n, i).0).collect();
    let mut p = Presentation::new((1..=n).map(|i| format!("v{i}")).collect()).with_weights(weights);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let k = (1 - md.cartan(b, a)) as usize;
                p.relate(FreeElement::adjoint_power(&x(a), &x(b), k));
            }
        }
    }
    p.max_degree = Some(md.positive_roots().iter().map(|r| r.height() as usize).max().unwrap_or(1) + 1);
    p
}

/// Checks one basis element per positive root and relabels by root.
fn root_tagged(md: &MarkedDiagram, g: GradedLieAlgebra, expected: Vec<usize>) -> Result<NilradicalHandle> {
    let weights: Vec<Vec<i64>> = g.weights().expect("weighted").to_vec();
    let roots: BTreeSet<Vec<i64>> = md.positive_roots().into_iter().map(|r| r.0).collect();
    let distinct: BTreeSet<&Vec<i64>> = weights.iter().collect();
    if g.dims() != expected || distinct.len() != weights.len() || weights.iter().any(|w| !roots.contains(w)) {
        return Err(Error::DimensionMismatch { expected, found: g.dims() });
    }
    let roots: Vec<Root> = weights.into_iter().map(Root).collect();
    let labels = roots.iter().map(root_label).collect();
    Ok(NilradicalHandle { diagram: md.clone(), algebra: g.with_labels(labels)?, roots })
}

fn full_marking(md: &MarkedDiagram) -> MarkedDiagram {
    MarkedDiagram::new(md.components().to_vec(), 0..md.total_rank()).expect("valid")
}

/// `g_-(R)` graded by height.
pub fn serre_nilradical(rs: &RootSystem) -> Result<NilradicalHandle> {
    let md = MarkedDiagram::new(vec![rs.clone()], 0..rs.rank())?;
    serre_nilradical_of(&md)
}

/// `g_-` of all nodes of a (possibly disconnected) diagram, graded by height.
pub fn serre_nilradical_of(md: &MarkedDiagram) -> Result<NilradicalHandle> {
    let md = full_marking(md);
    let g = nilpotent_quotient(&serre_presentation(&md))?;
    root_tagged(&md, g, md.graded_dims().dims)
}

/// `g_-(I)`: the part of `g_-(R)` of positive `deg_I`, graded by `deg_I`.
pub fn parabolic_nilradical(md: &MarkedDiagram) -> Result<NilradicalHandle> {
    if md.marked().is_empty() {
        return Err(Error::EmptyMarking);
    }
    let full = serre_nilradical_of(md)?;
    let degs: Vec<i64> = full.roots.iter().map(|r| MarkedDiagram::deg_in(md.marked(), r)).collect();
    let algebra = full.algebra.positive_part(&degs)?;
    let roots = algebra.weights().expect("weighted").iter().cloned().map(Root).collect();
    Ok(NilradicalHandle { diagram: md.clone(), algebra, roots })
}

/// Linear span of free Lie elements, tracked in Lyndon coordinates.
struct FreeSpan {
    index: BTreeMap<Word, usize>,
    ech: Echelon,
}

impl FreeSpan {
    fn new() -> Self {
        FreeSpan { index: BTreeMap::new(), ech: Echelon::new() }
    }

    fn insert(&mut self, e: &FreeElement) -> bool {
        let mut pairs = Vec::new();
        for (w, c) in e.terms() {
            let n = self.index.len();
            let k = *self.index.entry(w.clone()).or_insert(n);
            pairs.push((k, c.clone()));
        }
        self.ech.insert(SVec::from_pairs(pairs))
    }
}

/// The relation set presenting `g_-(I)` on `g_{-1}(I)`: both relation
/// families at the simple-root base points, closed under the lowering
/// operators `ad x_b` (`b` unmarked). Both families are highest-weight
/// vectors for the Levi factor, so this closure is the module they generate.
pub fn degree_one_presentation(md: &MarkedDiagram) -> Result<(Presentation, Vec<Root>)> {
    if md.marked().is_empty() {
        return Err(Error::EmptyMarking);
    }
    if md.components().iter().any(|c| !c.type_letter().is_simply_laced()) {
        return Err(Error::ScopeError(format!("{md} is not simply laced")));
    }
    let full = serre_nilradical_of(md)?;
    let g = &full.algebra;
    let n = md.total_rank();
    let gens: Vec<usize> =
        (0..g.dim()).filter(|&i| MarkedDiagram::deg_in(md.marked(), &full.roots[i]) == 1).collect();
    let pos: BTreeMap<usize, usize> = gens.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let gen_roots: Vec<Root> = gens.iter().map(|&i| full.roots[i].clone()).collect();
    let to_free = |v: &SVec| -> FreeElement {
        v.iter().fold(FreeElement::zero(), |acc, (i, c)| acc.add(&x(pos[i]).scale(c)))
    };
    let simple = |a: usize| pos[&full.index_of_root(&Root::simple(n, a)).expect("simple root")];

    let mut rels: Vec<FreeElement> = Vec::new();
    for &a1 in md.marked() {
        for &a2 in md.marked() {
            if a1 != a2 {
                let k = (1 - md.cartan(a2, a1)) as usize;
                rels.push(FreeElement::adjoint_power(&x(simple(a1)), &x(simple(a2)), k));
            }
        }
    }
    for &a in md.marked() {
        for b in md.neighbors(a)?.in_j {
            let ia = full.index_of_root(&Root::simple(n, a)).unwrap();
            let ib = full.index_of_root(&Root::simple(n, b)).unwrap();
            let u = to_free(&g.bracket_basis(ib, ia));
            let k = (-md.cartan(b, a)) as usize;
            rels.push(FreeElement::adjoint_power(&x(simple(a)), &u, k));
        }
    }
    // Lowering operators of the Levi factor, as derivations of the free algebra.
    let lowering: Vec<Vec<FreeElement>> = md
        .unmarked()
        .iter()
        .map(|&b| {
            let ib = full.index_of_root(&Root::simple(n, b)).unwrap();
            gens.iter().map(|&gi| to_free(&g.bracket_basis(ib, gi))).collect()
        })
        .collect();
    let mut span = FreeSpan::new();
    let mut queue = Vec::new();
    for r in rels {
        if span.insert(&r) {
            queue.push(r);
        }
    }
    let mut all = queue.clone();
    while let Some(r) = queue.pop() {
        for images in &lowering {
            let d = r.apply_derivation(&|k| images[k].clone());
            if !d.is_zero() && span.insert(&d) {
                queue.push(d.clone());
                all.push(d);
            }
        }
    }
    let mut p = Presentation::new(gen_roots.iter().map(root_label).collect())
        .with_weights(gen_roots.iter().map(|r| r.0.clone()).collect());
    for r in all {
        p.relate(r);
    }
    p.max_degree = Some(md.graded_dims().dims.len() + 1);
    Ok((p, gen_roots))
}

/// Quotient of the free algebra on `g_{-1}(I)` by [`degree_one_presentation`];
/// its dimensions must agree with [`parabolic_nilradical`].
pub fn presentation_quotient(md: &MarkedDiagram) -> Result<GradedLieAlgebra> {
    let (p, _) = degree_one_presentation(md)?;
    let expected = md.graded_dims().dims;
    let g = match nilpotent_quotient(&p) {
        Ok(g) => g,
        Err(Error::UnboundedGrowth(_)) => {
            let g = crate::nilpotent::nilpotent_quotient_truncated(&p, expected.len() + 1)?;
            return Err(Error::DimensionMismatch { expected, found: g.dims() });
        }
        Err(e) => return Err(e),
    };
    if g.dims() != expected {
        return Err(Error::DimensionMismatch { expected, found: g.dims() });
    }
    let labels = g.weights().unwrap().iter().map(|w| root_label(&Root(w.clone()))).collect();
    g.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::TypeLetter;

    fn md(s: &str) -> MarkedDiagram {
        MarkedDiagram::parse(s).unwrap()
    }

    #[test]
    fn serre_height_dims() {
        let a3 = serre_nilradical(&RootSystem::new(TypeLetter::A, 3).unwrap()).unwrap();
        assert_eq!(a3.dims(), vec![3, 2, 1]);
        let d4 = serre_nilradical(&RootSystem::new(TypeLetter::D, 4).unwrap()).unwrap();
        assert_eq!(d4.dims(), vec![4, 3, 3, 1, 1]);
        assert!(d4.algebra.check_jacobi());
        let b4 = serre_nilradical(&RootSystem::new(TypeLetter::B, 4).unwrap()).unwrap();
        assert_eq!(b4.algebra.dim(), 16);
    }

    #[test]
    fn brackets_follow_root_addition() {
        let d4 = serre_nilradical(&RootSystem::new(TypeLetter::D, 4).unwrap()).unwrap();
        for i in 0..d4.algebra.dim() {
            for j in 0..d4.algebra.dim() {
                let v = d4.algebra.bracket_basis(i, j);
                let s = d4.roots[i].add(&d4.roots[j]);
                if !v.is_zero() {
                    assert_eq!(v.nnz(), 1);
                    assert_eq!(d4.roots[v.entries()[0].0], s);
                }
            }
        }
    }

    #[test]
    fn parabolic_examples() {
        let h = parabolic_nilradical(&md("D4[2,3,4]")).unwrap();
        assert_eq!(h.dims(), vec![4, 4, 2, 1]);
        let h = parabolic_nilradical(&md("D4[2,3]")).unwrap();
        assert_eq!(h.dims(), vec![5, 4, 1]);
        let mut deg1: Vec<Vec<i64>> = h.roots[..5].iter().map(|r| r.0.clone()).collect();
        deg1.sort();
        assert_eq!(deg1, vec![vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 1, 0, 1], vec![1, 1, 0, 0], vec![1, 1, 0, 1]]);
        assert!(matches!(parabolic_nilradical(&md("A3[]")), Err(Error::EmptyMarking)));
        let full = parabolic_nilradical(&md("A4[1,2,3,4]")).unwrap();
        let serre = serre_nilradical(&RootSystem::new(TypeLetter::A, 4).unwrap()).unwrap();
        assert_eq!(full.algebra, serre.algebra);
    }

    #[test]
    fn degree_one_presentation_examples() {
        assert_eq!(presentation_quotient(&md("A3[1,2]")).unwrap().dims(), vec![3, 2]);
        assert_eq!(presentation_quotient(&md("A4[2,3,4]")).unwrap().dims(), vec![4, 3, 2]);
        assert!(matches!(presentation_quotient(&md("B3[1]")), Err(Error::ScopeError(_))));
    }
}
