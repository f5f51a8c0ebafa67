//! Finite-dimensional graded nilpotent Lie algebras with exact structure
//! constants. Basis element `i` lives in `g_{-degrees[i]}`; the basis is
//! ordered by degree.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SVec};
use crate::rational::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    labels: Vec<String>,
    degrees: Vec<usize>,
    weights: Option<Vec<Vec<i64>>>,
    brackets: BTreeMap<(usize, usize), SVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiFailure {
    pub triple: (usize, usize, usize),
    pub value: SVec,
}

impl GradedLieAlgebra {
    /// Builds from bracket entries `[e_i, e_j] = v`. Either ordering of a pair
    /// may be given; giving both requires them to agree up to sign.
    pub fn from_table(
        labels: Vec<String>,
        degrees: Vec<usize>,
        weights: Option<Vec<Vec<i64>>>,
        entries: Vec<(usize, usize, SVec)>,
    ) -> Result<Self> {
        let n = labels.len();
        if degrees.len() != n {
            return Err(Error::InvariantViolation("one degree per basis element".into()));
        }
        if degrees.contains(&0) || degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvariantViolation("degrees must be positive and sorted".into()));
        }
        if let Some(w) = &weights {
            if w.len() != n || w.iter().any(|x| x.len() != w[0].len()) {
                return Err(Error::InvariantViolation("one weight per basis element".into()));
            }
        }
        let mut brackets: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
        for (i, j, v) in entries {
            if i >= n || j >= n || v.iter().any(|(k, _)| *k >= n) {
                return Err(Error::InvariantViolation(format!("bracket entry ({i},{j}) out of range")));
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::InvariantViolation(format!("[e{i},e{i}] must vanish")));
                }
                continue;
            }
            let (key, val) = if i < j { ((i, j), v) } else { ((j, i), v.neg()) };
            if let Some(prev) = brackets.get(&key) {
                if *prev != val {
                    return Err(Error::InvariantViolation(format!("inconsistent entries for {key:?}")));
                }
            }
            if !val.is_zero() {
                brackets.insert(key, val);
            }
        }
        let g = GradedLieAlgebra { labels, degrees, weights, brackets };
        g.check_grading()?;
        Ok(g)
    }

    fn check_grading(&self) -> Result<()> {
        for (&(i, j), v) in &self.brackets {
            for (k, _) in v.iter() {
                if self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                    return Err(Error::InvariantViolation(format!(
                        "[{},{}] leaves degree {}",
                        self.labels[i],
                        self.labels[j],
                        self.degrees[i] + self.degrees[j]
                    )));
                }
                if let Some(w) = &self.weights {
                    let s: Vec<i64> = w[i].iter().zip(&w[j]).map(|(a, b)| a + b).collect();
                    if w[*k] != s {
                        return Err(Error::InvariantViolation(format!(
                            "[{},{}] breaks the weight grading",
                            self.labels[i], self.labels[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn abelian(labels: Vec<String>) -> Self {
        let n = labels.len();
        GradedLieAlgebra { labels, degrees: vec![1; n], weights: None, brackets: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownBasisLabel(label.to_string()))
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, i: usize) -> Option<&[i64]> {
        self.weights.as_ref().map(|w| w[i].as_slice())
    }

    pub fn depth(&self) -> usize {
        self.degrees.last().copied().unwrap_or(0)
    }

    /// `dims()[k-1] = dim g_{-k}`.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![0; self.depth()];
        for &k in &self.degrees {
            d[k - 1] += 1;
        }
        d
    }

    pub fn basis_of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    /// Nonzero structure constants, `i < j`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (&(usize, usize), &SVec)> {
        self.brackets.iter()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> SVec {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => SVec::zero(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self.brackets.get(&(j, i)).map(|v| v.neg()).unwrap_or_default(),
        }
    }

    pub fn bracket(&self, a: &SVec, b: &SVec) -> SVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let v = self.bracket_basis(*i, *j);
                if v.is_zero() {
                    continue;
                }
                let c = x * y;
                for (k, z) in v.iter() {
                    *acc.entry(*k).or_insert_with(Q::zero) += &c * z;
                }
            }
        }
        SVec::from_pairs(acc)
    }

    /// `[[..[e_{w0}, e_{w1}], ..], e_{wk}]`.
    pub fn right_normed(&self, word: &[usize]) -> SVec {
        let mut it = word.iter();
        let Some(&first) = it.next() else { return SVec::zero() };
        let mut acc = SVec::unit(first);
        for &g in it {
            acc = self.bracket(&acc, &SVec::unit(g));
        }
        acc
    }

    pub fn jacobi_failures(&self) -> Vec<JacobiFailure> {
        let n = self.dim();
        let depth = self.depth();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.degrees[i] + self.degrees[j] >= depth {
                    continue;
                }
                let ij = self.bracket_basis(i, j);
                for k in j + 1..n {
                    if self.degrees[i] + self.degrees[j] + self.degrees[k] > depth {
                        break;
                    }
                    let t1 = self.bracket(&ij, &SVec::unit(k));
                    let t2 = self.bracket(&self.bracket_basis(j, k), &SVec::unit(i));
                    let t3 = self.bracket(&self.bracket_basis(k, i), &SVec::unit(j));
                    let s = t1.add(&t2).add(&t3);
                    if !s.is_zero() {
                        out.push(JacobiFailure { triple: (i, j, k), value: s });
                    }
                }
            }
        }
        out
    }

    /// Exhaustive check over all triples, plus the grading.
    pub fn check_jacobi(&self) -> bool {
        self.check_grading().is_ok() && self.jacobi_failures().is_empty()
    }

    fn span_dim(vs: &[SVec]) -> usize {
        crate::linalg::rank_of(vs)
    }

    /// Dimensions of `g, [g,g], [g,[g,g]], ...` ending with the first zero.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let all: Vec<SVec> = (0..self.dim()).map(SVec::unit).collect();
        let mut cur = all.clone();
        let mut out = vec![Self::span_dim(&cur)];
        while *out.last().unwrap() > 0 {
            let mut e = Echelon::new();
            let mut next = Vec::new();
            for a in &all {
                for c in &cur {
                    let v = self.bracket(a, c);
                    if e.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            out.push(next.len());
            if next.len() == cur.len() && !next.is_empty() {
                // not nilpotent; stop rather than loop forever
                break;
            }
            cur = next;
        }
        out
    }

    /// Weak derived flag of `S` (degree-one vectors): dims of `V^1 = span S`,
    /// `V^{k+1} = V^k + [V^1, V^k]`, until it stabilizes.
    pub fn derived_subsystem(&self, s: &[SVec]) -> Vec<usize> {
        let mut e = Echelon::new();
        let mut base = Vec::new();
        for v in s {
            if e.insert(v.clone()) {
                base.push(v.clone());
            }
        }
        let mut cur = base.clone();
        let mut out = vec![e.rank()];
        loop {
            let mut added = Vec::new();
            for a in &base {
                for c in &cur {
                    let v = self.bracket(a, c);
                    if e.insert(v.clone()) {
                        added.push(v);
                    }
                }
            }
            if added.is_empty() {
                return out;
            }
            cur.extend(added);
            out.push(e.rank());
        }
    }

    /// Dimension of the centre in each degree.
    pub fn center_dims(&self) -> Vec<usize> {
        (1..=self.depth())
            .map(|k| {
                let basis = self.basis_of_degree(k);
                // Unknowns: coefficients on `basis`; one equation per
                // (other basis element, output coordinate).
                let mut eqs: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
                for (col, &z) in basis.iter().enumerate() {
                    for b in 0..self.dim() {
                        for (o, c) in self.bracket_basis(z, b).iter() {
                            let e = eqs.entry((b, *o)).or_default();
                            *e = e.add(&SVec::single(col, c.clone()));
                        }
                    }
                }
                let rows: Vec<SVec> = eqs.into_values().collect();
                basis.len() - crate::linalg::rank_of(&rows)
            })
            .collect()
    }

    /// Random degree-one element with small integer coefficients.
    pub fn random_degree_one(&self, seed: u64) -> SVec {
        let mut rng = StdRng::seed_from_u64(seed);
        SVec::from_pairs(self.basis_of_degree(1).into_iter().map(|i| (i, q(rng.gen_range(1..=97)))))
    }

    /// Rank of `ad x : g_{-k} -> g_{-k-1}` for `k = 1..depth-1`.
    pub fn ad_ranks(&self, x: &SVec) -> Vec<usize> {
        (1..self.depth())
            .map(|k| {
                let imgs: Vec<SVec> =
                    self.basis_of_degree(k).into_iter().map(|b| self.bracket(x, &SVec::unit(b))).collect();
                Self::span_dim(&imgs)
            })
            .collect()
    }

    /// Generic ad-rank profile: pointwise maximum over a few seeded
    /// degree-one elements.
    pub fn generic_ad_ranks(&self) -> Vec<usize> {
        let mut best = vec![0; self.depth().saturating_sub(1)];
        for seed in [7, 11, 13] {
            for (b, r) in best.iter_mut().zip(self.ad_ranks(&self.random_degree_one(seed))) {
                *b = (*b).max(r);
            }
        }
        best
    }

    /// Rank of the full bracket `g_{-1} x g_{-k} -> g_{-k-1}` for each `k`.
    pub fn bracket_ranks(&self) -> Vec<usize> {
        (1..self.depth())
            .map(|k| {
                let mut imgs = Vec::new();
                for a in self.basis_of_degree(1) {
                    for b in self.basis_of_degree(k) {
                        imgs.push(self.bracket_basis(a, b));
                    }
                }
                Self::span_dim(&imgs)
            })
            .collect()
    }

    /// Sub-algebra on `indices`, which must be closed under brackets.
    pub fn subalgebra(&self, indices: &[usize], degrees: Vec<usize>) -> Result<Self> {
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut entries = Vec::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|(k, _)| !pos.contains_key(k)) {
                    return Err(Error::NotASubalgebra);
                }
                entries.push((a, b, v.remap(|k| pos.get(&k).copied())));
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let weights = self.weights.as_ref().map(|w| indices.iter().map(|&i| w[i].clone()).collect());
        Self::from_table(labels, degrees, weights, entries)
    }

    /// Positive part under a new grading `new_degree[i] >= 0`: the degree-0
    /// part must be a subalgebra, and elements of degree >= 1 are kept,
    /// reordered stably by their new degree.
    pub fn positive_part(&self, new_degree: &[i64]) -> Result<Self> {
        if new_degree.len() != self.dim() || new_degree.iter().any(|&d| d < 0) {
            return Err(Error::InvariantViolation("new grading must be nonnegative".into()));
        }
        for (&(i, j), v) in &self.brackets {
            let s = new_degree[i] + new_degree[j];
            if v.iter().any(|(k, _)| new_degree[*k] != s) {
                return Err(Error::InvariantViolation("brackets do not respect the new grading".into()));
            }
        }
        let zero: Vec<usize> = (0..self.dim()).filter(|&i| new_degree[i] == 0).collect();
        for &i in &zero {
            for &j in &zero {
                if self.bracket_basis(i, j).iter().any(|(k, _)| new_degree[*k] != 0) {
                    return Err(Error::NotASubalgebra);
                }
            }
        }
        let mut keep: Vec<usize> = (0..self.dim()).filter(|&i| new_degree[i] >= 1).collect();
        keep.sort_by_key(|&i| new_degree[i]);
        let degs = keep.iter().map(|&i| new_degree[i] as usize).collect();
        self.subalgebra(&keep, degs)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::InvariantViolation("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Option<Vec<Vec<i64>>>) -> Result<Self> {
        self.weights = weights;
        self.check_grading()?;
        Ok(self)
    }

    /// Direct sum; the basis is re-sorted by degree (stable, `self` first).
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        let mut order: Vec<usize> = (0..n + other.dim()).collect();
        let deg = |i: usize| if i < n { self.degrees[i] } else { other.degrees[i - n] };
        order.sort_by_key(|&i| deg(i));
        let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut entries = Vec::new();
        for (&(i, j), v) in &self.brackets {
            entries.push((pos[&i], pos[&j], v.remap(|k| Some(pos[&k]))));
        }
        for (&(i, j), v) in &other.brackets {
            entries.push((pos[&(i + n)], pos[&(j + n)], v.remap(|k| Some(pos[&(k + n)]))));
        }
        let label = |i: usize| if i < n { self.labels[i].clone() } else { other.labels[i - n].clone() };
        let weights = match (&self.weights, &other.weights) {
            (Some(a), Some(b)) => {
                let (la, lb) = (a.first().map_or(0, |x| x.len()), b.first().map_or(0, |x| x.len()));
                Some(
                    order
                        .iter()
                        .map(|&i| {
                            let mut w = vec![0; la + lb];
                            if i < n {
                                w[..la].copy_from_slice(&a[i]);
                            } else {
                                w[la..].copy_from_slice(&b[i - n]);
                            }
                            w
                        })
                        .collect(),
                )
            }
            _ => None,
        };
        Self::from_table(
            order.iter().map(|&i| label(i)).collect(),
            order.iter().map(|&i| deg(i)).collect(),
            weights,
            entries,
        )
    }

    /// Quotient by the ideal generated by `elems`. Non-homogeneous elements
    /// are handled through the associated graded ideal, keeping the top
    /// (deepest) component of each ideal element.
    pub fn quotient_by_elements(&self, elems: &[SVec]) -> Result<Self> {
        let n = self.dim();
        if elems.iter().flat_map(|v| v.iter()).any(|(k, _)| *k >= n) {
            return Err(Error::InvariantViolation("element outside the algebra".into()));
        }
        // Ideal closure under degree-one brackets.
        let mut ideal = Echelon::new();
        let mut queue: Vec<SVec> = Vec::new();
        for v in elems {
            if ideal.insert(v.clone()) {
                queue.push(v.clone());
            }
        }
        let gens = self.basis_of_degree(1);
        while let Some(v) = queue.pop() {
            for &g in &gens {
                let w = self.bracket(&SVec::unit(g), &v);
                if ideal.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        // Associated graded: top-degree parts of an echelon basis. The basis
        // is sorted by degree, so pivots (largest columns) sit in the top part.
        let mut graded = Echelon::new();
        for r in ideal.rows() {
            let top = r.leading().map(|l| self.degrees[l]).unwrap_or(0);
            let part = SVec::from_pairs(r.iter().filter(|(k, _)| self.degrees[*k] == top).cloned());
            graded.insert(part);
        }
        if graded.rank() != ideal.rank() {
            return Err(Error::InvariantViolation("associated graded lost rank".into()));
        }
        // Two-sided closure against the full basis.
        for p in graded.pivots().collect::<Vec<_>>() {
            let row = SVec::unit(p).sub(&graded.reduce(&SVec::unit(p)));
            for b in 0..n {
                if !graded.contains(&self.bracket(&SVec::unit(b), &row)) {
                    return Err(Error::InvariantViolation("ideal closure failed".into()));
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !graded.is_pivot(i)).collect();
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut entries = Vec::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                let v = graded.reduce(&self.bracket_basis(i, j));
                entries.push((a, b, v.remap(|k| pos.get(&k).copied())));
            }
        }
        Self::from_table(
            keep.iter().map(|&i| self.labels[i].clone()).collect(),
            keep.iter().map(|&i| self.degrees[i]).collect(),
            self.weights.as_ref().map(|w| keep.iter().map(|&i| w[i].clone()).collect()),
            entries,
        )
    }

    /// Weights of basis elements, if any weight occurs more than once.
    pub fn weight_multiplicities(&self) -> Option<BTreeMap<Vec<i64>, usize>> {
        let w = self.weights.as_ref()?;
        let mut m = BTreeMap::new();
        for x in w {
            *m.entry(x.clone()).or_insert(0) += 1;
        }
        Some(m)
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn heis() -> GradedLieAlgebra {
        GradedLieAlgebra::from_table(
            vec!["x".into(), "y".into(), "z".into()],
            vec![1, 1, 2],
            None,
            vec![(0, 1, SVec::unit(2))],
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_basics() {
        let h = heis();
        assert!(h.check_jacobi());
        assert_eq!(h.dims(), vec![2, 1]);
        assert_eq!(h.bracket_basis(1, 0), SVec::unit(2).neg());
        assert_eq!(h.lower_central_series(), vec![3, 1, 0]);
        assert_eq!(h.center_dims(), vec![0, 1]);
        assert_eq!(h.derived_subsystem(&[SVec::unit(0), SVec::unit(1)]), vec![2, 3]);
        assert_eq!(h.derived_subsystem(&[SVec::unit(0)]), vec![1]);
        assert_eq!(h.generic_ad_ranks(), vec![1]);
    }

    #[test]
    fn grading_violation_rejected() {
        let r = GradedLieAlgebra::from_table(
            vec!["x".into(), "y".into(), "z".into()],
            vec![1, 1, 1],
            None,
            vec![(0, 1, SVec::unit(2))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let h = heis();
        assert_eq!(h.quotient_by_elements(&[]).unwrap(), h);
        assert_eq!(h.quotient_by_elements(&[SVec::zero()]).unwrap(), h);
    }

    #[test]
    fn quotient_by_centre() {
        let q = heis().quotient_by_elements(&[SVec::single(2, frac(1, 2))]).unwrap();
        assert_eq!(q.dims(), vec![2]);
        assert!(q.is_abelian());
        // x generates z, so the whole degree-2 part goes too
        let q = heis().quotient_by_elements(&[SVec::unit(0)]).unwrap();
        assert_eq!(q.dims(), vec![1]);
    }

    #[test]
    fn positive_part_needs_subalgebra() {
        let h = heis();
        assert!(h.positive_part(&[0, 0, 1]).is_err());
        let p = h.positive_part(&[0, 1, 1]).unwrap();
        assert_eq!(p.dims(), vec![2]);
        assert_eq!(h.positive_part(&[1, 1, 2]).unwrap(), h);
    }

    #[test]
    fn direct_sum_sorts_by_degree() {
        let s = heis().direct_sum(&GradedLieAlgebra::abelian(vec!["w".into()])).unwrap();
        assert_eq!(s.labels(), &["x", "y", "w", "z"]);
        assert!(s.check_jacobi());
        assert_eq!(s.bracket_basis(0, 1), SVec::unit(3));
    }
}
