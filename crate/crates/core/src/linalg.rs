//! Sparse exact linear algebra: vectors, incremental row echelon forms,
//! rank and kernel computations over the rationals.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::rational::Q;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SVec(Vec<(usize, Q)>);

impl SVec {
    pub fn zero() -> Self {
        SVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SVec(vec![(i, Q::one())])
    }

    pub fn single(i: usize, c: Q) -> Self {
        if c.is_zero() {
            SVec::zero()
        } else {
            SVec(vec![(i, c)])
        }
    }

    /// Builds from arbitrary (index, coefficient) pairs, merging duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(it: I) -> Self {
        let mut m: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in it {
            *m.entry(i).or_insert_with(Q::zero) += c;
        }
        SVec(m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn from_dense(v: &[Q]) -> Self {
        SVec(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, c) in &self.0 {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.0.iter()
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.0.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Q) -> SVec {
        if c.is_zero() {
            return SVec::zero();
        }
        SVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &SVec, c: &Q) -> SVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + y * c;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SVec(out)
    }

    pub fn add(&self, other: &SVec) -> SVec {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        self.add_scaled(other, &-Q::one())
    }

    pub fn neg(&self) -> SVec {
        SVec(self.0.iter().map(|(i, c)| (*i, -c)).collect())
    }

    /// Reindexes through `f`; entries mapped to `None` are dropped.
    pub fn remap<F: Fn(usize) -> Option<usize>>(&self, f: F) -> SVec {
        SVec::from_pairs(self.0.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))))
    }

    /// Linear extension of `f` from indices to vectors.
    pub fn apply<F: FnMut(usize) -> SVec>(&self, mut f: F) -> SVec {
        let mut acc = SVec::zero();
        for (i, c) in &self.0 {
            acc = acc.add_scaled(&f(*i), c);
        }
        acc
    }
}

/// Incrementally maintained echelon form. Each stored row has a distinct
/// leading (largest) column, normalized to coefficient one.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Stored rows; each has a distinct leading column with coefficient one.
    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    fn reduce_leading(&self, mut v: SVec) -> SVec {
        while let Some(l) = v.leading() {
            match self.pivot_row.get(&l) {
                Some(&r) => {
                    let c = -v.get(l);
                    v = v.add_scaled(&self.rows[r], &c);
                }
                None => break,
            }
        }
        v
    }

    /// Normal form of `v` modulo the row space: no pivot column survives.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut work: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut out: Vec<(usize, Q)> = Vec::new();
        while let Some((col, c)) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.pivot_row.get(&col) {
                Some(&r) => {
                    for (j, x) in self.rows[r].iter() {
                        if *j == col {
                            continue;
                        }
                        let e = work.entry(*j).or_insert_with(Q::zero);
                        *e -= &c * x;
                    }
                }
                None => out.push((col, c)),
            }
        }
        out.reverse();
        SVec(out)
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce_leading(v.clone()).is_zero()
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: SVec) -> bool {
        let v = self.reduce_leading(v);
        match v.leading() {
            None => false,
            Some(l) => {
                let inv = Q::one() / v.get(l);
                let v = v.scale(&inv);
                self.pivot_row.insert(l, self.rows.len());
                self.rows.push(v);
                true
            }
        }
    }

    /// Kernel basis of the row space viewed as a system `row · x = 0` in
    /// `ncols` unknowns; one basis vector per free column.
    pub fn kernel(&self, ncols: usize) -> Vec<SVec> {
        let mut pivots: Vec<usize> = self.pivot_row.keys().copied().collect();
        pivots.sort_unstable();
        let free: Vec<usize> = (0..ncols).filter(|c| !self.is_pivot(*c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x: BTreeMap<usize, Q> = BTreeMap::new();
            x.insert(f, Q::one());
            for &p in &pivots {
                if p < f {
                    continue;
                }
                let row = &self.rows[self.pivot_row[&p]];
                let mut s = Q::zero();
                for (j, c) in row.iter() {
                    if *j != p {
                        if let Some(xj) = x.get(j) {
                            s -= c * xj;
                        }
                    }
                }
                if !s.is_zero() {
                    x.insert(p, s);
                }
            }
            out.push(SVec(x.into_iter().collect()));
        }
        out
    }
}

pub fn rank_of(vectors: &[SVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Kernel of the linear system whose equations are `rows`, in `ncols` unknowns.
pub fn nullspace(rows: &[SVec], ncols: usize) -> Vec<SVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
    }
    e.kernel(ncols)
}

/// Solves `sum_i x_i * columns[i] = target`, if solvable.
pub fn solve_combination(columns: &[SVec], target: &SVec) -> Option<Vec<Q>> {
    // Augment each column with a tag coordinate past the data range to track
    // the combination that produced each echelon row.
    let mut e = Echelon::new();
    let mut tagged_rows: Vec<SVec> = Vec::new();
    for (i, c) in columns.iter().enumerate() {
        // Tags live at low indices so that the leading entry stays on data.
        let shifted = c.remap(|j| Some(j + columns.len()));
        tagged_rows.push(shifted.add(&SVec::unit(i)));
    }
    for r in &tagged_rows {
        e.insert(r.clone());
    }
    let t = target.remap(|j| Some(j + columns.len()));
    let red = e.reduce(&t);
    if red.iter().any(|(j, _)| *j >= columns.len()) {
        return None;
    }
    // t - sum x_i (c_i + tag_i) == red  =>  red holds -x on tags.
    let mut x = vec![Q::zero(); columns.len()];
    for (j, c) in red.iter() {
        x[*j] = -c.clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn v(xs: &[i64]) -> SVec {
        SVec::from_dense(&xs.iter().map(|x| q(*x)).collect::<Vec<_>>())
    }

    #[test]
    fn add_scaled_cancels() {
        let a = v(&[1, 2, 0]);
        let b = v(&[1, 2, 3]);
        assert_eq!(a.sub(&b), v(&[0, 0, -3]));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![v(&[1, 1, 0, 0]), v(&[0, 1, 1, 0]), v(&[1, 2, 1, 0])];
        assert_eq!(rank_of(&rows), 2);
        let ker = nullspace(&rows, 4);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            for r in &rows {
                let dot: Q = r
                    .iter()
                    .map(|(i, c)| c * k.get(*i))
                    .fold(Q::zero(), |a, b| a + b);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn reduce_gives_normal_form() {
        let mut e = Echelon::new();
        e.insert(v(&[1, 0, 2]));
        let r = e.reduce(&v(&[0, 1, 4]));
        // x2 = -x0/2 modulo the row: 4*x2 -> -2*x0
        assert_eq!(r, v(&[-2, 1, 0]));
        assert!(e.contains(&v(&[2, 0, 4])));
    }

    #[test]
    fn combination_solver() {
        let cols = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        let x = solve_combination(&cols, &v(&[2, 3, 5])).unwrap();
        assert_eq!(x, vec![q(2), q(3)]);
        assert!(solve_combination(&cols, &v(&[1, 0, 0])).is_none());
        let x = solve_combination(&[v(&[2])], &v(&[1])).unwrap();
        assert_eq!(x, vec![frac(1, 2)]);
    }
}
