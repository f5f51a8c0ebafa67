//! Finite root systems of types A, B, C, D, E built from Cartan matrices.
//!
//! Nodes are numbered as in Bourbaki: `A_n` is the chain `1..n`; `B_n` and
//! `C_n` are chains whose last node is the short (resp. long) one; `D_n` is
//! the chain `1..n-2` with `n-1` and `n` attached to `n-2`; `E_n` is the
//! chain `1,3,4,...,n` with node `2` attached to node `4`. Indices are
//! zero-based in the API and one-based in text.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
}

impl TypeLetter {
    pub fn from_char(c: char) -> Option<TypeLetter> {
        match c.to_ascii_uppercase() {
            'A' => Some(TypeLetter::A),
            'B' => Some(TypeLetter::B),
            'C' => Some(TypeLetter::C),
            'D' => Some(TypeLetter::D),
            'E' => Some(TypeLetter::E),
            _ => None,
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, TypeLetter::A | TypeLetter::D | TypeLetter::E)
    }
}

impl fmt::Display for TypeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            TypeLetter::A => 'A',
            TypeLetter::B => 'B',
            TypeLetter::C => 'C',
            TypeLetter::D => 'D',
            TypeLetter::E => 'E',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootLength {
    Long,
    Short,
}

/// Coefficient vector of a root over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    /// `a1+a2+2a3` style rendering with one-based indices.
    pub fn pretty(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("a{}", i + 1)),
                -1 => parts.push(format!("-a{}", i + 1)),
                _ => parts.push(format!("{c}a{}", i + 1)),
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if p.starts_with('-') {
                s.push_str(p);
            } else {
                s.push('+');
                s.push_str(p);
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    type_letter: TypeLetter,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Root>,
    lengths: Vec<RootLength>,
    index: HashMap<Vec<i64>, usize>,
}

/// Cartan matrix with entry `[i][j] = <a_i, a_j> = 2(a_i,a_j)/(a_j,a_j)`.
pub fn cartan_matrix(t: TypeLetter, n: usize) -> Result<Vec<Vec<i64>>> {
    let ok = match t {
        TypeLetter::A => n >= 1,
        TypeLetter::B | TypeLetter::C => n >= 2,
        TypeLetter::D => n >= 4,
        TypeLetter::E => (6..=8).contains(&n),
    };
    if !ok {
        return Err(Error::InadmissibleType(format!("{t}{n}")));
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match t {
        TypeLetter::A | TypeLetter::B | TypeLetter::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        TypeLetter::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        TypeLetter::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
    }
    match t {
        TypeLetter::B => c[n - 2][n - 1] = -2,
        TypeLetter::C => c[n - 1][n - 2] = -2,
        _ => {}
    }
    Ok(c)
}

impl RootSystem {
    pub fn new(t: TypeLetter, rank: usize) -> Result<RootSystem> {
        let cartan = cartan_matrix(t, rank)?;
        let lengths = (0..rank)
            .map(|i| match (t, i + 1 == rank) {
                (TypeLetter::B, true) => RootLength::Short,
                (TypeLetter::C, false) => RootLength::Short,
                _ => RootLength::Long,
            })
            .collect();
        let positive_roots = enumerate_positive_roots(&cartan);
        let index = positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.0.clone(), i))
            .collect();
        Ok(RootSystem { type_letter: t, rank, cartan, positive_roots, lengths, index })
    }

    pub fn type_letter(&self) -> TypeLetter {
        self.type_letter
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_letter, self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots sorted by height, then lexicographically.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn simple_root_length(&self, i: usize) -> RootLength {
        self.lengths[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank).filter(|&j| self.adjacent(i, j)).collect()
    }

    pub fn positive_index(&self, r: &Root) -> Option<usize> {
        self.index.get(&r.0).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        r.0.len() == self.rank
            && (self.index.contains_key(&r.0) || self.index.contains_key(&r.neg().0))
    }

    fn check_root(&self, r: &Root) -> Result<()> {
        if self.is_root(r) {
            Ok(())
        } else {
            Err(Error::NotARoot(r.0.clone()))
        }
    }

    /// `<beta, a_alpha>`, linear in `beta`; no root check.
    pub fn pairing_unchecked(&self, beta: &[i64], alpha: usize) -> i64 {
        beta.iter().enumerate().map(|(i, b)| b * self.cartan[i][alpha]).sum()
    }

    pub fn cartan_pairing(&self, beta: &Root, alpha: usize) -> Result<i64> {
        if alpha >= self.rank {
            return Err(Error::UnknownNode(alpha));
        }
        self.check_root(beta)?;
        Ok(self.pairing_unchecked(&beta.0, alpha))
    }

    pub fn root_arithmetic(&self, gamma: &Root, delta: &Root) -> Result<RootSum> {
        self.check_root(gamma)?;
        self.check_root(delta)?;
        let s = gamma.add(delta);
        Ok(RootSum { sum_is_root: self.is_root(&s), height: gamma.height() })
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("nonempty")
    }

    /// Number of positive roots per height, starting at height 1.
    pub fn height_profile(&self) -> Vec<usize> {
        let max = self.highest_root().height() as usize;
        let mut out = vec![0; max];
        for r in &self.positive_roots {
            out[r.height() as usize - 1] += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    pub sum_is_root: bool,
    pub height: i64,
}

/// Height-by-height closure using root strings: `g + a_i` is a root iff
/// `p - <g, a_i> > 0`, where `p` is the length of the downward `a_i`-string.
fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let mut known: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut layers: Vec<Vec<Vec<i64>>> = vec![(0..n).map(|i| Root::simple(n, i).0).collect()];
    for r in &layers[0] {
        known.insert(r.clone(), ());
    }
    loop {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for g in layers.last().unwrap() {
            for i in 0..n {
                let mut p = 0;
                let mut down = g.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| g[j] * cartan[j][i]).sum();
                if p - pair > 0 {
                    let mut up = g.clone();
                    up[i] += 1;
                    if !known.contains_key(&up) {
                        known.insert(up.clone(), ());
                        next.push(up);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    let mut all: Vec<Root> = layers.into_iter().flatten().map(Root).collect();
    all.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.0.cmp(&a.0)));
    all
}
