//! Degree-by-degree nilpotent quotient of a finitely presented Lie algebra
//! generated in degree one.
//!
//! Layer `d` is spanned by symbols `(b, g)` standing for `[e_b, x_g]` with
//! `e_b` a basis element of degree `d-1`. Every bracket of total degree `d`
//! is rewritten into symbols through `[a,[c',x_j]] = [[a,c'],x_j] - [[a,x_j],c']`;
//! antisymmetry, Jacobi on all triples and the relations of degree `d` then
//! cut the symbol space down. Free (lowest) symbols become the new basis.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;

use crate::algebra::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::free_lie::{standard_factorization, Presentation, Word};
use crate::linalg::{Echelon, SVec};
use crate::rational::Q;

const DEFAULT_BOUND: usize = 64;

/// Computes the full quotient; fails with `UnboundedGrowth` when layers are
/// still nonzero past the bound.
pub fn nilpotent_quotient(p: &Presentation) -> Result<GradedLieAlgebra> {
    let bound = p.max_degree.unwrap_or(DEFAULT_BOUND);
    let mut e = Engine::new(p)?;
    while e.depth < bound {
        if !e.next_layer() {
            return e.finish();
        }
    }
    if e.next_layer() {
        return Err(Error::UnboundedGrowth(bound));
    }
    e.finish()
}

/// Quotient truncated after degree `max_degree` (the free nilpotent
/// quotient of that class when there are no relations).
pub fn nilpotent_quotient_truncated(p: &Presentation, max_degree: usize) -> Result<GradedLieAlgebra> {
    let mut e = Engine::new(p)?;
    while e.depth < max_degree {
        if !e.next_layer() {
            break;
        }
    }
    e.finish()
}

struct Engine<'a> {
    p: &'a Presentation,
    q: usize,
    labels: Vec<String>,
    degrees: Vec<usize>,
    weights: Option<Vec<Vec<i64>>>,
    defs: Vec<Option<(usize, usize)>>,
    brackets: BTreeMap<(usize, usize), SVec>,
    layers: Vec<Vec<usize>>,
    depth: usize,
    eval_memo: HashMap<Word, SVec>,
    short_labels: bool,
}

impl<'a> Engine<'a> {
    fn new(p: &'a Presentation) -> Result<Self> {
        p.validate()?;
        let q = p.num_generators();
        let short_labels = p.labels.iter().all(|l| l.len() > 1 && l.starts_with('v'));
        Ok(Engine {
            p,
            q,
            labels: p.labels.clone(),
            degrees: vec![1; q],
            weights: p.weights.clone(),
            defs: vec![None; q],
            brackets: BTreeMap::new(),
            layers: vec![vec![], (0..q).collect()],
            depth: 1,
            eval_memo: HashMap::new(),
            short_labels,
        })
    }

    fn finish(self) -> Result<GradedLieAlgebra> {
        let entries = self.brackets.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        GradedLieAlgebra::from_table(self.labels, self.degrees, self.weights, entries)
    }

    fn br(&self, i: usize, j: usize) -> SVec {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => SVec::zero(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self.brackets.get(&(j, i)).map(|v| v.neg()).unwrap_or_default(),
        }
    }

    fn br_vec(&self, a: &SVec, b: &SVec) -> SVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                for (k, z) in self.br(*i, *j).iter() {
                    *acc.entry(*k).or_insert_with(Q::zero) += x * y * z;
                }
            }
        }
        SVec::from_pairs(acc)
    }

    /// Value of a Lyndon word of length below the current layer.
    fn eval_low(&mut self, w: &[usize]) -> SVec {
        if w.len() == 1 {
            return SVec::unit(w[0]);
        }
        if let Some(v) = self.eval_memo.get(w) {
            return v.clone();
        }
        let (u, v) = standard_factorization(w).expect("length >= 2");
        let (u, v) = (u.to_vec(), v.to_vec());
        let a = self.eval_low(&u);
        let b = self.eval_low(&v);
        let r = self.br_vec(&a, &b);
        self.eval_memo.insert(w.to_vec(), r.clone());
        r
    }

    fn weight_sum(&self, a: usize, b: usize) -> Option<Vec<i64>> {
        self.weights.as_ref().map(|w| w[a].iter().zip(&w[b]).map(|(x, y)| x + y).collect())
    }

    /// Builds layer `depth + 1`; returns whether it is nonzero.
    fn next_layer(&mut self) -> bool {
        let d = self.depth + 1;
        let prev = self.layers[d - 1].clone();
        let mut sym_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut symbols: Vec<(usize, usize)> = Vec::new();
        for &b in &prev {
            for g in 0..self.q {
                sym_index.insert((b, g), symbols.len());
                symbols.push((b, g));
            }
        }
        let sym_weights: Option<HashSet<Vec<i64>>> =
            self.weights.as_ref().map(|_| symbols.iter().map(|&(b, g)| self.weight_sum(b, g).unwrap()).collect());

        // table[(a, c)] for deg a + deg c = d, filled by increasing deg c.
        let mut table: HashMap<(usize, usize), SVec> = HashMap::new();
        for dc in 1..d {
            let da = d - dc;
            for &c in &self.layers[dc] {
                for &a in &self.layers[da] {
                    let v = match self.defs[c] {
                        None => SVec::unit(sym_index[&(a, c)]),
                        Some((c1, j)) => {
                            // [a,[c1,x_j]] = [[a,c1],x_j] - [[a,x_j],c1]
                            let first = self.br(a, c1).apply(|b| SVec::unit(sym_index[&(b, j)]));
                            let second = self.br(a, j).apply(|k| table[&(k, c1)].clone());
                            first.sub(&second)
                        }
                    };
                    table.insert((a, c), v);
                }
            }
        }
        let expand = |v: &SVec, c: usize, table: &HashMap<(usize, usize), SVec>| v.apply(|k| table[&(k, c)].clone());

        let mut ech = Echelon::new();
        for da in 1..d {
            let dc = d - da;
            if da > dc {
                break;
            }
            for &a in &self.layers[da] {
                for &c in &self.layers[dc] {
                    if da == dc && c < a {
                        continue;
                    }
                    ech.insert(table[&(a, c)].add(&table[&(c, a)]));
                }
            }
        }
        // Jacobi over triples a < b < c of total degree d.
        let basis: Vec<usize> = (0..self.degrees.len()).collect();
        for &a in &basis {
            for &b in basis.iter().filter(|&&b| b > a) {
                let dab = self.degrees[a] + self.degrees[b];
                if dab >= d {
                    continue;
                }
                for &c in &self.layers[d - dab] {
                    if c <= b {
                        continue;
                    }
                    if let Some(sw) = &sym_weights {
                        let w = self.weight_sum(a, b).unwrap();
                        let w: Vec<i64> = w.iter().zip(&self.weights.as_ref().unwrap()[c]).map(|(x, y)| x + y).collect();
                        if !sw.contains(&w) {
                            continue;
                        }
                    }
                    let j = expand(&self.br(a, b), c, &table)
                        .add(&expand(&self.br(b, c), a, &table))
                        .add(&expand(&self.br(c, a), b, &table));
                    ech.insert(j);
                }
            }
        }
        // Relations of degree d.
        for r in self.p.relations.clone() {
            let mut acc = SVec::zero();
            for (w, coef) in r.terms() {
                if w.len() != d {
                    continue;
                }
                let (u, v) = standard_factorization(w).expect("d >= 2");
                let (u, v) = (u.to_vec(), v.to_vec());
                let eu = self.eval_low(&u);
                let ev = self.eval_low(&v);
                let mut term = SVec::zero();
                for (i, x) in eu.iter() {
                    for (k, y) in ev.iter() {
                        term = term.add_scaled(&table[&(*i, *k)], &(x * y));
                    }
                }
                acc = acc.add_scaled(&term, coef);
            }
            ech.insert(acc);
        }

        let free: Vec<usize> = (0..symbols.len()).filter(|s| !ech.is_pivot(*s)).collect();
        if free.is_empty() {
            return false;
        }
        let base = self.degrees.len();
        let new_index: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &s)| (s, base + k)).collect();
        for &s in &free {
            let (b, g) = symbols[s];
            let label = if self.short_labels {
                format!("{}{}", self.labels[b], &self.p.labels[g][1..])
            } else {
                format!("[{},{}]", self.labels[b], self.p.labels[g])
            };
            self.labels.push(label);
            self.degrees.push(d);
            if let Some(w) = self.weight_sum(b, g) {
                self.weights.as_mut().unwrap().push(w);
            }
            self.defs.push(Some((b, g)));
        }
        let to_basis = |v: &SVec| ech.reduce(v).remap(|s| new_index.get(&s).copied());
        let mut new_brackets = Vec::new();
        for da in 1..d {
            let dc = d - da;
            if da > dc {
                break;
            }
            for &a in &self.layers[da] {
                for &c in &self.layers[dc] {
                    if a == c {
                        continue;
                    }
                    let v = to_basis(&table[&(a, c)]);
                    if !v.is_zero() {
                        new_brackets.push(if a < c { ((a, c), v) } else { ((c, a), v.neg()) });
                    }
                }
            }
        }
        self.brackets.extend(new_brackets);
        self.layers.push((base..base + free.len()).collect());
        self.depth = d;
        true
    }
}
