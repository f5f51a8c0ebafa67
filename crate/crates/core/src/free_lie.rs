//! Free Lie algebras over the rationals in the Lyndon basis.
//!
//! A [`FreeElement`] stores coordinates on Lyndon words. Arithmetic goes
//! through the associative envelope: a Lyndon word `w` expands (standard
//! bracketing) to `w + (lexicographically larger words)`, so any Lie
//! polynomial is recovered by peeling off its smallest word.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

pub type Word = Vec<usize>;

/// Lyndon words over `q` letters of each length `1..=max_len` (Duval).
pub fn lyndon_words(q: usize, max_len: usize) -> Vec<Vec<Word>> {
    let mut out = vec![Vec::new(); max_len + 1];
    if q == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        out[w.len()].push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last + 1 == q {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(l) => *l += 1,
        }
    }
    for layer in out.iter_mut() {
        layer.sort();
    }
    out
}

/// Dimension of each homogeneous component `1..=max_deg` of the free Lie
/// algebra on `q` generators, counted on the Lyndon basis.
pub fn hall_basis(q: usize, max_deg: usize) -> Vec<usize> {
    lyndon_words(q, max_deg).into_iter().skip(1).map(|l| l.len()).collect()
}

pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[usize]) -> Option<(&[usize], &[usize])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len()).find(|&i| is_lyndon(&w[i..])).map(|i| (&w[..i], &w[i..]))
}

type Assoc = BTreeMap<Word, Q>;

fn assoc_add(acc: &mut Assoc, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    *acc.entry(w).or_insert_with(Q::zero) += c;
}

fn assoc_clean(mut a: Assoc) -> Assoc {
    a.retain(|_, c| !c.is_zero());
    a
}

fn assoc_commutator(a: &Assoc, b: &Assoc) -> Assoc {
    let mut out = Assoc::new();
    for (u, x) in a {
        for (v, y) in b {
            let c = x * y;
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            assoc_add(&mut out, uv, c.clone());
            let mut vu = v.clone();
            vu.extend_from_slice(u);
            assoc_add(&mut out, vu, -c);
        }
    }
    assoc_clean(out)
}

fn lyndon_expansion(w: &[usize]) -> Assoc {
    match standard_factorization(w) {
        None => [(w.to_vec(), Q::one())].into_iter().collect(),
        Some((u, v)) => assoc_commutator(&lyndon_expansion(u), &lyndon_expansion(v)),
    }
}

/// Element of the free Lie algebra, in Lyndon coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeElement {
    terms: BTreeMap<Word, Q>,
}

impl FreeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(i: usize) -> Self {
        Self::lyndon(vec![i])
    }

    /// The standard bracketing of a Lyndon word.
    pub fn lyndon(w: Word) -> Self {
        assert!(is_lyndon(&w), "not a Lyndon word: {w:?}");
        FreeElement { terms: [(w, Q::one())].into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[usize]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FreeElement { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        for (w, c) in &other.terms {
            *t.entry(w.clone()).or_insert_with(Q::zero) += c;
        }
        t.retain(|_, c| !c.is_zero());
        FreeElement { terms: t }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Word lengths occurring in the support.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Letter counts of each word; `None` if the element mixes multidegrees.
    pub fn multidegree(&self, num_generators: usize) -> Option<Vec<usize>> {
        let mut out: Option<Vec<usize>> = None;
        for w in self.terms.keys() {
            let mut m = vec![0; num_generators];
            for &l in w {
                if l >= num_generators {
                    return None;
                }
                m[l] += 1;
            }
            match &out {
                None => out = Some(m),
                Some(prev) if *prev == m => {}
                Some(_) => return None,
            }
        }
        out.or_else(|| Some(vec![0; num_generators]))
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.iter().copied()).max()
    }

    pub fn to_associative(&self) -> BTreeMap<Word, Q> {
        let mut out = Assoc::new();
        for (w, c) in &self.terms {
            for (u, x) in lyndon_expansion(w) {
                assoc_add(&mut out, u, x * c);
            }
        }
        assoc_clean(out)
    }

    /// Inverse of [`to_associative`](Self::to_associative); fails when the
    /// polynomial is not a Lie element.
    pub fn from_associative(poly: &BTreeMap<Word, Q>) -> Result<Self> {
        let mut rest = assoc_clean(poly.clone());
        let mut terms = BTreeMap::new();
        while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return Err(Error::InvariantViolation(format!("not a Lie polynomial (word {w:?})")));
            }
            for (u, x) in lyndon_expansion(&w) {
                assoc_add(&mut rest, u, -(x * &c));
            }
            rest = assoc_clean(rest);
            terms.insert(w, c);
        }
        Ok(FreeElement { terms })
    }

    pub fn bracket(&self, other: &Self) -> Self {
        let p = assoc_commutator(&self.to_associative(), &other.to_associative());
        Self::from_associative(&p).expect("commutator of Lie elements is Lie")
    }

    /// `(ad v)^k (w)`.
    pub fn adjoint_power(v: &Self, w: &Self, k: usize) -> Self {
        let mut out = w.clone();
        for _ in 0..k {
            out = v.bracket(&out);
        }
        out
    }

    /// Image under the derivation extending `gen_image` on generators.
    pub fn apply_derivation(&self, gen_image: &dyn Fn(usize) -> FreeElement) -> Self {
        let mut out = Assoc::new();
        let images: BTreeMap<usize, Assoc> = self
            .terms
            .keys()
            .flat_map(|w| w.iter().copied())
            .map(|l| (l, gen_image(l).to_associative()))
            .collect();
        for (w, c) in self.to_associative() {
            for i in 0..w.len() {
                for (u, x) in &images[&w[i]] {
                    let mut nw = w[..i].to_vec();
                    nw.extend_from_slice(u);
                    nw.extend_from_slice(&w[i + 1..]);
                    assoc_add(&mut out, nw, x * &c);
                }
            }
        }
        Self::from_associative(&assoc_clean(out)).expect("derivation preserves Lie elements")
    }

    /// Renders with generator names, e.g. `[[x1,x2],x2] - 1/2 [x1,x3]`.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        fn bracketed(w: &[usize], names: &dyn Fn(usize) -> String) -> String {
            match standard_factorization(w) {
                None => names(w[0]),
                Some((u, v)) => format!("[{},{}]", bracketed(u, names), bracketed(v, names)),
            }
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                s.push_str(&format_q(&a));
                s.push(' ');
            }
            s.push_str(&bracketed(w, names));
        }
        s
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| format!("x{}", i + 1)))
    }
}

/// Right-normed bracket `[[..[x_{w0}, x_{w1}], ..], x_{wk}]`.
pub fn right_normed(word: &[usize]) -> FreeElement {
    let mut it = word.iter();
    let Some(&first) = it.next() else { return FreeElement::zero() };
    let mut acc = FreeElement::generator(first);
    for &g in it {
        acc = acc.bracket(&FreeElement::generator(g));
    }
    acc
}

/// Generators of total degree one plus homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub labels: Vec<String>,
    /// Optional weight vector per generator (e.g. a root); relations must be
    /// homogeneous for it.
    pub weights: Option<Vec<Vec<i64>>>,
    pub relations: Vec<FreeElement>,
    pub max_degree: Option<usize>,
}

impl Presentation {
    pub fn new(labels: Vec<String>) -> Self {
        Presentation { labels, weights: None, relations: Vec::new(), max_degree: None }
    }

    pub fn with_weights(mut self, weights: Vec<Vec<i64>>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn relate(&mut self, r: FreeElement) {
        if !r.is_zero() {
            self.relations.push(r);
        }
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn weight_of_word(&self, w: &[usize]) -> Option<Vec<i64>> {
        let ws = self.weights.as_ref()?;
        let mut out = vec![0; ws.first().map_or(0, |v| v.len())];
        for &l in w {
            for (o, x) in out.iter_mut().zip(&ws[l]) {
                *o += x;
            }
        }
        Some(out)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.num_generators();
        if q == 0 {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        if let Some(ws) = &self.weights {
            if ws.len() != q || ws.iter().any(|w| w.len() != ws[0].len()) {
                return Err(Error::InvalidPresentation("weight vectors mismatch generators".into()));
            }
        }
        for (k, r) in self.relations.iter().enumerate() {
            if r.max_letter().is_some_and(|m| m >= q) {
                return Err(Error::InvalidPresentation(format!("relation {k} uses an unknown generator")));
            }
            let degs = r.degrees();
            if degs.len() > 1 {
                return Err(Error::InvalidPresentation(format!("relation {k} is not homogeneous")));
            }
            if degs == [1] {
                return Err(Error::InvalidPresentation(format!(
                    "relation {k} has degree one; drop the generator instead"
                )));
            }
            if self.weights.is_some() {
                let mut seen = None;
                for (w, _) in r.terms() {
                    let wt = self.weight_of_word(w);
                    if seen.is_some() && seen != wt {
                        return Err(Error::InvalidPresentation(format!(
                            "relation {k} is not weight-homogeneous"
                        )));
                    }
                    seen = wt;
                }
            }
        }
        Ok(())
    }
}
