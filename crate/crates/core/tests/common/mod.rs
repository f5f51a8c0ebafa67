//! Independent oracles shared by the integration suites: root systems from
//! explicit coordinates, dense exact ranks, Jacobi and homomorphism checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use flagrig::linalg::SVec;
use flagrig::rational::Q;
use flagrig::{GradedLieAlgebra, RootSystem, TypeLetter};
use num_traits::{One, Zero};

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn letter(c: char) -> TypeLetter {
    TypeLetter::from_char(c).expect("type letter")
}

pub fn spec(t: char, n: usize, marks: &[usize]) -> String {
    let m: Vec<String> = marks.iter().map(|x| x.to_string()).collect();
    format!("{t}{n}[{}]", m.join(","))
}

/// Connected ADE diagrams up to `max_rank`.
pub fn ade_list(max_rank: usize) -> Vec<(char, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push(('A', n));
        if n >= 4 {
            out.push(('D', n));
        }
        if (6..=8).contains(&n) {
            out.push(('E', n));
        }
    }
    out
}

/// Nonempty subsets of `1..=n`.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..1 << n).map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()).collect()
}

/// Positive roots of classical types written in an orthonormal basis and
/// converted to simple-root coordinates (last node short for B, long for C).
pub fn classical_positive_roots(t: char, n: usize) -> BTreeSet<Vec<i64>> {
    let dim = if t == 'A' { n + 1 } else { n };
    let e = |i: usize| {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        v
    };
    let add = |a: &[i64], b: &[i64], s: i64| a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<_>>();
    let mut vecs = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            vecs.push(add(&e(i), &e(j), -1));
            if t != 'A' {
                vecs.push(add(&e(i), &e(j), 1));
            }
        }
        match t {
            'B' => vecs.push(e(i)),
            'C' => vecs.push(add(&e(i), &e(i), 1)),
            _ => {}
        }
    }
    vecs.iter().map(|v| to_simple_coords(t, n, v)).collect()
}

/// Inverts the simple roots `e_i - e_{i+1}` plus the type-specific last one.
fn to_simple_coords(t: char, n: usize, v: &[i64]) -> Vec<i64> {
    let partial: Vec<i64> = v.iter().scan(0, |s, x| {
        *s += x;
        Some(*s)
    }).collect();
    match t {
        'A' | 'B' => partial[..n].to_vec(),
        'C' => {
            let mut c = partial[..n].to_vec();
            assert!(partial[n - 1] % 2 == 0);
            c[n - 1] = partial[n - 1] / 2;
            c
        }
        'D' => {
            let mut c = partial[..n].to_vec();
            let (s_prev, last) = (partial[n - 2], v[n - 1]);
            c[n - 2] = (s_prev - last) / 2;
            c[n - 1] = (s_prev + last) / 2;
            c
        }
        _ => unreachable!(),
    }
}

/// Symmetric Cartan matrix of E_n (n = 6, 7, 8), standard numbering.
pub fn e_cartan(n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut edges = vec![(0, 2), (2, 3), (3, 4), (1, 3)];
    edges.extend((4..n - 1).map(|i| (i, i + 1)));
    for (a, b) in edges {
        c[a][b] = -1;
        c[b][a] = -1;
    }
    c
}

/// Positive roots reached from the simple roots by simple reflections.
pub fn reflection_closure(cartan: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let n = cartan.len();
    let simple = |i: usize| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>();
    let mut seen: BTreeSet<Vec<i64>> = (0..n).map(simple).collect();
    let mut todo: Vec<Vec<i64>> = seen.iter().cloned().collect();
    while let Some(r) = todo.pop() {
        for i in 0..n {
            let p: i64 = (0..n).map(|j| r[j] * cartan[j][i]).sum();
            let mut s = r.clone();
            s[i] -= p;
            if s.iter().all(|&x| x >= 0) && seen.insert(s.clone()) {
                todo.push(s);
            }
        }
    }
    seen
}

pub fn oracle_roots(t: char, n: usize) -> BTreeSet<Vec<i64>> {
    if t == 'E' {
        reflection_closure(&e_cartan(n))
    } else {
        classical_positive_roots(t, n)
    }
}

pub fn root_set(rs: &RootSystem) -> BTreeSet<Vec<i64>> {
    rs.positive_roots().iter().map(|r| r.0.clone()).collect()
}

pub fn deg(r: &[i64], marks: &BTreeSet<usize>) -> i64 {
    marks.iter().map(|&m| r[m]).sum()
}

/// `(type, rank, zero-based marks)` from `X<n>[i,j,...]`.
pub fn parse_spec(s: &str) -> (char, usize, BTreeSet<usize>) {
    let t = s.chars().next().unwrap();
    let open = s.find('[').unwrap();
    let n: usize = s[1..open].parse().unwrap();
    let inner = &s[open + 1..s.len() - 1];
    let marks = inner.split(',').filter(|x| !x.is_empty()).map(|x| x.parse::<usize>().unwrap() - 1).collect();
    (t, n, marks)
}

/// Graded dimensions counted directly from the oracle roots.
pub fn oracle_dims(s: &str) -> Vec<usize> {
    let (t, n, marks) = parse_spec(s);
    let roots = oracle_roots(t, n);
    let top = roots.iter().map(|r| deg(r, &marks)).max().unwrap_or(0);
    (1..=top).map(|k| roots.iter().filter(|r| deg(r, &marks) == k).count()).collect()
}

/// Orthonormal-basis vector of a simply-laced root of type A given in
/// simple-root coordinates.
fn type_a_vector(c: &[i64]) -> Vec<i64> {
    let mut v = vec![0; c.len() + 1];
    for (i, &x) in c.iter().enumerate() {
        v[i] += x;
        v[i + 1] -= x;
    }
    v
}

/// Twists `<γ, α>` for `γ` of degree one with `β`-coefficient one, type A
/// only, computed as inner products in the orthonormal basis.
pub fn oracle_first_layer_splitting(t: char, n: usize, marks: &[usize], beta: usize, alpha: usize) -> Vec<i64> {
    assert_eq!(t, 'A');
    let marks: BTreeSet<usize> = marks.iter().copied().collect();
    let mut a = vec![0; n];
    a[alpha] = 1;
    let av = type_a_vector(&a);
    let mut out: Vec<i64> = oracle_roots(t, n)
        .iter()
        .filter(|r| deg(r, &marks) == 1 && r[beta] == 1)
        .map(|r| type_a_vector(r).iter().zip(&av).map(|(x, y)| x * y).sum())
        .collect();
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

pub fn witt(q: usize, k: usize) -> usize {
    fn mobius(mut n: usize) -> i64 {
        let mut res = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                res = -res;
            }
            p += 1;
        }
        if n > 1 {
            -res
        } else {
            res
        }
    }
    let total: i64 = (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| mobius(k / d) * (q as i64).pow(d as u32)).sum();
    (total / k as i64) as usize
}

/// Rank of dense rational rows by plain elimination.
pub fn rank_dense(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = Q::one() / rows[rank][col].clone();
        let pivot: Vec<Q> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

pub fn dense(v: &SVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, c) in v.iter() {
        out[*i] = c.clone();
    }
    out
}

pub fn jacobi_exhaustive(g: &GradedLieAlgebra) -> bool {
    let n = g.dim();
    let e = SVec::unit;
    for i in 0..n {
        for j in i + 1..n {
            let ij = g.bracket_basis(i, j);
            for k in j + 1..n {
                let s = g
                    .bracket(&ij, &e(k))
                    .add(&g.bracket(&g.bracket_basis(j, k), &e(i)))
                    .add(&g.bracket(&g.bracket_basis(k, i), &e(j)));
                if !s.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// `images[i]` is the image of basis element `i` of `a` in `b`: checks that
/// the map is a degree-preserving bijective Lie homomorphism.
pub fn isomorphism_holds(a: &GradedLieAlgebra, b: &GradedLieAlgebra, images: &[SVec]) -> bool {
    if images.len() != a.dim() || a.dim() != b.dim() {
        return false;
    }
    let rows: Vec<Vec<Q>> = images.iter().map(|v| dense(v, b.dim())).collect();
    if rank_dense(rows) != b.dim() {
        return false;
    }
    let apply = |v: &SVec| {
        let mut acc = SVec::zero();
        for (i, c) in v.iter() {
            acc = acc.add_scaled(&images[*i], c);
        }
        acc
    };
    for (i, img) in images.iter().enumerate() {
        if img.iter().any(|(k, _)| b.degree(*k) != a.degree(i)) {
            return false;
        }
    }
    (0..a.dim()).all(|i| (0..a.dim()).all(|j| apply(&a.bracket_basis(i, j)) == b.bracket(&images[i], &images[j])))
}

/// Dimension of the centre in each degree, from the kernel of `ad`.
pub fn centre_dims(g: &GradedLieAlgebra) -> Vec<usize> {
    let top = (0..g.dim()).map(|i| g.degree(i)).max().unwrap_or(0);
    (1..=top)
        .map(|k| {
            let block: Vec<usize> = (0..g.dim()).filter(|&i| g.degree(i) == k).collect();
            // columns: basis elements of the block; rows: coordinates of [x, e_j]
            let mut cols: Vec<Vec<Q>> = Vec::new();
            for &b in &block {
                let mut col = Vec::new();
                for j in 0..g.dim() {
                    col.extend(dense(&g.bracket_basis(b, j), g.dim()));
                }
                cols.push(col);
            }
            block.len() - rank_dense(cols)
        })
        .collect()
}

/// Expands per-degree local coordinates (as stored by the prolongation
/// solver for degree-0 maps) to global basis vectors.
pub fn derivation_globals(g: &GradedLieAlgebra, images: &[SVec]) -> Vec<SVec> {
    (0..g.dim()).map(|b| localize(g, g.degree(b), &images[b])).collect()
}

fn localize(g: &GradedLieAlgebra, k: usize, v: &SVec) -> SVec {
    let block: Vec<usize> = (0..g.dim()).filter(|&i| g.degree(i) == k).collect();
    SVec::from_pairs(v.iter().map(|(t, c)| (block[*t], c.clone())))
}

fn apply_map(d: &[SVec], v: &SVec) -> SVec {
    let mut acc = SVec::zero();
    for (i, c) in v.iter() {
        acc = acc.add_scaled(&d[*i], c);
    }
    acc
}

pub fn is_derivation(g: &GradedLieAlgebra, d: &[SVec]) -> bool {
    (0..g.dim()).all(|i| {
        (0..g.dim()).all(|j| {
            let (ei, ej) = (SVec::unit(i), SVec::unit(j));
            apply_map(d, &g.bracket_basis(i, j)) == g.bracket(&d[i], &ej).add(&g.bracket(&ei, &d[j]))
        })
    })
}

pub fn independent(maps: &[Vec<SVec>]) -> bool {
    let rows: Vec<Vec<Q>> = maps
        .iter()
        .map(|m| m.iter().flat_map(|v| dense(v, m.len())).collect())
        .collect();
    rank_dense(rows) == maps.len()
}

/// First prolongation identity `φ([x,y]) = φ(x)(y) - φ(y)(x)` for a map
/// sending degree-one elements to combinations of `ders` and degree-k
/// elements (k >= 2) to degree k-1.
pub fn first_prolongation_holds(g: &GradedLieAlgebra, ders: &[Vec<SVec>], images: &[SVec]) -> bool {
    let phi: Vec<Option<SVec>> = (0..g.dim())
        .map(|b| (g.degree(b) >= 2).then(|| localize(g, g.degree(b) - 1, &images[b])))
        .collect();
    let act = |b: usize, v: usize| -> SVec {
        match &phi[b] {
            Some(x) => g.bracket(x, &SVec::unit(v)),
            None => {
                let mut acc = SVec::zero();
                for (t, c) in images[b].iter() {
                    acc = acc.add_scaled(&ders[*t][v], c);
                }
                acc
            }
        }
    };
    (0..g.dim()).all(|i| {
        (0..g.dim()).all(|j| {
            let br = g.bracket_basis(i, j);
            let mut lhs = SVec::zero();
            for (b, c) in br.iter() {
                lhs = lhs.add_scaled(phi[*b].as_ref().expect("brackets have degree >= 2"), c);
            }
            lhs == act(i, j).sub(&act(j, i))
        })
    })
}

/// Diagram automorphisms as zero-based node permutations.
pub fn automorphisms(t: char, n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut out = vec![id.clone()];
    match (t, n) {
        ('A', n) if n >= 2 => out.push((0..n).rev().collect()),
        ('D', 4) => {
            for p in [[0, 3, 2], [2, 0, 3], [2, 3, 0], [3, 0, 2], [3, 2, 0]] {
                out.push(vec![p[0], 1, p[1], p[2]]);
            }
        }
        ('D', n) => {
            let mut s = id.clone();
            s.swap(n - 2, n - 1);
            out.push(s);
        }
        ('E', 6) => out.push(vec![5, 1, 4, 3, 2, 0]),
        _ => {}
    }
    out
}
