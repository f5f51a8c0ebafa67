//! Marked Dynkin diagrams and the combinatorics of the parabolic grading.
//!
//! A [`MarkedDiagram`] is a disjoint union of root systems with a set of
//! marked simple nodes `I`; unmarked nodes form `J`. Node indices are global
//! (components concatenated) and zero-based.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::root_system::{cartan_matrix, Root, RootSystem, TypeLetter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedDiagram {
    components: Vec<RootSystem>,
    offsets: Vec<usize>,
    marked: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims {
    pub dims: Vec<usize>,
    pub total: usize,
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.dims.iter().map(|x| x.to_string()).collect();
        write!(f, "({}) total {}", d.join(","), self.total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbors {
    pub all: Vec<usize>,
    pub in_j: Vec<usize>,
}

/// One factor `G_{J_i}/P_beta` of the variety of lines through a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VmrtFactor {
    pub component: Vec<usize>,
    pub end_node: usize,
    pub diagram: MarkedDiagram,
}

impl MarkedDiagram {
    pub fn new(components: Vec<RootSystem>, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(components.len());
        let mut acc = 0;
        for c in &components {
            offsets.push(acc);
            acc += c.rank();
        }
        let marked: BTreeSet<usize> = marked.into_iter().collect();
        if let Some(&bad) = marked.iter().find(|&&m| m >= acc) {
            return Err(Error::UnknownNode(bad));
        }
        Ok(MarkedDiagram { components, offsets, marked })
    }

    /// Single simple group with one-based marks, e.g. `simple(D, 4, &[2,3,4])`.
    pub fn simple(t: TypeLetter, rank: usize, marks_one_based: &[usize]) -> Result<Self> {
        let rs = RootSystem::new(t, rank)?;
        let mut marks = Vec::new();
        for &m in marks_one_based {
            if m == 0 || m > rank {
                return Err(Error::UnknownNode(m));
            }
            marks.push(m - 1);
        }
        MarkedDiagram::new(vec![rs], marks)
    }

    pub fn components(&self) -> &[RootSystem] {
        &self.components
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).sum()
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn unmarked(&self) -> BTreeSet<usize> {
        (0..self.total_rank()).filter(|n| !self.marked.contains(n)).collect()
    }

    pub fn is_marked(&self, n: usize) -> bool {
        self.marked.contains(&n)
    }

    pub fn picard_number(&self) -> usize {
        self.marked.len()
    }

    pub fn is_simple(&self) -> bool {
        self.components.len() == 1
    }

    pub fn component_of(&self, node: usize) -> Result<(usize, usize)> {
        for (k, c) in self.components.iter().enumerate() {
            let off = self.offsets[k];
            if node >= off && node < off + c.rank() {
                return Ok((k, node - off));
            }
        }
        Err(Error::UnknownNode(node))
    }

    fn check_node(&self, n: usize) -> Result<()> {
        if n < self.total_rank() {
            Ok(())
        } else {
            Err(Error::UnknownNode(n))
        }
    }

    fn check_marked(&self, n: usize) -> Result<()> {
        self.check_node(n)?;
        if self.is_marked(n) {
            Ok(())
        } else {
            Err(Error::NotMarked(n))
        }
    }

    /// Global Cartan entry `<a_i, a_j>`; zero across components.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        let (ci, li) = self.component_of(i).expect("node in range");
        let (cj, lj) = self.component_of(j).expect("node in range");
        if ci != cj {
            0
        } else {
            self.components[ci].cartan()[li][lj]
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan(i, j) != 0
    }

    /// Positive roots of the whole (possibly disconnected) system, as global
    /// coefficient vectors, grouped by component.
    pub fn positive_roots(&self) -> Vec<Root> {
        let n = self.total_rank();
        let mut out = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for r in c.positive_roots() {
                let mut v = vec![0; n];
                v[self.offsets[k]..self.offsets[k] + c.rank()].copy_from_slice(&r.0);
                out.push(Root(v));
            }
        }
        out
    }

    pub fn is_root(&self, r: &Root) -> bool {
        if r.0.len() != self.total_rank() {
            return false;
        }
        let support: Vec<usize> = (0..r.0.len()).filter(|&i| r.0[i] != 0).collect();
        let Some(&first) = support.first() else { return false };
        let (k, _) = self.component_of(first).expect("in range");
        let off = self.offsets[k];
        let rank = self.components[k].rank();
        if support.iter().any(|&i| i < off || i >= off + rank) {
            return false;
        }
        self.components[k].is_root(&Root(r.0[off..off + rank].to_vec()))
    }

    pub fn pairing(&self, beta: &Root, alpha: usize) -> Result<i64> {
        self.check_node(alpha)?;
        if !self.is_root(beta) {
            return Err(Error::NotARoot(beta.0.clone()));
        }
        Ok(self.pairing_unchecked(beta, alpha))
    }

    pub(crate) fn pairing_unchecked(&self, beta: &Root, alpha: usize) -> i64 {
        (0..beta.0.len()).map(|i| beta.0[i] * self.cartan(i, alpha)).sum()
    }

    pub fn deg_in(subset: &BTreeSet<usize>, eta: &Root) -> i64 {
        subset.iter().map(|&a| eta.0[a]).sum()
    }

    pub fn deg(&self, eta: &Root) -> Result<i64> {
        if !self.is_root(eta) {
            return Err(Error::NotARoot(eta.0.clone()));
        }
        Ok(Self::deg_in(&self.marked, eta))
    }

    /// Positive roots of `deg_I = k`.
    pub fn roots_of_degree(&self, k: i64) -> Vec<Root> {
        self.positive_roots()
            .into_iter()
            .filter(|r| Self::deg_in(&self.marked, r) == k)
            .collect()
    }

    pub fn graded_dims(&self) -> GradedDims {
        let mut dims: Vec<usize> = Vec::new();
        for r in self.positive_roots() {
            let d = Self::deg_in(&self.marked, &r);
            if d >= 1 {
                let d = d as usize;
                if dims.len() < d {
                    dims.resize(d, 0);
                }
                dims[d - 1] += 1;
            }
        }
        let total = dims.iter().sum();
        GradedDims { dims, total }
    }

    pub fn space_dim(&self) -> usize {
        self.graded_dims().total
    }

    pub fn neighbors(&self, alpha: usize) -> Result<Neighbors> {
        self.check_node(alpha)?;
        let all: Vec<usize> = (0..self.total_rank()).filter(|&j| self.adjacent(alpha, j)).collect();
        let in_j = all.iter().copied().filter(|j| !self.is_marked(*j)).collect();
        Ok(Neighbors { all, in_j })
    }

    /// Connected components of the subgraph induced on `nodes`, each sorted,
    /// ordered by smallest element.
    pub fn induced_components(&self, nodes: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut out = Vec::new();
        for &s in nodes {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in nodes {
                    if !seen.contains(&y) && self.adjacent(x, y) {
                        seen.insert(y);
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Degree of `node` inside the subgraph induced on `nodes`.
    fn induced_degree(&self, node: usize, nodes: &[usize]) -> usize {
        nodes.iter().filter(|&&y| self.adjacent(node, y)).count()
    }

    /// Components `J_1, ..., J_tau` of the unmarked subdiagram. Every
    /// unmarked neighbor of a marked node must be an end node of its
    /// component.
    pub fn j_components(&self) -> Result<Vec<Vec<usize>>> {
        let comps = self.induced_components(&self.unmarked());
        for &a in &self.marked {
            for b in self.neighbors(a)?.in_j {
                let comp = comps.iter().find(|c| c.contains(&b)).expect("b in J");
                if comp.len() > 1 && self.induced_degree(b, comp) > 1 {
                    return Err(Error::InvariantViolation(format!(
                        "node {} adjacent to marked {} is not an end node of its J-component",
                        b + 1,
                        a + 1
                    )));
                }
            }
        }
        Ok(comps)
    }

    /// Picard-number-one factors of the variety of lines of class `alpha`.
    pub fn vmrt_factors(&self, alpha: usize) -> Result<Vec<VmrtFactor>> {
        self.check_marked(alpha)?;
        let comps = self.j_components()?;
        let mut out = Vec::new();
        for b in self.neighbors(alpha)?.in_j {
            let comp = comps.iter().find(|c| c.contains(&b)).expect("b in J").clone();
            let (diagram, _) = self.induced_diagram(&comp, &[b].into_iter().collect())?;
            out.push(VmrtFactor { component: comp, end_node: b, diagram });
        }
        Ok(out)
    }

    /// Marked nodes `alpha != beta` are J-connected when they lie in one
    /// component of the subdiagram on `J + {alpha, beta}`.
    pub fn is_j_connected(&self, alpha: usize, beta: usize) -> Result<bool> {
        self.check_marked(alpha)?;
        self.check_marked(beta)?;
        let mut nodes = self.unmarked();
        nodes.insert(alpha);
        nodes.insert(beta);
        Ok(self.induced_components(&nodes).iter().any(|c| c.contains(&alpha) && c.contains(&beta)))
    }

    /// Levels `I(1) = {start}`, `I(j+1)` = unplaced marked nodes J-connected
    /// to some node of `I(j)`.
    pub fn level_sets(&self, start: usize) -> Result<Vec<BTreeSet<usize>>> {
        self.check_marked(start)?;
        if self.components.len() != 1 {
            return Err(Error::Disconnected);
        }
        let mut placed: BTreeSet<usize> = [start].into_iter().collect();
        let mut levels: Vec<BTreeSet<usize>> = vec![placed.clone()];
        loop {
            let prev = levels.last().unwrap().clone();
            let mut next = BTreeSet::new();
            for &a in self.marked.difference(&placed) {
                for &p in &prev {
                    if self.is_j_connected(a, p)? {
                        next.insert(a);
                        break;
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            placed.extend(next.iter().copied());
            levels.push(next);
        }
        if placed != self.marked {
            return Err(Error::Disconnected);
        }
        // Each node past the first level has exactly one J-connected partner
        // among earlier levels, and it sits one level down.
        for j in 1..levels.len() {
            for &a in &levels[j] {
                let mut partners = Vec::new();
                for (k, level) in levels.iter().enumerate().take(j) {
                    for &p in level {
                        if self.is_j_connected(a, p)? {
                            partners.push((k, p));
                        }
                    }
                }
                if partners.len() != 1 || partners[0].0 != j - 1 {
                    return Err(Error::InvariantViolation(format!(
                        "node {} has earlier J-connected partners {:?}",
                        a + 1,
                        partners.iter().map(|(k, p)| (k + 1, p + 1)).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(levels)
    }

    /// The marked diagram induced on `nodes` (one connected piece or several),
    /// renumbered to standard numbering, marked at `marks`. Also returns, per
    /// node of the result, the originating global node.
    pub fn induced_diagram(
        &self,
        nodes: &[usize],
        marks: &BTreeSet<usize>,
    ) -> Result<(MarkedDiagram, Vec<usize>)> {
        let set: BTreeSet<usize> = nodes.iter().copied().collect();
        let mut comps = Vec::new();
        let mut origin = Vec::new();
        let mut new_marks = Vec::new();
        for comp in self.induced_components(&set) {
            let (rs, perm) = identify(self, &comp)?;
            let off = origin.len();
            for (std_i, &g) in perm.iter().enumerate() {
                if marks.contains(&g) {
                    new_marks.push(off + std_i);
                }
                origin.push(g);
            }
            comps.push(rs);
        }
        Ok((MarkedDiagram::new(comps, new_marks)?, origin))
    }

    /// Representative of the orbit under diagram automorphisms: each
    /// component takes its lexicographically least marking, and components
    /// are sorted.
    pub fn canonical(&self) -> MarkedDiagram {
        let mut parts: Vec<(TypeLetter, usize, Vec<usize>)> = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            let off = self.offsets[k];
            let local: Vec<usize> = self
                .marked
                .iter()
                .filter(|&&m| m >= off && m < off + c.rank())
                .map(|m| m - off)
                .collect();
            let best = diagram_automorphisms(c.cartan())
                .into_iter()
                .map(|sigma| {
                    let mut v: Vec<usize> = local.iter().map(|&m| sigma[m]).collect();
                    v.sort_unstable();
                    v
                })
                .min()
                .unwrap_or(local);
            parts.push((c.type_letter(), c.rank(), best));
        }
        parts.sort();
        let mut comps = Vec::new();
        let mut marks = Vec::new();
        let mut off = 0;
        for (t, n, m) in parts {
            comps.push(RootSystem::new(t, n).expect("valid"));
            marks.extend(m.into_iter().map(|x| x + off));
            off += n;
        }
        MarkedDiagram::new(comps, marks).expect("valid")
    }

    pub fn canonical_string(&self) -> String {
        self.canonical().to_string()
    }

    /// Local (per-component, zero-based) marks of component `k`.
    pub fn local_marks(&self, k: usize) -> Vec<usize> {
        let off = self.offsets[k];
        let n = self.components[k].rank();
        self.marked.iter().filter(|&&m| m >= off && m < off + n).map(|m| m - off).collect()
    }

    /// Splits into single-component marked diagrams.
    pub fn factors(&self) -> Vec<MarkedDiagram> {
        (0..self.components.len())
            .map(|k| MarkedDiagram::new(vec![self.components[k].clone()], self.local_marks(k)).expect("valid"))
            .collect()
    }

    /// Applies a node permutation within components (`perm[old] = new`);
    /// the permutation must be a diagram automorphism.
    pub fn relabel(&self, perm: &[usize]) -> Result<MarkedDiagram> {
        let n = self.total_rank();
        if perm.len() != n {
            return Err(Error::InvariantViolation("permutation length".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if self.cartan(i, j) != self.cartan(perm[i], perm[j]) {
                    return Err(Error::InvariantViolation("not a diagram automorphism".into()));
                }
            }
        }
        MarkedDiagram::new(self.components.clone(), self.marked.iter().map(|&m| perm[m]))
    }

    /// Parses `D4[2,3,4]`, `A3` (no marks), or unions `A1[1]xC2[1,2]`.
    pub fn parse(s: &str) -> Result<MarkedDiagram> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty diagram spec".into()));
        }
        let mut comps = Vec::new();
        let mut marks = Vec::new();
        let mut off = 0;
        for part in split_union(&s) {
            let (head, tail) = match part.find('[') {
                Some(p) => (&part[..p], Some(&part[p..])),
                None => (part, None),
            };
            let mut chars = head.chars();
            let letter = chars
                .next()
                .and_then(TypeLetter::from_char)
                .ok_or_else(|| Error::Parse(format!("bad type letter in {part:?}")))?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank in {part:?}")))?;
            let rs = RootSystem::new(letter, rank)?;
            let mut local = BTreeSet::new();
            if let Some(t) = tail {
                let inner = t
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("bad marking in {part:?}")))?;
                for tok in inner.split(',').filter(|t| !t.is_empty()) {
                    let m: usize = tok.parse().map_err(|_| Error::Parse(format!("bad index {tok:?}")))?;
                    if m == 0 || m > rank {
                        return Err(Error::Parse(format!("index {m} out of range for {letter}{rank}")));
                    }
                    if !local.insert(m - 1) {
                        return Err(Error::Parse(format!("repeated index {m}")));
                    }
                }
            }
            marks.extend(local.into_iter().map(|m| m + off));
            off += rank;
            comps.push(rs);
        }
        MarkedDiagram::new(comps, marks)
    }
}

fn split_union(s: &str) -> Vec<&str> {
    // 'x' separates components; it never occurs inside a component spec.
    s.split(['x', 'X']).collect()
}

impl fmt::Display for MarkedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            let m: Vec<String> = self.local_marks(k).iter().map(|x| (x + 1).to_string()).collect();
            parts.push(format!("{}[{}]", c.name(), m.join(",")));
        }
        write!(f, "{}", parts.join("x"))
    }
}

/// All permutations `sigma` with `C[sigma i][sigma j] = C[i][j]`.
pub fn diagram_automorphisms(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut out = Vec::new();
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        n: usize,
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        first_only: bool,
    ) -> bool {
        if i == n {
            out.push(sigma.clone());
            return first_only;
        }
        for t in 0..n {
            if used[t] || a[i][i] != b[t][t] {
                continue;
            }
            if (0..i).all(|j| a[i][j] == b[t][sigma[j]] && a[j][i] == b[sigma[j]][t]) {
                sigma[i] = t;
                used[t] = true;
                if rec(i + 1, n, a, b, sigma, used, out, first_only) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }
    rec(0, n, cartan, cartan, &mut sigma, &mut used, &mut out, false);
    out
}

/// Matches a connected node set of `md` against the standard diagrams of the
/// same rank; returns the root system and, per standard node, the global
/// node it corresponds to.
fn identify(md: &MarkedDiagram, nodes: &[usize]) -> Result<(RootSystem, Vec<usize>)> {
    let n = nodes.len();
    let sub: Vec<Vec<i64>> = nodes
        .iter()
        .map(|&i| nodes.iter().map(|&j| md.cartan(i, j)).collect())
        .collect();
    for t in [TypeLetter::A, TypeLetter::D, TypeLetter::E, TypeLetter::B, TypeLetter::C] {
        let Ok(std) = cartan_matrix(t, n) else { continue };
        let mut sigma = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut found = Vec::new();
        // sigma maps standard node -> position in `nodes`
        fn rec(
            i: usize,
            n: usize,
            a: &[Vec<i64>],
            b: &[Vec<i64>],
            sigma: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
        ) -> bool {
            if i == n {
                out.push(sigma.clone());
                return true;
            }
            for t in 0..n {
                if used[t] {
                    continue;
                }
                if (0..i).all(|j| a[i][j] == b[t][sigma[j]] && a[j][i] == b[sigma[j]][t]) {
                    sigma[i] = t;
                    used[t] = true;
                    if rec(i + 1, n, a, b, sigma, used, out) {
                        return true;
                    }
                    used[t] = false;
                }
            }
            false
        }
        if rec(0, n, &std, &sub, &mut sigma, &mut used, &mut found) {
            let perm = found[0].iter().map(|&p| nodes[p]).collect();
            return Ok((RootSystem::new(t, n)?, perm));
        }
    }
    Err(Error::ScopeError(format!("unrecognized subdiagram on nodes {nodes:?}")))
}
