//! Finite truncated simplicial sets.
//!
//! A `TruncatedSSet` stores one finite cell set per dimension `0..=bound`,
//! with every face and degeneracy map as a dense table. Degenerate cells are
//! stored explicitly; décalage and ordinal sum re-index degeneracies
//! nontrivially, so a nondegenerate-only representation would not survive
//! those functors.

use crate::error::{Error, Result};
use crate::report::Report;
use std::collections::BTreeMap;

/// Finite simplicial set truncated at dimension `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSSet {
    pub bound: usize,
    /// Number of cells in each dimension `0..=bound`.
    pub sizes: Vec<usize>,
    /// `faces[m][i][c]` = `d_i c` for `1 <= m <= bound`, `0 <= i <= m`.
    /// `faces[0]` is empty.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degens[m][i][c]` = `s_i c` for `0 <= m < bound`, `0 <= i <= m`.
    pub degens: Vec<Vec<Vec<usize>>>,
    /// Optional human-readable cell names per dimension.
    pub labels: Vec<Option<Vec<String>>>,
}

/// A map of truncated simplicial sets, given levelwise on cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    /// Common bound on which the map is defined.
    pub bound: usize,
    /// `levels[m][c]` = image of cell `c` in dimension `m`.
    pub levels: Vec<Vec<usize>>,
}

impl TruncatedSSet {
    /// Empty skeleton with the given bound and all-zero levels.
    pub fn empty(bound: usize) -> Self {
        TruncatedSSet {
            bound,
            sizes: vec![0; bound + 1],
            faces: (0..=bound).map(|m| vec![Vec::new(); m + 1]).collect(),
            degens: (0..=bound)
                .map(|m| if m < bound { vec![Vec::new(); m + 1] } else { Vec::new() })
                .collect(),
            labels: vec![None; bound + 1],
        }
    }

    pub fn size(&self, m: usize) -> usize {
        self.sizes[m]
    }

    /// `d_i`: dimension `m` -> `m-1`.
    pub fn face(&self, m: usize, i: usize, c: usize) -> usize {
        self.faces[m][i][c]
    }

    /// `s_i`: dimension `m` -> `m+1`.
    pub fn degen(&self, m: usize, i: usize, c: usize) -> usize {
        self.degens[m][i][c]
    }

    pub fn label(&self, m: usize, c: usize) -> String {
        match &self.labels[m] {
            Some(names) => names[c].clone(),
            None => format!("{m}.{c}"),
        }
    }

    /// Source of an edge (`d_1`) and target (`d_0`).
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (self.faces[1][1][e], self.faces[1][0][e])
    }

    /// Checks every simplicial identity and the totality of all structure
    /// maps, exhaustively within the bound.
    pub fn validate(&self) -> Report {
        let mut rep = Report::new("simplicial identities");
        // Table shapes.
        for m in 0..=self.bound {
            if m >= 1 {
                if self.faces[m].len() != m + 1 {
                    rep.violation("face arity", format!("dimension {m}: {} maps", self.faces[m].len()));
                    continue;
                }
                for i in 0..=m {
                    if self.faces[m][i].len() != self.sizes[m] {
                        rep.violation("face totality", format!("d_{i} at dimension {m}"));
                    }
                    for (c, &v) in self.faces[m][i].iter().enumerate() {
                        if v >= self.sizes[m - 1] {
                            rep.violation("face range", format!("d_{i}({}) out of range", self.label(m, c)));
                        }
                    }
                }
            }
            if m < self.bound {
                if self.degens[m].len() != m + 1 {
                    rep.violation("degeneracy arity", format!("dimension {m}"));
                    continue;
                }
                for i in 0..=m {
                    if self.degens[m][i].len() != self.sizes[m] {
                        rep.violation("degeneracy totality", format!("s_{i} at dimension {m}"));
                    }
                    for (c, &v) in self.degens[m][i].iter().enumerate() {
                        if v >= self.sizes[m + 1] {
                            rep.violation("degeneracy range", format!("s_{i}({}) out of range", self.label(m, c)));
                        }
                    }
                }
            }
        }
        if !rep.violations.is_empty() {
            return rep; // identities below would index out of bounds
        }
        for m in 0..=self.bound {
            for c in 0..self.sizes[m] {
                // d_i d_j = d_{j-1} d_i  (i < j), on X_m, m >= 2
                if m >= 2 {
                    for j in 1..=m {
                        for i in 0..j {
                            let lhs = self.face(m - 1, i, self.face(m, j, c));
                            let rhs = self.face(m - 1, j - 1, self.face(m, i, c));
                            if lhs != rhs {
                                rep.violation(
                                    format!("d_{i} d_{j} = d_{} d_{i}", j - 1),
                                    self.label(m, c),
                                );
                            }
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i  (i <= j), on X_m, m + 2 <= bound
                if m + 2 <= self.bound {
                    for j in 0..=m {
                        for i in 0..=j {
                            let lhs = self.degen(m + 1, i, self.degen(m, j, c));
                            let rhs = self.degen(m + 1, j + 1, self.degen(m, i, c));
                            if lhs != rhs {
                                rep.violation(
                                    format!("s_{i} s_{j} = s_{} s_{i}", j + 1),
                                    self.label(m, c),
                                );
                            }
                        }
                    }
                }
                // d_i s_j identities, on X_m, m + 1 <= bound
                if m + 1 <= self.bound {
                    for j in 0..=m {
                        let sj = self.degen(m, j, c);
                        for i in 0..=m + 1 {
                            let lhs = self.face(m + 1, i, sj);
                            if i == j || i == j + 1 {
                                if lhs != c {
                                    rep.violation(format!("d_{i} s_{j} = id"), self.label(m, c));
                                }
                            } else if i < j {
                                let rhs = self.degen(m - 1, j - 1, self.face(m, i, c));
                                if lhs != rhs {
                                    rep.violation(
                                        format!("d_{i} s_{j} = s_{} d_{i}", j - 1),
                                        self.label(m, c),
                                    );
                                }
                            } else {
                                // i > j + 1
                                let rhs = self.degen(m - 1, j, self.face(m, i - 1, c));
                                if lhs != rhs {
                                    rep.violation(
                                        format!("d_{i} s_{j} = s_{j} d_{}", i - 1),
                                        self.label(m, c),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    fn require_bound(&self, op: &'static str, needed: usize) -> Result<()> {
        if self.bound < needed {
            return Err(Error::InsufficientBound {
                op,
                needed,
                actual: self.bound,
            });
        }
        Ok(())
    }

    /// The standard simplex `Δ[n]` truncated at `bound`. Cells in dimension
    /// `m` are weakly increasing vertex sequences of length `m+1` in `0..=n`.
    pub fn standard_simplex(n: usize, bound: usize) -> Self {
        Self::from_vertex_sequences(n, bound, |_| true)
    }

    /// The boundary `∂Δ[n]`: vertex sequences that miss at least one vertex.
    pub fn boundary_simplex(n: usize, bound: usize) -> Self {
        Self::from_vertex_sequences(n, bound, |seq| {
            (0..=n).any(|v| !seq.contains(&v))
        })
    }

    /// The horn `Λ^j[n]`: sequences missing some vertex other than `j`.
    pub fn horn(n: usize, j: usize, bound: usize) -> Self {
        Self::from_vertex_sequences(n, bound, move |seq| {
            (0..=n).any(|v| v != j && !seq.contains(&v))
        })
    }

    fn from_vertex_sequences(n: usize, bound: usize, keep: impl Fn(&[usize]) -> bool) -> Self {
        let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(bound + 1);
        for m in 0..=bound {
            let mut cells = Vec::new();
            let mut seq = vec![0usize; m + 1];
            loop {
                if keep(&seq) {
                    cells.push(seq.clone());
                }
                // next weakly increasing sequence over 0..=n
                let mut k = m + 1;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if seq[k] < n {
                        seq[k] += 1;
                        for t in k + 1..=m {
                            seq[t] = seq[k];
                        }
                        break;
                    }
                    if k == 0 {
                        break;
                    }
                }
                if seq.iter().all(|&v| v == n) {
                    if keep(&seq) && !cells.contains(&seq) {
                        cells.push(seq.clone());
                    }
                    break;
                }
            }
            cells.sort();
            cells.dedup();
            levels.push(cells);
        }
        let mut x = TruncatedSSet::empty(bound);
        let index: Vec<BTreeMap<Vec<usize>, usize>> = levels
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i))
                    .collect()
            })
            .collect();
        for m in 0..=bound {
            x.sizes[m] = levels[m].len();
            x.labels[m] = Some(
                levels[m]
                    .iter()
                    .map(|seq| {
                        seq.iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join("")
                    })
                    .collect(),
            );
            if m >= 1 {
                for i in 0..=m {
                    let mut tbl = Vec::with_capacity(levels[m].len());
                    for seq in &levels[m] {
                        let mut s = seq.clone();
                        s.remove(i);
                        tbl.push(index[m - 1][&s]);
                    }
                    x.faces[m][i] = tbl;
                }
            }
            if m < bound {
                for i in 0..=m {
                    let mut tbl = Vec::with_capacity(levels[m].len());
                    for seq in &levels[m] {
                        let mut s = seq.clone();
                        s.insert(i, seq[i]);
                        tbl.push(index[m + 1][&s]);
                    }
                    x.degens[m][i] = tbl;
                }
            }
        }
        x
    }

    /// Reconstructs dimensions `> 2` from the 2-truncation: a cell in
    /// dimension `m >= 3` is an `(m+1)`-tuple of `(m-1)`-cells satisfying the
    /// face matching conditions `d_i τ_j = d_{j-1} τ_i` for `i < j`.
    pub fn coskeleton2(&self, bound: usize) -> Result<TruncatedSSet> {
        self.require_bound("coskeleton2", 2)?;
        let mut out = TruncatedSSet::empty(bound);
        // dimensions <= 2 copied from self
        let copy_to = bound.min(2);
        for m in 0..=copy_to {
            out.sizes[m] = self.sizes[m];
            out.labels[m] = self.labels[m].clone();
            if m >= 1 {
                out.faces[m] = self.faces[m].clone();
            }
        }
        // degeneracies between copied levels (s_i : X_m -> X_{m+1} with m+1 <= 2)
        for m in 0..bound.min(2) {
            out.degens[m] = self.degens[m].clone();
        }
        if bound <= 2 {
            return Ok(out);
        }
        // Matching tuples, level by level.
        let mut tuples: Vec<BTreeMap<Vec<usize>, usize>> = vec![BTreeMap::new(); bound + 1];
        for m in 3..=bound {
            let lower = out.sizes[m - 1];
            let face =
                |i: usize, c: usize, out: &TruncatedSSet| -> usize { out.faces[m - 1][i][c] };
            // enumerate (m+1)-tuples of (m-1)-cells with the matching condition
            let mut found: Vec<Vec<usize>> = Vec::new();
            let mut tuple = vec![0usize; m + 1];
            fn search(
                pos: usize,
                m: usize,
                lower: usize,
                tuple: &mut Vec<usize>,
                out: &TruncatedSSet,
                found: &mut Vec<Vec<usize>>,
                face: &dyn Fn(usize, usize, &TruncatedSSet) -> usize,
            ) {
                if pos == m + 1 {
                    found.push(tuple.clone());
                    return;
                }
                'next: for c in 0..lower {
                    // d_i tuple[pos] = d_{pos-1} tuple[i] for i < pos
                    for i in 0..pos {
                        if face(i, c, out) != face(pos - 1, tuple[i], out) {
                            continue 'next;
                        }
                    }
                    tuple[pos] = c;
                    search(pos + 1, m, lower, tuple, out, found, face);
                }
            }
            search(0, m, lower, &mut tuple, &out, &mut found, &face);
            found.sort();
            for (i, t) in found.iter().enumerate() {
                tuples[m].insert(t.clone(), i);
            }
            out.sizes[m] = found.len();
            for i in 0..=m {
                out.faces[m][i] = found.iter().map(|t| t[i]).collect();
            }
            // degeneracies into dimension m from m-1
            let prev = m - 1;
            for i in 0..=prev {
                let mut tbl = Vec::with_capacity(out.sizes[prev]);
                for c in 0..out.sizes[prev] {
                    // faces of s_i c: d_j s_i = s_{i-1} d_j (j < i); id (j = i, i+1);
                    // s_i d_{j-1} (j > i+1)
                    let mut t = Vec::with_capacity(m + 1);
                    for j in 0..=m {
                        let v = if j == i || j == i + 1 {
                            c
                        } else if j < i {
                            out.degens[prev - 1][i - 1][out.faces[prev][j][c]]
                        } else {
                            out.degens[prev - 1][i][out.faces[prev][j - 1][c]]
                        };
                        t.push(v);
                    }
                    tbl.push(*tuples[m].get(&t).ok_or_else(|| {
                        Error::invalid(format!(
                            "coskeleton2: degenerate tuple not matching at dim {m}"
                        ))
                    })?);
                }
                out.degens[prev][i] = tbl;
            }
            found.clear();
        }
        Ok(out)
    }

    /// Décalage: shift down by one, forgetting the last (resp. first) face
    /// and degeneracy operators. Returns the shifted simplicial set together
    /// with the counit `ε: Dec X -> X` and its section `σ: X -> Dec X`.
    pub fn decalage(&self, side: DecSide) -> Result<(TruncatedSSet, SimplicialMap, SimplicialMap)> {
        self.require_bound("decalage", 1)?;
        let bound = self.bound - 1;
        let mut out = TruncatedSSet::empty(bound);
        for m in 0..=bound {
            out.sizes[m] = self.sizes[m + 1];
            out.labels[m] = self.labels[m + 1].clone();
            if m >= 1 {
                for i in 0..=m {
                    out.faces[m][i] = match side {
                        DecSide::Last => self.faces[m + 1][i].clone(),
                        DecSide::First => self.faces[m + 1][i + 1].clone(),
                    };
                }
            }
            if m < bound {
                for i in 0..=m {
                    out.degens[m][i] = match side {
                        DecSide::Last => self.degens[m + 1][i].clone(),
                        DecSide::First => self.degens[m + 1][i + 1].clone(),
                    };
                }
            }
        }
        // counit: d_{m+1} (last) resp. d_0 (first) in level m
        let counit = SimplicialMap {
            bound,
            levels: (0..=bound)
                .map(|m| match side {
                    DecSide::Last => self.faces[m + 1][m + 1].clone(),
                    DecSide::First => self.faces[m + 1][0].clone(),
                })
                .collect(),
        };
        // section: s_m resp. s_0
        let section = SimplicialMap {
            bound,
            levels: (0..=bound)
                .map(|m| match side {
                    DecSide::Last => self.degens[m][m].clone(),
                    DecSide::First => self.degens[m][0].clone(),
                })
                .collect(),
        };
        Ok((out, counit, section))
    }

    /// Order-reversing involution `I*`: `d_i -> d_{m-i}`, `s_i -> s_{m-i}`.
    pub fn involution(&self) -> TruncatedSSet {
        let mut out = self.clone();
        for m in 1..=self.bound {
            for i in 0..=m {
                out.faces[m][i] = self.faces[m][m - i].clone();
            }
        }
        for m in 0..self.bound {
            for i in 0..=m {
                out.degens[m][i] = self.degens[m][m - i].clone();
            }
        }
        out
    }

    /// Levelwise product, with cells interned as pairs.
    pub fn product(&self, other: &TruncatedSSet) -> TruncatedSSet {
        self.pullback_impl(other, None)
    }

    /// Strict pullback of `f: self -> z` and `g: other -> z` (levelwise).
    pub fn pullback(
        &self,
        other: &TruncatedSSet,
        f: &SimplicialMap,
        g: &SimplicialMap,
    ) -> TruncatedSSet {
        self.pullback_impl(other, Some((f, g)))
    }

    fn pullback_impl(
        &self,
        other: &TruncatedSSet,
        maps: Option<(&SimplicialMap, &SimplicialMap)>,
    ) -> TruncatedSSet {
        let bound = self.bound.min(other.bound);
        let mut out = TruncatedSSet::empty(bound);
        let mut index: Vec<BTreeMap<(usize, usize), usize>> = vec![BTreeMap::new(); bound + 1];
        for m in 0..=bound {
            let mut cells = Vec::new();
            for a in 0..self.sizes[m] {
                for b in 0..other.sizes[m] {
                    let keep = match maps {
                        None => true,
                        Some((f, g)) => f.levels[m][a] == g.levels[m][b],
                    };
                    if keep {
                        index[m].insert((a, b), cells.len());
                        cells.push((a, b));
                    }
                }
            }
            out.sizes[m] = cells.len();
            out.labels[m] = Some(
                cells
                    .iter()
                    .map(|&(a, b)| format!("({},{})", self.label(m, a), other.label(m, b)))
                    .collect(),
            );
            if m >= 1 {
                for i in 0..=m {
                    out.faces[m][i] = cells
                        .iter()
                        .map(|&(a, b)| {
                            index[m - 1][&(self.faces[m][i][a], other.faces[m][i][b])]
                        })
                        .collect();
                }
            }
        }
        for m in 0..bound {
            let cells: Vec<(usize, usize)> = index[m].iter().map(|(&k, _)| k).collect();
            let mut ordered = vec![(0usize, 0usize); out.sizes[m]];
            for &(a, b) in &cells {
                ordered[index[m][&(a, b)]] = (a, b);
            }
            for i in 0..=m {
                out.degens[m][i] = ordered
                    .iter()
                    .map(|&(a, b)| index[m + 1][&(self.degens[m][i][a], other.degens[m][i][b])])
                    .collect();
            }
        }
        out
    }

    /// `ν_j(σ)` for `σ ∈ X_k`: the edge spanning vertices `{j-1, j}`,
    /// obtained by dropping the top vertices then the bottom ones.
    pub fn segal_edge(&self, k: usize, j: usize, sigma: usize) -> usize {
        let mut c = sigma;
        let mut m = k;
        while m > j {
            c = self.faces[m][m][c];
            m -= 1;
        }
        while m > 1 {
            c = self.faces[m][0][c];
            m -= 1;
        }
        c
    }

    /// The `k`-th Segal target: `k`-tuples of edges `(e_1,...,e_k)` with
    /// `d_0 e_j = d_1 e_{j+1}` (target of each = source of the next).
    pub fn segal_tuples(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        self.require_bound("segal", k.max(1))?;
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        let mut cur = vec![0usize; k];
        fn rec(
            pos: usize,
            k: usize,
            x: &TruncatedSSet,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if pos == k {
                out.push(cur.clone());
                return;
            }
            for e in 0..x.sizes[1] {
                if pos > 0 && x.faces[1][0][cur[pos - 1]] != x.faces[1][1][e] {
                    continue;
                }
                cur[pos] = e;
                rec(pos + 1, k, x, cur, out);
            }
        }
        rec(0, k, self, &mut cur, &mut tuples);
        Ok(tuples)
    }

    /// The `k`-th Segal map `X_k -> X_1 ×_{X_0} ... ×_{X_0} X_1` together
    /// with a bijectivity report (witnesses for failure either way).
    pub fn segal_map(&self, k: usize) -> Result<SegalComparison> {
        let tuples = self.segal_tuples(k)?;
        let index: BTreeMap<Vec<usize>, usize> =
            tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut map = Vec::with_capacity(self.sizes[k]);
        for c in 0..self.sizes[k] {
            let t: Vec<usize> = (1..=k).map(|j| self.segal_edge(k, j, c)).collect();
            map.push(index[&t]);
        }
        let mut hit = vec![Vec::new(); tuples.len()];
        for (c, &t) in map.iter().enumerate() {
            hit[t].push(c);
        }
        let not_surjective: Vec<usize> = hit.iter().enumerate().filter(|(_, v)| v.is_empty()).map(|(i, _)| i).collect();
        let not_injective: Vec<usize> = hit.iter().enumerate().filter(|(_, v)| v.len() > 1).map(|(i, _)| i).collect();
        Ok(SegalComparison {
            k,
            map,
            tuples,
            not_surjective,
            not_injective,
        })
    }

    /// `L_k X`: the path/bar object. `L_0 X = Dec X`; for `k >= 1` the level-m
    /// cells are `(k+1)`-tuples of `(m+1)`-cells lying in a common fiber of
    /// the décalage counit `ε = d_{m+1}` — the level-`k` piece of the nerve of
    /// the internal groupoid on `Dec X -> X`. Operators act componentwise.
    pub fn bar_path(&self, k: usize) -> Result<TruncatedSSet> {
        self.require_bound("bar_path", 1)?;
        let (dec, _, _) = self.decalage(DecSide::Last)?;
        if k == 0 {
            return Ok(dec);
        }
        let bound = dec.bound;
        let mut out = TruncatedSSet::empty(bound);
        let mut index: Vec<BTreeMap<Vec<usize>, usize>> = vec![BTreeMap::new(); bound + 1];
        for m in 0..=bound {
            // group the (m+1)-cells by their ε-value in X_m
            let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for c in 0..self.sizes[m + 1] {
                fibers
                    .entry(self.faces[m + 1][m + 1][c])
                    .or_default()
                    .push(c);
            }
            let mut cells: Vec<Vec<usize>> = Vec::new();
            for fiber in fibers.values() {
                let mut cur = vec![0usize; k + 1];
                fn rec(
                    pos: usize,
                    k: usize,
                    fiber: &[usize],
                    cur: &mut Vec<usize>,
                    out: &mut Vec<Vec<usize>>,
                ) {
                    if pos == k + 1 {
                        out.push(cur.clone());
                        return;
                    }
                    for &c in fiber {
                        cur[pos] = c;
                        rec(pos + 1, k, fiber, cur, out);
                    }
                }
                rec(0, k, fiber, &mut cur, &mut cells);
            }
            cells.sort();
            for (i, t) in cells.iter().enumerate() {
                index[m].insert(t.clone(), i);
            }
            out.sizes[m] = cells.len();
            if m >= 1 {
                for i in 0..=m {
                    out.faces[m][i] = cells
                        .iter()
                        .map(|t| {
                            let img: Vec<usize> =
                                t.iter().map(|&c| self.faces[m + 1][i][c]).collect();
                            index[m - 1][&img]
                        })
                        .collect();
                }
            }
        }
        for m in 0..bound {
            let cells: Vec<Vec<usize>> = {
                let mut v = vec![Vec::new(); out.sizes[m]];
                for (t, &i) in &index[m] {
                    v[i] = t.clone();
                }
                v
            };
            for i in 0..=m {
                out.degens[m][i] = cells
                    .iter()
                    .map(|t| {
                        let img: Vec<usize> =
                            t.iter().map(|&c| self.degens[m + 1][i][c]).collect();
                        index[m + 1][&img]
                    })
                    .collect();
            }
        }
        Ok(out)
    }

    /// Restrict to a lower bound, dropping the top levels.
    pub fn truncate(&self, bound: usize) -> TruncatedSSet {
        assert!(bound <= self.bound);
        let mut out = TruncatedSSet::empty(bound);
        for m in 0..=bound {
            out.sizes[m] = self.sizes[m];
            out.labels[m] = self.labels[m].clone();
            if m >= 1 {
                out.faces[m] = self.faces[m].clone();
            }
            if m < bound {
                out.degens[m] = self.degens[m].clone();
            }
        }
        out
    }
}

/// Which side décalage forgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecSide {
    /// `Dec`: forget the last face/degeneracy; counit `d_{m+1}`, section `s_m`.
    Last,
    /// `Dec'`: forget the first; counit `d_0`, section `s_0`.
    First,
}

/// Result of a Segal comparison at a fixed `k`.
#[derive(Debug, Clone)]
pub struct SegalComparison {
    pub k: usize,
    /// `map[c]` = index of the tuple `(ν_1 c, ..., ν_k c)`.
    pub map: Vec<usize>,
    pub tuples: Vec<Vec<usize>>,
    pub not_surjective: Vec<usize>,
    pub not_injective: Vec<usize>,
}

impl SegalComparison {
    pub fn is_bijective(&self) -> bool {
        self.not_surjective.is_empty() && self.not_injective.is_empty()
    }

    /// Index of the unique `k`-cell mapping to the given tuple, when bijective.
    pub fn preimage(&self, tuple_idx: usize) -> Option<usize> {
        self.map.iter().position(|&t| t == tuple_idx)
    }
}

impl SimplicialMap {
    pub fn identity(x: &TruncatedSSet) -> Self {
        SimplicialMap {
            bound: x.bound,
            levels: x.sizes.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// Verifies that the map commutes with faces and degeneracies of the two
    /// given simplicial sets within the common bound.
    pub fn validate(&self, src: &TruncatedSSet, tgt: &TruncatedSSet) -> Report {
        let mut rep = Report::new("simplicial map");
        let bound = self.bound;
        if bound > src.bound || bound > tgt.bound {
            rep.violation("bound", "map bound exceeds source or target bound");
            return rep;
        }
        for m in 0..=bound {
            if self.levels[m].len() != src.sizes[m] {
                rep.violation("totality", format!("dimension {m}"));
                return rep;
            }
            for c in 0..src.sizes[m] {
                if self.levels[m][c] >= tgt.sizes[m] {
                    rep.violation("range", format!("dimension {m} cell {c}"));
                    return rep;
                }
            }
        }
        for m in 1..=bound {
            for i in 0..=m {
                for c in 0..src.sizes[m] {
                    let lhs = tgt.faces[m][i][self.levels[m][c]];
                    let rhs = self.levels[m - 1][src.faces[m][i][c]];
                    if lhs != rhs {
                        rep.violation(format!("f d_{i} = d_{i} f"), src.label(m, c));
                    }
                }
            }
        }
        for m in 0..bound {
            for i in 0..=m {
                for c in 0..src.sizes[m] {
                    let lhs = tgt.degens[m][i][self.levels[m][c]];
                    let rhs = self.levels[m + 1][src.degens[m][i][c]];
                    if lhs != rhs {
                        rep.violation(format!("f s_{i} = s_{i} f"), src.label(m, c));
                    }
                }
            }
        }
        rep
    }

    pub fn compose(&self, then: &SimplicialMap) -> SimplicialMap {
        let bound = self.bound.min(then.bound);
        SimplicialMap {
            bound,
            levels: (0..=bound)
                .map(|m| self.levels[m].iter().map(|&c| then.levels[m][c]).collect())
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.levels
            .iter()
            .all(|lvl| lvl.iter().enumerate().all(|(i, &v)| i == v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_simplex_is_simplicial() {
        for n in 0..=3 {
            let x = TruncatedSSet::standard_simplex(n, 4);
            assert!(x.validate().is_pass(), "Δ[{n}] must validate");
        }
        // |Δ[2]_m| = C(m+3, 2) monotone maps [m] -> [2]
        let d2 = TruncatedSSet::standard_simplex(2, 3);
        assert_eq!(d2.sizes, vec![3, 6, 10, 15]);
    }

    #[test]
    fn corrupted_simplex_is_reported() {
        let mut x = TruncatedSSet::standard_simplex(2, 2);
        // corrupt one d_0 d_2 entry
        let c = x.sizes[2] - 1;
        let old = x.faces[2][2][c];
        x.faces[2][2][c] = (old + 1) % x.sizes[1];
        let rep = x.validate();
        assert!(!rep.is_pass());
        assert!(rep
            .violations
            .iter()
            .any(|v| v.rule.contains("d_") && !v.witness.is_empty()));
    }

    #[test]
    fn decalage_of_interval() {
        let x = TruncatedSSet::standard_simplex(1, 3);
        let (dec, counit, section) = x.decalage(DecSide::Last).unwrap();
        assert_eq!(dec.sizes[0], x.sizes[1]); // 3 monotone maps [1] -> [1]
        assert_eq!(dec.sizes[0], 3);
        assert!(dec.validate().is_pass());
        assert!(counit.validate(&dec, &x.truncate(2)).is_pass());
        // section lands in Dec X; ε ∘ σ = id on X
        let composite = section.compose(&counit);
        assert!(composite.is_identity());
        let (decp, counit_p, section_p) = x.decalage(DecSide::First).unwrap();
        assert!(decp.validate().is_pass());
        assert!(section_p.compose(&counit_p).is_identity());
    }

    #[test]
    fn involution_squares_to_identity() {
        let x = TruncatedSSet::standard_simplex(2, 3);
        let twice = x.involution().involution();
        assert_eq!(x, twice);
        assert!(x.involution().validate().is_pass());
    }

    #[test]
    fn decp_is_conjugate_of_dec_by_involution() {
        // Dec' X = I* Dec I* X, checked on Δ[2]
        let x = TruncatedSSet::standard_simplex(2, 3);
        let (direct, _, _) = x.decalage(DecSide::First).unwrap();
        let (mid, _, _) = x.involution().decalage(DecSide::Last).unwrap();
        let conj = mid.involution();
        // same cell sets and same operator tables
        assert_eq!(direct.sizes, conj.sizes);
        assert_eq!(direct.faces, conj.faces);
        assert_eq!(direct.degens, conj.degens);
    }

    #[test]
    fn coskeleton_of_point() {
        let pt = TruncatedSSet::standard_simplex(0, 2);
        let csk = pt.coskeleton2(4).unwrap();
        assert!(csk.validate().is_pass());
        assert_eq!(csk.sizes, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn coskeleton_of_boundary_counts_matching_tuples() {
        // ∂Δ[2] has no nondegenerate 2-cells; count dim-3 matching tuples by
        // brute force against the operation's own output.
        let x = TruncatedSSet::boundary_simplex(2, 2);
        assert!(x.validate().is_pass());
        let csk = x.coskeleton2(3).unwrap();
        assert!(csk.validate().is_pass());
        let n2 = x.sizes[2];
        // oracle: brute-force enumeration of 4-tuples (t0..t3) of 2-cells
        // with d_i t_j = d_{j-1} t_i for all i < j
        let mut tuples = 0usize;
        let f = &x.faces[2];
        for t0 in 0..n2 {
            for t1 in 0..n2 {
                if f[0][t1] != f[0][t0] {
                    continue;
                }
                for t2 in 0..n2 {
                    if f[0][t2] != f[1][t0] || f[1][t2] != f[1][t1] {
                        continue;
                    }
                    for t3 in 0..n2 {
                        if f[0][t3] != f[2][t0] || f[1][t3] != f[2][t1] || f[2][t3] != f[2][t2] {
                            continue;
                        }
                        tuples += 1;
                    }
                }
            }
        }
        assert_eq!(csk.sizes[3], tuples);
    }

    #[test]
    fn segal_on_boundary_fails() {
        let x = TruncatedSSet::boundary_simplex(2, 2);
        let cmp = x.segal_map(2).unwrap();
        assert!(!cmp.is_bijective());
        assert!(!cmp.not_surjective.is_empty());
    }

    #[test]
    fn segal_on_point_is_bijective() {
        let x = TruncatedSSet::standard_simplex(0, 3);
        for k in 2..=3 {
            let cmp = x.segal_map(k).unwrap();
            assert!(cmp.is_bijective());
            assert_eq!(cmp.tuples.len(), 1);
        }
    }

    #[test]
    fn bar_path_counts_on_interval() {
        // (L_1 Δ[1])_0: pairs of 1-cells in a common ε-fiber. Oracle:
        // enumerate pairs (a, b) with d_1 a = d_1 b directly.
        let x = TruncatedSSet::standard_simplex(1, 3);
        let mut oracle = 0usize;
        for a in 0..x.sizes[1] {
            for b in 0..x.sizes[1] {
                if x.faces[1][1][a] == x.faces[1][1][b] {
                    oracle += 1;
                }
            }
        }
        let l1 = x.bar_path(1).unwrap();
        assert_eq!(l1.sizes[0], oracle);
        assert!(l1.validate().is_pass());
        // L_0 Δ[0] = Δ[0]
        let pt = TruncatedSSet::standard_simplex(0, 2);
        let l0 = pt.bar_path(0).unwrap();
        assert_eq!(l0.sizes, vec![1, 1]);
    }

    #[test]
    fn decalage_commutes_with_fiber_products() {
        // Dec(L_1 X) should equal the fiber product of Dec ε : Dec²X -> Dec X
        // with itself, built independently.
        let x = TruncatedSSet::standard_simplex(2, 4);
        let lhs = x.bar_path(1).unwrap().decalage(DecSide::Last).unwrap().0;
        let (_, eps, _) = x.decalage(DecSide::Last).unwrap();
        // rhs level m: pairs (a, b) in X_{m+2} with (Dec ε)(a) = (Dec ε)(b)
        for m in 0..=lhs.bound {
            let mut count = 0usize;
            let n = x.sizes[m + 2];
            for a in 0..n {
                for b in 0..n {
                    if eps.levels[m + 1][a] == eps.levels[m + 1][b] {
                        count += 1;
                    }
                }
            }
            assert_eq!(lhs.sizes[m], count, "level {m}");
        }
        assert!(lhs.validate().is_pass());
    }

    #[test]
    fn bar_path_level_counts_on_group_nerve() {
        // For the nerve of a group G, fibers of ε all have size |G|, so
        // (L_1 X)_m = |G|^{m+2}.
        use crate::groupoid::{FiniteGroupoid, GroupTable};
        let x = FiniteGroupoid::from_group(&GroupTable::cyclic(2)).nerve(4);
        let l1 = x.bar_path(1).unwrap();
        assert_eq!(l1.sizes, vec![4, 8, 16, 32]);
        assert!(l1.validate().is_pass());
    }
}
