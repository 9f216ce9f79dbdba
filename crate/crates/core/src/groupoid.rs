//! Finite groupoids with explicit composition tables.
//!
//! Composition convention: `comp(g, h)` is defined when `tgt(h) = src(g)`
//! and denotes `g ∘ h` ("g after h"), so the nerve's inner face on a
//! 2-string `(h, g)` is the composite.

use crate::error::{Error, Result};
use crate::report::Report;
use crate::sset::TruncatedSSet;
use std::collections::{BTreeMap, BTreeSet};

/// A finite groupoid: object and morphism sets with dense structure tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub n_objects: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// Identity morphism of each object.
    pub id: Vec<usize>,
    /// `comp[(g, h)] = g ∘ h`, defined exactly when `tgt(h) = src(g)`.
    pub comp: BTreeMap<(usize, usize), usize>,
    pub inv: Vec<usize>,
    pub object_labels: Option<Vec<String>>,
    pub morphism_labels: Option<Vec<String>>,
}

/// A functor between finite groupoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

/// Multiplication table of a finite group; element 0 is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub mul: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    /// Discrete groupoid on `n` objects (identities only).
    pub fn discrete(n: usize) -> Self {
        FiniteGroupoid {
            n_objects: n,
            src: (0..n).collect(),
            tgt: (0..n).collect(),
            id: (0..n).collect(),
            comp: (0..n).map(|i| ((i, i), i)).collect(),
            inv: (0..n).collect(),
            object_labels: None,
            morphism_labels: None,
        }
    }

    /// One-object groupoid from a group multiplication table.
    pub fn from_group(table: &GroupTable) -> Self {
        let n = table.mul.len();
        let mut comp = BTreeMap::new();
        for g in 0..n {
            for h in 0..n {
                comp.insert((g, h), table.mul[g][h]);
            }
        }
        let inv = (0..n)
            .map(|g| (0..n).find(|&h| table.mul[g][h] == 0).unwrap())
            .collect();
        FiniteGroupoid {
            n_objects: 1,
            src: vec![0; n],
            tgt: vec![0; n],
            id: vec![0],
            comp,
            inv,
            object_labels: None,
            morphism_labels: None,
        }
    }

    /// The groupoid `A^f` of a map of finite sets `f: A -> B`: objects `A`,
    /// exactly one morphism `a -> a'` for each pair in the same fiber.
    pub fn af_construction(f: &[usize], b_size: usize) -> Self {
        let a = f.len();
        assert!(f.iter().all(|&v| v < b_size));
        let mut morphisms: Vec<(usize, usize)> = Vec::new();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for x in 0..a {
            for y in 0..a {
                if f[x] == f[y] {
                    index.insert((x, y), morphisms.len());
                    morphisms.push((x, y));
                }
            }
        }
        let mut comp = BTreeMap::new();
        for (&(x, y), &m1) in &index {
            for (&(y2, z), &m2) in &index {
                if y == y2 {
                    // m2 ∘ m1 : x -> z
                    comp.insert((m2, m1), index[&(x, z)]);
                }
            }
        }
        FiniteGroupoid {
            n_objects: a,
            src: morphisms.iter().map(|&(x, _)| x).collect(),
            tgt: morphisms.iter().map(|&(_, y)| y).collect(),
            id: (0..a).map(|x| index[&(x, x)]).collect(),
            comp,
            inv: morphisms.iter().map(|&(x, y)| index[&(y, x)]).collect(),
            object_labels: None,
            morphism_labels: None,
        }
    }

    /// Checks the category axioms and that every morphism is invertible.
    pub fn validate(&self) -> Report {
        let mut rep = Report::new("groupoid axioms");
        let nm = self.n_morphisms();
        if self.tgt.len() != nm || self.inv.len() != nm || self.id.len() != self.n_objects {
            rep.violation("table shape", "src/tgt/inv/id lengths");
            return rep;
        }
        for (o, &i) in self.id.iter().enumerate() {
            if i >= nm || self.src[i] != o || self.tgt[i] != o {
                rep.violation("identity endpoints", format!("object {o}"));
            }
        }
        for m in 0..nm {
            if self.src[m] >= self.n_objects || self.tgt[m] >= self.n_objects {
                rep.violation("endpoint range", format!("morphism {m}"));
            }
        }
        if !rep.violations.is_empty() {
            return rep;
        }
        // composition domain and closure
        for g in 0..nm {
            for h in 0..nm {
                let defined = self.comp.contains_key(&(g, h));
                let composable = self.tgt[h] == self.src[g];
                if defined != composable {
                    rep.violation(
                        "composition domain",
                        format!("pair (g={g}, h={h}) defined={defined} composable={composable}"),
                    );
                    continue;
                }
                if composable {
                    let c = self.comp[&(g, h)];
                    if c >= nm || self.src[c] != self.src[h] || self.tgt[c] != self.tgt[g] {
                        rep.violation("composite endpoints", format!("(g={g}, h={h})"));
                    }
                }
            }
        }
        if !rep.violations.is_empty() {
            return rep;
        }
        // units
        for m in 0..nm {
            if self.comp[&(m, self.id[self.src[m]])] != m {
                rep.violation("right unit", format!("morphism {m}"));
            }
            if self.comp[&(self.id[self.tgt[m]], m)] != m {
                rep.violation("left unit", format!("morphism {m}"));
            }
        }
        // associativity over all composable triples
        for f in 0..nm {
            for g in 0..nm {
                if self.tgt[f] != self.src[g] {
                    continue;
                }
                let gf = self.comp[&(g, f)];
                for h in 0..nm {
                    if self.tgt[g] != self.src[h] {
                        continue;
                    }
                    let hg = self.comp[&(h, g)];
                    if self.comp[&(h, gf)] != self.comp[&(hg, f)] {
                        rep.violation("associativity", format!("triple ({h}, {g}, {f})"));
                    }
                }
            }
        }
        // inverses two-sided
        for m in 0..nm {
            let i = self.inv[m];
            if self.src[i] != self.tgt[m] || self.tgt[i] != self.src[m] {
                rep.violation("inverse endpoints", format!("morphism {m}"));
                continue;
            }
            if self.comp[&(i, m)] != self.id[self.src[m]] || self.comp[&(m, i)] != self.id[self.tgt[m]]
            {
                rep.violation("two-sided inverse", format!("morphism {m}"));
            }
        }
        rep
    }

    /// `π₀`: the coequalizer of src and tgt. Returns the class of each
    /// object and the number of classes.
    pub fn pi0(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n_objects);
        for m in 0..self.n_morphisms() {
            uf.union(self.src[m], self.tgt[m]);
        }
        uf.quotient()
    }

    /// The nerve, truncated at `bound`: level `m` is the set of composable
    /// `m`-strings `(f_1, ..., f_m)` with `tgt f_j = src f_{j+1}`.
    pub fn nerve(&self, bound: usize) -> TruncatedSSet {
        let mut x = TruncatedSSet::empty(bound);
        let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(bound + 1);
        let mut index: Vec<BTreeMap<Vec<usize>, usize>> = Vec::with_capacity(bound + 1);
        // level 0: objects, encoded as empty strings tagged by object
        levels.push((0..self.n_objects).map(|o| vec![o]).collect());
        for m in 1..=bound {
            let mut cells = Vec::new();
            if m == 1 {
                for f in 0..self.n_morphisms() {
                    cells.push(vec![f]);
                }
            } else {
                for prev in &levels[m - 1] {
                    let last = prev[m - 2];
                    for f in 0..self.n_morphisms() {
                        if self.src[f] == self.tgt[last] {
                            let mut s = prev.clone();
                            s.push(f);
                            cells.push(s);
                        }
                    }
                }
            }
            levels.push(cells);
        }
        for lvl in &levels {
            index.push(lvl.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect());
        }
        for m in 0..=bound {
            x.sizes[m] = levels[m].len();
            if m >= 1 {
                for i in 0..=m {
                    x.faces[m][i] = levels[m]
                        .iter()
                        .map(|s| {
                            if m == 1 {
                                let f = s[0];
                                // d_1 = src, d_0 = tgt
                                if i == 1 {
                                    self.src[f]
                                } else {
                                    self.tgt[f]
                                }
                            } else {
                                let mut t = s.clone();
                                if i == 0 {
                                    t.remove(0);
                                } else if i == m {
                                    t.pop();
                                } else {
                                    let c = self.comp[&(s[i], s[i - 1])];
                                    t.remove(i);
                                    t[i - 1] = c;
                                }
                                index[m - 1][&t]
                            }
                        })
                        .collect();
                }
            }
            if m < bound {
                for i in 0..=m {
                    x.degens[m][i] = levels[m]
                        .iter()
                        .map(|s| {
                            let mut t = s.clone();
                            if m == 0 {
                                t = vec![self.id[s[0]]];
                            } else {
                                // insert identity at vertex i
                                let v = if i == 0 { self.src[s[0]] } else { self.tgt[s[i - 1]] };
                                t.insert(i, self.id[v]);
                            }
                            index[m + 1][&t]
                        })
                        .collect();
                }
            }
        }
        x
    }

    /// Morphisms from `a` to `b`.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n_morphisms())
            .filter(|&m| self.src[m] == a && self.tgt[m] == b)
            .collect()
    }

    /// True iff there is at most one morphism between any ordered pair of
    /// objects. On success returns the quotient map to `π₀` as the witness
    /// `f` with `G ≅ A^f`.
    pub fn is_homotopically_discrete(&self) -> (bool, Option<Vec<usize>>, Option<String>) {
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for m in 0..self.n_morphisms() {
            if let Some(&m0) = seen.get(&(self.src[m], self.tgt[m])) {
                return (
                    false,
                    None,
                    Some(format!(
                        "two morphisms {m0}, {m} from {} to {}",
                        self.src[m], self.tgt[m]
                    )),
                );
            }
            seen.insert((self.src[m], self.tgt[m]), m);
        }
        let (classes, _) = self.pi0();
        (true, Some(classes), None)
    }

    /// Automorphism group of `x` as a multiplication table, together with
    /// the list of morphisms indexing its elements (unit first).
    pub fn vertex_group(&self, x: usize) -> (GroupTable, Vec<usize>) {
        let mut auts = self.hom(x, x);
        let idm = self.id[x];
        auts.retain(|&m| m != idm);
        auts.insert(0, idm);
        let pos: BTreeMap<usize, usize> = auts.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mul = auts
            .iter()
            .map(|&g| auts.iter().map(|&h| pos[&self.comp[&(g, h)]]).collect())
            .collect();
        (GroupTable { mul }, auts)
    }

    /// Disjoint union.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let no = self.n_objects;
        let nm = self.n_morphisms();
        let mut comp = self.comp.clone();
        for (&(g, h), &c) in &other.comp {
            comp.insert((g + nm, h + nm), c + nm);
        }
        FiniteGroupoid {
            n_objects: no + other.n_objects,
            src: self.src.iter().copied().chain(other.src.iter().map(|&s| s + no)).collect(),
            tgt: self.tgt.iter().copied().chain(other.tgt.iter().map(|&t| t + no)).collect(),
            id: self.id.iter().copied().chain(other.id.iter().map(|&i| i + nm)).collect(),
            comp,
            inv: self.inv.iter().copied().chain(other.inv.iter().map(|&i| i + nm)).collect(),
            object_labels: None,
            morphism_labels: None,
        }
    }

    /// Strict pullback of `f: self -> h` and `g: other -> h`.
    pub fn pullback(
        &self,
        other: &FiniteGroupoid,
        f: &GroupoidMap,
        g: &GroupoidMap,
    ) -> FiniteGroupoid {
        let mut objects = Vec::new();
        let mut obj_index = BTreeMap::new();
        for a in 0..self.n_objects {
            for b in 0..other.n_objects {
                if f.objects[a] == g.objects[b] {
                    obj_index.insert((a, b), objects.len());
                    objects.push((a, b));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut mor_index = BTreeMap::new();
        for m in 0..self.n_morphisms() {
            for m2 in 0..other.n_morphisms() {
                if f.morphisms[m] == g.morphisms[m2] {
                    mor_index.insert((m, m2), morphisms.len());
                    morphisms.push((m, m2));
                }
            }
        }
        let mut comp = BTreeMap::new();
        for (&(g1, g2), &gi) in &mor_index {
            for (&(h1, h2), &hi) in &mor_index {
                if self.tgt[h1] == self.src[g1] && other.tgt[h2] == other.src[g2] {
                    comp.insert(
                        (gi, hi),
                        mor_index[&(self.comp[&(g1, h1)], other.comp[&(g2, h2)])],
                    );
                }
            }
        }
        FiniteGroupoid {
            n_objects: objects.len(),
            src: morphisms.iter().map(|&(m, m2)| obj_index[&(self.src[m], other.src[m2])]).collect(),
            tgt: morphisms.iter().map(|&(m, m2)| obj_index[&(self.tgt[m], other.tgt[m2])]).collect(),
            id: objects.iter().map(|&(a, b)| mor_index[&(self.id[a], other.id[b])]).collect(),
            comp,
            inv: morphisms.iter().map(|&(m, m2)| mor_index[&(self.inv[m], other.inv[m2])]).collect(),
            object_labels: None,
            morphism_labels: None,
        }
    }

    /// Product (pullback over the terminal groupoid).
    pub fn product(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let f = GroupoidMap {
            objects: vec![0; self.n_objects],
            morphisms: vec![0; self.n_morphisms()],
        };
        let g = GroupoidMap {
            objects: vec![0; other.n_objects],
            morphisms: vec![0; other.n_morphisms()],
        };
        self.pullback(other, &f, &g)
    }

    /// Pushout `B ⊔_A c(π₀ A)` of a monic `j: A -> B` with `A` homotopically
    /// discrete: collapses each embedded `A`-component. Returns the quotient
    /// groupoid and the induced map from `B` (checked to be an equivalence).
    pub fn pushout_along_hd(
        &self, // B
        a: &FiniteGroupoid,
        j: &GroupoidMap,
    ) -> Result<(FiniteGroupoid, GroupoidMap)> {
        let (hd, _, why) = a.is_homotopically_discrete();
        if !hd {
            return Err(Error::invalid(format!(
                "pushout_along_hd: A is not homotopically discrete ({})",
                why.unwrap_or_default()
            )));
        }
        // monicity
        let mut seen_obj = BTreeSet::new();
        for &o in &j.objects {
            if !seen_obj.insert(o) {
                return Err(Error::invalid("pushout_along_hd: j not injective on objects"));
            }
        }
        let mut seen_mor = BTreeSet::new();
        for &m in &j.morphisms {
            if !seen_mor.insert(m) {
                return Err(Error::invalid("pushout_along_hd: j not injective on morphisms"));
            }
        }
        // object classes: collapse each A-component
        let mut ouf = UnionFind::new(self.n_objects);
        for m in 0..a.n_morphisms() {
            ouf.union(j.objects[a.src[m]], j.objects[a.tgt[m]]);
        }
        let (ocls, n_ocls) = ouf.quotient();
        // morphism congruence: m ~ j(α) ∘ m and m ~ m ∘ j(α)
        let mut muf = UnionFind::new(self.n_morphisms());
        for m in 0..self.n_morphisms() {
            for am in 0..a.n_morphisms() {
                let ja = j.morphisms[am];
                if self.tgt[m] == self.src[ja] {
                    muf.union(m, self.comp[&(ja, m)]);
                }
                if self.tgt[ja] == self.src[m] {
                    muf.union(m, self.comp[&(m, ja)]);
                }
            }
        }
        let (mcls, n_mcls) = muf.quotient();
        // pick least representatives per class
        let mut mrep = vec![usize::MAX; n_mcls];
        for m in (0..self.n_morphisms()).rev() {
            mrep[mcls[m]] = m;
        }
        let mut orep = vec![usize::MAX; n_ocls];
        for o in (0..self.n_objects).rev() {
            orep[ocls[o]] = o;
        }
        // unique A-connector between two objects of one collapsed component
        let connector = |from: usize, to: usize| -> Option<usize> {
            if from == to {
                return Some(self.id[from]);
            }
            for am in 0..a.n_morphisms() {
                if j.objects[a.src[am]] == from && j.objects[a.tgt[am]] == to {
                    return Some(j.morphisms[am]);
                }
            }
            None
        };
        let src: Vec<usize> = mrep.iter().map(|&m| ocls[self.src[m]]).collect();
        let tgt: Vec<usize> = mrep.iter().map(|&m| ocls[self.tgt[m]]).collect();
        let id: Vec<usize> = orep.iter().map(|&o| mcls[self.id[o]]).collect();
        let mut comp = BTreeMap::new();
        for gi in 0..n_mcls {
            for hi in 0..n_mcls {
                if src[gi] != tgt[hi] {
                    continue;
                }
                let g = mrep[gi];
                let h = mrep[hi];
                let conn = connector(self.tgt[h], self.src[g]).ok_or_else(|| {
                    Error::invalid("pushout_along_hd: missing A-connector in collapsed class")
                })?;
                let c = self.comp[&(g, self.comp[&(conn, h)])];
                comp.insert((gi, hi), mcls[c]);
            }
        }
        let inv: Vec<usize> = mrep.iter().map(|&m| mcls[self.inv[m]]).collect();
        let out = FiniteGroupoid {
            n_objects: n_ocls,
            src,
            tgt,
            id,
            comp,
            inv,
            object_labels: None,
            morphism_labels: None,
        };
        let rep = out.validate();
        if !rep.is_pass() {
            return Err(Error::invalid(format!(
                "pushout_along_hd: quotient is not a groupoid: {:?}",
                rep.violations.first()
            )));
        }
        let induced = GroupoidMap {
            objects: ocls,
            morphisms: mcls,
        };
        let maprep = induced.validate(self, &out);
        if !maprep.is_pass() {
            return Err(Error::invalid("pushout_along_hd: induced map not functorial"));
        }
        if !induced.is_equivalence(self, &out).0 {
            return Err(Error::invalid("pushout_along_hd: induced map not an equivalence"));
        }
        Ok((out, induced))
    }
}

impl GroupoidMap {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidMap {
            objects: (0..g.n_objects).collect(),
            morphisms: (0..g.n_morphisms()).collect(),
        }
    }

    /// Functoriality check: preserves src/tgt/id/comp.
    pub fn validate(&self, src: &FiniteGroupoid, tgt: &FiniteGroupoid) -> Report {
        let mut rep = Report::new("groupoid map");
        if self.objects.len() != src.n_objects || self.morphisms.len() != src.n_morphisms() {
            rep.violation("totality", "object/morphism map lengths");
            return rep;
        }
        if self.objects.iter().any(|&o| o >= tgt.n_objects)
            || self.morphisms.iter().any(|&m| m >= tgt.n_morphisms())
        {
            rep.violation("range", "image out of bounds");
            return rep;
        }
        for m in 0..src.n_morphisms() {
            let fm = self.morphisms[m];
            if tgt.src[fm] != self.objects[src.src[m]] || tgt.tgt[fm] != self.objects[src.tgt[m]] {
                rep.violation("endpoints", format!("morphism {m}"));
            }
        }
        for o in 0..src.n_objects {
            if self.morphisms[src.id[o]] != tgt.id[self.objects[o]] {
                rep.violation("identities", format!("object {o}"));
            }
        }
        for (&(g, h), &c) in &src.comp {
            let fg = self.morphisms[g];
            let fh = self.morphisms[h];
            if tgt.comp.get(&(fg, fh)) != Some(&self.morphisms[c]) {
                rep.violation("composition", format!("pair ({g}, {h})"));
            }
        }
        rep
    }

    pub fn compose(&self, then: &GroupoidMap) -> GroupoidMap {
        GroupoidMap {
            objects: self.objects.iter().map(|&o| then.objects[o]).collect(),
            morphisms: self.morphisms.iter().map(|&m| then.morphisms[m]).collect(),
        }
    }

    /// Essential surjectivity + full faithfulness, checked exhaustively.
    /// Returns the verdict and a failure witness.
    pub fn is_equivalence(&self, src: &FiniteGroupoid, tgt: &FiniteGroupoid) -> (bool, Option<String>) {
        // essentially surjective <=> surjective on π₀
        let (tcls, tn) = tgt.pi0();
        let mut hit = vec![false; tn];
        for &o in &self.objects {
            hit[tcls[o]] = true;
        }
        if let Some(missing) = hit.iter().position(|&h| !h) {
            return (
                false,
                Some(format!("not essentially surjective: target component {missing} missed")),
            );
        }
        // fully faithful on every ordered pair of source objects; hom sets
        // are bucketed once to keep this linear in the morphism count
        let bucket = |g: &FiniteGroupoid| -> BTreeMap<(usize, usize), Vec<usize>> {
            let mut b: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
            for m in 0..g.n_morphisms() {
                b.entry((g.src[m], g.tgt[m])).or_default().push(m);
            }
            b
        };
        let dom_homs = bucket(src);
        let cod_homs = bucket(tgt);
        let empty: Vec<usize> = Vec::new();
        for a in 0..src.n_objects {
            for b in 0..src.n_objects {
                let dom = dom_homs.get(&(a, b)).unwrap_or(&empty);
                let cod = cod_homs
                    .get(&(self.objects[a], self.objects[b]))
                    .unwrap_or(&empty);
                if dom.len() != cod.len() {
                    return (
                        false,
                        Some(format!("not fully faithful on hom({a}, {b})")),
                    );
                }
                if !dom.is_empty() {
                    let image: BTreeSet<usize> = dom.iter().map(|&m| self.morphisms[m]).collect();
                    if image.len() != dom.len() {
                        return (false, Some(format!("not faithful on hom({a}, {b})")));
                    }
                }
            }
        }
        (true, None)
    }
}

impl GroupTable {
    pub fn cyclic(n: usize) -> Self {
        GroupTable {
            mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    /// Symmetric group on `k` letters, elements = permutations in
    /// lexicographic order of their one-line notation (identity first).
    pub fn symmetric(k: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut p: Vec<usize> = (0..k).collect();
        loop {
            perms.push(p.clone());
            // next lexicographic permutation
            let mut i = k.wrapping_sub(1);
            while i > 0 && p[i - 1] >= p[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = k - 1;
            while p[j] <= p[i - 1] {
                j -= 1;
            }
            p.swap(i - 1, j);
            p[i..].reverse();
        }
        // mul[a][b] = a ∘ b (apply b first)
        let pos: BTreeMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, q)| (q.clone(), i)).collect();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..k).map(|x| a[b[x]]).collect();
                        pos[&ab]
                    })
                    .collect()
            })
            .collect();
        GroupTable { mul }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    /// Brute-force isomorphism test, pruned by element orders.
    pub fn isomorphic(&self, other: &GroupTable) -> bool {
        let n = self.order();
        if n != other.order() {
            return false;
        }
        let mut ord_a: Vec<usize> = (0..n).map(|a| self.element_order(a)).collect();
        let mut ord_b: Vec<usize> = (0..n).map(|b| other.element_order(b)).collect();
        {
            let mut sa = ord_a.clone();
            let mut sb = ord_b.clone();
            sa.sort_unstable();
            sb.sort_unstable();
            if sa != sb {
                return false;
            }
        }
        ord_a[0] = 1;
        ord_b[0] = 1;
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        self.iso_search(other, &ord_a, &ord_b, &mut map, &mut used)
    }

    fn iso_search(
        &self,
        other: &GroupTable,
        ord_a: &[usize],
        ord_b: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = self.order();
        let next = match (0..n).find(|&a| map[a] == usize::MAX) {
            None => return true,
            Some(a) => a,
        };
        for cand in 0..n {
            if used[cand] || ord_a[next] != ord_b[cand] {
                continue;
            }
            // tentatively assign and check all products with assigned elements
            map[next] = cand;
            used[cand] = true;
            let mut ok = true;
            'check: for x in 0..n {
                if map[x] == usize::MAX {
                    continue;
                }
                for (p, q) in [(next, x), (x, next)] {
                    let prod = self.mul[p][q];
                    if map[prod] != usize::MAX
                        && other.mul[map[p]][map[q]] != map[prod]
                    {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok && self.iso_search(other, ord_a, ord_b, map, used) {
                return true;
            }
            map[next] = usize::MAX;
            used[cand] = false;
        }
        false
    }
}

/// Exact isomorphism test for finite groupoids: components are matched by
/// size and vertex-group isomorphism class (a connected groupoid is
/// determined up to iso by those two data).
pub fn groupoid_isomorphic(a: &FiniteGroupoid, b: &FiniteGroupoid) -> bool {
    let (acls, an) = a.pi0();
    let (bcls, bn) = b.pi0();
    if an != bn || a.n_objects != b.n_objects || a.n_morphisms() != b.n_morphisms() {
        return false;
    }
    let comp_data = |g: &FiniteGroupoid, cls: &[usize], n: usize| -> Vec<(usize, GroupTable)> {
        let mut reps = vec![usize::MAX; n];
        let mut sizes = vec![0usize; n];
        for o in 0..g.n_objects {
            sizes[cls[o]] += 1;
            if reps[cls[o]] == usize::MAX {
                reps[cls[o]] = o;
            }
        }
        (0..n).map(|c| (sizes[c], g.vertex_group(reps[c]).0)).collect()
    };
    let mut da = comp_data(a, &acls, an);
    let mut db = comp_data(b, &bcls, bn);
    // match greedily: sort by (size, group order), then test iso pairwise
    let key = |d: &(usize, GroupTable)| (d.0, d.1.order());
    da.sort_by_key(key);
    db.sort_by_key(key);
    let mut used = vec![false; bn];
    for x in &da {
        let mut found = false;
        for (i, y) in db.iter().enumerate() {
            if used[i] || x.0 != y.0 || x.1.order() != y.1.order() {
                continue;
            }
            if x.1.isomorphic(&y.1) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    true
}

/// Equivalence of finite groupoids: same number of components, matched by
/// vertex-group isomorphism class (component sizes are irrelevant up to
/// equivalence).
pub fn groupoid_equivalent(a: &FiniteGroupoid, b: &FiniteGroupoid) -> bool {
    let (acls, an) = a.pi0();
    let (bcls, bn) = b.pi0();
    if an != bn {
        return false;
    }
    let groups = |g: &FiniteGroupoid, cls: &[usize], n: usize| -> Vec<GroupTable> {
        let mut reps = vec![usize::MAX; n];
        for o in 0..g.n_objects {
            if reps[cls[o]] == usize::MAX {
                reps[cls[o]] = o;
            }
        }
        (0..n).map(|c| g.vertex_group(reps[c]).0).collect()
    };
    let ga = groups(a, &acls, an);
    let gb = groups(b, &bcls, bn);
    let mut used = vec![false; bn];
    for x in &ga {
        let mut found = false;
        for (i, y) in gb.iter().enumerate() {
            if !used[i] && x.order() == y.order() && x.isomorphic(y) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    true
}

/// Recognize a truncated simplicial set as the nerve of a groupoid: Segal
/// maps at k = 2 (and 3, within bound) must be bijections and the induced
/// composition must admit inverses. Round-trips with `nerve`.
pub fn recognize_nerve(x: &crate::sset::TruncatedSSet) -> crate::error::Result<FiniteGroupoid> {
    use crate::error::Error;
    for k in 2..=x.bound.min(3) {
        let cmp = x.segal_map(k)?;
        if !cmp.is_bijective() {
            return Err(Error::invalid(format!("Segal map k={k} not bijective")));
        }
    }
    let core = crate::msset::TruncatedMultiSSet::from_sset(&x.truncate(2));
    let rep = crate::nfold::validate_core(&core);
    if !rep.is_pass() {
        return Err(Error::invalid(format!(
            "not a groupoid nerve: {:?}",
            rep.violations.first()
        )));
    }
    Ok(crate::nfold::direction_groupoid_of(&core, 0, &[]))
}

/// Plain union-find over `0..n`.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != c {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    /// Class index of every element (classes numbered by first occurrence)
    /// and the number of classes.
    pub fn quotient(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut cls = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if cls[r] == usize::MAX {
                cls[r] = count;
                count += 1;
            }
            cls[x] = cls[r];
        }
        (cls, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_validates() {
        for n in 1..=4 {
            let g = FiniteGroupoid::from_group(&GroupTable::cyclic(n));
            assert!(g.validate().is_pass(), "Z/{n}");
        }
        let s3 = FiniteGroupoid::from_group(&GroupTable::symmetric(3));
        assert!(s3.validate().is_pass());
        assert_eq!(s3.n_morphisms(), 6);
        assert!(!GroupTable::symmetric(3).is_abelian());
        assert!(GroupTable::cyclic(4).is_abelian());
    }

    #[test]
    fn broken_inverse_is_reported() {
        let mut g = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
        g.inv[1] = 1; // 1 + 1 ≠ 0 mod 3
        let rep = g.validate();
        assert!(!rep.is_pass());
        assert!(rep.violations.iter().any(|v| v.rule.contains("inverse")));
    }

    #[test]
    fn af_construction_counts() {
        // f: {0,1,2} -> {0,1} with fibers {0,1} and {2}: 2² + 1² morphisms
        let g = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
        assert!(g.validate().is_pass());
        assert_eq!(g.n_morphisms(), 5);
        // identity map gives the discrete groupoid
        let d = FiniteGroupoid::af_construction(&[0, 1, 2], 3);
        assert_eq!(d.n_morphisms(), 3);
        // π₀(A^f) ≅ B for surjective f
        let (_, n) = g.pi0();
        assert_eq!(n, 2);
    }

    #[test]
    fn hd_detection() {
        let g = FiniteGroupoid::af_construction(&[0, 0, 1, 1, 1], 2);
        assert!(g.is_homotopically_discrete().0);
        let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let (hd, _, why) = z2.is_homotopically_discrete();
        assert!(!hd);
        assert!(why.unwrap().contains("two morphisms"));
        // closed under products
        let h = FiniteGroupoid::af_construction(&[0, 0], 1);
        let p = g.product(&h);
        assert!(p.validate().is_pass());
        assert!(p.is_homotopically_discrete().0);
    }

    #[test]
    fn nerve_counts_and_segal() {
        let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let n = z2.nerve(3);
        assert_eq!(n.sizes, vec![1, 2, 4, 8]);
        assert!(n.validate().is_pass());
        for k in 2..=3 {
            assert!(n.segal_map(k).unwrap().is_bijective());
        }
        // nerve of a discrete groupoid is constant
        let d = FiniteGroupoid::discrete(3);
        assert_eq!(d.nerve(3).sizes, vec![3, 3, 3, 3]);
        // nerve(A^f) level k has |A ×_B ... ×_B A| (k+1 factors) cells
        let g = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
        let ng = g.nerve(3);
        // fibers of sizes 2 and 1: level k counts 2^{k+1} + 1
        assert_eq!(ng.sizes, vec![3, 5, 9, 17]);
        assert!(ng.validate().is_pass());
    }

    #[test]
    fn pi0_on_components() {
        let a = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let b = FiniteGroupoid::discrete(2);
        let u = a.disjoint_union(&b);
        let (cls, n) = u.pi0();
        assert_eq!(n, 3);
        assert_eq!(cls[0], 0);
    }

    #[test]
    fn equivalence_checks() {
        let g = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
        let idm = GroupoidMap::identity(&g);
        assert!(idm.is_equivalence(&g, &g).0);
        // γ: A^f -> c(π₀ A^f) is an equivalence
        let (cls, n) = g.pi0();
        let c = FiniteGroupoid::discrete(n);
        let gamma = GroupoidMap {
            objects: cls.clone(),
            morphisms: (0..g.n_morphisms()).map(|m| c.id[cls[g.src[m]]]).collect(),
        };
        assert!(gamma.validate(&g, &c).is_pass());
        assert!(gamma.is_equivalence(&g, &c).0);
        // collapsing Z/2 to the point is not full... it is full but not faithful
        let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let pt = FiniteGroupoid::discrete(1);
        let collapse = GroupoidMap {
            objects: vec![0],
            morphisms: vec![0, 0],
        };
        let (ok, witness) = collapse.is_equivalence(&z2, &pt);
        assert!(!ok);
        assert!(witness.unwrap().contains("hom"));
    }

    #[test]
    fn pushout_collapses_hd_subgroupoid() {
        // A = B homotopically discrete: result is c(π₀ A)
        let a = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
        let (out, from_b) = a.pushout_along_hd(&a, &GroupoidMap::identity(&a)).unwrap();
        assert_eq!(out.n_objects, 2);
        assert_eq!(out.n_morphisms(), 2);
        let _ = from_b;
        // A discrete: B unchanged
        let b = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let a2 = FiniteGroupoid::discrete(1);
        let j = GroupoidMap {
            objects: vec![0],
            morphisms: vec![b.id[0]],
        };
        let (out2, _) = b.pushout_along_hd(&a2, &j).unwrap();
        assert_eq!(out2.n_morphisms(), b.n_morphisms());
    }

    #[test]
    fn pullback_over_discrete_preserves_hd() {
        let g = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
        let h = FiniteGroupoid::discrete(2);
        let (cls, _) = g.pi0();
        let f = GroupoidMap {
            objects: cls.clone(),
            morphisms: (0..g.n_morphisms()).map(|m| h.id[cls[g.src[m]]]).collect(),
        };
        let p = g.pullback(&g, &f, &f);
        assert!(p.validate().is_pass());
        assert!(p.is_homotopically_discrete().0);
        // cardinality oracle: pairs of morphisms with equal class
        let mut count = 0;
        for m in 0..g.n_morphisms() {
            for m2 in 0..g.n_morphisms() {
                if cls[g.src[m]] == cls[g.src[m2]] {
                    count += 1;
                }
            }
        }
        assert_eq!(p.n_morphisms(), count);
    }

    #[test]
    fn group_iso_brute_force() {
        assert!(GroupTable::cyclic(6).isomorphic(&GroupTable::cyclic(6)));
        assert!(!GroupTable::cyclic(6).isomorphic(&GroupTable::symmetric(3)));
        let s3 = GroupTable::symmetric(3);
        assert!(s3.isomorphic(&s3));
    }

    #[test]
    fn groupoid_iso_by_components() {
        let a = FiniteGroupoid::from_group(&GroupTable::cyclic(2))
            .disjoint_union(&FiniteGroupoid::discrete(1));
        let b = FiniteGroupoid::discrete(1)
            .disjoint_union(&FiniteGroupoid::from_group(&GroupTable::cyclic(2)));
        assert!(groupoid_isomorphic(&a, &b));
        let c = FiniteGroupoid::discrete(2);
        assert!(!groupoid_isomorphic(&a, &c));
    }
}
