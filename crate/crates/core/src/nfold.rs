//! n-fold groupoids stored as 2-truncated multinerves.
//!
//! Nerves of groupoids are 2-coskeletal, so an n-fold groupoid is faithfully
//! represented by its multinerve truncated at index 2 in every direction.
//! Higher multinerve levels are rebuilt on demand by `multinerve`.
//!
//! Directions are numbered `0..n` internally; the object-level clauses of
//! weak globularity and homotopy discreteness single out direction 0, and
//! `pi0_functor` collapses the last direction.

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupTable, UnionFind};
use crate::msset::{extend_direction, pi0_direction, MultiSSetMap, TruncatedMultiSSet};
use crate::report::Report;
use std::collections::BTreeMap;

/// An n-fold groupoid: a validated 2-truncated multinerve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NFoldGroupoid {
    pub core: TruncatedMultiSSet,
}

/// A map of n-fold groupoids, given cellwise on cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NFoldMap {
    pub map: MultiSSetMap,
}

/// Witness produced by hd recognition: the base, quotient and section data.
#[derive(Debug, Clone)]
pub struct HdWitness {
    /// The base object `B` (arity n−1 core; a bare set at the base case).
    pub base: TruncatedMultiSSet,
    /// Class of each `G₀`-cell per flat index of `B`.
    pub quotient: Vec<Vec<usize>>,
    /// Chosen representative of each class per flat index of `B`.
    pub section: Vec<Vec<usize>>,
}

impl NFoldGroupoid {
    pub fn arity(&self) -> usize {
        self.core.arity()
    }

    /// Validates a 2-truncated multi-simplicial set as an n-fold groupoid:
    /// multi-simplicial identities plus, in every direction and at every
    /// complementary multi-index, bijective k=2 Segal maps and groupoid
    /// axioms for the induced composition.
    pub fn from_core(core: TruncatedMultiSSet) -> Result<NFoldGroupoid> {
        let rep = validate_core(&core);
        if !rep.is_pass() {
            return Err(Error::NotMultinerve(
                rep.violations
                    .first()
                    .map(|v| format!("{} at {}", v.rule, v.witness))
                    .unwrap_or_default(),
            ));
        }
        Ok(NFoldGroupoid { core })
    }

    /// Slice at fixed direction indices; the result is again an n-fold
    /// groupoid core in the remaining directions.
    pub fn slice(&self, fixed: &[(usize, usize)]) -> NFoldGroupoid {
        NFoldGroupoid {
            core: self.core.slice(fixed),
        }
    }

    /// The k-fold object of arrows: indices 1 in the first `k` directions.
    pub fn w_arrows(&self, k: usize) -> NFoldGroupoid {
        assert!(k <= self.arity());
        self.slice(&(0..k).map(|d| (d, 1)).collect::<Vec<_>>())
    }

    /// Extend the core to the given multinerve bounds by iterated fiber
    /// products per direction; restricting back to 2 recovers the core.
    pub fn multinerve(&self, bounds: &[usize]) -> Result<TruncatedMultiSSet> {
        assert_eq!(bounds.len(), self.arity());
        let mut out = self.core.clone();
        for d in 0..self.arity() {
            if bounds[d] > 2 {
                out = extend_direction(&out, d, bounds[d])?;
            } else if bounds[d] < 2 {
                let mut nb = out.bounds.clone();
                nb[d] = bounds[d];
                out = out.truncate(&nb);
            }
        }
        Ok(out)
    }

    /// Levels of the direction-`dir` nerve, each an (n−1)-fold groupoid.
    pub fn nerve_direction(&self, dir: usize, bound: usize) -> Result<Vec<NFoldGroupoid>> {
        let mut bounds = vec![2; self.arity()];
        bounds[dir] = bound.max(2);
        let ext = self.multinerve(&bounds)?;
        Ok((0..=bound)
            .map(|k| NFoldGroupoid {
                core: ext.slice(&[(dir, k)]),
            })
            .collect())
    }

    /// The groupoid in direction `dir` at a complementary multi-index,
    /// materialized with its composition table.
    pub fn direction_groupoid(&self, dir: usize, at: &[(usize, usize)]) -> FiniteGroupoid {
        direction_groupoid_of(&self.core, dir, at)
    }

    /// π₀ in the last direction, cellwise. Succeeds iff the quotient is
    /// again an (n−1)-fold groupoid core; returns it with the unit map
    /// `γ: G -> c(Π₀ G)` into the constant extension of the quotient.
    pub fn pi0_functor(&self) -> Result<Pi0Result> {
        let n = self.arity();
        if n == 0 {
            return Err(Error::invalid("pi0_functor: arity 0"));
        }
        let dir = n - 1;
        let (q, class_maps) = pi0_direction(&self.core, dir)?;
        let rep = validate_core(&q);
        if !rep.is_pass() {
            return Err(Error::NotMultinerve(
                rep.violations
                    .first()
                    .map(|v| format!("{} at {}", v.rule, v.witness))
                    .unwrap_or_default(),
            ));
        }
        let constant = constant_in_direction(&q, dir);
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); self.core.n_indices()];
        for p in self.core.indices() {
            let fp = self.core.flat(&p);
            let mut qidx = p.clone();
            qidx.remove(dir);
            let fq = q.flat(&qidx);
            // walk down to dir-level 0 via d₁ (source), then take the class
            levels[fp] = (0..self.core.sizes[fp])
                .map(|c| {
                    let mut cur = c;
                    let mut pp = p.clone();
                    while pp[dir] > 0 {
                        cur = self.core.faces[&(dir, 1, self.core.flat(&pp))][cur];
                        pp[dir] -= 1;
                    }
                    class_maps[fq][cur]
                })
                .collect();
        }
        let unit = MultiSSetMap {
            bounds: self.core.bounds.clone(),
            levels,
        };
        debug_assert!(unit.validate(&self.core, &constant).is_pass());
        Ok(Pi0Result {
            quotient: NFoldGroupoid { core: q },
            class_maps,
            unit,
            constant,
        })
    }

    /// Iterate `pi0_functor` down to a set: returns the base set size, the
    /// class of every cell at (0,...,0), and the map `Γ` to the discrete
    /// n-fold groupoid on that set.
    pub fn discretize_object(&self) -> Result<Discretization> {
        let mut cur = self.clone();
        let zero_size = self.core.sizes[self.core.flat(&vec![0; self.arity()])];
        let mut cls0: Vec<usize> = (0..zero_size).collect();
        for _ in 0..self.arity() {
            let r = cur.pi0_functor()?;
            let q = &r.quotient;
            let zero = vec![0; q.arity()];
            let stage = &r.class_maps[q.core.flat(&zero)];
            cls0 = cls0.iter().map(|&c| stage[c]).collect();
            cur = r.quotient;
        }
        let size = cur.core.sizes[0];
        let discrete = discrete_nfold(size, self.arity());
        // Γ: every cell maps to the class of its iterated source vertex
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); self.core.n_indices()];
        for p in self.core.indices() {
            let fp = self.core.flat(&p);
            levels[fp] = (0..self.core.sizes[fp])
                .map(|c| {
                    let mut cur_c = c;
                    let mut pp = p.clone();
                    for d in 0..self.arity() {
                        while pp[d] > 0 {
                            cur_c = self.core.faces[&(d, 1, self.core.flat(&pp))][cur_c];
                            pp[d] -= 1;
                        }
                    }
                    cls0[cur_c]
                })
                .collect();
        }
        let gamma = NFoldMap {
            map: MultiSSetMap {
                bounds: self.core.bounds.clone(),
                levels,
            },
        };
        Ok(Discretization {
            size,
            class_of_base_cell: cls0,
            gamma,
            discrete,
        })
    }

    /// ω₀: the iterated-π₀ set, with the class of every base cell.
    pub fn omega0(&self) -> Result<(usize, Vec<usize>)> {
        let d = self.discretize_object()?;
        Ok((d.size, d.class_of_base_cell))
    }

    /// ω_k(G; x₀) for `1 <= k <= n`, as a group table. `x₀` indexes a cell
    /// at (0,...,0). For `k >= 2` the group is checked to be abelian.
    pub fn omega(&self, k: usize, x0: usize) -> Result<GroupTable> {
        let n = self.arity();
        assert!(k >= 1 && k <= n);
        let mut cur = self.clone();
        let mut base = x0;
        for _ in k..n {
            let r = cur.pi0_functor()?;
            let zero = vec![0; r.quotient.arity()];
            base = r.class_maps[r.quotient.core.flat(&zero)][base];
            cur = r.quotient;
        }
        let g = cur.top_arrow_groupoid();
        let obj = cur.degenerate_base_object(base);
        let (table, _) = g.vertex_group(obj);
        if k >= 2 && !table.is_abelian() {
            return Err(Error::invalid(format!(
                "omega: ω_{k} not abelian at basepoint {x0}"
            )));
        }
        Ok(table)
    }

    /// The groupoid (in the last direction) of `W_{n,n-1}`.
    pub fn top_arrow_groupoid(&self) -> FiniteGroupoid {
        let n = self.arity();
        let at: Vec<(usize, usize)> = (0..n - 1).map(|d| (d, 1)).collect();
        self.direction_groupoid(n - 1, &at)
    }

    /// Image of a base cell under degeneracies into (1,...,1,0).
    pub fn degenerate_base_object(&self, x0: usize) -> usize {
        let n = self.arity();
        let mut cur = x0;
        let mut p = vec![0usize; n];
        for d in 0..n - 1 {
            cur = self.core.degens[&(d, 0, self.core.flat(&p))][cur];
            p[d] = 1;
        }
        cur
    }

    /// Homotopy discreteness (Ghd^n membership), with witness.
    pub fn is_hd(&self) -> (bool, Option<HdWitness>, Report) {
        let mut rep = Report::new("homotopically discrete n-fold groupoid");
        let n = self.arity();
        if n == 1 {
            let g = self.direction_groupoid(0, &[]);
            let (ok, cls, why) = g.is_homotopically_discrete();
            rep.clause("at most one morphism per ordered pair", ok);
            if let Some(w) = why {
                rep.violation("hom size", w);
            }
            if !ok {
                return (false, None, rep);
            }
            let cls = cls.unwrap();
            let n_cls = cls.iter().copied().max().map_or(0, |m| m + 1);
            let mut section = vec![usize::MAX; n_cls];
            for (o, &c) in cls.iter().enumerate() {
                if section[c] == usize::MAX {
                    section[c] = o;
                }
            }
            let witness = HdWitness {
                base: discrete_nfold(n_cls, 0).core,
                quotient: vec![cls],
                section: vec![section],
            };
            return (true, Some(witness), rep);
        }
        // (i) G₀ and G₁ homotopically discrete (n−1)-fold groupoids
        let g0 = self.slice(&[(0, 0)]);
        let g1 = self.slice(&[(0, 1)]);
        let (ok0, _, sub0) = g0.is_hd();
        rep.absorb("G₀ homotopically discrete", sub0);
        let (ok1, _, sub1) = g1.is_hd();
        rep.absorb("G₁ homotopically discrete", sub1);
        if !ok0 || !ok1 {
            return (false, None, rep);
        }
        // (ii) (d₁,d₀): G₁ -> G₀ × G₀ monic cellwise
        let mut monic = true;
        for q in g1.core.indices() {
            let mut p = q.clone();
            p.insert(0, 1);
            let fp = self.core.flat(&p);
            let d0 = &self.core.faces[&(0, 0, fp)];
            let d1 = &self.core.faces[&(0, 1, fp)];
            let mut seen = BTreeMap::new();
            for c in 0..self.core.sizes[fp] {
                if seen.insert((d1[c], d0[c]), c).is_some() {
                    monic = false;
                    rep.violation("(d₁,d₀) monic", format!("cells at {p:?}"));
                    break;
                }
            }
        }
        rep.clause("(d₁,d₀) monic", monic);
        if !monic {
            return (false, None, rep);
        }
        // (iii) quotient by the image relation
        let mut base = TruncatedMultiSSet::empty(g0.core.bounds.clone());
        let mut quotient: Vec<Vec<usize>> = vec![Vec::new(); base.n_indices()];
        for q in g0.core.indices() {
            let fq = g0.core.flat(&q);
            let mut p1 = q.clone();
            p1.insert(0, 1);
            let fp1 = self.core.flat(&p1);
            let d0 = &self.core.faces[&(0, 0, fp1)];
            let d1 = &self.core.faces[&(0, 1, fp1)];
            let mut uf = UnionFind::new(g0.core.sizes[fq]);
            for c in 0..self.core.sizes[fp1] {
                uf.union(d1[c], d0[c]);
            }
            let (cls, n_cls) = uf.quotient();
            base.sizes[fq] = n_cls;
            quotient[fq] = cls;
        }
        let mut congruence = true;
        for q in g0.core.indices() {
            let fq = g0.core.flat(&q);
            for d in 0..base.arity() {
                if q[d] >= 1 {
                    let fq2 = g0.core.flat(&TruncatedMultiSSet::shift(&q, d, -1));
                    for i in 0..=q[d] {
                        let t = &g0.core.faces[&(d, i, fq)];
                        match induce_on_classes(&quotient[fq], &quotient[fq2], t, base.sizes[fq]) {
                            Some(tbl) => {
                                base.faces.insert((d, i, fq), tbl);
                            }
                            None => congruence = false,
                        }
                    }
                }
                if q[d] < base.bounds[d] {
                    let fq2 = g0.core.flat(&TruncatedMultiSSet::shift(&q, d, 1));
                    for i in 0..=q[d] {
                        let t = &g0.core.degens[&(d, i, fq)];
                        match induce_on_classes(&quotient[fq], &quotient[fq2], t, base.sizes[fq]) {
                            Some(tbl) => {
                                base.degens.insert((d, i, fq), tbl);
                            }
                            None => congruence = false,
                        }
                    }
                }
            }
        }
        rep.clause("image relation is a congruence", congruence);
        if !congruence {
            return (false, None, rep);
        }
        let base_rep = validate_core(&base);
        rep.absorb("B = G₀/R is an (n−1)-fold groupoid", base_rep);
        let b = match NFoldGroupoid::from_core(base.clone()) {
            Ok(b) => b,
            Err(_) => return (false, None, rep),
        };
        let (b_hd, _, sub_b) = b.is_hd();
        rep.absorb("B homotopically discrete", sub_b);
        if !b_hd {
            return (false, None, rep);
        }
        // G₁ ≅ G₀ ×_B G₀: with (d₁,d₀) monic onto the equivalence relation a
        // cardinality check per index suffices
        let mut fiber_ok = true;
        for q in g0.core.indices() {
            let fq = g0.core.flat(&q);
            let mut count = vec![0usize; base.sizes[fq]];
            for &c in &quotient[fq] {
                count[c] += 1;
            }
            let expect: usize = count.iter().map(|&k| k * k).sum();
            let mut p1 = q.clone();
            p1.insert(0, 1);
            if self.core.sizes[self.core.flat(&p1)] != expect {
                fiber_ok = false;
                rep.violation("G₁ ≅ G₀ ×_B G₀", format!("cardinality at {q:?}"));
            }
        }
        rep.clause("G₁ ≅ G₀ ×_B G₀", fiber_ok);
        if !fiber_ok {
            return (false, None, rep);
        }
        // (iv) a section of G₀ -> B that is a map of (n−1)-fold groupoids;
        // least representatives are tried first
        match section_search(&g0.core, &base, &quotient) {
            Some(section) => {
                rep.clause("section is an (n−1)-fold map", true);
                (
                    true,
                    Some(HdWitness {
                        base,
                        quotient,
                        section,
                    }),
                    rep,
                )
            }
            None => {
                rep.clause("section is an (n−1)-fold map", false);
                (false, None, rep)
            }
        }
    }

    /// The induced Segal comparison in the first direction at stage `k`:
    /// the slice `G_k`, the fiber product of `k` copies of `G₁` over the
    /// discretized `G₀`, and the comparison map between them.
    pub fn induced_segal(&self, k: usize) -> Result<InducedSegal> {
        assert!(k >= 2);
        let n = self.arity();
        if n < 2 {
            return Err(Error::invalid("induced_segal: arity must be >= 2"));
        }
        let mut bounds = vec![2; n];
        bounds[0] = k;
        let ext = self.multinerve(&bounds)?;
        let lhs = NFoldGroupoid {
            core: ext.slice(&[(0, k)]),
        };
        let g0 = self.slice(&[(0, 0)]);
        let g1 = self.slice(&[(0, 1)]);
        let disc = g0.discretize_object()?;
        let gamma = &disc.gamma.map;
        let mut rhs = TruncatedMultiSSet::empty(g1.core.bounds.clone());
        let mut tuple_index: Vec<BTreeMap<Vec<usize>, usize>> =
            vec![BTreeMap::new(); rhs.n_indices()];
        for q in g1.core.indices() {
            let fq = g1.core.flat(&q);
            let mut p1 = q.clone();
            p1.insert(0, 1);
            let fp1 = self.core.flat(&p1);
            let d0 = &self.core.faces[&(0, 0, fp1)];
            let d1 = &self.core.faces[&(0, 1, fp1)];
            let n1 = self.core.sizes[fp1];
            let src_cls: Vec<usize> = (0..n1).map(|c| gamma.levels[fq][d1[c]]).collect();
            let tgt_cls: Vec<usize> = (0..n1).map(|c| gamma.levels[fq][d0[c]]).collect();
            let mut cells: Vec<Vec<usize>> = Vec::new();
            let mut stack: Vec<Vec<usize>> = vec![vec![]];
            while let Some(t) = stack.pop() {
                if t.len() == k {
                    cells.push(t);
                    continue;
                }
                for e in (0..n1).rev() {
                    if t.is_empty() || tgt_cls[*t.last().unwrap()] == src_cls[e] {
                        let mut s = t.clone();
                        s.push(e);
                        stack.push(s);
                    }
                }
            }
            cells.sort();
            for (i, t) in cells.iter().enumerate() {
                tuple_index[fq].insert(t.clone(), i);
            }
            rhs.sizes[fq] = cells.len();
        }
        for q in g1.core.indices() {
            let fq = g1.core.flat(&q);
            let cells: Vec<Vec<usize>> = {
                let mut v = vec![Vec::new(); rhs.sizes[fq]];
                for (t, &i) in &tuple_index[fq] {
                    v[i] = t.clone();
                }
                v
            };
            for d in 0..rhs.arity() {
                if q[d] >= 1 {
                    let fq2 = rhs.flat(&TruncatedMultiSSet::shift(&q, d, -1));
                    for i in 0..=q[d] {
                        let t1 = &g1.core.faces[&(d, i, fq)];
                        rhs.faces.insert(
                            (d, i, fq),
                            cells
                                .iter()
                                .map(|t| {
                                    let img: Vec<usize> = t.iter().map(|&e| t1[e]).collect();
                                    tuple_index[fq2][&img]
                                })
                                .collect(),
                        );
                    }
                }
                if q[d] < rhs.bounds[d] {
                    let fq2 = rhs.flat(&TruncatedMultiSSet::shift(&q, d, 1));
                    for i in 0..=q[d] {
                        let t1 = &g1.core.degens[&(d, i, fq)];
                        rhs.degens.insert(
                            (d, i, fq),
                            cells
                                .iter()
                                .map(|t| {
                                    let img: Vec<usize> = t.iter().map(|&e| t1[e]).collect();
                                    tuple_index[fq2][&img]
                                })
                                .collect(),
                        );
                    }
                }
            }
        }
        let rhs_rep = validate_core(&rhs);
        if !rhs_rep.is_pass() {
            return Err(Error::NotMultinerve(format!(
                "induced Segal target at k={k}: {:?}",
                rhs_rep.violations.first()
            )));
        }
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); rhs.n_indices()];
        for q in lhs.core.indices() {
            let fq = lhs.core.flat(&q);
            let mut p = q.clone();
            p.insert(0, k);
            let fp = ext.flat(&p);
            levels[fq] = (0..ext.sizes[fp])
                .map(|c| {
                    let t: Vec<usize> =
                        (1..=k).map(|j| segal_edge_dir0(&ext, &p, c, j)).collect();
                    tuple_index[fq][&t]
                })
                .collect();
        }
        let map = NFoldMap {
            map: MultiSSetMap {
                bounds: lhs.core.bounds.clone(),
                levels,
            },
        };
        let rhs = NFoldGroupoid { core: rhs };
        Ok(InducedSegal { lhs, rhs, map })
    }

    /// Weak globularity, clause by clause. `k_max` bounds the stages at
    /// which the induced Segal maps are checked (k = 2..=k_max).
    pub fn is_weakly_globular(&self, k_max: usize) -> Report {
        let mut rep = Report::new("weakly globular n-fold groupoid");
        let n = self.arity();
        if n <= 1 {
            rep.clause("arity 1: every groupoid is weakly globular", true);
            return rep;
        }
        let g0 = self.slice(&[(0, 0)]);
        let (_, _, sub) = g0.is_hd();
        rep.absorb("(i) G₀ homotopically discrete", sub);
        let g1 = self.slice(&[(0, 1)]);
        rep.absorb("(ii) G₁ weakly globular", g1.is_weakly_globular(k_max));
        let mut ext_bounds = vec![2; n];
        ext_bounds[0] = k_max.max(2);
        match self.multinerve(&ext_bounds) {
            Ok(ext) => {
                for k in 2..=k_max.max(2) {
                    let gk = NFoldGroupoid {
                        core: ext.slice(&[(0, k)]),
                    };
                    rep.absorb(
                        format!("(ii) G_{k} weakly globular"),
                        gk.is_weakly_globular(k_max),
                    );
                }
            }
            Err(e) => rep.violation("(ii) multinerve extension", e.to_string()),
        }
        match self.pi0_functor() {
            Ok(r) => {
                rep.absorb(
                    "(iii) Π₀ weakly globular",
                    r.quotient.is_weakly_globular(k_max),
                );
            }
            Err(e) => {
                rep.violation("(iii) Π₀ is a multinerve", e.to_string());
                rep.clause("(iii) Π₀ weakly globular", false);
            }
        }
        for k in 2..=k_max {
            match self.induced_segal_check(k) {
                Ok((ok, why)) => {
                    rep.clause(format!("(iv) induced Segal map k={k} is an equivalence"), ok);
                    if let Some(w) = why {
                        rep.violation(format!("(iv) k={k}"), w);
                    }
                }
                Err(e) => {
                    rep.violation(format!("(iv) k={k}"), e.to_string());
                    rep.clause(
                        format!("(iv) induced Segal map k={k} is an equivalence"),
                        false,
                    );
                }
            }
        }
        rep
    }

    /// Decide whether the induced Segal map at stage `k` is an algebraic
    /// weak equivalence, without materializing the target: the target is a
    /// k-fold fiber product of `G₁` over the discrete `G₀^d`, and ω's of a
    /// product are products of ω's.
    pub fn induced_segal_check(&self, k: usize) -> Result<(bool, Option<String>)> {
        assert!(k >= 2);
        let n = self.arity();
        if n < 2 {
            return Err(Error::invalid("induced_segal_check: arity must be >= 2"));
        }
        let mut bounds = vec![2; n];
        bounds[0] = k;
        let ext = self.multinerve(&bounds)?;
        let lhs = NFoldGroupoid {
            core: ext.slice(&[(0, k)]),
        };
        let g1 = self.slice(&[(0, 1)]);
        let g0 = self.slice(&[(0, 0)]);
        let disc = g0.discretize_object()?;
        // endpoint maps σ, τ: G₁ -> S (classes of the direction-0 faces)
        let mut sclass: Vec<Vec<usize>> = vec![Vec::new(); g1.core.n_indices()];
        let mut tclass: Vec<Vec<usize>> = vec![Vec::new(); g1.core.n_indices()];
        for q in g1.core.indices() {
            let fq = g1.core.flat(&q);
            let mut p1 = q.clone();
            p1.insert(0, 1);
            let fp1 = self.core.flat(&p1);
            let d0 = &self.core.faces[&(0, 0, fp1)];
            let d1 = &self.core.faces[&(0, 1, fp1)];
            let n1 = self.core.sizes[fp1];
            sclass[fq] = (0..n1).map(|c| disc.gamma.map.levels[fq][d1[c]]).collect();
            tclass[fq] = (0..n1).map(|c| disc.gamma.map.levels[fq][d0[c]]).collect();
        }
        // ν_j: lhs -> G₁ componentwise
        let nus: Vec<MultiSSetMap> = (1..=k)
            .map(|j| {
                let mut levels: Vec<Vec<usize>> = vec![Vec::new(); g1.core.n_indices()];
                for q in lhs.core.indices() {
                    let fq = lhs.core.flat(&q);
                    let mut p = q.clone();
                    p.insert(0, k);
                    let fp = ext.flat(&p);
                    levels[fq] = (0..ext.sizes[fp])
                        .map(|c| segal_edge_dir0(&ext, &p, c, j))
                        .collect();
                }
                MultiSSetMap {
                    bounds: lhs.core.bounds.clone(),
                    levels,
                }
            })
            .collect();
        Ok(product_awe(&lhs, &g1, &nus, &sclass, &tclass))
    }

    /// (n,k)-weak globularity: for each `0 <= r < k`, the object level of
    /// `W_{n,r}` is homotopically discrete with a singleton Π₀.
    pub fn is_nk_weakly_globular(&self, k: usize) -> Report {
        let mut rep = Report::new(format!("({},{k})-weak globularity", self.arity()));
        for r in 0..k {
            let w = self.w_arrows(r);
            let obj = w.slice(&[(0, 0)]);
            let (hd, _, sub) = obj.is_hd();
            rep.absorb(format!("(W_{{n,{r}}})₀ homotopically discrete"), sub);
            if !hd {
                continue;
            }
            match obj.omega0() {
                Ok((size, _)) => {
                    rep.clause(format!("(W_{{n,{r}}})₀ contractible (|Π₀| = 1)"), size == 1);
                }
                Err(e) => rep.violation(format!("(W_{{n,{r}}})₀ Π₀"), e.to_string()),
            }
        }
        rep
    }

    /// Cellwise pullback over a discrete n-fold groupoid.
    pub fn pullback_over_discrete(
        &self,
        other: &NFoldGroupoid,
        f: &NFoldMap,
        g: &NFoldMap,
    ) -> Result<NFoldGroupoid> {
        let mut core = TruncatedMultiSSet::empty(self.core.bounds.clone());
        let mut index: Vec<BTreeMap<(usize, usize), usize>> =
            vec![BTreeMap::new(); core.n_indices()];
        for p in self.core.indices() {
            let fp = self.core.flat(&p);
            let mut cells = Vec::new();
            for a in 0..self.core.sizes[fp] {
                for b in 0..other.core.sizes[fp] {
                    if f.map.levels[fp][a] == g.map.levels[fp][b] {
                        index[fp].insert((a, b), cells.len());
                        cells.push((a, b));
                    }
                }
            }
            core.sizes[fp] = cells.len();
        }
        for p in self.core.indices() {
            let fp = self.core.flat(&p);
            let cells: Vec<(usize, usize)> = {
                let mut v = vec![(0, 0); core.sizes[fp]];
                for (&key, &i) in &index[fp] {
                    v[i] = key;
                }
                v
            };
            for d in 0..core.arity() {
                if p[d] >= 1 {
                    let fq = self.core.flat(&TruncatedMultiSSet::shift(&p, d, -1));
                    for i in 0..=p[d] {
                        let ta = &self.core.faces[&(d, i, fp)];
                        let tb = &other.core.faces[&(d, i, fp)];
                        core.faces.insert(
                            (d, i, fp),
                            cells
                                .iter()
                                .map(|&(a, b)| index[fq][&(ta[a], tb[b])])
                                .collect(),
                        );
                    }
                }
                if p[d] < core.bounds[d] {
                    let fq = self.core.flat(&TruncatedMultiSSet::shift(&p, d, 1));
                    for i in 0..=p[d] {
                        let ta = &self.core.degens[&(d, i, fp)];
                        let tb = &other.core.degens[&(d, i, fp)];
                        core.degens.insert(
                            (d, i, fp),
                            cells
                                .iter()
                                .map(|&(a, b)| index[fq][&(ta[a], tb[b])])
                                .collect(),
                        );
                    }
                }
            }
        }
        NFoldGroupoid::from_core(core)
    }
}

/// Result of `pi0_functor`.
#[derive(Debug, Clone)]
pub struct Pi0Result {
    pub quotient: NFoldGroupoid,
    /// Class of each dir-level-0 cell, per flat index of the quotient.
    pub class_maps: Vec<Vec<usize>>,
    /// Unit `γ: G -> c(Π₀ G)`.
    pub unit: MultiSSetMap,
    /// The constant extension `c(Π₀ G)` the unit lands in.
    pub constant: TruncatedMultiSSet,
}

/// Result of `discretize_object`.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub size: usize,
    pub class_of_base_cell: Vec<usize>,
    pub gamma: NFoldMap,
    pub discrete: NFoldGroupoid,
}

/// The two sides and the comparison map of an induced Segal stage.
#[derive(Debug, Clone)]
pub struct InducedSegal {
    pub lhs: NFoldGroupoid,
    pub rhs: NFoldGroupoid,
    pub map: NFoldMap,
}

/// `ν_j` in direction 0 of an extended multinerve: iterated faces keeping
/// vertices `{j-1, j}`.
fn segal_edge_dir0(ext: &TruncatedMultiSSet, p: &[usize], cell: usize, j: usize) -> usize {
    let mut c = cell;
    let mut q = p.to_vec();
    while q[0] > j {
        c = ext.faces[&(0, q[0], ext.flat(&q))][c];
        q[0] -= 1;
    }
    while q[0] > 1 {
        c = ext.faces[&(0, 0, ext.flat(&q))][c];
        q[0] -= 1;
    }
    c
}

fn induce_on_classes(
    src_cls: &[usize],
    tgt_cls: &[usize],
    table: &[usize],
    n_cls: usize,
) -> Option<Vec<usize>> {
    let mut tbl = vec![usize::MAX; n_cls];
    for (c, &cls) in src_cls.iter().enumerate() {
        let img = tgt_cls[table[c]];
        if tbl[cls] == usize::MAX {
            tbl[cls] = img;
        } else if tbl[cls] != img {
            return None;
        }
    }
    Some(tbl)
}

/// Backtracking search for a section of the quotient `g0 -> base` that is a
/// map of multi-simplicial sets; least representatives are tried first.
pub(crate) fn section_search(
    g0: &TruncatedMultiSSet,
    base: &TruncatedMultiSSet,
    quotient: &[Vec<usize>],
) -> Option<Vec<Vec<usize>>> {
    let mut order: Vec<usize> = (0..base.n_indices()).collect();
    order.sort_by_key(|&fp| (base.unflat(fp).iter().sum::<usize>(), fp));
    let fibers: Vec<Vec<Vec<usize>>> = (0..base.n_indices())
        .map(|fq| {
            let mut f = vec![Vec::new(); base.sizes[fq]];
            for (c, &cls) in quotient[fq].iter().enumerate() {
                f[cls].push(c);
            }
            f
        })
        .collect();
    let mut section: Vec<Vec<usize>> = base.sizes.iter().map(|&n| vec![usize::MAX; n]).collect();
    fn rec(
        g0: &TruncatedMultiSSet,
        base: &TruncatedMultiSSet,
        order: &[usize],
        fibers: &[Vec<Vec<usize>>],
        oi: usize,
        cls: usize,
        section: &mut Vec<Vec<usize>>,
    ) -> bool {
        if oi == order.len() {
            return true;
        }
        let fq = order[oi];
        if cls == base.sizes[fq] {
            return rec(g0, base, order, fibers, oi + 1, 0, section);
        }
        let q = base.unflat(fq);
        let mut forced: Option<usize> = None;
        let mut conflict = false;
        for d in 0..base.arity() {
            if q[d] == 0 {
                continue;
            }
            let fq2 = base.flat(&TruncatedMultiSSet::shift(&q, d, -1));
            for i in 0..q[d] {
                if let Some(t) = base.degens.get(&(d, i, fq2)) {
                    for (pre, &v) in t.iter().enumerate() {
                        if v == cls && section[fq2][pre] != usize::MAX {
                            let want = g0.degens[&(d, i, fq2)][section[fq2][pre]];
                            match forced {
                                None => forced = Some(want),
                                Some(w) if w != want => conflict = true,
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        if conflict {
            return false;
        }
        let candidates: Vec<usize> = match forced {
            Some(f) => {
                if fibers[fq][cls].contains(&f) {
                    vec![f]
                } else {
                    return false;
                }
            }
            None => fibers[fq][cls].clone(),
        };
        'cand: for cand in candidates {
            for d in 0..base.arity() {
                if q[d] == 0 {
                    continue;
                }
                let fq2 = base.flat(&TruncatedMultiSSet::shift(&q, d, -1));
                for i in 0..=q[d] {
                    let want_cls = base.faces[&(d, i, fq)][cls];
                    let chosen = section[fq2][want_cls];
                    if chosen != usize::MAX && g0.faces[&(d, i, fq)][cand] != chosen {
                        continue 'cand;
                    }
                }
            }
            section[fq][cls] = cand;
            if rec(g0, base, order, fibers, oi, cls + 1, section) {
                return true;
            }
            section[fq][cls] = usize::MAX;
        }
        false
    }
    if rec(g0, base, &order, &fibers, 0, 0, &mut section) {
        Some(section)
    } else {
        None
    }
}

/// Full validation of a 2-truncated multinerve as an n-fold groupoid.
pub fn validate_core(core: &TruncatedMultiSSet) -> Report {
    let mut rep = core.validate();
    rep.check = "n-fold groupoid core".into();
    if !rep.is_pass() {
        return rep;
    }
    if core.arity() == 0 {
        return rep; // a bare set
    }
    if core.bounds.iter().any(|&b| b != 2) {
        rep.violation("bounds", "core must be truncated at 2 in every direction");
        return rep;
    }
    for d in 0..core.arity() {
        for p in core.indices() {
            if p[d] != 0 {
                continue;
            }
            let at: Vec<(usize, usize)> = (0..core.arity())
                .filter(|&e| e != d)
                .map(|e| (e, p[e]))
                .collect();
            let rep_dir = check_direction_groupoid(core, d, &at);
            if !rep_dir.is_pass() {
                for v in rep_dir.violations {
                    rep.violation(format!("direction {d} at {at:?}: {}", v.rule), v.witness);
                }
            }
        }
    }
    rep
}

/// Check the direction-`dir` groupoid structure at one complementary index:
/// Segal k=2 bijectivity, units, associativity, inverses.
pub(crate) fn check_direction_groupoid(
    core: &TruncatedMultiSSet,
    dir: usize,
    at: &[(usize, usize)],
) -> Report {
    let mut rep = Report::new("direction groupoid");
    let full = |k: usize| -> Vec<usize> {
        let mut p = vec![0; core.arity()];
        for &(d, v) in at {
            p[d] = v;
        }
        p[dir] = k;
        p
    };
    let (f0, f1, f2) = (
        core.flat(&full(0)),
        core.flat(&full(1)),
        core.flat(&full(2)),
    );
    let n0 = core.sizes[f0];
    let n1 = core.sizes[f1];
    let n2 = core.sizes[f2];
    let d0 = &core.faces[&(dir, 0, f1)];
    let d1 = &core.faces[&(dir, 1, f1)];
    let s0 = &core.degens[&(dir, 0, f0)];
    let d20 = &core.faces[&(dir, 0, f2)];
    let d21 = &core.faces[&(dir, 1, f2)];
    let d22 = &core.faces[&(dir, 2, f2)];
    let mut pair_to_cell: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for c in 0..n2 {
        if pair_to_cell.insert((d22[c], d20[c]), c).is_some() {
            rep.violation("Segal k=2 injective", format!("2-cell {c}"));
            return rep;
        }
    }
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n0];
    for e in 0..n1 {
        out_edges[d1[e]].push(e);
    }
    for e1 in 0..n1 {
        for &e2 in &out_edges[d0[e1]] {
            if !pair_to_cell.contains_key(&(e1, e2)) {
                rep.violation("Segal k=2 surjective", format!("pair ({e1}, {e2})"));
                return rep;
            }
        }
    }
    if pair_to_cell.len() != n2 {
        rep.violation("Segal k=2", "2-cells beyond the composable pairs");
        return rep;
    }
    let m = |x: usize, y: usize| -> usize { d21[pair_to_cell[&(x, y)]] };
    for e in 0..n1 {
        let src_id = s0[d1[e]];
        let tgt_id = s0[d0[e]];
        if m(src_id, e) != e || m(e, tgt_id) != e {
            rep.violation("unit law", format!("edge {e}"));
        }
    }
    for x in 0..n1 {
        for &y in &out_edges[d0[x]] {
            let xy = m(x, y);
            for &z in &out_edges[d0[y]] {
                if m(xy, z) != m(x, m(y, z)) {
                    rep.violation("associativity", format!("triple ({x}, {y}, {z})"));
                }
            }
        }
    }
    for e in 0..n1 {
        let has_inverse = out_edges[d0[e]]
            .iter()
            .any(|&y| m(e, y) == s0[d1[e]] && m(y, e) == s0[d0[e]]);
        if !has_inverse {
            rep.violation("inverses", format!("edge {e}"));
        }
    }
    rep
}

/// Materialize the direction-`dir` groupoid at a complementary index.
pub fn direction_groupoid_of(
    core: &TruncatedMultiSSet,
    dir: usize,
    at: &[(usize, usize)],
) -> FiniteGroupoid {
    let full = |k: usize| -> Vec<usize> {
        let mut p = vec![0; core.arity()];
        for &(d, v) in at {
            p[d] = v;
        }
        p[dir] = k;
        p
    };
    let (f0, f1, f2) = (
        core.flat(&full(0)),
        core.flat(&full(1)),
        core.flat(&full(2)),
    );
    let n1 = core.sizes[f1];
    let d0 = core.faces[&(dir, 0, f1)].clone();
    let d1 = core.faces[&(dir, 1, f1)].clone();
    let s0 = core.degens[&(dir, 0, f0)].clone();
    let d20 = &core.faces[&(dir, 0, f2)];
    let d21 = &core.faces[&(dir, 1, f2)];
    let d22 = &core.faces[&(dir, 2, f2)];
    let mut pair_to_cell: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for c in 0..core.sizes[f2] {
        pair_to_cell.insert((d22[c], d20[c]), c);
    }
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); core.sizes[f0]];
    for e in 0..n1 {
        out_edges[d1[e]].push(e);
    }
    let mut comp = BTreeMap::new();
    for x in 0..n1 {
        for &y in &out_edges[d0[x]] {
            // comp(g, h) = g ∘ h with h first: h = x, g = y in path order
            comp.insert((y, x), d21[pair_to_cell[&(x, y)]]);
        }
    }
    let inv: Vec<usize> = (0..n1)
        .map(|e| {
            out_edges[d0[e]]
                .iter()
                .copied()
                .find(|&y| comp[&(y, e)] == s0[d1[e]] && comp[&(e, y)] == s0[d0[e]])
                .expect("validated groupoid direction has inverses")
        })
        .collect();
    FiniteGroupoid {
        n_objects: core.sizes[f0],
        src: d1,
        tgt: d0,
        id: s0,
        comp,
        inv,
        object_labels: None,
        morphism_labels: None,
    }
}

/// The discrete n-fold groupoid on a set of the given size.
pub fn discrete_nfold(size: usize, arity: usize) -> NFoldGroupoid {
    let mut core = TruncatedMultiSSet::empty(vec![2; arity]);
    for p in core.indices() {
        let fp = core.flat(&p);
        core.sizes[fp] = size;
        for d in 0..arity {
            if p[d] >= 1 {
                for i in 0..=p[d] {
                    core.faces.insert((d, i, fp), (0..size).collect());
                }
            }
            if p[d] < 2 {
                for i in 0..=p[d] {
                    core.degens.insert((d, i, fp), (0..size).collect());
                }
            }
        }
    }
    NFoldGroupoid { core }
}

/// Constant extension of an (n−1)-fold core in a new direction `dir`.
pub fn constant_in_direction(q: &TruncatedMultiSSet, dir: usize) -> TruncatedMultiSSet {
    let mut bounds = q.bounds.clone();
    bounds.insert(dir, 2);
    let mut out = TruncatedMultiSSet::empty(bounds);
    for p in out.indices() {
        let fp = out.flat(&p);
        let mut qidx = p.clone();
        qidx.remove(dir);
        let fq = q.flat(&qidx);
        out.sizes[fp] = q.sizes[fq];
        for d in 0..out.arity() {
            if d == dir {
                if p[d] >= 1 {
                    for i in 0..=p[d] {
                        out.faces.insert((d, i, fp), (0..q.sizes[fq]).collect());
                    }
                }
                if p[d] < 2 {
                    for i in 0..=p[d] {
                        out.degens.insert((d, i, fp), (0..q.sizes[fq]).collect());
                    }
                }
            } else {
                let qd = if d < dir { d } else { d - 1 };
                if p[d] >= 1 {
                    for i in 0..=p[d] {
                        out.faces.insert((d, i, fp), q.faces[&(qd, i, fq)].clone());
                    }
                }
                if p[d] < out.bounds[d] {
                    for i in 0..=p[d] {
                        out.degens.insert((d, i, fp), q.degens[&(qd, i, fq)].clone());
                    }
                }
            }
        }
    }
    out
}

/// Algebraic weak equivalence: bijective on ω₀ and on every ω_k at every
/// basepoint class representative.
pub fn is_algebraic_weak_equivalence(
    f: &NFoldMap,
    src: &NFoldGroupoid,
    tgt: &NFoldGroupoid,
) -> (bool, Option<String>) {
    let n = src.arity();
    if n == 0 {
        let img: std::collections::BTreeSet<usize> = f.map.levels[0].iter().copied().collect();
        let ok = img.len() == f.map.levels[0].len() && img.len() == tgt.core.sizes[0];
        return (ok, (!ok).then(|| "not a bijection of sets".into()));
    }
    if n == 1 {
        let sg = src.direction_groupoid(0, &[]);
        let tg = tgt.direction_groupoid(0, &[]);
        let gm = crate::groupoid::GroupoidMap {
            objects: f.map.levels[src.core.flat(&[0])].clone(),
            morphisms: f.map.levels[src.core.flat(&[1])].clone(),
        };
        return gm.is_equivalence(&sg, &tg);
    }
    let (s_size, s_cls) = match src.omega0() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("source ω₀: {e}"))),
    };
    let (t_size, t_cls) = match tgt.omega0() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("target ω₀: {e}"))),
    };
    let zero_flat = src.core.flat(&vec![0; n]);
    let mut induced = vec![usize::MAX; s_size];
    for (c, &sc) in s_cls.iter().enumerate() {
        let ic = t_cls[f.map.levels[zero_flat][c]];
        if induced[sc] == usize::MAX {
            induced[sc] = ic;
        } else if induced[sc] != ic {
            return (false, Some("ω₀ map not well-defined".into()));
        }
    }
    {
        let img: std::collections::BTreeSet<usize> = induced.iter().copied().collect();
        if induced.iter().any(|&v| v == usize::MAX) || img.len() != s_size || s_size != t_size {
            return (false, Some("ω₀ not bijective".into()));
        }
    }
    // ω_n at a representative basepoint of every class
    let mut rep_of_class = vec![usize::MAX; s_size];
    for (c, &sc) in s_cls.iter().enumerate() {
        if rep_of_class[sc] == usize::MAX {
            rep_of_class[sc] = c;
        }
    }
    let sg = src.top_arrow_groupoid();
    let tg = tgt.top_arrow_groupoid();
    let top_flat = src.core.flat(&vec![1; n]);
    for &x0 in rep_of_class.iter() {
        let sobj = src.degenerate_base_object(x0);
        let tobj = tgt.degenerate_base_object(f.map.levels[zero_flat][x0]);
        let auts = sg.hom(sobj, sobj);
        let t_auts = tg.hom(tobj, tobj);
        let image: std::collections::BTreeSet<usize> =
            auts.iter().map(|&m| f.map.levels[top_flat][m]).collect();
        if image.len() != auts.len()
            || auts.len() != t_auts.len()
            || !image.iter().all(|m| t_auts.contains(m))
        {
            return (false, Some(format!("ω_{n} not bijective at basepoint {x0}")));
        }
    }
    // descend to Π₀ and recurse
    let sp = match src.pi0_functor() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("source Π₀: {e}"))),
    };
    let tp = match tgt.pi0_functor() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("target Π₀: {e}"))),
    };
    let dir = n - 1;
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); sp.quotient.core.n_indices()];
    for q in sp.quotient.core.indices() {
        let fq = sp.quotient.core.flat(&q);
        let mut p = q.clone();
        p.insert(dir, 0);
        let fp = src.core.flat(&p);
        let mut tbl = vec![usize::MAX; sp.quotient.core.sizes[fq]];
        for (c, &cls) in sp.class_maps[fq].iter().enumerate() {
            let img = tp.class_maps[fq][f.map.levels[fp][c]];
            if tbl[cls] == usize::MAX {
                tbl[cls] = img;
            } else if tbl[cls] != img {
                return (false, Some("induced Π₀ map not well-defined".into()));
            }
        }
        levels[fq] = tbl;
    }
    let induced_map = NFoldMap {
        map: MultiSSetMap {
            bounds: sp.quotient.core.bounds.clone(),
            levels,
        },
    };
    is_algebraic_weak_equivalence(&induced_map, &sp.quotient, &tp.quotient)
}

/// Algebraic weak equivalence of `l` against the fiber product of the
/// `ν_j`-components of `c` over a discrete base, computed structurally:
/// `σ`/`τ` give the base class of each `c`-cell, consecutive components
/// must match (`τ ∘ ν_j = σ ∘ ν_{j+1}`), and ω's of the product are
/// products of ω's.
fn product_awe(
    l: &NFoldGroupoid,
    c: &NFoldGroupoid,
    nus: &[MultiSSetMap],
    sclass: &[Vec<usize>],
    tclass: &[Vec<usize>],
) -> (bool, Option<String>) {
    let m = l.arity();
    let k = nus.len();
    if m == 1 {
        let lg = l.direction_groupoid(0, &[]);
        let cg = c.direction_groupoid(0, &[]);
        let nu_obj: Vec<&[usize]> = nus.iter().map(|nu| nu.levels[0].as_slice()).collect();
        let nu_mor: Vec<&[usize]> = nus.iter().map(|nu| nu.levels[1].as_slice()).collect();
        return product_equivalence_groupoid(&lg, &cg, &nu_obj, &nu_mor, &sclass[0], &tclass[0]);
    }
    // ω₀: classes of L biject with matched tuples of component classes
    let (l_size, l_cls) = match l.omega0() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("source ω₀: {e}"))),
    };
    let (c_size, c_cls) = match c.omega0() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("component ω₀: {e}"))),
    };
    let zero_l = l.core.flat(&vec![0; m]);
    let zero_c = c.core.flat(&vec![0; m]);
    debug_assert_eq!(zero_l, zero_c);
    let mut comp_s = vec![usize::MAX; c_size];
    let mut comp_t = vec![usize::MAX; c_size];
    for o in 0..c.core.sizes[zero_c] {
        for (store, val) in [
            (&mut comp_s, sclass[zero_c][o]),
            (&mut comp_t, tclass[zero_c][o]),
        ] {
            if store[c_cls[o]] == usize::MAX {
                store[c_cls[o]] = val;
            } else if store[c_cls[o]] != val {
                return (false, Some("base class not constant on ω₀ classes".into()));
            }
        }
    }
    let mut matched: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(t) = stack.pop() {
        if t.len() == k {
            matched.insert(t, false);
            continue;
        }
        for comp in 0..c_size {
            if t.is_empty() || comp_t[*t.last().unwrap()] == comp_s[comp] {
                let mut s = t.clone();
                s.push(comp);
                stack.push(s);
            }
        }
    }
    let mut image_of: Vec<Option<Vec<usize>>> = vec![None; l_size];
    let mut rep_of: Vec<usize> = vec![usize::MAX; l_size];
    for x in 0..l.core.sizes[zero_l] {
        let t: Vec<usize> = nus.iter().map(|nu| c_cls[nu.levels[zero_l][x]]).collect();
        match &image_of[l_cls[x]] {
            None => {
                match matched.get_mut(&t) {
                    None => return (false, Some("ω₀ image not matched".into())),
                    Some(hit) => {
                        if *hit {
                            return (false, Some("ω₀ not injective".into()));
                        }
                        *hit = true;
                    }
                }
                image_of[l_cls[x]] = Some(t);
                rep_of[l_cls[x]] = x;
            }
            Some(prev) => {
                if *prev != t {
                    return (false, Some("ω₀ map not well-defined".into()));
                }
            }
        }
    }
    if matched.values().any(|hit| !hit) {
        return (false, Some("ω₀ not surjective onto matched tuples".into()));
    }
    // ω_m at a representative of every class: Aut_L -> Π Aut_C bijective
    let lg = l.top_arrow_groupoid();
    let cg = c.top_arrow_groupoid();
    let top_l = l.core.flat(&vec![1; m]);
    for &x0 in rep_of.iter() {
        let lobj = l.degenerate_base_object(x0);
        let auts = lg.hom(lobj, lobj);
        let mut prod = 1usize;
        let mut c_aut_sets: Vec<std::collections::BTreeSet<usize>> = Vec::new();
        for nu in nus {
            let cobj = c.degenerate_base_object(nu.levels[zero_l][x0]);
            let ca = cg.hom(cobj, cobj);
            prod *= ca.len();
            c_aut_sets.push(ca.into_iter().collect());
        }
        if auts.len() != prod {
            return (
                false,
                Some(format!("ω_{m} sizes differ at basepoint {x0}")),
            );
        }
        let tuples: std::collections::BTreeSet<Vec<usize>> = auts
            .iter()
            .map(|&mm| nus.iter().map(|nu| nu.levels[top_l][mm]).collect())
            .collect();
        if tuples.len() != auts.len() {
            return (false, Some(format!("ω_{m} map not injective at {x0}")));
        }
        for t in &tuples {
            for (j, &v) in t.iter().enumerate() {
                if !c_aut_sets[j].contains(&v) {
                    return (
                        false,
                        Some(format!("ω_{m} image leaves the automorphism group at {x0}")),
                    );
                }
            }
        }
    }
    // descend both sides through Π₀ and recurse
    let lp = match l.pi0_functor() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("source Π₀: {e}"))),
    };
    let cp = match c.pi0_functor() {
        Ok(v) => v,
        Err(e) => return (false, Some(format!("component Π₀: {e}"))),
    };
    let dir = m - 1;
    let mut new_nus = Vec::with_capacity(k);
    for nu in nus {
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); lp.quotient.core.n_indices()];
        for q in lp.quotient.core.indices() {
            let fq = lp.quotient.core.flat(&q);
            let mut p = q.clone();
            p.insert(dir, 0);
            let fp = l.core.flat(&p);
            let mut tbl = vec![usize::MAX; lp.quotient.core.sizes[fq]];
            for (cell, &cls) in lp.class_maps[fq].iter().enumerate() {
                let img = cp.class_maps[fq][nu.levels[fp][cell]];
                if tbl[cls] == usize::MAX {
                    tbl[cls] = img;
                } else if tbl[cls] != img {
                    return (false, Some("component map does not descend to Π₀".into()));
                }
            }
            levels[fq] = tbl;
        }
        new_nus.push(MultiSSetMap {
            bounds: lp.quotient.core.bounds.clone(),
            levels,
        });
    }
    // descend σ, τ
    let mut new_s: Vec<Vec<usize>> = vec![Vec::new(); cp.quotient.core.n_indices()];
    let mut new_t: Vec<Vec<usize>> = vec![Vec::new(); cp.quotient.core.n_indices()];
    for q in cp.quotient.core.indices() {
        let fq = cp.quotient.core.flat(&q);
        let mut p = q.clone();
        p.insert(dir, 0);
        let fp = c.core.flat(&p);
        let mut ts = vec![usize::MAX; cp.quotient.core.sizes[fq]];
        let mut tt = vec![usize::MAX; cp.quotient.core.sizes[fq]];
        for (cell, &cls) in cp.class_maps[fq].iter().enumerate() {
            for (store, val) in [(&mut ts, sclass[fp][cell]), (&mut tt, tclass[fp][cell])] {
                if store[cls] == usize::MAX {
                    store[cls] = val;
                } else if store[cls] != val {
                    return (false, Some("base class does not descend to Π₀".into()));
                }
            }
        }
        new_s[fq] = ts;
        new_t[fq] = tt;
    }
    product_awe(&lp.quotient, &cp.quotient, &new_nus, &new_s, &new_t)
}

/// Equivalence of a groupoid against the matched product of `k` copies of
/// another groupoid over a discrete base: essential surjectivity onto the
/// matched component tuples plus componentwise full faithfulness.
pub(crate) fn product_equivalence_groupoid(
    lg: &FiniteGroupoid,
    cg: &FiniteGroupoid,
    nu_obj: &[&[usize]],
    nu_mor: &[&[usize]],
    s_of_obj: &[usize],
    t_of_obj: &[usize],
) -> (bool, Option<String>) {
    let k = nu_obj.len();
    let (lcls, ln) = lg.pi0();
    let (ccls, cn) = cg.pi0();
    let mut comp_s = vec![usize::MAX; cn];
    let mut comp_t = vec![usize::MAX; cn];
    for o in 0..cg.n_objects {
        for (store, val) in [(&mut comp_s, s_of_obj[o]), (&mut comp_t, t_of_obj[o])] {
            if store[ccls[o]] == usize::MAX {
                store[ccls[o]] = val;
            } else if store[ccls[o]] != val {
                return (false, Some("base class not constant on components".into()));
            }
        }
    }
    let mut matched: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(t) = stack.pop() {
        if t.len() == k {
            matched.insert(t, false);
            continue;
        }
        for comp in 0..cn {
            if t.is_empty() || comp_t[*t.last().unwrap()] == comp_s[comp] {
                let mut s = t.clone();
                s.push(comp);
                stack.push(s);
            }
        }
    }
    let mut image_of: Vec<Option<Vec<usize>>> = vec![None; ln];
    for x in 0..lg.n_objects {
        let t: Vec<usize> = nu_obj.iter().map(|nu| ccls[nu[x]]).collect();
        match &image_of[lcls[x]] {
            None => {
                match matched.get_mut(&t) {
                    None => return (false, Some("π₀ image not matched".into())),
                    Some(hit) => {
                        if *hit {
                            return (false, Some("π₀ not injective".into()));
                        }
                        *hit = true;
                    }
                }
                image_of[lcls[x]] = Some(t);
            }
            Some(prev) => {
                if *prev != t {
                    return (false, Some("π₀ map not well-defined".into()));
                }
            }
        }
    }
    if matched.values().any(|hit| !hit) {
        return (false, Some("π₀ not surjective onto matched tuples".into()));
    }
    let mut lhoms: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for mm in 0..lg.n_morphisms() {
        lhoms.entry((lg.src[mm], lg.tgt[mm])).or_default().push(mm);
    }
    let mut chom_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for mm in 0..cg.n_morphisms() {
        *chom_count.entry((cg.src[mm], cg.tgt[mm])).or_default() += 1;
    }
    for x in 0..lg.n_objects {
        for y in 0..lg.n_objects {
            let dom = lhoms.get(&(x, y)).map_or(0, |v| v.len());
            let mut prod = 1usize;
            for nu in nu_obj {
                prod *= chom_count.get(&(nu[x], nu[y])).copied().unwrap_or(0);
                if prod == 0 {
                    break;
                }
            }
            if dom != prod {
                return (
                    false,
                    Some(format!("hom sizes differ at ({x}, {y}): {dom} vs {prod}")),
                );
            }
            if dom > 1 {
                let tuples: std::collections::BTreeSet<Vec<usize>> = lhoms[&(x, y)]
                    .iter()
                    .map(|&mm| nu_mor.iter().map(|nu| nu[mm]).collect())
                    .collect();
                if tuples.len() != dom {
                    return (false, Some(format!("hom map not injective at ({x}, {y})")));
                }
            }
        }
    }
    (true, None)
}

/// A commuting square of finite sets with sections: the seed of a
/// homotopically discrete double groupoid.
#[derive(Debug, Clone)]
pub struct CommutingSquare {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub f: Vec<usize>,     // A -> B
    pub g: Vec<usize>,     // A -> C
    pub h: Vec<usize>,     // B -> D
    pub l: Vec<usize>,     // C -> D
    pub f_sec: Vec<usize>, // B -> A, f ∘ f_sec = id_B
    pub g_sec: Vec<usize>, // C -> A
    pub h_sec: Vec<usize>, // D -> B
    pub l_sec: Vec<usize>, // D -> C
}

impl CommutingSquare {
    pub fn validate(&self) -> Result<()> {
        let chk = |name: &str, ok: bool| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(format!("commuting square: {name} fails")))
            }
        };
        chk("map shapes", {
            self.f.len() == self.a
                && self.g.len() == self.a
                && self.h.len() == self.b
                && self.l.len() == self.c
                && self.f_sec.len() == self.b
                && self.g_sec.len() == self.c
                && self.h_sec.len() == self.d
                && self.l_sec.len() == self.d
        })?;
        chk("f f' = id_B", (0..self.b).all(|x| self.f[self.f_sec[x]] == x))?;
        chk("g g' = id_C", (0..self.c).all(|x| self.g[self.g_sec[x]] == x))?;
        chk("h h' = id_D", (0..self.d).all(|x| self.h[self.h_sec[x]] == x))?;
        chk("l l' = id_D", (0..self.d).all(|x| self.l[self.l_sec[x]] == x))?;
        chk(
            "h f = l g",
            (0..self.a).all(|x| self.h[self.f[x]] == self.l[self.g[x]]),
        )?;
        chk(
            "f g' = h' l",
            (0..self.c).all(|x| self.f[self.g_sec[x]] == self.h_sec[self.l[x]]),
        )?;
        Ok(())
    }

    /// The homotopically discrete double groupoid of the square: cells at
    /// `(p, q)` are `(p+1) × (q+1)` matrices over `A` with `g` constant
    /// along direction 0 and `f` constant along direction 1; operators
    /// delete or duplicate rows and columns.
    pub fn hd_double_groupoid(&self) -> Result<NFoldGroupoid> {
        self.validate()?;
        let mut core = TruncatedMultiSSet::empty(vec![2, 2]);
        let mut index: Vec<BTreeMap<Vec<usize>, usize>> = vec![BTreeMap::new(); core.n_indices()];
        let mut mats: Vec<Vec<Vec<usize>>> = vec![Vec::new(); core.n_indices()];
        for p in core.indices() {
            let fp = core.flat(&p);
            let (rows, cols) = (p[0] + 1, p[1] + 1);
            let mut cells: Vec<Vec<usize>> = vec![vec![]];
            for pos in 0..rows * cols {
                let (r, s) = (pos / cols, pos % cols);
                let mut next = Vec::new();
                for m in &cells {
                    for v in 0..self.a {
                        if r > 0 && self.g[v] != self.g[m[(r - 1) * cols + s]] {
                            continue;
                        }
                        if s > 0 && self.f[v] != self.f[m[r * cols + s - 1]] {
                            continue;
                        }
                        let mut mm = m.clone();
                        mm.push(v);
                        next.push(mm);
                    }
                }
                cells = next;
            }
            cells.sort();
            for (i, m) in cells.iter().enumerate() {
                index[fp].insert(m.clone(), i);
            }
            core.sizes[fp] = cells.len();
            mats[fp] = cells;
        }
        for p in core.indices() {
            let fp = core.flat(&p);
            let (rows, cols) = (p[0] + 1, p[1] + 1);
            for d in 0..2usize {
                if p[d] >= 1 {
                    let fq = core.flat(&TruncatedMultiSSet::shift(&p, d, -1));
                    for i in 0..=p[d] {
                        let tbl: Vec<usize> = mats[fp]
                            .iter()
                            .map(|m| {
                                let mut out = Vec::new();
                                for r in 0..rows {
                                    for s in 0..cols {
                                        let skip = if d == 0 { r == i } else { s == i };
                                        if !skip {
                                            out.push(m[r * cols + s]);
                                        }
                                    }
                                }
                                index[fq][&out]
                            })
                            .collect();
                        core.faces.insert((d, i, fp), tbl);
                    }
                }
                if p[d] < 2 {
                    let fq = core.flat(&TruncatedMultiSSet::shift(&p, d, 1));
                    for i in 0..=p[d] {
                        let tbl: Vec<usize> = mats[fp]
                            .iter()
                            .map(|m| {
                                let mut out = Vec::new();
                                for r in 0..rows {
                                    let emit_row = |out: &mut Vec<usize>| {
                                        for s in 0..cols {
                                            out.push(m[r * cols + s]);
                                            if d == 1 && s == i {
                                                out.push(m[r * cols + s]);
                                            }
                                        }
                                    };
                                    emit_row(&mut out);
                                    if d == 0 && r == i {
                                        emit_row(&mut out);
                                    }
                                }
                                index[fq][&out]
                            })
                            .collect();
                        core.degens.insert((d, i, fp), tbl);
                    }
                }
            }
        }
        NFoldGroupoid::from_core(core)
    }

    /// The groupoid `B^h` (the expected value of Π₀ in the last direction).
    pub fn bh_groupoid(&self) -> FiniteGroupoid {
        FiniteGroupoid::af_construction(&self.h, self.d)
    }

    /// The groupoid `C^ℓ` (the expected base of hd recognition).
    pub fn cl_groupoid(&self) -> FiniteGroupoid {
        FiniteGroupoid::af_construction(&self.l, self.d)
    }
}

/// The external double nerve of a group: cells `G^p × G^q` at `(p, q)`.
pub fn double_nerve(table: &GroupTable) -> NFoldGroupoid {
    let g = FiniteGroupoid::from_group(table);
    let n = g.nerve(2);
    let base = TruncatedMultiSSet::from_sset(&n);
    let mut core = TruncatedMultiSSet::empty(vec![2, 2]);
    let mut index: Vec<BTreeMap<(usize, usize), usize>> = vec![BTreeMap::new(); 9];
    for p in core.indices() {
        let fp = core.flat(&p);
        let mut cells = Vec::new();
        for x in 0..base.sizes[p[0]] {
            for y in 0..base.sizes[p[1]] {
                index[fp].insert((x, y), cells.len());
                cells.push((x, y));
            }
        }
        core.sizes[fp] = cells.len();
    }
    for p in core.indices() {
        let fp = core.flat(&p);
        let cells: Vec<(usize, usize)> = {
            let mut v = vec![(0, 0); core.sizes[fp]];
            for (&k, &i) in &index[fp] {
                v[i] = k;
            }
            v
        };
        for d in 0..2usize {
            if p[d] >= 1 {
                let fq = core.flat(&TruncatedMultiSSet::shift(&p, d, -1));
                for i in 0..=p[d] {
                    let t = &base.faces[&(0, i, p[d])];
                    core.faces.insert(
                        (d, i, fp),
                        cells
                            .iter()
                            .map(|&(x, y)| {
                                if d == 0 {
                                    index[fq][&(t[x], y)]
                                } else {
                                    index[fq][&(x, t[y])]
                                }
                            })
                            .collect(),
                    );
                }
            }
            if p[d] < 2 {
                let fq = core.flat(&TruncatedMultiSSet::shift(&p, d, 1));
                for i in 0..=p[d] {
                    let t = &base.degens[&(0, i, p[d])];
                    core.degens.insert(
                        (d, i, fp),
                        cells
                            .iter()
                            .map(|&(x, y)| {
                                if d == 0 {
                                    index[fq][&(t[x], y)]
                                } else {
                                    index[fq][&(x, t[y])]
                                }
                            })
                            .collect(),
                    );
                }
            }
        }
    }
    NFoldGroupoid { core }
}

/// Double groupoid constant in the first direction, carrying the given
/// groupoid in the second. Its direction-0 object level is the whole
/// groupoid, so clause (i) of weak globularity fails unless that groupoid
/// is homotopically discrete.
pub fn constant_in_first_direction(g: &FiniteGroupoid) -> NFoldGroupoid {
    let n = g.nerve(2);
    let base = TruncatedMultiSSet::from_sset(&n);
    NFoldGroupoid {
        core: constant_in_direction(&base, 0),
    }
}

impl NFoldMap {
    pub fn identity(g: &NFoldGroupoid) -> Self {
        NFoldMap {
            map: MultiSSetMap::identity(&g.core),
        }
    }

    pub fn validate(&self, src: &NFoldGroupoid, tgt: &NFoldGroupoid) -> Report {
        self.map.validate(&src.core, &tgt.core)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_example() -> CommutingSquare {
        // A = {0..3}, B = {0,1}, C = {0,1}, D = {0}
        CommutingSquare {
            a: 4,
            b: 2,
            c: 2,
            d: 1,
            f: vec![0, 1, 0, 1],
            g: vec![0, 0, 1, 1],
            h: vec![0, 0],
            l: vec![0, 0],
            f_sec: vec![0, 1],
            g_sec: vec![0, 2],
            h_sec: vec![0],
            l_sec: vec![0],
        }
    }

    #[test]
    fn double_nerve_is_nfold_groupoid() {
        let g = double_nerve(&GroupTable::cyclic(2));
        assert!(validate_core(&g.core).is_pass());
        // level (3,0) of the multinerve has 2³ cells
        let ext = g.multinerve(&[3, 2]).unwrap();
        assert_eq!(ext.size(&[3, 0]), 8);
        assert!(ext.validate().is_pass());
    }

    #[test]
    fn perturbed_core_is_rejected() {
        let g = double_nerve(&GroupTable::cyclic(2));
        let mut core = g.core.clone();
        let key = (0usize, 1usize, core.flat(&[2, 0]));
        let tbl = core.faces.get_mut(&key).unwrap();
        tbl.swap(0, 1);
        assert!(!validate_core(&core).is_pass());
    }

    #[test]
    fn figure_square_object_is_hd() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        assert_eq!(g.core.size(&[0, 0]), 4);
        assert_eq!(g.core.size(&[1, 0]), 8); // fibers of g: 2² + 2²
        assert_eq!(g.core.size(&[0, 1]), 8); // fibers of f
        let (hd, witness, rep) = g.is_hd();
        assert!(hd, "{rep}");
        let w = witness.unwrap();
        // base ≅ C^ℓ: 2 objects, 4 morphisms here (ℓ collapses C to a point)
        assert_eq!(w.base.sizes[w.base.flat(&[0])], 2);
        assert_eq!(w.base.sizes[w.base.flat(&[1])], 4);
    }

    #[test]
    fn double_nerve_is_not_hd() {
        let g = double_nerve(&GroupTable::cyclic(2));
        let (hd, _, _) = g.is_hd();
        assert!(!hd);
    }

    #[test]
    fn pi0_of_figure_object_is_bh() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        let r = g.pi0_functor().unwrap();
        let got = r.quotient.direction_groupoid(0, &[]);
        let want = sq.bh_groupoid();
        assert!(crate::groupoid::groupoid_isomorphic(&got, &want));
        assert!(r.unit.validate(&g.core, &r.constant).is_pass());
    }

    #[test]
    fn discretization_of_figure_object() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        let d = g.discretize_object().unwrap();
        assert_eq!(d.size, 1); // π₀ B G ≅ D, a single point here
        assert!(d.gamma.validate(&g, &d.discrete).is_pass());
        let (ok, why) = is_algebraic_weak_equivalence(&d.gamma, &g, &d.discrete);
        assert!(ok, "{why:?}");
    }

    #[test]
    fn hd_objects_are_weakly_globular() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        let rep = g.is_weakly_globular(3);
        assert!(rep.is_pass(), "{rep}");
    }

    #[test]
    fn constant_direction_object_fails_clause_i() {
        let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let g = constant_in_first_direction(&z2);
        assert!(validate_core(&g.core).is_pass());
        let rep = g.is_weakly_globular(2);
        assert!(!rep.is_pass());
        let (name, ok) = rep
            .clauses
            .iter()
            .find(|(n, _)| n.contains("(i)"))
            .unwrap()
            .clone();
        assert!(!ok, "clause {name} should fail first");
    }

    #[test]
    fn omega_of_hd_object_is_trivial() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        let (n0, _) = g.omega0().unwrap();
        assert_eq!(n0, 1);
        for k in 1..=2 {
            let t = g.omega(k, 0).unwrap();
            assert_eq!(t.order(), 1, "ω_{k} of an hd object");
        }
    }

    #[test]
    fn w_arrows_of_double_nerve() {
        let g = double_nerve(&GroupTable::cyclic(2));
        assert_eq!(g.w_arrows(0).core, g.core);
        let w1 = g.w_arrows(1);
        assert_eq!(w1.arity(), 1);
        let w2 = g.w_arrows(2);
        assert_eq!(w2.core.sizes[0], 4); // cells at (1,1): G × G
    }

    #[test]
    fn pullback_of_hd_over_discrete_is_hd() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        let d = g.discretize_object().unwrap();
        let p = g.pullback_over_discrete(&g, &d.gamma, &d.gamma).unwrap();
        let (hd, _, rep) = p.is_hd();
        assert!(hd, "{rep}");
    }

    #[test]
    fn induced_segal_on_hd_object() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        let cmp = g.induced_segal(2).unwrap();
        assert!(cmp.map.validate(&cmp.lhs, &cmp.rhs).is_pass());
        let (ok, why) = is_algebraic_weak_equivalence(&cmp.map, &cmp.lhs, &cmp.rhs);
        assert!(ok, "{why:?}");
    }

    #[test]
    fn nk_weak_globularity_on_figure_object() {
        let sq = square_example();
        let g = sq.hd_double_groupoid().unwrap();
        assert!(g.is_nk_weakly_globular(0).is_pass());
        // (W_{2,0})₀ = G₀ has Π₀ = B with |B| = 2: not contractible
        let rep = g.is_nk_weakly_globular(1);
        assert!(!rep.is_pass());
    }
}
