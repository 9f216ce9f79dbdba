//! Groupoid presentations and budgeted coset enumeration.
//!
//! `enumerate` reduces each component to a one-vertex group presentation by
//! collapsing a spanning tree, runs HLT-style Todd-Coxeter coset enumeration
//! (lexicographic scheduling, so outputs are reproducible), and reassembles a
//! finite groupoid with canonical elements. Budget exhaustion returns
//! `Unbounded`, never a wrong answer.

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, UnionFind};
use std::collections::{BTreeMap, VecDeque};

/// One step of a path: an arrow, possibly traversed backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub arrow: usize,
    pub inverted: bool,
}

impl Step {
    pub fn fwd(arrow: usize) -> Self {
        Step { arrow, inverted: false }
    }
    pub fn rev(arrow: usize) -> Self {
        Step { arrow, inverted: true }
    }
    pub fn invert(self) -> Self {
        Step { arrow: self.arrow, inverted: !self.inverted }
    }
}

/// Generators and relations for a groupoid: the computable carrier of the
/// fundamental-groupoid left adjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidPresentation {
    pub n_vertices: usize,
    /// `(src, tgt)` per generator arrow.
    pub arrows: Vec<(usize, usize)>,
    /// Pairs of parallel composable paths (the right side may be empty when
    /// the left side is a loop).
    pub relations: Vec<(Vec<Step>, Vec<Step>)>,
}

impl GroupoidPresentation {
    fn step_endpoints(&self, s: Step) -> (usize, usize) {
        let (u, v) = self.arrows[s.arrow];
        if s.inverted {
            (v, u)
        } else {
            (u, v)
        }
    }

    /// Every relation's two paths must be composable and parallel.
    pub fn validate(&self) -> Result<()> {
        for (i, &(u, v)) in self.arrows.iter().enumerate() {
            if u >= self.n_vertices || v >= self.n_vertices {
                return Err(Error::invalid(format!("arrow {i} endpoint out of range")));
            }
        }
        for (ri, (lhs, rhs)) in self.relations.iter().enumerate() {
            if lhs.is_empty() {
                return Err(Error::invalid(format!("relation {ri}: empty left path")));
            }
            let ends = |path: &[Step]| -> Result<(usize, usize)> {
                let (s, mut t) = self.step_endpoints(path[0]);
                for w in &path[1..] {
                    let (u, v) = self.step_endpoints(*w);
                    if u != t {
                        return Err(Error::invalid(format!("relation {ri}: path not composable")));
                    }
                    t = v;
                }
                Ok((s, t))
            };
            let (ls, lt) = ends(lhs)?;
            if rhs.is_empty() {
                if ls != lt {
                    return Err(Error::invalid(format!(
                        "relation {ri}: identity relation on a non-loop"
                    )));
                }
            } else {
                let (rs, rt) = ends(rhs)?;
                if (ls, lt) != (rs, rt) {
                    return Err(Error::invalid(format!("relation {ri}: paths not parallel")));
                }
            }
        }
        Ok(())
    }
}

/// Group data produced by coset enumeration: elements are cosets of the
/// trivial subgroup, element 0 is the unit.
#[derive(Debug, Clone)]
pub struct EnumeratedGroup {
    pub order: usize,
    /// `act[e][col]` with columns `2g` (generator `g`) and `2g+1` (inverse).
    act: Vec<Vec<usize>>,
    /// A word (column sequence) for each element, from BFS over `act`.
    word: Vec<Vec<usize>>,
}

impl EnumeratedGroup {
    pub fn apply(&self, e: usize, col: usize) -> usize {
        self.act[e][col]
    }

    pub fn apply_word(&self, mut e: usize, word: &[usize]) -> usize {
        for &c in word {
            e = self.act[e][c];
        }
        e
    }

    /// "x then y": the element reached from x by y's word.
    pub fn then(&self, x: usize, y: usize) -> usize {
        self.apply_word(x, &self.word[y])
    }

    pub fn inverse(&self, x: usize) -> usize {
        let mut e = 0;
        for &c in self.word[x].iter().rev() {
            e = self.act[e][c ^ 1];
        }
        e
    }

    pub fn word_of(&self, x: usize) -> &[usize] {
        &self.word[x]
    }
}

struct CosetTable {
    ncols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    defined: usize,
    budget: usize,
}

impl CosetTable {
    fn new(n_gens: usize, budget: usize) -> Self {
        CosetTable {
            ncols: 2 * n_gens,
            table: vec![vec![None; 2 * n_gens]],
            parent: vec![0],
            defined: 1,
            budget,
        }
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != x {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn define(&mut self, c: usize, col: usize) -> Result<usize> {
        if self.defined >= self.budget {
            return Err(Error::Unbounded {
                budget: self.budget,
                at: None,
            });
        }
        let fresh = self.table.len();
        self.table.push(vec![None; self.ncols]);
        self.parent.push(fresh);
        self.defined += 1;
        self.table[c][col] = Some(fresh);
        self.table[fresh][col ^ 1] = Some(c);
        Ok(fresh)
    }

    fn merge(&mut self, queue: &mut VecDeque<usize>, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
            queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(&mut queue, a, b);
        while let Some(e) = queue.pop_front() {
            for col in 0..self.ncols {
                if let Some(f) = self.table[e][col].take() {
                    if self.table[f][col ^ 1] == Some(e) {
                        self.table[f][col ^ 1] = None;
                    }
                    let e1 = self.rep(e);
                    let f1 = self.rep(f);
                    if let Some(x) = self.table[e1][col] {
                        self.merge(&mut queue, f1, x);
                    } else if let Some(x) = self.table[f1][col ^ 1] {
                        self.merge(&mut queue, e1, x);
                    } else {
                        self.table[e1][col] = Some(f1);
                        self.table[f1][col ^ 1] = Some(e1);
                    }
                }
            }
        }
    }

    /// Scan `word` at `coset` from both ends; letters `i..j` remain unscanned.
    fn scan_and_fill(&mut self, coset: usize, word: &[usize]) -> Result<()> {
        let mut f = coset;
        let mut b = coset;
        let mut i = 0usize;
        let mut j = word.len();
        loop {
            while i < j {
                match self.table[f][word[i]] {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.table[b][word[j - 1] ^ 1] {
                    Some(prev) => {
                        b = prev;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                // deduction: f · word[i] = b
                self.table[f][word[i]] = Some(b);
                self.table[b][word[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }
}

/// HLT Todd-Coxeter for the trivial subgroup; `budget` bounds the number of
/// cosets ever defined.
pub fn todd_coxeter(n_gens: usize, relations: &[Vec<usize>], budget: usize) -> Result<EnumeratedGroup> {
    let mut ct = CosetTable::new(n_gens, budget.max(1));
    let mut current = 0usize;
    loop {
        while current < ct.table.len() {
            if !ct.alive(current) {
                current += 1;
                continue;
            }
            for rel in relations {
                ct.scan_and_fill(current, rel)?;
                if !ct.alive(current) {
                    break;
                }
            }
            if ct.alive(current) {
                let c = ct.rep(current);
                for col in 0..ct.ncols {
                    if ct.table[c][col].is_none() {
                        ct.define(c, col)?;
                    }
                }
            }
            current += 1;
        }
        // coincidence processing can transiently remove entries from live
        // rows; re-sweep until every live row is complete
        let incomplete = (0..ct.table.len())
            .find(|&c| ct.alive(c) && (0..ct.ncols).any(|col| ct.table[c][col].is_none()));
        match incomplete {
            Some(c) => current = c,
            None => break,
        }
    }
    // compact live cosets, preserving order (0 stays the unit)
    let mut live: Vec<usize> = Vec::new();
    let mut number = vec![usize::MAX; ct.table.len()];
    for c in 0..ct.table.len() {
        if ct.alive(c) {
            number[c] = live.len();
            live.push(c);
        }
    }
    let order = live.len();
    let mut act = vec![vec![0usize; ct.ncols.max(1)]; order];
    for (e, &c) in live.iter().enumerate() {
        for col in 0..ct.ncols {
            let t = ct.table[c][col].expect("complete table");
            let t = ct.rep(t);
            act[e][col] = number[t];
        }
    }
    // BFS words
    let mut word: Vec<Option<Vec<usize>>> = vec![None; order];
    word[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for col in 0..ct.ncols {
            let t = act[e][col];
            if word[t].is_none() {
                let mut w = word[e].clone().unwrap();
                w.push(col);
                word[t] = Some(w);
                queue.push_back(t);
            }
        }
    }
    let word = word
        .into_iter()
        .map(|w| w.unwrap_or_default())
        .collect();
    Ok(EnumeratedGroup { order, act, word })
}

/// Spanning-tree data for one component of a presentation.
#[derive(Debug, Clone)]
pub struct ComponentData {
    pub root: usize,
    pub vertices: Vec<usize>,
    /// `tree[v]` = step leading from the parent vertex to `v` (absent at root).
    pub tree: BTreeMap<usize, (usize, Step)>,
    /// Non-tree arrows of the component, in index order = group generators.
    pub gens: Vec<usize>,
    pub group: EnumeratedGroup,
}

impl ComponentData {
    /// Tree path root -> v, as steps.
    pub fn path_from_root(&self, v: usize) -> Vec<Step> {
        let mut rev = Vec::new();
        let mut cur = v;
        while cur != self.root {
            let (parent, step) = self.tree[&cur];
            rev.push(step);
            cur = parent;
        }
        rev.reverse();
        rev
    }
}

/// A finite groupoid together with the enumeration data that produced it:
/// morphisms are triples (source, target, group element) per component.
#[derive(Debug, Clone)]
pub struct EnumeratedGroupoid {
    pub groupoid: FiniteGroupoid,
    pub components: Vec<ComponentData>,
    pub component_of: Vec<usize>,
    /// `(src vertex, tgt vertex, element)` per morphism.
    pub mor_data: Vec<(usize, usize, usize)>,
    mor_index: BTreeMap<(usize, usize, usize), usize>,
    /// Morphism class of each generator arrow.
    pub arrow_morphism: Vec<usize>,
    /// The presentation that was enumerated.
    pub presentation: GroupoidPresentation,
}

impl EnumeratedGroupoid {
    pub fn morphism(&self, src: usize, tgt: usize, elem: usize) -> usize {
        self.mor_index[&(src, tgt, elem)]
    }

    /// Evaluate a path of presentation steps to a morphism of the groupoid.
    pub fn eval_path(&self, start: usize, steps: &[Step]) -> usize {
        let mut m = self.groupoid.id[start];
        for s in steps {
            let mut sm = self.arrow_morphism[s.arrow];
            if s.inverted {
                sm = self.groupoid.inv[sm];
            }
            m = self.groupoid.comp[&(sm, m)];
        }
        m
    }

    /// A path of presentation steps realizing the given morphism: down the
    /// tree to the root, around the element's generator word, back up.
    pub fn morphism_path(&self, m: usize) -> Vec<Step> {
        fn inv_path(p: Vec<Step>) -> Vec<Step> {
            p.into_iter().rev().map(Step::invert).collect()
        }
        let (a, b, h) = self.mor_data[m];
        let comp = &self.components[self.component_of[a]];
        let mut steps: Vec<Step> = inv_path(comp.path_from_root(a));
        for &col in comp.group.word_of(h) {
            let arrow = comp.gens[col / 2];
            let (u, v) = self.presentation.arrows[arrow];
            if col % 2 == 0 {
                steps.extend(comp.path_from_root(u));
                steps.push(Step::fwd(arrow));
                steps.extend(inv_path(comp.path_from_root(v)));
            } else {
                steps.extend(comp.path_from_root(v));
                steps.push(Step::rev(arrow));
                steps.extend(inv_path(comp.path_from_root(u)));
            }
        }
        steps.extend(comp.path_from_root(b));
        steps
    }
}

/// Runs spanning-tree reduction and coset enumeration on a presentation.
pub fn enumerate(p: &GroupoidPresentation, budget: usize) -> Result<EnumeratedGroupoid> {
    p.validate()?;
    let mut uf = UnionFind::new(p.n_vertices);
    for &(u, v) in &p.arrows {
        uf.union(u, v);
    }
    let (cls, n_comp) = uf.quotient();
    let mut comp_vertices: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    for v in 0..p.n_vertices {
        comp_vertices[cls[v]].push(v);
    }
    // adjacency: vertex -> outgoing steps in arrow order
    let mut adj: Vec<Vec<(usize, Step)>> = vec![Vec::new(); p.n_vertices];
    for (i, &(u, v)) in p.arrows.iter().enumerate() {
        adj[u].push((v, Step::fwd(i)));
        adj[v].push((u, Step::rev(i)));
    }
    let mut components = Vec::with_capacity(n_comp);
    for vertices in &comp_vertices {
        let root = vertices[0];
        // BFS spanning tree, arrows in index order for determinism
        let mut tree: BTreeMap<usize, (usize, Step)> = BTreeMap::new();
        let mut seen: BTreeMap<usize, ()> = BTreeMap::new();
        seen.insert(root, ());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut nbrs = adj[u].clone();
            nbrs.sort_by_key(|&(_, s)| s);
            for (v, s) in nbrs {
                if !seen.contains_key(&v) {
                    seen.insert(v, ());
                    tree.insert(v, (u, s));
                    queue.push_back(v);
                }
            }
        }
        let tree_arrows: std::collections::BTreeSet<usize> =
            tree.values().map(|&(_, s)| s.arrow).collect();
        let gens: Vec<usize> = (0..p.arrows.len())
            .filter(|&a| cls[p.arrows[a].0] == cls[root] && !tree_arrows.contains(&a))
            .collect();
        let gen_col: BTreeMap<usize, usize> =
            gens.iter().enumerate().map(|(i, &a)| (a, 2 * i)).collect();
        // relation words: collapse tree arrows
        let mut words: Vec<Vec<usize>> = Vec::new();
        for (lhs, rhs) in &p.relations {
            let first = lhs[0];
            let (u, _) = if first.inverted {
                let (a, b) = p.arrows[first.arrow];
                (b, a)
            } else {
                p.arrows[first.arrow]
            };
            if cls[u] != cls[root] {
                continue;
            }
            let mut w = Vec::new();
            for s in lhs {
                if let Some(&c) = gen_col.get(&s.arrow) {
                    w.push(if s.inverted { c ^ 1 } else { c });
                }
            }
            for s in rhs.iter().rev() {
                if let Some(&c) = gen_col.get(&s.arrow) {
                    w.push(if s.inverted { c } else { c ^ 1 });
                }
            }
            if !w.is_empty() {
                words.push(w);
            }
        }
        let group = todd_coxeter(gens.len(), &words, budget)?;
        components.push(ComponentData {
            root,
            vertices: vertices.clone(),
            tree,
            gens,
            group,
        });
    }
    // assemble the groupoid: morphisms ordered by (src, tgt, element)
    let mut mor_data: Vec<(usize, usize, usize)> = Vec::new();
    let mut mor_index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for comp in &components {
        for &a in &comp.vertices {
            for &b in &comp.vertices {
                for h in 0..comp.group.order {
                    mor_index.insert((a, b, h), mor_data.len());
                    mor_data.push((a, b, h));
                }
            }
        }
    }
    let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (mj, &(s, _, _)) in mor_data.iter().enumerate() {
        by_src.entry(s).or_default().push(mj);
    }
    let mut comp_table = BTreeMap::new();
    for (mi, &(a, b, h)) in mor_data.iter().enumerate() {
        let cd = &components[cls[a]];
        if let Some(outgoing) = by_src.get(&b) {
            for &mj in outgoing {
                let (_, c, h2) = mor_data[mj];
                // (b,c,h2) ∘ (a,b,h): first h, then h2
                comp_table.insert((mj, mi), mor_index[&(a, c, cd.group.then(h, h2))]);
            }
        }
    }
    let groupoid = FiniteGroupoid {
        n_objects: p.n_vertices,
        src: mor_data.iter().map(|&(a, _, _)| a).collect(),
        tgt: mor_data.iter().map(|&(_, b, _)| b).collect(),
        id: (0..p.n_vertices).map(|v| mor_index[&(v, v, 0)]).collect(),
        comp: comp_table,
        inv: mor_data
            .iter()
            .map(|&(a, b, h)| mor_index[&(b, a, components[cls[a]].group.inverse(h))])
            .collect(),
        object_labels: None,
        morphism_labels: None,
    };
    // generator arrows as morphisms: tree arrows carry the unit element,
    // non-tree arrows their generator element
    let mut arrow_morphism = Vec::with_capacity(p.arrows.len());
    for (a, &(u, v)) in p.arrows.iter().enumerate() {
        let comp = &components[cls[u]];
        let elem = match comp.gens.iter().position(|&g| g == a) {
            Some(i) => comp.group.apply(0, 2 * i),
            None => 0,
        };
        arrow_morphism.push(mor_index[&(u, v, elem)]);
    }
    Ok(EnumeratedGroupoid {
        groupoid,
        components,
        component_of: cls,
        mor_data,
        mor_index,
        arrow_morphism,
        presentation: p.clone(),
    })
}
