//! The fundamental groupoid left adjoint and the fundamental n-fold
//! groupoid `Q_n`.
//!
//! `π̂` is computed as the left adjoint — a presentation with vertices `X₀`,
//! generators `X₁`, and one relation `d₁σ = d₀σ ∘ d₂σ` per 2-cell — followed
//! by budgeted coset enumeration. Applied directionwise to the ordinal sum
//! (last direction first), this yields the 2-truncated multinerve of `Q_n X`.

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMap};
use crate::msset::{msset_isomorphic, ordinal_offset, ordinal_sum, TruncatedMultiSSet};
use crate::nfold::NFoldGroupoid;
use crate::presentation::{enumerate, EnumeratedGroupoid, GroupoidPresentation, Step};
use crate::report::Report;
use crate::sset::TruncatedSSet;
use std::collections::BTreeMap;

/// Default coset-enumeration budget (table rows).
pub const DEFAULT_BUDGET: usize = 100_000;

/// The presentation of the fundamental groupoid of a truncated simplicial
/// set: vertices `X₀`, generators `X₁`, one relation per 2-cell.
pub fn fundamental_presentation(x: &TruncatedSSet) -> Result<GroupoidPresentation> {
    if x.bound < 2 {
        return Err(Error::InsufficientBound {
            op: "fundamental_presentation",
            needed: 2,
            actual: x.bound,
        });
    }
    let arrows: Vec<(usize, usize)> = (0..x.sizes[1])
        .map(|e| (x.faces[1][1][e], x.faces[1][0][e]))
        .collect();
    let relations = (0..x.sizes[2])
        .map(|s| {
            // d₁σ = d₀σ ∘ d₂σ: the long edge equals the two short ones
            let lhs = vec![Step::fwd(x.faces[2][2][s]), Step::fwd(x.faces[2][0][s])];
            let rhs = vec![Step::fwd(x.faces[2][1][s])];
            (lhs, rhs)
        })
        .collect();
    Ok(GroupoidPresentation {
        n_vertices: x.sizes[0],
        arrows,
        relations,
    })
}

/// `π̂ X` via presentation and enumeration.
pub fn fundamental_groupoid(x: &TruncatedSSet, budget: usize) -> Result<EnumeratedGroupoid> {
    enumerate(&fundamental_presentation(x)?, budget)
}

/// The functor induced on fundamental groupoids by a simplicial map, given
/// its vertex and edge tables.
pub fn induced_functor(
    src: &EnumeratedGroupoid,
    tgt: &EnumeratedGroupoid,
    vertex_map: &[usize],
    edge_map: &[usize],
) -> GroupoidMap {
    let morphisms: Vec<usize> = (0..src.groupoid.n_morphisms())
        .map(|m| {
            let (a, _, _) = src.mor_data[m];
            let steps: Vec<Step> = src
                .morphism_path(m)
                .into_iter()
                .map(|s| Step {
                    arrow: edge_map[s.arrow],
                    inverted: s.inverted,
                })
                .collect();
            tgt.eval_path(vertex_map[a], &steps)
        })
        .collect();
    GroupoidMap {
        objects: vertex_map.to_vec(),
        morphisms,
    }
}

/// π̂ applied in one direction of a multi-simplicial set: one fundamental
/// groupoid per complementary multi-index (returned with that index).
pub fn pi1_direction(
    y: &TruncatedMultiSSet,
    dir: usize,
    budget: usize,
) -> Result<Vec<(Vec<usize>, EnumeratedGroupoid)>> {
    if y.bounds[dir] < 2 {
        return Err(Error::InsufficientBound {
            op: "pi1_direction",
            needed: 2,
            actual: y.bounds[dir],
        });
    }
    let mut out = Vec::new();
    for p in y.indices() {
        if p[dir] != 0 {
            continue;
        }
        let at: Vec<(usize, usize)> = (0..y.arity())
            .filter(|&d| d != dir)
            .map(|d| (d, p[d]))
            .collect();
        let sset = y.direction_sset(&at)?;
        let e = fundamental_groupoid(&sset, budget).map_err(|err| match err {
            Error::Unbounded { budget, .. } => Error::Unbounded {
                budget,
                at: Some(format!("{p:?}")),
            },
            other => other,
        })?;
        out.push((p, e));
    }
    Ok(out)
}

/// Replace direction `dir` by the 2-truncated nerve of its fundamental
/// groupoids, with operators of the remaining directions induced on
/// generators.
pub fn pi1_direction_nerve(
    y: &TruncatedMultiSSet,
    dir: usize,
    budget: usize,
) -> Result<TruncatedMultiSSet> {
    let arity = y.arity();
    let groupoids = pi1_direction(y, dir, budget)?;
    let mut out_bounds = y.bounds.clone();
    out_bounds[dir] = 2;
    let mut out = TruncatedMultiSSet::empty(out_bounds);
    let base_of = |p: &[usize]| -> Vec<usize> {
        let mut b = p.to_vec();
        b[dir] = 0;
        b
    };
    let mut by_flat: BTreeMap<usize, &EnumeratedGroupoid> = BTreeMap::new();
    for (p, e) in &groupoids {
        by_flat.insert(out.flat(p), e);
    }
    // composable pairs per base, lexicographic
    let mut pairs: BTreeMap<usize, (Vec<(usize, usize)>, BTreeMap<(usize, usize), usize>)> =
        BTreeMap::new();
    for (p, e) in &groupoids {
        let g = &e.groupoid;
        let mut list = Vec::new();
        for m1 in 0..g.n_morphisms() {
            for m2 in 0..g.n_morphisms() {
                if g.tgt[m1] == g.src[m2] {
                    list.push((m1, m2));
                }
            }
        }
        let index = list.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        pairs.insert(out.flat(p), (list, index));
    }
    for p in out.indices() {
        let fb = out.flat(&base_of(&p));
        let e = by_flat[&fb];
        let fp = out.flat(&p);
        out.sizes[fp] = match p[dir] {
            0 => e.groupoid.n_objects,
            1 => e.groupoid.n_morphisms(),
            _ => pairs[&fb].0.len(),
        };
    }
    // nerve-direction operators
    for p in out.indices() {
        let fb = out.flat(&base_of(&p));
        let e = by_flat[&fb];
        let g = &e.groupoid;
        let fp = out.flat(&p);
        match p[dir] {
            0 => {
                out.degens
                    .insert((dir, 0, fp), (0..g.n_objects).map(|o| g.id[o]).collect());
            }
            1 => {
                out.faces.insert((dir, 0, fp), g.tgt.clone());
                out.faces.insert((dir, 1, fp), g.src.clone());
                let (_, index) = &pairs[&fb];
                out.degens.insert(
                    (dir, 0, fp),
                    (0..g.n_morphisms())
                        .map(|m| index[&(g.id[g.src[m]], m)])
                        .collect(),
                );
                out.degens.insert(
                    (dir, 1, fp),
                    (0..g.n_morphisms())
                        .map(|m| index[&(m, g.id[g.tgt[m]])])
                        .collect(),
                );
            }
            _ => {
                let (list, _) = &pairs[&fb];
                out.faces
                    .insert((dir, 0, fp), list.iter().map(|&(_, m2)| m2).collect());
                out.faces.insert(
                    (dir, 1, fp),
                    list.iter().map(|&(m1, m2)| g.comp[&(m2, m1)]).collect(),
                );
                out.faces
                    .insert((dir, 2, fp), list.iter().map(|&(m1, _)| m1).collect());
            }
        }
    }
    // operators of the remaining directions, induced on generators
    let final_bounds = out.bounds.clone();
    for p in out.indices() {
        if p[dir] != 0 {
            continue;
        }
        let fb = out.flat(&p);
        let e = by_flat[&fb];
        for d in 0..arity {
            if d == dir {
                continue;
            }
            let mut handle = |i: usize, is_face: bool| {
                let q = TruncatedMultiSSet::shift(&p, d, if is_face { -1 } else { 1 });
                let fq = out.flat(&q);
                let e2 = by_flat[&fq];
                let y0 = y.flat(&p);
                let mut p1 = p.clone();
                p1[dir] = 1;
                let y1 = y.flat(&p1);
                let (v_tbl, e_tbl) = if is_face {
                    (&y.faces[&(d, i, y0)], &y.faces[&(d, i, y1)])
                } else {
                    (&y.degens[&(d, i, y0)], &y.degens[&(d, i, y1)])
                };
                let functor = induced_functor(e, e2, v_tbl, e_tbl);
                let mut insert = |lvl: usize, tbl: Vec<usize>| {
                    let mut pp = p.clone();
                    pp[dir] = lvl;
                    let f = out.flat(&pp);
                    if is_face {
                        out.faces.insert((d, i, f), tbl);
                    } else {
                        out.degens.insert((d, i, f), tbl);
                    }
                };
                insert(0, functor.objects.clone());
                insert(1, functor.morphisms.clone());
                let (list, _) = &pairs[&fb];
                let (_, tgt_index) = &pairs[&fq];
                let tbl: Vec<usize> = list
                    .iter()
                    .map(|&(m1, m2)| tgt_index[&(functor.morphisms[m1], functor.morphisms[m2])])
                    .collect();
                insert(2, tbl);
            };
            if p[d] >= 1 {
                for i in 0..=p[d] {
                    handle(i, true);
                }
            }
            if p[d] < final_bounds[d] {
                for i in 0..=p[d] {
                    handle(i, false);
                }
            }
        }
    }
    Ok(out)
}

/// `Q_n X = π̂⁽¹⁾ ... π̂⁽ⁿ⁾ Or_n X`, restricted to the 2-truncated core
/// (π̂ in the first direction applied last).
pub fn q_n(x: &TruncatedSSet, n: usize, budget: usize) -> Result<NFoldGroupoid> {
    q_n_with_order(x, n, budget, &(0..n).rev().collect::<Vec<_>>())
}

/// `Q_n` with an explicit order of π̂ applications.
pub fn q_n_with_order(
    x: &TruncatedSSet,
    n: usize,
    budget: usize,
    order: &[usize],
) -> Result<NFoldGroupoid> {
    let bounds = vec![2usize; n];
    let needed = n - 1 + 2 * n;
    if x.bound < needed {
        return Err(Error::InsufficientBound {
            op: "q_n",
            needed,
            actual: x.bound,
        });
    }
    let mut y = ordinal_sum(x, n, &bounds)?;
    for &dir in order {
        y = pi1_direction_nerve(&y, dir, budget)?;
    }
    NFoldGroupoid::from_core(y)
}

/// `Q_n` together with a Kan certificate for the input, checked within
/// bound. Non-Kan inputs still produce the left-adjoint value.
pub struct QnResult {
    pub groupoid: NFoldGroupoid,
    pub kan_certified: bool,
    pub kan_checked_to: usize,
}

pub fn q_n_certified(x: &TruncatedSSet, n: usize, budget: usize, m_max: usize) -> Result<QnResult> {
    let m_max = m_max.min(x.bound);
    let kan = crate::fibrancy::is_kan(x, m_max);
    Ok(QnResult {
        groupoid: q_n(x, n, budget)?,
        kan_certified: kan.is_pass(),
        kan_checked_to: m_max,
    })
}

/// Iterative-description checks for `Q_n`:
/// (a) after π̂, `φ: cX -> L_•X` is a levelwise equivalence of groupoids;
/// (b) `(N⁽ⁿ⁾ Q_n X)_k ≅ Q_{n-1} L_k X` cellwise;
/// (c) when `π̂ X` is homotopically discrete (the algebraic shadow of a
///     homotopically trivial input), `Π₁ L_k X` decomposes as the
///     (k+1)-fold fiber product of `Π₁ Dec X` over `Π₁ X`.
pub fn check_iterative(x: &TruncatedSSet, n: usize, k: usize, budget: usize) -> Result<Report> {
    let mut rep = Report::new(format!("iterative description at n={n}, k={k}"));
    if n < 2 {
        return Err(Error::invalid("check_iterative needs n >= 2"));
    }
    // (b)
    let q = q_n(x, n, budget)?;
    let dir = n - 1;
    let mut bounds = vec![2; n];
    bounds[dir] = k.max(2);
    let ext = q.multinerve(&bounds)?;
    let lhs = ext.slice(&[(dir, k)]);
    let lk = x.bar_path(k)?;
    let rhs = if n > 2 {
        q_n(&lk, n - 1, budget)?.core
    } else {
        let e = fundamental_groupoid(&lk, budget)?;
        TruncatedMultiSSet::from_sset(&e.groupoid.nerve(2))
    };
    let iso = msset_isomorphic(&lhs, &rhs).is_some();
    rep.clause(format!("(b) (N⁽ⁿ⁾Q_{n}X)_{k} ≅ Q_{}L_{k}X", n - 1), iso);
    // (a): rows of L_•X have fundamental groupoid equivalent to the
    // discrete groupoid on X_i, via φ_i = s_i
    let max_row = x.bound.saturating_sub(3).min(2);
    for i in 0..=max_row {
        let eps: Vec<usize> = x.faces[i + 1][i + 1].clone();
        let row_groupoid = FiniteGroupoid::af_construction(&eps, x.sizes[i]);
        let row_nerve = row_groupoid.nerve(2);
        let e = fundamental_groupoid(&row_nerve, budget)?;
        let vmap: Vec<usize> = x.degens[i][i].clone();
        // vertices of the row are (Dec X)_0-cells = X_{i+1}-cells
        let functor = GroupoidMap {
            objects: vmap.clone(),
            morphisms: (0..x.sizes[i]).map(|v| e.groupoid.id[vmap[v]]).collect(),
        };
        let disc = FiniteGroupoid::discrete(x.sizes[i]);
        let (ok, why) = functor.is_equivalence(&disc, &e.groupoid);
        rep.clause(format!("(a) φ at level {i} is an equivalence after π̂"), ok);
        if let Some(w) = why {
            rep.violation(format!("(a) level {i}"), w);
        }
    }
    // (c) at arity 1, for homotopically trivial inputs
    let ex = fundamental_groupoid(x, budget)?;
    if k >= 1 && ex.groupoid.is_homotopically_discrete().0 {
        let (dec, eps, _) = x.decalage(crate::sset::DecSide::Last)?;
        let edec = fundamental_groupoid(&dec, budget)?;
        let eps_functor = induced_functor(&edec, &ex, &eps.levels[0], &eps.levels[1]);
        // iterated strict pullback of Π₁ Dec X over Π₁ X, k+1 factors
        let mut prod = edec.groupoid.clone();
        let mut proj = eps_functor.clone();
        for _ in 1..=k {
            let next = prod.pullback(&edec.groupoid, &proj, &eps_functor);
            // the new projection to Π₁X factors through the last component
            let mut obj = Vec::with_capacity(next.n_objects);
            let mut pos = std::collections::BTreeMap::new();
            for a in 0..prod.n_objects {
                for b in 0..edec.groupoid.n_objects {
                    if proj.objects[a] == eps_functor.objects[b] {
                        pos.insert((a, b), obj.len());
                        obj.push(eps_functor.objects[b]);
                    }
                }
            }
            let mut mors = Vec::with_capacity(next.n_morphisms());
            for m in 0..prod.n_morphisms() {
                for m2 in 0..edec.groupoid.n_morphisms() {
                    if proj.morphisms[m] == eps_functor.morphisms[m2] {
                        mors.push(eps_functor.morphisms[m2]);
                    }
                }
            }
            let _ = pos;
            proj = GroupoidMap {
                objects: obj,
                morphisms: mors,
            };
            prod = next;
        }
        let lk = x.bar_path(k)?;
        let elk = fundamental_groupoid(&lk, budget)?;
        rep.clause(
            format!("(c) Π₁L_{k}X ≅ (k+1)-fold fiber product over Π₁X"),
            crate::groupoid::groupoid_isomorphic(&elk.groupoid, &prod),
        );
    }
    Ok(rep)
}

/// Check `Π₀⁽ⁿ⁾ Q_n X ≅ Q_{n-1} X` on cores.
pub fn check_pi0_qn(x: &TruncatedSSet, n: usize, budget: usize) -> Result<Report> {
    let mut rep = Report::new(format!("Π₀ Q_{n} ≅ Q_{}", n - 1));
    let q = q_n(x, n, budget)?;
    let p = q.pi0_functor()?;
    let rhs = if n == 2 {
        let e = fundamental_groupoid(x, budget)?;
        TruncatedMultiSSet::from_sset(&e.groupoid.nerve(2))
    } else {
        q_n(x, n - 1, budget)?.core
    };
    let iso = msset_isomorphic(&p.quotient.core, &rhs).is_some();
    rep.clause("cores isomorphic", iso);
    Ok(rep)
}

/// Check the nerve/π̂ exchange on the ordinal sum: applying `Or_{n-1}` to
/// the first direction of `N⁽²⁾π̂⁽²⁾Or₂X` equals `N⁽ⁿ⁾π̂⁽ⁿ⁾Or_nX`, cellwise
/// within the given bounds for the first n−1 directions.
pub fn check_lnuph(
    x: &TruncatedSSet,
    n: usize,
    inner_bounds: &[usize],
    budget: usize,
) -> Result<Report> {
    assert_eq!(inner_bounds.len(), n - 1);
    let mut rep = Report::new(format!("nerve/π̂ exchange at n={n}"));
    if n < 2 {
        return Err(Error::invalid("check_lnuph needs n >= 2"));
    }
    let mut bounds = inner_bounds.to_vec();
    bounds.push(2);
    let or_n = ordinal_sum(x, n, &bounds)?;
    let rhs = pi1_direction_nerve(&or_n, n - 1, budget)?;
    let big = n - 2 + inner_bounds.iter().sum::<usize>();
    let or2 = ordinal_sum(x, 2, &[big, 2])?;
    let z = pi1_direction_nerve(&or2, 1, budget)?;
    let mut lhs = TruncatedMultiSSet::empty(bounds.clone());
    for p in lhs.indices() {
        let fp = lhs.flat(&p);
        let inner = &p[..n - 1];
        let k = p[n - 1];
        let level = n - 2 + inner.iter().sum::<usize>();
        let zf = z.flat(&[level, k]);
        lhs.sizes[fp] = z.sizes[zf];
        for d in 0..n - 1 {
            let off = ordinal_offset(inner, d);
            if p[d] >= 1 {
                for i in 0..=p[d] {
                    lhs.faces
                        .insert((d, i, fp), z.faces[&(0, off + i, zf)].clone());
                }
            }
            if p[d] < lhs.bounds[d] {
                for i in 0..=p[d] {
                    lhs.degens
                        .insert((d, i, fp), z.degens[&(0, off + i, zf)].clone());
                }
            }
        }
        if k >= 1 {
            for i in 0..=k {
                lhs.faces.insert((n - 1, i, fp), z.faces[&(1, i, zf)].clone());
            }
        }
        if k < 2 {
            for i in 0..=k {
                lhs.degens
                    .insert((n - 1, i, fp), z.degens[&(1, i, zf)].clone());
            }
        }
    }
    let equal = lhs == rhs;
    rep.clause("cellwise equality", equal);
    if !equal {
        rep.clause("isomorphic", msset_isomorphic(&lhs, &rhs).is_some());
    }
    Ok(rep)
}
