//! Horn-filling and fibrancy checkers.
//!
//! All lifting checks are exhaustive within truncation; "Kan within bound
//! m_max" is the honest statement, and every report carries its bound.

use crate::error::Result;
use crate::msset::{ordinal_offset, TruncatedMultiSSet};
use crate::report::Report;
use crate::sset::{SimplicialMap, TruncatedSSet};
use std::collections::BTreeMap;

/// A horn in `X`: dimension `m`, missing face `j`, and the assigned
/// `(m-1)`-cells for every face index other than `j`.
#[derive(Debug, Clone)]
pub struct Horn {
    pub m: usize,
    pub j: usize,
    /// `faces[a]` = assigned cell for face `a` (`usize::MAX` at `a = j`).
    pub faces: Vec<usize>,
}

/// Enumerate all horn maps `Λ^j[m] -> X`.
pub fn horns(x: &TruncatedSSet, m: usize, j: usize) -> Vec<Horn> {
    let mut out = Vec::new();
    if m == 0 || m > x.bound {
        return out;
    }
    let positions: Vec<usize> = (0..=m).filter(|&a| a != j).collect();
    let mut assign = vec![usize::MAX; m + 1];
    fn rec(
        x: &TruncatedSSet,
        m: usize,
        positions: &[usize],
        pi: usize,
        assign: &mut Vec<usize>,
        out: &mut Vec<Horn>,
        j: usize,
    ) {
        if pi == positions.len() {
            out.push(Horn {
                m,
                j,
                faces: assign.clone(),
            });
            return;
        }
        let b = positions[pi];
        'cand: for c in 0..x.sizes[m - 1] {
            // pairwise compatibility: d_a σ_b = d_{b-1} σ_a for a < b
            if m >= 2 {
                for &a in &positions[..pi] {
                    if a < b {
                        if x.faces[m - 1][a][c] != x.faces[m - 1][b - 1][assign[a]] {
                            continue 'cand;
                        }
                    } else if x.faces[m - 1][b][assign[a]] != x.faces[m - 1][a - 1][c] {
                        continue 'cand;
                    }
                }
            }
            assign[b] = c;
            rec(x, m, positions, pi + 1, assign, out, j);
            assign[b] = usize::MAX;
        }
    }
    rec(x, m, &positions, 0, &mut assign, &mut out, j);
    out
}

/// Cells of `X_m` filling the horn.
pub fn fillers(x: &TruncatedSSet, horn: &Horn) -> Vec<usize> {
    (0..x.sizes[horn.m])
        .filter(|&w| {
            (0..=horn.m)
                .filter(|&a| a != horn.j)
                .all(|a| x.faces[horn.m][a][w] == horn.faces[a])
        })
        .collect()
}

/// Horn-filling check for all `1 <= m <= m_max`, `0 <= j <= m`.
pub fn is_kan(x: &TruncatedSSet, m_max: usize) -> Report {
    let mut rep = Report::new("Kan within bound");
    rep.note(format!("checked horns of dimension <= {}", m_max.min(x.bound)));
    for m in 1..=m_max.min(x.bound) {
        for j in 0..=m {
            for horn in horns(x, m, j) {
                if fillers(x, &horn).is_empty() {
                    rep.violation(
                        format!("horn Λ^{j}[{m}] unfilled"),
                        format!("{:?}", horn.faces),
                    );
                }
            }
        }
    }
    rep
}

/// Lifting property of `f: X -> Y` against all horn inclusions of
/// dimension `<= m_max`, by exhaustive enumeration of commuting squares.
pub fn is_fibration(
    f: &SimplicialMap,
    x: &TruncatedSSet,
    y: &TruncatedSSet,
    m_max: usize,
) -> Report {
    let mut rep = Report::new("fibration within bound");
    rep.note(format!("checked lifts in dimension <= {m_max}"));
    let vrep = f.validate(x, y);
    if !vrep.is_pass() {
        rep.absorb("map is simplicial", vrep);
        return rep;
    }
    for m in 1..=m_max.min(x.bound).min(y.bound) {
        for j in 0..=m {
            for horn in horns(x, m, j) {
                for tau in 0..y.sizes[m] {
                    let compatible = (0..=m)
                        .filter(|&a| a != j)
                        .all(|a| y.faces[m][a][tau] == f.levels[m - 1][horn.faces[a]]);
                    if !compatible {
                        continue;
                    }
                    let found = fillers(x, &horn).into_iter().any(|w| f.levels[m][w] == tau);
                    if !found {
                        rep.violation(
                            format!("lift against Λ^{j}[{m}]"),
                            format!("horn {:?} over cell {tau}", horn.faces),
                        );
                    }
                }
            }
        }
    }
    rep
}

/// The (n,2)-fibrancy check: for every ordered pair of directions and
/// every complementary multi-index, the 2-coskeletonized vertical rows at
/// horizontal index 0, 1, 2 are Kan and the horizontal `d₀` between rows 1
/// and 0 is a fibration, everything within `m_max`.
pub fn is_n2_fibrant(y: &TruncatedMultiSSet, m_max: usize) -> Result<Report> {
    let mut rep = Report::new("(n,2)-fibrant");
    rep.note(format!("bound {m_max}"));
    let n = y.arity();
    for hdir in 0..n {
        for vdir in 0..n {
            if hdir == vdir {
                continue;
            }
            for p in y.indices() {
                if p[hdir] != 0 || p[vdir] != 0 {
                    continue;
                }
                let at_base: Vec<(usize, usize)> = (0..n)
                    .filter(|&d| d != hdir && d != vdir)
                    .map(|d| (d, p[d]))
                    .collect();
                let mut rows = Vec::new();
                for k in 0..=2usize.min(y.bounds[hdir]) {
                    let mut at = at_base.clone();
                    at.push((hdir, k));
                    at.sort();
                    let row = y.direction_sset(&at)?;
                    let csk = row.coskeleton2(m_max.max(row.bound))?;
                    let kan = is_kan(&csk, m_max);
                    rep.clause(
                        format!("rows ({hdir},{vdir}) at {at_base:?}: csk₂ row {k} Kan"),
                        kan.is_pass(),
                    );
                    for v in kan.violations {
                        rep.violation(format!("({hdir},{vdir}) row {k}: {}", v.rule), v.witness);
                    }
                    rows.push(csk);
                }
                if y.bounds[hdir] >= 1 {
                    let d0 = horizontal_face_map(y, hdir, vdir, &at_base, &rows[1], &rows[0]);
                    let fib = is_fibration(&d0, &rows[1], &rows[0], m_max);
                    rep.clause(
                        format!("({hdir},{vdir}) at {at_base:?}: d₀ row 1 -> row 0 fibration"),
                        fib.is_pass(),
                    );
                    for v in fib.violations {
                        rep.violation(format!("({hdir},{vdir}) d₀: {}", v.rule), v.witness);
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The horizontal face `d₀` between coskeletonized vertical rows, extended
/// to matching tuples componentwise.
fn horizontal_face_map(
    y: &TruncatedMultiSSet,
    hdir: usize,
    vdir: usize,
    at_base: &[(usize, usize)],
    src: &TruncatedSSet,
    tgt: &TruncatedSSet,
) -> SimplicialMap {
    let bound = src.bound.min(tgt.bound);
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(bound + 1);
    for m in 0..=bound.min(2) {
        let mut idx = vec![0usize; y.arity()];
        for &(d, v) in at_base {
            idx[d] = v;
        }
        idx[hdir] = 1;
        idx[vdir] = m;
        levels.push(y.faces[&(hdir, 0, y.flat(&idx))].clone());
    }
    for m in 3..=bound {
        let mut tgt_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in 0..tgt.sizes[m] {
            let key: Vec<usize> = (0..=m).map(|i| tgt.faces[m][i][c]).collect();
            tgt_index.insert(key, c);
        }
        let tbl: Vec<usize> = (0..src.sizes[m])
            .map(|c| {
                let key: Vec<usize> = (0..=m)
                    .map(|i| levels[m - 1][src.faces[m][i][c]])
                    .collect();
                tgt_index[&key]
            })
            .collect();
        levels.push(tbl);
    }
    SimplicialMap { bound, levels }
}

/// Verify the ordinal-sum corner label pattern for a pair of directions:
/// the higher direction carries two consecutive face labels constant across
/// the lower one; the lower direction's labels are consecutive and shift by
/// one per step of the higher; the families are disjoint (i < k); and when
/// the first direction is the shifting one, k = s − 1.
pub fn corner_shape(n: usize, bounds: &[usize], dp: usize, dq: usize) -> Report {
    let mut rep = Report::new(format!("ordinal corner shape ({dp},{dq})"));
    assert!(dp != dq && dp < n && dq < n);
    let v = dp.max(dq);
    let h = dp.min(dq);
    let y = TruncatedMultiSSet::empty(bounds.to_vec());
    for a in y.indices() {
        if a[v] != 0 || a[h] != 0 {
            continue;
        }
        let mut base = a.clone();
        base[v] = 1;
        let i_label = ordinal_offset(&base, v);
        let mut constant = true;
        for hh in 0..=bounds[h].min(2) {
            let mut idx = base.clone();
            idx[h] = hh;
            if ordinal_offset(&idx, v) != i_label {
                constant = false;
            }
        }
        rep.clause(
            format!(
                "vertical labels d_{i_label}, d_{} constant at {a:?}",
                i_label + 1
            ),
            constant,
        );
        let mut idx = a.clone();
        idx[h] = 1;
        let k_label = ordinal_offset(&idx, h);
        let mut ok_shift = true;
        for vv in 0..=bounds[v].min(2) {
            let mut jdx = idx.clone();
            jdx[v] = vv;
            if ordinal_offset(&jdx, h) != k_label + vv {
                ok_shift = false;
            }
        }
        rep.clause(
            format!("horizontal labels start at d_{k_label} and shift by one per row"),
            ok_shift,
        );
        rep.clause("i < k", i_label < k_label);
        if h == 0 {
            let s_minus_1 = n - 1 + a.iter().sum::<usize>();
            rep.clause("k = s − 1 for the first direction", k_label == s_minus_1);
        }
    }
    rep
}

/// Exhaustive verification of the corner lifting squares on `Or_n X`: for
/// every pair of directions and complementary index, every commuting square
/// of dimension 1 or 2 against the index-0 face between adjacent slices
/// admits a lift, and every found lift satisfies the crossing identities.
/// A missing lift on a Kan-certified input would falsify the fibrancy
/// proposition on this instance.
pub fn verify_appendix_lifts(x: &TruncatedSSet, n: usize, bounds: &[usize]) -> Result<Report> {
    let mut rep = Report::new("appendix corner lifts");
    let or = crate::msset::ordinal_sum(x, n, bounds)?;
    for d1 in 0..n {
        for d2 in 0..n {
            if d1 == d2 {
                continue;
            }
            for p in or.indices() {
                if p[d1] != 0 || p[d2] != 0 {
                    continue;
                }
                let at_base: Vec<(usize, usize)> = (0..n)
                    .filter(|&d| d != d1 && d != d2)
                    .map(|d| (d, p[d]))
                    .collect();
                let mut at_u = at_base.clone();
                at_u.push((d2, 1));
                at_u.sort();
                let u = or.direction_sset(&at_u)?;
                let mut at_v = at_base.clone();
                at_v.push((d2, 0));
                at_v.sort();
                let v = or.direction_sset(&at_v)?;
                let bound = u.bound.min(v.bound);
                let psi = SimplicialMap {
                    bound,
                    levels: (0..=bound)
                        .map(|m| {
                            let mut idx = vec![0usize; n];
                            for &(d, val) in &at_base {
                                idx[d] = val;
                            }
                            idx[d1] = m;
                            idx[d2] = 1;
                            or.faces[&(d2, 0, or.flat(&idx))].clone()
                        })
                        .collect(),
                };
                let sub = check_lift_squares(&u, &v, &psi);
                let tag = format!("({d1},{d2}) at {at_base:?}");
                let pass = sub.is_pass();
                for viol in sub.violations {
                    rep.violation(format!("{tag}: {}", viol.rule), viol.witness);
                }
                rep.clause(tag, pass);
            }
        }
    }
    Ok(rep)
}

/// All lifting squares of dimension 1 and 2 against a levelwise map
/// `ψ: U -> V`, with the crossing identities confirmed on every lift found.
fn check_lift_squares(u: &TruncatedSSet, v: &TruncatedSSet, psi: &SimplicialMap) -> Report {
    let mut rep = Report::new("lift squares");
    for j in 0..=1usize {
        for sigma in 0..u.sizes[0] {
            for tau in 0..v.sizes[1] {
                if v.faces[1][j][tau] != psi.levels[0][sigma] {
                    continue;
                }
                let lift =
                    (0..u.sizes[1]).find(|&w| u.faces[1][j][w] == sigma && psi.levels[1][w] == tau);
                match lift {
                    None => rep.violation(
                        format!("missing lift m=1 j={j}"),
                        format!("σ={sigma} τ={tau}"),
                    ),
                    Some(w) => {
                        let other = 1 - j;
                        if psi.levels[0][u.faces[1][other][w]] != v.faces[1][other][tau] {
                            rep.violation(
                                format!("crossing identity m=1 j={j}"),
                                format!("lift {w}"),
                            );
                        }
                    }
                }
            }
        }
    }
    if u.bound >= 2 && v.bound >= 2 {
        for j in 0..=2usize {
            for horn in horns(u, 2, j) {
                for tau in 0..v.sizes[2] {
                    let compatible = (0..=2)
                        .filter(|&a| a != j)
                        .all(|a| v.faces[2][a][tau] == psi.levels[1][horn.faces[a]]);
                    if !compatible {
                        continue;
                    }
                    let lift = fillers(u, &horn).into_iter().find(|&w| psi.levels[2][w] == tau);
                    match lift {
                        None => rep.violation(
                            format!("missing lift m=2 j={j}"),
                            format!("horn {:?} τ={tau}", horn.faces),
                        ),
                        Some(w) => {
                            if psi.levels[1][u.faces[2][j][w]] != v.faces[2][j][tau] {
                                rep.violation(
                                    format!("crossing identity m=2 j={j}"),
                                    format!("lift {w}"),
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
