//! Seeded randomized property suites (the tenth acceptance criterion) plus
//! the structural invariants that want randomized or corpus coverage.

use nfold_core::compare::{n_equivalence, nfold_map_view};
use nfold_core::fundamental::fundamental_groupoid;
use nfold_core::groupoid::{
    groupoid_isomorphic, recognize_nerve, FiniteGroupoid, GroupTable, GroupoidMap,
};
use nfold_core::msset::{ordinal_sum, TruncatedMultiSSet};
use nfold_core::nfold::{
    discrete_nfold, double_nerve, is_algebraic_weak_equivalence, validate_core, CommutingSquare,
    NFoldGroupoid, NFoldMap,
};
use nfold_core::presentation::EnumeratedGroupoid;
use nfold_core::sset::TruncatedSSet;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BUDGET: usize = 100_000;

// ---------------------------------------------------------------------
// criterion 10a: validators catch every injected single-entry corruption
// ---------------------------------------------------------------------

/// Corrupt one entry of a table to a different in-range value.
fn corrupt_entry(tbl: &mut [usize], range: usize, rng: &mut StdRng) -> bool {
    if tbl.is_empty() || range < 2 {
        return false;
    }
    let idx = rng.gen_range(0..tbl.len());
    let old = tbl[idx];
    let mut new = rng.gen_range(0..range);
    if new == old {
        new = (new + 1) % range;
    }
    tbl[idx] = new;
    true
}

/// Single-entry corruption of a simplicial set, restricted to entries that
/// some identity constrains: any degeneracy entry, or a face entry below
/// the top level (top-level faces of nondegenerate cells are genuinely
/// unconstrained by a truncation).
fn corrupt_sset(x: &mut TruncatedSSet, rng: &mut StdRng) -> bool {
    for _ in 0..64 {
        if rng.gen_bool(0.5) {
            let m = rng.gen_range(1..x.bound); // below top level
            if x.sizes[m] == 0 || x.sizes[m - 1] < 2 {
                continue;
            }
            let i = rng.gen_range(0..=m);
            let range = x.sizes[m - 1];
            let tbl = &mut x.faces[m][i];
            if corrupt_entry(tbl, range, rng) {
                return true;
            }
        } else {
            let m = rng.gen_range(0..x.bound);
            if x.sizes[m] == 0 || x.sizes[m + 1] < 2 {
                continue;
            }
            let i = rng.gen_range(0..=m);
            let range = x.sizes[m + 1];
            let tbl = &mut x.degens[m][i];
            if corrupt_entry(tbl, range, rng) {
                return true;
            }
        }
    }
    false
}

fn corrupt_msset(y: &mut TruncatedMultiSSet, rng: &mut StdRng) -> bool {
    let keys_f: Vec<(usize, usize, usize)> = y
        .faces
        .iter()
        .filter(|(&(d, _, fp), tbl)| {
            let p = y.unflat(fp);
            p[d] < y.bounds[d] && !tbl.is_empty()
        })
        .map(|(&k, _)| k)
        .collect();
    let keys_s: Vec<(usize, usize, usize)> =
        y.degens.iter().filter(|(_, t)| !t.is_empty()).map(|(&k, _)| k).collect();
    for _ in 0..64 {
        let (key, is_face) = if rng.gen_bool(0.5) && !keys_f.is_empty() {
            (keys_f[rng.gen_range(0..keys_f.len())], true)
        } else if !keys_s.is_empty() {
            (keys_s[rng.gen_range(0..keys_s.len())], false)
        } else {
            continue;
        };
        let (d, _i, fp) = key;
        let p = y.unflat(fp);
        let q = TruncatedMultiSSet::shift(&p, d, if is_face { -1 } else { 1 });
        let range = y.sizes[y.flat(&q)];
        let tbl = if is_face {
            y.faces.get_mut(&key).unwrap()
        } else {
            y.degens.get_mut(&key).unwrap()
        };
        if corrupt_entry(tbl, range, rng) {
            return true;
        }
    }
    false
}

/// Corrupt one entry of the n-fold core (any operator entry: the groupoid
/// axioms pin the top-level faces too).
fn corrupt_core(y: &mut TruncatedMultiSSet, rng: &mut StdRng) -> bool {
    let keys: Vec<((usize, usize, usize), bool)> = y
        .faces
        .iter()
        .map(|(&k, _)| (k, true))
        .chain(y.degens.iter().map(|(&k, _)| (k, false)))
        .filter(|&((_, _, fp), _)| y.sizes[fp] > 0)
        .collect();
    for _ in 0..64 {
        let (key, is_face) = keys[rng.gen_range(0..keys.len())];
        let (d, _, fp) = key;
        let p = y.unflat(fp);
        let q = TruncatedMultiSSet::shift(&p, d, if is_face { -1 } else { 1 });
        let range = y.sizes[y.flat(&q)];
        let tbl = if is_face {
            y.faces.get_mut(&key).unwrap()
        } else {
            y.degens.get_mut(&key).unwrap()
        };
        if corrupt_entry(tbl, range, rng) {
            return true;
        }
    }
    false
}

fn corrupt_groupoid(g: &mut FiniteGroupoid, rng: &mut StdRng) -> bool {
    let nm = g.n_morphisms();
    let no = g.n_objects;
    for _ in 0..64 {
        match rng.gen_range(0..5) {
            0 if nm >= 2 => {
                let keys: Vec<(usize, usize)> = g.comp.keys().copied().collect();
                let k = keys[rng.gen_range(0..keys.len())];
                let old = g.comp[&k];
                let mut new = rng.gen_range(0..nm);
                if new == old {
                    new = (new + 1) % nm;
                }
                g.comp.insert(k, new);
                return true;
            }
            1 if nm >= 2 => return corrupt_entry(&mut g.inv, nm, rng),
            2 if nm >= 2 => return corrupt_entry(&mut g.id, nm, rng),
            3 if no >= 2 => return corrupt_entry(&mut g.src, no, rng),
            4 if no >= 2 => return corrupt_entry(&mut g.tgt, no, rng),
            _ => continue,
        }
    }
    false
}

#[test]
fn criterion_10a_corruption_trials() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
    let z3 = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
    let hd = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
    let nerve4 = z2.nerve(4);
    let nerve3 = z3.nerve(3);
    let or2 = ordinal_sum(&z2.nerve(5), 2, &[2, 2]).unwrap();
    let dn = double_nerve(&GroupTable::cyclic(2));
    let mut caught = 0usize;
    let mut injected = 0usize;
    for trial in 0..500 {
        match trial % 5 {
            0 => {
                let mut x = if trial % 2 == 0 { nerve4.clone() } else { nerve3.clone() };
                if corrupt_sset(&mut x, &mut rng) {
                    injected += 1;
                    if !x.validate().is_pass() {
                        caught += 1;
                    }
                }
            }
            1 => {
                let mut y = or2.clone();
                if corrupt_msset(&mut y, &mut rng) {
                    injected += 1;
                    if !y.validate().is_pass() {
                        caught += 1;
                    }
                }
            }
            2 => {
                let mut core = dn.core.clone();
                if corrupt_core(&mut core, &mut rng) {
                    injected += 1;
                    if !validate_core(&core).is_pass() {
                        caught += 1;
                    }
                }
            }
            3 => {
                let mut g = if trial % 2 == 1 { z3.clone() } else { hd.clone() };
                if corrupt_groupoid(&mut g, &mut rng) {
                    injected += 1;
                    if !g.validate().is_pass() {
                        caught += 1;
                    }
                }
            }
            _ => {
                let mut g = z2.disjoint_union(&hd);
                if corrupt_groupoid(&mut g, &mut rng) {
                    injected += 1;
                    if !g.validate().is_pass() {
                        caught += 1;
                    }
                }
            }
        }
    }
    println!("[{}] criterion 10a: {caught}/{injected} corruptions caught over 500 trials",
        if caught == injected && injected >= 490 { "PASS" } else { "FAIL" });
    assert!(injected >= 490, "sampler failed to inject corruptions");
    assert_eq!(caught, injected, "validators must catch every injected corruption");
}

// ---------------------------------------------------------------------
// criterion 10b: adjunction bijection for Q₁ on the oracle corpus
// ---------------------------------------------------------------------

fn disjoint_union_sset(a: &TruncatedSSet, b: &TruncatedSSet) -> TruncatedSSet {
    assert_eq!(a.bound, b.bound);
    let mut out = TruncatedSSet::empty(a.bound);
    for m in 0..=a.bound {
        out.sizes[m] = a.sizes[m] + b.sizes[m];
        if m >= 1 {
            for i in 0..=m {
                out.faces[m][i] = a.faces[m][i]
                    .iter()
                    .copied()
                    .chain(b.faces[m][i].iter().map(|&c| c + a.sizes[m - 1]))
                    .collect();
            }
        }
        if m < a.bound {
            for i in 0..=m {
                out.degens[m][i] = a.degens[m][i]
                    .iter()
                    .copied()
                    .chain(b.degens[m][i].iter().map(|&c| c + a.sizes[m + 1]))
                    .collect();
            }
        }
    }
    out
}

/// All simplicial maps X -> nerve(G) within bound 2 (they are determined by
/// their vertex and edge components since the nerve is 2-coskeletal).
fn simplicial_maps_to_nerve(x: &TruncatedSSet, g: &FiniteGroupoid) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let n0 = x.sizes[0];
    let mut f0 = vec![0usize; n0];
    loop {
        // edges: choose morphisms with matching endpoints, degeneracy- and
        // 2-cell-compatible
        let mut choices: Vec<Vec<usize>> = Vec::with_capacity(x.sizes[1]);
        let mut feasible = true;
        for e in 0..x.sizes[1] {
            let (s, t) = x.edge_endpoints(e);
            let opts = g.hom(f0[s], f0[t]);
            if opts.is_empty() {
                feasible = false;
                break;
            }
            choices.push(opts);
        }
        if feasible {
            let mut f1 = vec![0usize; x.sizes[1]];
            enumerate_edges(x, g, &f0, &choices, 0, &mut f1, &mut out);
        }
        // next vertex assignment
        let mut k = 0;
        loop {
            if k == n0 {
                return out;
            }
            f0[k] += 1;
            if f0[k] < g.n_objects {
                break;
            }
            f0[k] = 0;
            k += 1;
        }
        if n0 == 0 {
            return out;
        }
    }
}

fn enumerate_edges(
    x: &TruncatedSSet,
    g: &FiniteGroupoid,
    f0: &[usize],
    choices: &[Vec<usize>],
    e: usize,
    f1: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    if e == x.sizes[1] {
        // degeneracy compatibility
        for v in 0..x.sizes[0] {
            if f1[x.degens[0][0][v]] != g.id[f0[v]] {
                return;
            }
        }
        // 2-cell compatibility: f(d₁σ) = f(d₀σ) ∘ f(d₂σ)
        for s2 in 0..x.sizes[2] {
            let a = f1[x.faces[2][2][s2]];
            let b = f1[x.faces[2][0][s2]];
            let c = f1[x.faces[2][1][s2]];
            if g.comp.get(&(b, a)) != Some(&c) {
                return;
            }
        }
        out.push((f0.to_vec(), f1.clone()));
        return;
    }
    for &m in &choices[e] {
        f1[e] = m;
        enumerate_edges(x, g, f0, choices, e + 1, f1, out);
    }
}

/// Count group homomorphisms by DFS with multiplication-closure pruning.
fn count_group_homs(h: &GroupTable, aut: &[usize], g: &FiniteGroupoid) -> usize {
    // aut: morphisms of the automorphism group of a fixed object, with
    // aut[0] the identity
    let n = h.order();
    let mut img = vec![usize::MAX; n];
    img[0] = aut[0];
    fn rec(h: &GroupTable, aut: &[usize], g: &FiniteGroupoid, img: &mut Vec<usize>, k: usize) -> usize {
        let n = h.order();
        if k == n {
            return 1;
        }
        if img[k] != usize::MAX {
            return rec(h, aut, g, img, k + 1);
        }
        let mut total = 0;
        for &cand in aut {
            img[k] = cand;
            let mut ok = true;
            'chk: for a in 0..n {
                for b in 0..n {
                    if img[a] == usize::MAX || img[b] == usize::MAX {
                        continue;
                    }
                    let p = h.mul[a][b];
                    if img[p] != usize::MAX && g.comp[&(img[a], img[b])] != img[p] {
                        ok = false;
                        break 'chk;
                    }
                }
            }
            if ok {
                total += rec(h, aut, g, img, k + 1);
            }
            img[k] = usize::MAX;
        }
        total
    }
    rec(h, aut, g, &mut img, 1)
}

/// Count functors Q₁X -> G by the spanning-tree formula: per component,
/// choose the image of the root, a group homomorphism of the vertex group,
/// and an outgoing morphism per non-root vertex.
fn count_functors(e: &EnumeratedGroupoid, g: &FiniteGroupoid) -> usize {
    let mut total = 1usize;
    for comp in &e.components {
        let (h, _) = e.groupoid.vertex_group(comp.root);
        let mut comp_total = 0usize;
        for x in 0..g.n_objects {
            let aut = g.hom(x, x);
            let homs = count_group_homs(&h, &aut, g);
            let out_deg: usize = (0..g.n_morphisms()).filter(|&m| g.src[m] == x).count();
            comp_total += homs * out_deg.pow((comp.vertices.len() - 1) as u32);
        }
        total *= comp_total;
    }
    total
}

#[test]
fn criterion_10b_adjunction_bijection() {
    let corpus: Vec<(TruncatedSSet, &str)> = vec![
        (TruncatedSSet::standard_simplex(0, 2), "Δ[0]"),
        (TruncatedSSet::standard_simplex(1, 2), "Δ[1]"),
        (TruncatedSSet::standard_simplex(2, 2), "Δ[2]"),
        (
            FiniteGroupoid::from_group(&GroupTable::cyclic(2)).nerve(2),
            "nerve Z/2",
        ),
        (
            disjoint_union_sset(
                &TruncatedSSet::standard_simplex(2, 2),
                &TruncatedSSet::standard_simplex(0, 2),
            ),
            "Δ[2] ⊔ Δ[0]",
        ),
    ];
    let targets: Vec<(FiniteGroupoid, &str)> = vec![
        (FiniteGroupoid::from_group(&GroupTable::cyclic(2)), "Z/2"),
        (FiniteGroupoid::from_group(&GroupTable::cyclic(3)), "Z/3"),
        (FiniteGroupoid::discrete(2), "disc(2)"),
        (FiniteGroupoid::af_construction(&[0, 0, 1], 2), "A^f"),
        (
            FiniteGroupoid::from_group(&GroupTable::cyclic(2)).disjoint_union(&FiniteGroupoid::discrete(1)),
            "Z/2 ⊔ pt",
        ),
    ];
    let mut all_ok = true;
    for (x, xname) in &corpus {
        let e = fundamental_groupoid(x, BUDGET).unwrap();
        for (g, gname) in &targets {
            let maps = simplicial_maps_to_nerve(x, g);
            let functors = count_functors(&e, g);
            // transport every simplicial map to a functor and check
            // distinctness and functoriality
            let mut transported = std::collections::BTreeSet::new();
            let mut transport_ok = true;
            for (f0, f1) in &maps {
                let morphisms: Vec<usize> = (0..e.groupoid.n_morphisms())
                    .map(|m| {
                        let (a, _, _) = e.mor_data[m];
                        let mut cur = g.id[f0[a]];
                        for s in e.morphism_path(m) {
                            let mut gm = f1[s.arrow];
                            if s.inverted {
                                gm = g.inv[gm];
                            }
                            cur = g.comp[&(gm, cur)];
                        }
                        cur
                    })
                    .collect();
                let functor = GroupoidMap {
                    objects: f0.clone(),
                    morphisms,
                };
                transport_ok &= functor.validate(&e.groupoid, g).is_pass();
                transported.insert((functor.objects, functor.morphisms));
            }
            let ok = maps.len() == functors && transported.len() == maps.len() && transport_ok;
            if !ok {
                println!(
                    "  {xname} -> {gname}: maps {} functors {functors} transported {}",
                    maps.len(),
                    transported.len()
                );
            }
            all_ok &= ok;
        }
    }
    println!(
        "[{}] criterion 10b: Q₁ adjunction bijection on the oracle corpus",
        if all_ok { "PASS" } else { "FAIL" }
    );
    assert!(all_ok);
}

// ---------------------------------------------------------------------
// criterion 10c: n_equivalence agrees with the algebraic check on
// generated weakly globular double groupoid maps
// ---------------------------------------------------------------------

fn random_square(rng: &mut StdRng) -> CommutingSquare {
    // B, C, D small with surjective h, ℓ and sections; A a padded pullback
    let d = rng.gen_range(1..=2usize);
    let b = rng.gen_range(d..=3usize);
    let c = rng.gen_range(d..=3usize);
    let surj = |n: usize, onto: usize, rng: &mut StdRng| -> Vec<usize> {
        let mut f: Vec<usize> = (0..onto).collect();
        while f.len() < n {
            f.push(rng.gen_range(0..onto));
        }
        f
    };
    let h = surj(b, d, rng);
    let l = surj(c, d, rng);
    let h_sec: Vec<usize> = (0..d).map(|v| h.iter().position(|&x| x == v).unwrap()).collect();
    let l_sec: Vec<usize> = (0..d).map(|v| l.iter().position(|&x| x == v).unwrap()).collect();
    // A = pullback pairs + random padding
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for bb in 0..b {
        for cc in 0..c {
            if h[bb] == l[cc] {
                pairs.push((bb, cc));
            }
        }
    }
    let base = pairs.len();
    let extra = rng.gen_range(0..=2usize.min(6 - base.min(6)));
    for _ in 0..extra {
        pairs.push(pairs[rng.gen_range(0..base)]);
    }
    let f: Vec<usize> = pairs.iter().map(|&(bb, _)| bb).collect();
    let g: Vec<usize> = pairs.iter().map(|&(_, cc)| cc).collect();
    let f_sec: Vec<usize> = (0..b)
        .map(|bb| pairs.iter().position(|&(x, y)| x == bb && y == l_sec[h[bb]]).unwrap())
        .collect();
    let g_sec: Vec<usize> = (0..c)
        .map(|cc| pairs.iter().position(|&(x, y)| y == cc && x == h_sec[l[cc]]).unwrap())
        .collect();
    CommutingSquare {
        a: pairs.len(),
        b,
        c,
        d,
        f,
        g,
        h,
        l,
        f_sec,
        g_sec,
        h_sec,
        l_sec,
    }
}

#[test]
fn criterion_10c_equivalence_checkers_agree() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut agreements = 0usize;
    let mut trials = 0usize;
    while trials < 50 {
        let case = trials % 4;
        let (src, tgt, map): (NFoldGroupoid, NFoldGroupoid, NFoldMap) = match case {
            0 => {
                let g = random_square(&mut rng).hd_double_groupoid().unwrap();
                let m = NFoldMap::identity(&g);
                (g.clone(), g, m)
            }
            1 => {
                let g = random_square(&mut rng).hd_double_groupoid().unwrap();
                let disc = g.discretize_object().unwrap();
                (g, disc.discrete, disc.gamma)
            }
            2 => {
                // collapse to the terminal object: an equivalence iff all
                // ω's are trivial
                let g = random_square(&mut rng).hd_double_groupoid().unwrap();
                let terminal = discrete_nfold(1, 2);
                let map = NFoldMap {
                    map: nfold_core::msset::MultiSSetMap {
                        bounds: g.core.bounds.clone(),
                        levels: g.core.sizes.iter().map(|&s| vec![0; s]).collect(),
                    },
                };
                (g, terminal, map)
            }
            _ => {
                // collapse of the double nerve of Z/2 (kills ω₂)
                let g = double_nerve(&GroupTable::cyclic(2));
                let terminal = discrete_nfold(1, 2);
                let map = NFoldMap {
                    map: nfold_core::msset::MultiSSetMap {
                        bounds: g.core.bounds.clone(),
                        levels: g.core.sizes.iter().map(|&s| vec![0; s]).collect(),
                    },
                };
                (g, terminal, map)
            }
        };
        let (awe, _) = is_algebraic_weak_equivalence(&map, &src, &tgt);
        let (sv, tv, vmap) = nfold_map_view(&map, &src, &tgt, 3).unwrap();
        let (neq, _) = n_equivalence(&vmap, &sv, &tv).unwrap();
        if awe == neq {
            agreements += 1;
        } else {
            println!("  disagreement on trial {trials} (case {case}): awe={awe} n_eq={neq}");
        }
        trials += 1;
    }
    println!(
        "[{}] criterion 10c: n-equivalence vs algebraic equivalence agree on {agreements}/{trials} instances",
        if agreements == trials { "PASS" } else { "FAIL" }
    );
    assert_eq!(agreements, trials);
}

// ---------------------------------------------------------------------
// structural invariants with corpus coverage
// ---------------------------------------------------------------------

#[test]
fn fundamental_groupoid_of_nerve_recovers_groupoid_corpus() {
    let corpus: Vec<FiniteGroupoid> = vec![
        FiniteGroupoid::from_group(&GroupTable::cyclic(2)),
        FiniteGroupoid::from_group(&GroupTable::cyclic(3)),
        FiniteGroupoid::from_group(&GroupTable::cyclic(4)),
        FiniteGroupoid::from_group(&GroupTable::symmetric(3)),
        FiniteGroupoid::discrete(3),
        FiniteGroupoid::af_construction(&[0, 0, 1, 1, 2], 3),
        FiniteGroupoid::from_group(&GroupTable::cyclic(2))
            .disjoint_union(&FiniteGroupoid::from_group(&GroupTable::cyclic(3))),
        FiniteGroupoid::from_group(&GroupTable::cyclic(2))
            .product(&FiniteGroupoid::from_group(&GroupTable::cyclic(2))),
    ];
    for (i, g) in corpus.iter().enumerate() {
        assert!(g.n_morphisms() <= 24);
        let e = fundamental_groupoid(&g.nerve(2), BUDGET).unwrap();
        assert!(
            groupoid_isomorphic(&e.groupoid, g),
            "corpus groupoid {i}: fundamental groupoid of the nerve"
        );
    }
}

#[test]
fn nerve_recognition_round_trip() {
    let corpus = vec![
        FiniteGroupoid::from_group(&GroupTable::symmetric(3)),
        FiniteGroupoid::af_construction(&[0, 0, 1], 2),
        FiniteGroupoid::discrete(2),
    ];
    for g in corpus {
        let n = g.nerve(3);
        let r = recognize_nerve(&n).unwrap();
        assert!(groupoid_isomorphic(&r, &g));
        // and a non-nerve is rejected
    }
    let boundary = TruncatedSSet::boundary_simplex(2, 3);
    assert!(recognize_nerve(&boundary).is_err());
}

#[test]
fn equivalences_satisfy_two_out_of_three() {
    // f: A^f -> c(π₀), g: c(π₀) -> c(π₀) identity, composites
    let a = FiniteGroupoid::af_construction(&[0, 0, 1], 2);
    let c = FiniteGroupoid::discrete(2);
    let (cls, _) = a.pi0();
    let f = GroupoidMap {
        objects: cls.clone(),
        morphisms: (0..a.n_morphisms()).map(|m| c.id[cls[a.src[m]]]).collect(),
    };
    let idc = GroupoidMap::identity(&c);
    let comp = f.compose(&idc);
    let cases = [
        f.is_equivalence(&a, &c).0,
        idc.is_equivalence(&c, &c).0,
        comp.is_equivalence(&a, &c).0,
    ];
    // all three hold here; 2-out-of-3 verified on the triple
    assert!(cases.iter().all(|&b| b));
    // a non-equivalence composed with an equivalence is not an equivalence
    let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
    let pt = FiniteGroupoid::discrete(1);
    let collapse = GroupoidMap {
        objects: vec![0],
        morphisms: vec![0, 0],
    };
    let idp = GroupoidMap::identity(&pt);
    assert!(!collapse.compose(&idp).is_equivalence(&z2, &pt).0);
}

#[test]
fn q1_preserves_products_and_fiber_products_over_discrete() {
    let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
    let z3 = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
    let x = z2.nerve(2);
    let y = z3.nerve(2);
    let xy = x.product(&y);
    let e = fundamental_groupoid(&xy, BUDGET).unwrap();
    let expected = z2.product(&z3);
    assert!(groupoid_isomorphic(&e.groupoid, &expected));
    // fiber product over a discrete simplicial set: two copies of
    // nerve(Z/2) ⊔ nerve(Z/3) over the 2-point set of components
    let u = disjoint_union_sset_local(&x, &y);
    let two = FiniteGroupoid::discrete(2).nerve(2);
    // component map: cells of the first summand to 0, second to 1
    let f = nfold_core::sset::SimplicialMap {
        bound: 2,
        levels: (0..=2usize)
            .map(|m| {
                (0..u.sizes[m])
                    .map(|c| usize::from(c >= x.sizes[m]))
                    .collect()
            })
            .collect(),
    };
    assert!(f.validate(&u, &two).is_pass());
    let fp = u.pullback(&u, &f, &f);
    let efp = fundamental_groupoid(&fp, BUDGET).unwrap();
    // fiber product over the discrete base = Z/2×Z/2 ⊔ Z/3×Z/3
    let expected_fp = z2.product(&z2).disjoint_union(&z3.product(&z3));
    assert!(groupoid_isomorphic(&efp.groupoid, &expected_fp));
}

fn disjoint_union_sset_local(a: &TruncatedSSet, b: &TruncatedSSet) -> TruncatedSSet {
    disjoint_union_sset(a, b)
}

#[test]
fn pi0_preserves_algebraic_weak_equivalences_on_test_pairs() {
    // γ on an hd double groupoid is an awe; Π₀ of both sides stays an awe
    let sq = CommutingSquare {
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
    };
    let g = sq.hd_double_groupoid().unwrap();
    let d = g.discretize_object().unwrap();
    let (ok, _) = is_algebraic_weak_equivalence(&d.gamma, &g, &d.discrete);
    assert!(ok);
    let pg = g.pi0_functor().unwrap();
    let pd = d.discrete.pi0_functor().unwrap();
    // induce the map on quotients
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for q in pg.quotient.core.indices() {
        let fq = pg.quotient.core.flat(&q);
        let mut p = q.clone();
        p.push(0);
        let fp = g.core.flat(&p);
        let mut tbl = vec![usize::MAX; pg.quotient.core.sizes[fq]];
        for (cell, &cls) in pg.class_maps[fq].iter().enumerate() {
            tbl[cls] = pd.class_maps[fq][d.gamma.map.levels[fp][cell]];
        }
        levels.push(tbl);
    }
    let induced = NFoldMap {
        map: nfold_core::msset::MultiSSetMap {
            bounds: pg.quotient.core.bounds.clone(),
            levels,
        },
    };
    let (ok2, why) = is_algebraic_weak_equivalence(&induced, &pg.quotient, &pd.quotient);
    assert!(ok2, "{why:?}");
}

#[test]
fn fibration_composition_closure() {
    use nfold_core::fibrancy::is_fibration;
    use nfold_core::sset::DecSide;
    let g = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
    let n = g.nerve(4);
    let (dec, eps, _) = n.decalage(DecSide::Last).unwrap();
    let (dec2, eps2, _) = dec.decalage(DecSide::Last).unwrap();
    let composite = eps2.compose(&eps);
    let n2 = n.truncate(2);
    assert!(is_fibration(&eps2, &dec2, &dec.truncate(2), 2).is_pass());
    assert!(is_fibration(&composite, &dec2, &n2, 2).is_pass());
}

#[test]
fn hd_base_set_matches_diagonal_union_find() {
    // discretize_object's base set equals π₀ of the diagonal computed
    // independently by union-find on diagonal 1-cells
    for seed in 0..5u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_square(&mut rng).hd_double_groupoid().unwrap();
        let d = g.discretize_object().unwrap();
        let diag = g.core.diagonal();
        let mut uf = nfold_core::groupoid::UnionFind::new(diag.sizes[0]);
        for e in 0..diag.sizes[1] {
            uf.union(diag.faces[1][1][e], diag.faces[1][0][e]);
        }
        let (_, n) = uf.quotient();
        assert_eq!(d.size, n, "seed {seed}");
    }
}

#[test]
fn direction_nerve_levels_of_hd_are_hd() {
    let mut rng = StdRng::seed_from_u64(7);
    let g = random_square(&mut rng).hd_double_groupoid().unwrap();
    for dir in 0..2usize {
        for level in g.nerve_direction(dir, 3).unwrap() {
            let (hd, _, rep) = level.is_hd();
            assert!(hd, "direction {dir}: {rep}");
        }
    }
}
