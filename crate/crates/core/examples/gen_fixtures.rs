//! Regenerates the fixture corpus under `fixtures/`.
//!
//! Run from the workspace root: `cargo run -p nfold-core --example gen_fixtures`

use nfold_core::fundamental::q_n;
use nfold_core::groupoid::{FiniteGroupoid, GroupTable};
use nfold_core::json::{groupoid_to_json, msset_to_json, presentation_to_json, sset_to_json};
use nfold_core::nfold::{constant_in_first_direction, double_nerve, CommutingSquare};
use nfold_core::presentation::{GroupoidPresentation, Step};
use nfold_core::sset::TruncatedSSet;

fn write<T: serde::Serialize>(name: &str, value: &T) {
    let path = format!("fixtures/{name}");
    let body = serde_json::to_string_pretty(value).unwrap();
    std::fs::write(&path, format!("{body}\n")).unwrap();
    println!("wrote {path}");
}

fn main() {
    std::fs::create_dir_all("fixtures").unwrap();
    let z2 = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
    let z3 = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
    write("nerve_z2.json", &sset_to_json(&z2.nerve(5)));
    write("nerve_z2_b8.json", &sset_to_json(&z2.nerve(8)));
    write("nerve_z3.json", &sset_to_json(&z3.nerve(5)));
    write("groupoid_z3.json", &groupoid_to_json(&z3));
    write(
        "groupoid_hd.json",
        &groupoid_to_json(&FiniteGroupoid::af_construction(&[0, 0, 1], 2)),
    );
    // the fundamental double groupoid of the Z/2 nerve
    let q2 = q_n(&z2.nerve(5), 2, 100_000).unwrap();
    write("q2_z2.json", &msset_to_json(&q2.core, true));
    // a homotopically discrete double groupoid from a commuting square
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
    write(
        "hd_square.json",
        &msset_to_json(&sq.hd_double_groupoid().unwrap().core, true),
    );
    write(
        "double_nerve_z2.json",
        &msset_to_json(&double_nerve(&GroupTable::cyclic(2)).core, true),
    );
    // negative cases
    write(
        "constant_z2.json",
        &msset_to_json(&constant_in_first_direction(&z2).core, true),
    );
    write(
        "boundary2_b5.json",
        &sset_to_json(&TruncatedSSet::boundary_simplex(2, 5)),
    );
    let mut corrupted = z2.nerve(3);
    let c = corrupted.sizes[2] - 1;
    corrupted.faces[2][1][c] = (corrupted.faces[2][1][c] + 1) % corrupted.sizes[1];
    write("corrupted_nerve_z2.json", &sset_to_json(&corrupted));
    // a presentation: one generator of order 2
    write(
        "presentation_z2.json",
        &presentation_to_json(&GroupoidPresentation {
            n_vertices: 1,
            arrows: vec![(0, 0)],
            relations: vec![(vec![Step::fwd(0), Step::fwd(0)], vec![])],
        }),
    );
}
