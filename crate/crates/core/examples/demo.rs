//! End-to-end demonstration: build the fundamental double groupoid of a
//! group nerve and read off its invariants.

use nfold_core::compare::{classify, discretize_psg, PseudoNFold};
use nfold_core::fundamental::q_n;
use nfold_core::groupoid::{FiniteGroupoid, GroupTable};

fn main() {
    for (table, name) in [
        (GroupTable::cyclic(2), "Z/2"),
        (GroupTable::cyclic(3), "Z/3"),
        (GroupTable::symmetric(3), "S3"),
    ] {
        let nerve = FiniteGroupoid::from_group(&table).nerve(5);
        let q = q_n(&nerve, 2, 100_000).unwrap();
        let w1 = q.omega(1, 0).unwrap();
        let w2 = q.omega(2, 0).unwrap();
        let wg = q.is_weakly_globular(3).is_pass();
        let view = PseudoNFold::from_nfold(&q, 3).unwrap();
        let (d, arrows) = discretize_psg(&view).unwrap();
        println!(
            "{name}: |ω₁| = {} (abelian: {}), |ω₂| = {}, weakly globular: {wg}, \
             discretization class: {} (chain verified: {})",
            w1.order(),
            w1.is_abelian(),
            w2.order(),
            classify(&d).class,
            arrows.iter().all(|a| a.is_equivalence),
        );
    }
}
